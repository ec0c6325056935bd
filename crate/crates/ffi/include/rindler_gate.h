#ifndef RINDLER_GATE_H
#define RINDLER_GATE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Channel codes; `RG_CHANNEL_RL` is the mixed RL+LR term.
typedef enum RgChannel {
  RG_CHANNEL_RR = 0,
  RG_CHANNEL_LL = 1,
  RG_CHANNEL_RL = 2,
} RgChannel;

// Resonant mode codes.
typedef enum RgMode {
  RG_MODE_A_PLUS = 0,
  RG_MODE_A_MINUS = 1,
  RG_MODE_B_PLUS = 2,
  RG_MODE_B_MINUS = 3,
} RgMode;

// Mode-pair codes of the resonant state.
typedef enum RgModePair {
  RG_MODE_PAIR_A_PLUS_A_MINUS = 0,
  RG_MODE_PAIR_B_PLUS_B_MINUS = 1,
  RG_MODE_PAIR_A_PLUS_B_PLUS = 2,
  RG_MODE_PAIR_A_MINUS_B_MINUS = 3,
} RgModePair;

// Pathway codes.
typedef enum RgPathway {
  RG_PATHWAY_GEG = 0,
  RG_PATHWAY_EGE = 1,
} RgPathway;

typedef enum RgStatus {
  RG_STATUS_OK = 0,
  RG_STATUS_NULL_POINTER = 1,
  RG_STATUS_INVALID_ARGUMENT = 2,
  RG_STATUS_UNKNOWN_LABEL = 3,
  RG_STATUS_POLE = 4,
  RG_STATUS_NUMERICAL = 5,
  RG_STATUS_ZERO_PROBABILITY = 6,
  RG_STATUS_PANIC = 7,
} RgStatus;

// Opaque single-mode density matrix.
typedef struct RgDensity RgDensity;

// Opaque detector parameters.
typedef struct RgParams RgParams;

// Opaque resonant state.
typedef struct RgResonantState RgResonantState;

typedef struct RgComplex {
  double re;
  double im;
} RgComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failing call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *rg_last_error_message(void);

// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum RgStatus rg_params_new(double omega, double accel, double coupling, struct RgParams **out);

// # Safety
// `params` must come from [`rg_params_new`] and not be used afterwards.
void rg_params_free(struct RgParams *params);

// Exact amplitude A(Ω) for one pathway and channel.
//
// # Safety
// Pointers must be valid.
enum RgStatus rg_amplitude(const struct RgParams *params,
                           uint32_t pathway_code,
                           uint32_t channel_code,
                           double big_omega,
                           struct RgComplex *out);

// Amplitude with every denominator factor D replaced by D + iε.
//
// # Safety
// Pointers must be valid.
enum RgStatus rg_regularized_amplitude(const struct RgParams *params,
                                       uint32_t pathway_code,
                                       uint32_t channel_code,
                                       double big_omega,
                                       double epsilon,
                                       struct RgComplex *out);

// 1/sqrt(2 sinh(πΩ)) for Ω ≠ 0.
//
// # Safety
// `out` must be valid.
enum RgStatus rg_unruh_norm(double big_omega, double *out);

// |A_ε(Ω)|² on `n` grid points written to `out`.
//
// # Safety
// `grid` and `out` must each hold `n` doubles.
enum RgStatus rg_spectrum(const struct RgParams *params,
                          uint32_t pathway_code,
                          uint32_t channel_code,
                          const double *grid,
                          size_t n,
                          double epsilon,
                          double *out);

// ∫|A_ε|² dΩ. Non-positive `cutoff` selects the default Ω₀ + 40.
//
// # Safety
// Pointers must be valid.
enum RgStatus rg_integrated_probability(const struct RgParams *params,
                                        uint32_t pathway_code,
                                        uint32_t channel_code,
                                        double epsilon,
                                        double cutoff,
                                        double *out);

// Principal-value coefficients (α P∫A_GEG, β P∫A_EGE) of one channel for
// the qubit (√(1−β²), √β² e^{iφ}). Non-positive `delta` or `cutoff` select
// the defaults.
//
// # Safety
// Pointers must be valid; `truncated` may be null.
enum RgStatus rg_pv_coefficients(const struct RgParams *params,
                                 double beta2,
                                 double phi,
                                 uint32_t channel_code,
                                 double delta,
                                 double cutoff,
                                 struct RgComplex *ground,
                                 struct RgComplex *excited,
                                 bool *truncated);

// Pointwise (p_background, p_int, p_total) at frequency Ω.
//
// # Safety
// Pointers must be valid.
enum RgStatus rg_interference_density(const struct RgParams *params,
                                      double beta2,
                                      double phi,
                                      uint32_t channel_code,
                                      double big_omega,
                                      double epsilon,
                                      double *p_background,
                                      double *p_int,
                                      double *p_total);

// # Safety
// Pointers must be valid.
enum RgStatus rg_resonant_state_new(const struct RgParams *params,
                                    double beta2,
                                    double phi,
                                    struct RgResonantState **out);

// # Safety
// `state` must come from [`rg_resonant_state_new`] and not be used afterwards.
void rg_resonant_state_free(struct RgResonantState *state);

// γ = πΩ₀/sinh(πΩ₀) and the overall factor g²γ/4.
//
// # Safety
// Pointers must be valid.
enum RgStatus rg_resonant_state_gamma(const struct RgResonantState *state,
                                      double *gamma,
                                      struct RgComplex *overall);

// Relative coefficient of one mode pair.
//
// # Safety
// Pointers must be valid.
enum RgStatus rg_resonant_state_coefficient(const struct RgResonantState *state,
                                            uint32_t pair_code,
                                            struct RgComplex *out);

// Detector factor (α, −β).
//
// # Safety
// Pointers must be valid.
enum RgStatus rg_resonant_state_qubit_factor(const struct RgResonantState *state,
                                             struct RgComplex *ground,
                                             struct RgComplex *excited);

// Reduced state of one mode. With `partner_detected` false the partner is
// ignored; otherwise a negative `partner_code` selects the pair partner
// (A₊ ↔ A₋, B₊ ↔ B₋).
//
// # Safety
// Pointers must be valid.
enum RgStatus rg_reduced_state_new(const struct RgResonantState *state,
                                   uint32_t mode_code,
                                   bool partner_detected,
                                   int32_t partner_code,
                                   struct RgDensity **out);

// Diagonal density matrix with the given populations.
//
// # Safety
// `populations` must hold `n` doubles and `out` must be valid.
enum RgStatus rg_density_from_diagonal(const double *populations, size_t n, struct RgDensity **out);

// # Safety
// `density` must come from this library and not be used afterwards.
void rg_density_free(struct RgDensity *density);

// # Safety
// Pointers must be valid.
enum RgStatus rg_density_dim(const struct RgDensity *density, size_t *out);

// Entry ρ_mn in the number basis.
//
// # Safety
// Pointers must be valid.
enum RgStatus rg_density_entry(const struct RgDensity *density,
                               size_t m,
                               size_t n,
                               struct RgComplex *out);

// W(x_i, p_j) written row-major to `out[i * np + j]`; the negativity volume
// goes to `negativity` when it is non-null.
//
// # Safety
// `x` holds `nx`, `p` holds `np` and `out` holds `nx * np` doubles.
enum RgStatus rg_density_wigner(const struct RgDensity *density,
                                const double *x,
                                size_t nx,
                                const double *p,
                                size_t np,
                                double *out,
                                double *negativity);

// P_e(φ_R) for each of the `n` phases.
//
// # Safety
// `phases` and `out` must each hold `n` doubles.
enum RgStatus rg_ramsey_fringe(bool gate_applied,
                               double gate_strength,
                               const double *phases,
                               size_t n,
                               double *out);

// Signed fringe contrast of `n` samples (0 for a flat fringe).
//
// # Safety
// `phases` and `p_e` must each hold `n` doubles.
enum RgStatus rg_fringe_visibility(const double *phases, const double *p_e, size_t n, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RINDLER_GATE_H */
