//! Sokhotski–Plemelj split of the final state.
//!
//! The on-shell part is closed form ([`resonant_state`]); the off-shell part
//! is a Cauchy principal value evaluated on the real axis ([`pv_integrate`]).
//! Every pole-bearing factor is regularised as D → D + iε, so that
//! 1/(D + iε) → P(1/D) − iπ δ(D).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::amplitudes::{
    channel_amplitude, pole_locations, pole_stripped_amplitude, regularized_amplitude, x_over_sinh, Channel,
    DetectorParams, Pathway, QubitState,
};
use crate::error::{Error, Result};
use crate::quadrature::{graded_breakpoints, GaussLegendre};

/// Widest panel used by the composite rules.
const MAX_PANEL: f64 = 1.0;
/// Tail magnitude, relative to ∫|f|, above which truncation is flagged.
const TAIL_TOLERANCE: f64 = 1e-10;

/// Single-photon Unruh modes at the resonance frequencies ±Ω₀.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    /// A at +Ω₀
    APlus,
    /// A at −Ω₀
    AMinus,
    /// B at +Ω₀
    BPlus,
    /// B at −Ω₀
    BMinus,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::APlus, Mode::AMinus, Mode::BPlus, Mode::BMinus];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Mode::APlus => "A+",
            Mode::AMinus => "A-",
            Mode::BPlus => "B+",
            Mode::BMinus => "B-",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A+" | "Ap" | "A_plus" => Ok(Mode::APlus),
            "A-" | "Am" | "A_minus" => Ok(Mode::AMinus),
            "B+" | "Bp" | "B_plus" => Ok(Mode::BPlus),
            "B-" | "Bm" | "B_minus" => Ok(Mode::BMinus),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

/// Two-photon terms of the resonant operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModePair {
    /// A†₊A†₋
    APlusAMinus,
    /// B†₊B†₋
    BPlusBMinus,
    /// A†₊B†₊
    APlusBPlus,
    /// A†₋B†₋
    AMinusBMinus,
}

impl ModePair {
    pub const ALL: [ModePair; 4] =
        [ModePair::APlusAMinus, ModePair::BPlusBMinus, ModePair::APlusBPlus, ModePair::AMinusBMinus];

    pub fn modes(self) -> (Mode, Mode) {
        match self {
            ModePair::APlusAMinus => (Mode::APlus, Mode::AMinus),
            ModePair::BPlusBMinus => (Mode::BPlus, Mode::BMinus),
            ModePair::APlusBPlus => (Mode::APlus, Mode::BPlus),
            ModePair::AMinusBMinus => (Mode::AMinus, Mode::BMinus),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ModePair::APlusAMinus => "A+A-",
            ModePair::BPlusBMinus => "B+B-",
            ModePair::APlusBPlus => "A+B+",
            ModePair::AMinusBMinus => "A-B-",
        }
    }

    /// Which channel pole feeds this pair, as (pathway, channel, pole sign).
    fn source(self, pathway: Pathway) -> (Channel, f64) {
        match (self, pathway) {
            (ModePair::APlusAMinus, Pathway::Geg) => (Channel::RR, 1.0),
            (ModePair::APlusAMinus, Pathway::Ege) => (Channel::RR, -1.0),
            (ModePair::BPlusBMinus, Pathway::Geg) => (Channel::LL, -1.0),
            (ModePair::BPlusBMinus, Pathway::Ege) => (Channel::LL, 1.0),
            (ModePair::APlusBPlus, _) => (Channel::RL, 1.0),
            (ModePair::AMinusBMinus, _) => (Channel::RL, -1.0),
        }
    }
}

/// On-shell part of the final state:
/// `overall · Σ c_k O_k |0⟩ ⊗ (α|g⟩ − β|e⟩)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonantState {
    pub omega_ratio: f64,
    /// γ = πΩ₀ / sinh(πΩ₀)
    pub gamma: f64,
    /// π g²/(4ħ²) · Ω₀/sinh(πΩ₀)
    pub overall: C64,
    pub terms: [(ModePair, C64); 4],
    /// Detector factor (α, −β).
    pub qubit_factor: (C64, C64),
}

impl ResonantState {
    pub fn coefficient(&self, pair: ModePair) -> C64 {
        self.terms.iter().find(|(p, _)| *p == pair).map(|(_, c)| *c).unwrap()
    }

    /// Full coefficient of `pair ⊗ |g⟩` and `pair ⊗ |e⟩`.
    pub fn components(&self, pair: ModePair) -> (C64, C64) {
        let c = self.overall * self.coefficient(pair);
        (c * self.qubit_factor.0, c * self.qubit_factor.1)
    }
}

pub fn resonant_state(params: &DetectorParams, qubit: &QubitState) -> ResonantState {
    let r = params.omega_ratio();
    let gamma = PI * x_over_sinh(r);
    let phase = 2.0 * r * params.ln_accel();
    let one = C64::new(1.0, 0.0);
    ResonantState {
        omega_ratio: r,
        gamma,
        overall: C64::new(params.half_coupling_sq() * gamma, 0.0),
        terms: [
            (ModePair::APlusAMinus, one),
            (ModePair::BPlusBMinus, one),
            (ModePair::APlusBPlus, C64::from_polar(1.0, phase)),
            (ModePair::AMinusBMinus, C64::from_polar(1.0, -phase)),
        ],
        qubit_factor: (qubit.alpha, -qubit.beta),
    }
}

/// The −iπ δ(D) weight of one channel amplitude at one of its poles,
/// −iπ · [A·D](pole), computed with the vanishing factor cancelled.
pub fn on_shell_weight(params: &DetectorParams, pathway: Pathway, channel: Channel, pole: f64) -> Result<C64> {
    let stripped = pole_stripped_amplitude(params, pathway, channel, pole, pole)?;
    Ok(C64::new(0.0, -PI) * stripped)
}

/// Sum of the on-shell weights over every pole of the amplitude.
pub fn on_shell_total(params: &DetectorParams, pathway: Pathway, channel: Channel) -> Result<C64> {
    pole_locations(params, pathway, channel).into_iter().map(|p| on_shell_weight(params, pathway, channel, p)).sum()
}

/// Resonant coefficients rebuilt from the pole weights of the channel
/// amplitudes: `(pair, α·w_GEG, β·w_EGE)` for every mode pair.
pub fn resonant_from_residues(params: &DetectorParams, qubit: &QubitState) -> Result<Vec<(ModePair, C64, C64)>> {
    let r = params.omega_ratio();
    ModePair::ALL
        .iter()
        .map(|&pair| {
            let (ch_g, s_g) = pair.source(Pathway::Geg);
            let (ch_e, s_e) = pair.source(Pathway::Ege);
            let wg = on_shell_weight(params, Pathway::Geg, ch_g, s_g * r)?;
            let we = on_shell_weight(params, Pathway::Ege, ch_e, s_e * r)?;
            Ok((pair, qubit.alpha * wg, qubit.beta * we))
        })
        .collect()
}

/// Numerical settings for principal-value and iε integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PvConfig {
    /// δ: half-width of the excised core around each pole.
    pub excision_half_width: f64,
    /// Ω_max: the integral runs over [−Ω_max, Ω_max].
    pub tail_cutoff: f64,
    /// Gauss–Legendre points per panel.
    pub quadrature_points: usize,
    /// ε used by the regularised cross-check.
    pub epsilon: f64,
}

impl PvConfig {
    /// δ = 1e−4·max(1, Ω₀), Ω_max = Ω₀ + 40, 64-point panels, ε = 1e−3.
    pub fn for_params(params: &DetectorParams) -> Self {
        let r = params.omega_ratio();
        Self { excision_half_width: 1e-4 * r.max(1.0), tail_cutoff: r + 40.0, quadrature_points: 64, epsilon: 1e-3 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.excision_half_width.is_finite() && self.excision_half_width > 0.0) {
            return Err(Error::Config(format!("excision half-width must be > 0, got {}", self.excision_half_width)));
        }
        if !(self.tail_cutoff.is_finite() && self.tail_cutoff > 0.0) {
            return Err(Error::Config(format!("tail cutoff must be finite and > 0, got {}", self.tail_cutoff)));
        }
        if self.quadrature_points < 16 {
            return Err(Error::Config(format!("need at least 16 quadrature points, got {}", self.quadrature_points)));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::Config(format!("epsilon must be > 0, got {}", self.epsilon)));
        }
        Ok(())
    }

    /// Also requires Ω_max > Ω₀ + 10.
    pub fn validate_for(&self, params: &DetectorParams) -> Result<()> {
        self.validate()?;
        let r = params.omega_ratio();
        if self.tail_cutoff <= r + 10.0 {
            return Err(Error::Config(format!(
                "tail cutoff {} must exceed omega/accel + 10 = {}",
                self.tail_cutoff,
                r + 10.0
            )));
        }
        Ok(())
    }
}

/// Value of a real-line integral plus truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PvResult {
    pub value: C64,
    /// max(|f(−Ω_max)|, |f(Ω_max)|)
    pub tail_magnitude: f64,
    /// Set when the tail is not negligible against ∫|f|.
    pub truncated: bool,
}

fn sorted_poles(poles: &[f64], config: &PvConfig) -> Result<Vec<f64>> {
    let mut p = poles.to_vec();
    if p.iter().any(|x| !x.is_finite()) {
        return Err(Error::Config("pole locations must be finite".into()));
    }
    p.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let delta = config.excision_half_width;
    for w in p.windows(2) {
        if w[1] - w[0] <= 2.0 * delta {
            return Err(Error::Config(format!(
                "poles {} and {} are closer than 2*delta = {}",
                w[0],
                w[1],
                2.0 * delta
            )));
        }
    }
    for &x in &p {
        if x.abs() + delta >= config.tail_cutoff {
            return Err(Error::Config(format!("pole {x} lies outside the integration range")));
        }
    }
    Ok(p)
}

fn finish(value: C64, abs_scale: f64, f: &dyn Fn(f64) -> C64, cutoff: f64) -> Result<PvResult> {
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Domain("integrand produced a non-finite value".into()));
    }
    let tail_magnitude = f(-cutoff).norm().max(f(cutoff).norm());
    let truncated = !tail_magnitude.is_finite() || tail_magnitude > TAIL_TOLERANCE * abs_scale;
    Ok(PvResult { value, tail_magnitude, truncated })
}

/// Principal value of ∫ f over [−Ω_max, Ω_max] for `f` with simple real poles
/// at `poles`.
///
/// Around each pole p the window [p − w, p + w] is folded onto
/// t ↦ [f(p + t) − R/t] + [f(p − t) + R/t], the integrand with the residue
/// term R/(x − p) subtracted; that term has zero symmetric principal value.
/// The excised core t ∈ [0, δ] and the graded panels beyond it are then
/// ordinary smooth quadratures.
pub fn pv_integrate<F>(f: F, poles: &[f64], config: &PvConfig) -> Result<PvResult>
where
    F: Fn(f64) -> C64,
{
    config.validate()?;
    let poles = sorted_poles(poles, config)?;
    let rule = GaussLegendre::new(config.quadrature_points);
    let cutoff = config.tail_cutoff;
    let delta = config.excision_half_width;

    let mut windows = Vec::with_capacity(poles.len());
    for (i, &p) in poles.iter().enumerate() {
        let mut w = MAX_PANEL.min(cutoff - p.abs());
        if i > 0 {
            w = w.min(0.5 * (p - poles[i - 1]));
        }
        if i + 1 < poles.len() {
            w = w.min(0.5 * (poles[i + 1] - p));
        }
        windows.push((p, w));
    }

    let fref: &dyn Fn(f64) -> C64 = &f;
    let abs_f = |x: f64| C64::new(f(x).norm(), 0.0);
    let mut value = C64::new(0.0, 0.0);
    let mut scale = 0.0;
    let mut left = -cutoff;
    for &(p, w) in &windows {
        value += rule.composite(&[left, p - w], MAX_PANEL, fref);
        scale += rule.composite(&[left, p - w], MAX_PANEL, &abs_f).re;

        let res = estimate_residue(fref, p, 0.1 * w);
        let fold = |t: f64| {
            // p ± t are rounded; the offsets actually sampled are exact
            let (xp, xm) = (p + t, p - t);
            let (tp, tm) = (xp - p, p - xm);
            f(xp) + f(xm) - res * (1.0 / tp - 1.0 / tm)
        };
        let mut breaks = vec![0.0, delta];
        let mut b = 4.0 * delta;
        while b < w {
            breaks.push(b);
            b *= 4.0;
        }
        breaks.push(w);
        value += rule.composite(&breaks, MAX_PANEL, &fold);
        scale += rule.composite(&breaks, MAX_PANEL, &|t: f64| C64::new(fold(t).norm(), 0.0)).re;
        left = p + w;
    }
    value += rule.composite(&[left, cutoff], MAX_PANEL, fref);
    scale += rule.composite(&[left, cutoff], MAX_PANEL, &abs_f).re;
    finish(value, scale, fref, cutoff)
}

/// ∫ f over [−Ω_max, Ω_max] for an already-regularised integrand whose peaks
/// of width ~`width` sit at `foci`.
pub fn regularized_integrate<F>(f: F, foci: &[f64], width: f64, config: &PvConfig) -> Result<PvResult>
where
    F: Fn(f64) -> C64,
{
    config.validate()?;
    if !(width.is_finite() && width > 0.0) {
        return Err(Error::Config(format!("peak width must be > 0, got {width}")));
    }
    let rule = GaussLegendre::new(config.quadrature_points);
    let cutoff = config.tail_cutoff;
    let breaks = graded_breakpoints(-cutoff, cutoff, foci, width);
    let fref: &dyn Fn(f64) -> C64 = &f;
    let value = rule.composite(&breaks, MAX_PANEL, fref);
    let scale = rule.composite(&breaks, MAX_PANEL, &|x: f64| C64::new(f(x).norm(), 0.0)).re;
    finish(value, scale, fref, cutoff)
}

/// Residue of a simple pole at `p`, from (x − p)·f(x) sampled symmetrically at
/// offsets `h` and `h/2` and Richardson-combined.
pub fn estimate_residue(f: &dyn Fn(f64) -> C64, p: f64, h: f64) -> C64 {
    let sym = |h: f64| {
        let (xp, xm) = (p + h, p - h);
        (f(xp) * (xp - p) + f(xm) * (xm - p)) * 0.5
    };
    (sym(0.5 * h) * 4.0 - sym(h)) / 3.0
}

/// Polynomial (Neville) extrapolation of `(ε, I(ε))` samples to ε = 0.
pub fn extrapolate_to_zero(samples: &[(f64, C64)]) -> C64 {
    let n = samples.len();
    let mut table: Vec<C64> = samples.iter().map(|s| s.1).collect();
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (samples[i].0, samples[i + level].0);
            table[i] = (table[i + 1] * xi - table[i] * xj) / (xi - xj);
        }
    }
    table[0]
}

fn amplitude_or_nan(params: &DetectorParams, pathway: Pathway, channel: Channel, w: f64) -> C64 {
    channel_amplitude(params, pathway, channel, w).unwrap_or(C64::new(f64::NAN, f64::NAN))
}

/// Breakpoints shared by every paper integrand: both resonances and the origin.
fn paper_foci(params: &DetectorParams) -> [f64; 3] {
    let r = params.omega_ratio();
    [-r, 0.0, r]
}

/// P∫ A(Ω) dΩ for one pathway and channel.
pub fn pv_channel_integral(
    params: &DetectorParams,
    pathway: Pathway,
    channel: Channel,
    config: &PvConfig,
) -> Result<PvResult> {
    config.validate_for(params)?;
    let poles = pole_locations(params, pathway, channel);
    pv_integrate(|w| amplitude_or_nan(params, pathway, channel, w), &poles, config)
}

/// ∫ A_ε(Ω) dΩ with every denominator factor D → D + iε.
pub fn regularized_channel_integral(
    params: &DetectorParams,
    pathway: Pathway,
    channel: Channel,
    epsilon: f64,
    config: &PvConfig,
) -> Result<PvResult> {
    config.validate_for(params)?;
    regularized_amplitude(params, pathway, channel, 0.0, epsilon)?;
    let f =
        |w: f64| regularized_amplitude(params, pathway, channel, w, epsilon).unwrap_or(C64::new(f64::NAN, f64::NAN));
    regularized_integrate(f, &paper_foci(params), epsilon, config)
}

/// Principal-value coefficients of the superposed state for one channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PvCoefficients {
    pub channel: Channel,
    /// α · P∫A_GEG
    pub ground: C64,
    /// −β · P∫branch = β · P∫A_EGE
    pub excited: C64,
    pub truncated: bool,
}

pub fn pv_state_coefficients(
    params: &DetectorParams,
    qubit: &QubitState,
    channel: Channel,
    config: &PvConfig,
) -> Result<PvCoefficients> {
    let geg = pv_channel_integral(params, Pathway::Geg, channel, config)?;
    let ege = pv_channel_integral(params, Pathway::Ege, channel, config)?;
    Ok(PvCoefficients {
        channel,
        ground: qubit.alpha * geg.value,
        excited: qubit.beta * ege.value,
        truncated: geg.truncated || ege.truncated,
    })
}

/// Outcome of comparing the iε route with PV + on-shell weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlemeljCheck {
    pub pathway: Pathway,
    pub channel: Channel,
    pub principal_value: C64,
    pub on_shell: C64,
    pub regularized: Vec<(f64, C64)>,
    pub extrapolated: C64,
    /// |extrapolated − (PV + on-shell)| / |PV + on-shell|
    pub relative_discrepancy: f64,
}

/// ε values used for the Sokhotski–Plemelj extrapolation.
pub const PLEMELJ_EPSILONS: [f64; 3] = [1e-2, 1e-3, 1e-4];

pub fn sokhotski_plemelj_check(
    params: &DetectorParams,
    pathway: Pathway,
    channel: Channel,
    config: &PvConfig,
) -> Result<PlemeljCheck> {
    let pv = pv_channel_integral(params, pathway, channel, config)?.value;
    let on_shell = on_shell_total(params, pathway, channel)?;
    let regularized = PLEMELJ_EPSILONS
        .iter()
        .map(|&e| Ok((e, regularized_channel_integral(params, pathway, channel, e, config)?.value)))
        .collect::<Result<Vec<_>>>()?;
    let extrapolated = extrapolate_to_zero(&regularized);
    let target = pv + on_shell;
    Ok(PlemeljCheck {
        pathway,
        channel,
        principal_value: pv,
        on_shell,
        regularized,
        extrapolated,
        relative_discrepancy: (extrapolated - target).norm() / target.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(ratio: f64, accel: f64, g: f64) -> DetectorParams {
        DetectorParams::new(ratio * accel, accel, g).unwrap()
    }

    fn gauss_config() -> PvConfig {
        PvConfig { excision_half_width: 1e-4, tail_cutoff: 12.0, quadrature_points: 64, epsilon: 1e-3 }
    }

    // PV ∫ e^{−x²}/(x − 1) dx = −2√π D(1); mpmath, 30 digits
    const DAWSON_ORACLE: f64 = -1.907442188241755;

    #[test]
    fn resonant_limits() {
        let tiny = resonant_state(&params(1e-6, 1.0, 1.0), &QubitState::ground());
        assert!((tiny.gamma - 1.0).abs() < 1e-10);
        let flat = resonant_state(&params(0.7, 1.0, 1.0), &QubitState::ground());
        assert_eq!(flat.coefficient(ModePair::APlusBPlus), C64::new(1.0, 0.0));
        assert_eq!(flat.coefficient(ModePair::AMinusBMinus), C64::new(1.0, 0.0));
        let s = resonant_state(&params(1.0, 2.0, 1.0), &QubitState::ground());
        assert_relative_eq!(s.coefficient(ModePair::APlusBPlus).arg(), 2.0 * 2f64.ln(), max_relative = 1e-14);
        assert_relative_eq!(s.coefficient(ModePair::AMinusBMinus).arg(), -2.0 * 2f64.ln(), max_relative = 1e-14);
    }

    #[test]
    fn resonant_invariants() {
        let q = QubitState::from_population(0.37, 2.2).unwrap();
        let s = resonant_state(&params(1.3, 0.6, 0.9), &q);
        assert_eq!(s.coefficient(ModePair::APlusAMinus), C64::new(1.0, 0.0));
        assert_eq!(s.coefficient(ModePair::BPlusBMinus), C64::new(1.0, 0.0));
        assert!((s.coefficient(ModePair::APlusBPlus).norm() - 1.0).abs() < 1e-15);
        assert_eq!(s.qubit_factor, (q.alpha, -q.beta));
        assert_relative_eq!(s.overall.re, 0.81 / 4.0 * PI * 1.3 / (PI * 1.3).sinh(), max_relative = 1e-14);
    }

    #[test]
    fn residues_reproduce_resonant_state() {
        for (ratio, accel) in [(0.4, 1.0), (1.0, 2.0), (2.5, 0.3)] {
            let p = params(ratio, accel, 1.2);
            let q = QubitState::from_population(0.6, 0.9).unwrap();
            let s = resonant_state(&p, &q);
            for (pair, g, e) in resonant_from_residues(&p, &q).unwrap() {
                let (cg, ce) = s.components(pair);
                assert!((g - cg).norm() <= 1e-13 * cg.norm(), "{pair:?}");
                assert!((e - ce).norm() <= 1e-13 * ce.norm(), "{pair:?}");
            }
        }
    }

    #[test]
    fn odd_kernel_vanishes() {
        let r = pv_integrate(|x| C64::new((-x * x).exp() / x, 0.0), &[0.0], &gauss_config()).unwrap();
        assert!(r.value.norm() < 1e-14);
        assert!(!r.truncated);
    }

    #[test]
    fn dawson_oracle() {
        let r = pv_integrate(|x| C64::new((-x * x).exp() / (x - 1.0), 0.0), &[1.0], &gauss_config()).unwrap();
        assert!((r.value.re - DAWSON_ORACLE).abs() < 1e-10, "{}", r.value.re);
    }

    #[test]
    fn delta_insensitive() {
        let f = |x: f64| C64::new((-x * x).exp() / (x - 1.0), 0.0);
        let mut c = gauss_config();
        let a = pv_integrate(f, &[1.0], &c).unwrap().value;
        c.excision_half_width /= 2.0;
        let b = pv_integrate(f, &[1.0], &c).unwrap().value;
        assert!((a - b).norm() < 1e-10 * a.norm(), "{}", (a - b).norm());
    }

    #[test]
    fn configuration_errors() {
        let f = |x: f64| C64::new(x, 0.0);
        assert!(pv_integrate(f, &[1.0, 1.0001], &gauss_config()).is_err());
        let mut c = gauss_config();
        c.quadrature_points = 8;
        assert!(pv_integrate(f, &[1.0], &c).is_err());
        c = gauss_config();
        c.excision_half_width = 0.0;
        assert!(pv_integrate(f, &[1.0], &c).is_err());
        let p = params(1.0, 1.0, 1.0);
        let mut c = PvConfig::for_params(&p);
        c.tail_cutoff = 5.0;
        assert!(pv_channel_integral(&p, Pathway::Geg, Channel::RR, &c).is_err());
    }

    #[test]
    fn slow_tail_is_flagged() {
        let r = pv_integrate(|x| C64::new(1.0 / (x - 1.0) / (1.0 + x * x), 0.0), &[1.0], &gauss_config()).unwrap();
        assert!(r.truncated);
    }

    #[test]
    fn residue_estimate() {
        let f = |x: f64| C64::new((-x * x).exp() / (x - 1.0), 0.0);
        let r = estimate_residue(&f, 1.0, 0.05);
        assert!((r.re - (-1f64).exp()).abs() < 1e-6, "{r}");
    }

    #[test]
    fn neville_recovers_quadratic() {
        let s: Vec<(f64, C64)> = [0.1, 0.01, 0.001].iter().map(|&e| (e, C64::new(2.0 + 3.0 * e - e * e, -e))).collect();
        let v = extrapolate_to_zero(&s);
        assert!((v - C64::new(2.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn pv_coefficients_scale_with_coupling() {
        let q = QubitState::from_population(0.5, 0.3).unwrap();
        let p = params(1.0, 1.0, 0.8);
        let c = PvConfig::for_params(&p);
        let a = pv_state_coefficients(&p, &q, Channel::RR, &c).unwrap();
        let b = pv_state_coefficients(&p.with_coupling(1.6).unwrap(), &q, Channel::RR, &c).unwrap();
        assert!((b.ground - a.ground * 4.0).norm() < 1e-13 * b.ground.norm());
        assert!((b.excited - a.excited * 4.0).norm() < 1e-13 * b.excited.norm());
        let z = pv_state_coefficients(&p.with_coupling(0.0).unwrap(), &q, Channel::RR, &c).unwrap();
        assert_eq!(z.ground, C64::new(0.0, 0.0));
        assert_eq!(z.excited, C64::new(0.0, 0.0));
    }

    #[test]
    fn pv_geg_rr_delta_self_consistency() {
        let p = params(1.0, 1.0, 1.0);
        let mut c = PvConfig::for_params(&p);
        c.excision_half_width = 1e-3;
        let a = pv_channel_integral(&p, Pathway::Geg, Channel::RR, &c).unwrap().value;
        c.excision_half_width = 1e-4;
        let b = pv_channel_integral(&p, Pathway::Geg, Channel::RR, &c).unwrap().value;
        assert!((a - b).norm() < 1e-6 * a.norm());
    }

    #[test]
    fn plemelj_consistency_all_channels() {
        let p = params(1.0, 1.7, 1.0);
        let c = PvConfig::for_params(&p);
        for pw in Pathway::ALL {
            for ch in Channel::ALL {
                let chk = sokhotski_plemelj_check(&p, pw, ch, &c).unwrap();
                assert!(chk.relative_discrepancy < 1e-6, "{pw}-{ch}: {}", chk.relative_discrepancy);
            }
        }
    }
}
