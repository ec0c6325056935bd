//! Interference between the GEG and EGE branches of the superposed state.
//!
//! With α = √(1−|β|²) and β = |β|e^{iφ}, the emission density for one channel
//! splits as
//!
//! ```text
//! p_total      = |α A_GEG − β B|²
//! p_background = |α A_GEG|² + |β B|²
//! p_int        = 2 Re[α A_GEG · conj(−β B)]
//! ```
//!
//! where B is the β-branch bracket with the common +i g²/4ħ² prefactor
//! ([`crate::amplitudes::ege_branch`]). The Ω-integrated map only needs three
//! moments of the two branches, so every cell is closed form once those are
//! known.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::amplitudes::{
    ege_branch, regularized_amplitude, Channel, DetectorParams, Pathway, QubitState, Regularization,
};
use crate::error::{Error, Result};
use crate::resonance::{regularized_integrate, PvConfig};
use crate::spectra::uniform_grid;

/// Default number of samples along each map axis.
pub const DEFAULT_AXIS_POINTS: usize = 41;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterferenceDensity {
    pub p_background: f64,
    pub p_int: f64,
    /// |α A_GEG − β B|² evaluated directly.
    pub p_total: f64,
}

/// Group label used in outputs; the mixed channel stands for RL+LR.
pub fn group_label(channel: Channel) -> &'static str {
    match channel {
        Channel::RR => "RR",
        Channel::LL => "LL",
        Channel::RL => "RL+LR",
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::Config(format!("epsilon must be > 0, got {epsilon}")));
    }
    Ok(())
}

/// Pointwise decomposition at one frequency with broadened amplitudes.
pub fn interference_density(
    params: &DetectorParams,
    qubit: &QubitState,
    channel: Channel,
    big_omega: f64,
    epsilon: f64,
) -> Result<InterferenceDensity> {
    check_epsilon(epsilon)?;
    let reg = Regularization::Broadened(epsilon);
    let g = qubit.alpha * regularized_amplitude(params, Pathway::Geg, channel, big_omega, epsilon)?;
    let e = -qubit.beta * ege_branch(params, channel, big_omega, reg)?;
    Ok(InterferenceDensity {
        p_background: g.norm_sqr() + e.norm_sqr(),
        p_int: 2.0 * (g * e.conj()).re,
        p_total: (g + e).norm_sqr(),
    })
}

/// Ω-integrated second moments of the two branches for one channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchMoments {
    /// ∫ |A_GEG|²
    pub geg_sq: f64,
    /// ∫ |B|²
    pub branch_sq: f64,
    /// ∫ A_GEG conj(B)
    pub cross: C64,
}

impl BranchMoments {
    /// Integrated (p_background, p_int) for one qubit.
    pub fn decompose(&self, qubit: &QubitState) -> (f64, f64) {
        let bg = qubit.alpha.norm_sqr() * self.geg_sq + qubit.beta.norm_sqr() * self.branch_sq;
        let int = -2.0 * (qubit.alpha * qubit.beta.conj() * self.cross).re;
        (bg, int)
    }
}

pub fn branch_moments(
    params: &DetectorParams,
    channel: Channel,
    epsilon: f64,
    config: &PvConfig,
) -> Result<BranchMoments> {
    check_epsilon(epsilon)?;
    config.validate_for(params)?;
    let r = params.omega_ratio();
    let foci = [-r, 0.0, r];
    let reg = Regularization::Broadened(epsilon);
    let nan = C64::new(f64::NAN, f64::NAN);
    let geg = |w: f64| regularized_amplitude(params, Pathway::Geg, channel, w, epsilon).unwrap_or(nan);
    let branch = |w: f64| ege_branch(params, channel, w, reg).unwrap_or(nan);
    let geg_sq = regularized_integrate(|w| C64::new(geg(w).norm_sqr(), 0.0), &foci, epsilon, config)?.value.re;
    let branch_sq = regularized_integrate(|w| C64::new(branch(w).norm_sqr(), 0.0), &foci, epsilon, config)?.value.re;
    let cross = regularized_integrate(|w| geg(w) * branch(w).conj(), &foci, epsilon, config)?.value;
    Ok(BranchMoments { geg_sq, branch_sq, cross })
}

/// Ω-integrated interference over a (|β|², φ) grid. Rows follow `beta2_axis`,
/// columns follow `phi_axis`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterferenceMap {
    pub beta2_axis: Vec<f64>,
    pub phi_axis: Vec<f64>,
    pub omega_ratio: f64,
    pub channel_group: Channel,
    pub epsilon: f64,
    pub p_int: Vec<Vec<f64>>,
    pub p_background: Vec<Vec<f64>>,
}

impl InterferenceMap {
    /// (row, column, value) of the largest p_int; first occurrence wins.
    pub fn argmax(&self) -> (usize, usize, f64) {
        let mut best = (0, 0, f64::NEG_INFINITY);
        for (i, row) in self.p_int.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        best
    }

    pub fn max_abs_p_int(&self) -> f64 {
        self.p_int.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn p_total(&self, i: usize, j: usize) -> f64 {
        self.p_background[i][j] + self.p_int[i][j]
    }
}

/// 41 points on [0, 1].
pub fn default_beta2_axis() -> Vec<f64> {
    uniform_grid(0.0, 1.0, DEFAULT_AXIS_POINTS).expect("valid axis")
}

/// 41 points on [0, 2π].
pub fn default_phi_axis() -> Vec<f64> {
    uniform_grid(0.0, std::f64::consts::TAU, DEFAULT_AXIS_POINTS).expect("valid axis")
}

fn check_axes(beta2_axis: &[f64], phi_axis: &[f64]) -> Result<()> {
    if beta2_axis.is_empty() || phi_axis.is_empty() {
        return Err(Error::Config("interference axes must be non-empty".into()));
    }
    if beta2_axis.iter().any(|b| !(0.0..=1.0).contains(b)) {
        return Err(Error::Config("beta2 values must lie in [0, 1]".into()));
    }
    if phi_axis.iter().any(|p| !p.is_finite()) {
        return Err(Error::Config("phi values must be finite".into()));
    }
    Ok(())
}

pub fn interference_map(
    params: &DetectorParams,
    channel_group: Channel,
    beta2_axis: &[f64],
    phi_axis: &[f64],
    epsilon: f64,
    config: &PvConfig,
) -> Result<InterferenceMap> {
    check_axes(beta2_axis, phi_axis)?;
    let moments = branch_moments(params, channel_group, epsilon, config)?;
    map_from_moments(params, channel_group, &moments, beta2_axis, phi_axis, epsilon)
}

pub fn map_from_moments(
    params: &DetectorParams,
    channel_group: Channel,
    moments: &BranchMoments,
    beta2_axis: &[f64],
    phi_axis: &[f64],
    epsilon: f64,
) -> Result<InterferenceMap> {
    check_axes(beta2_axis, phi_axis)?;
    let mut p_int = Vec::with_capacity(beta2_axis.len());
    let mut p_background = Vec::with_capacity(beta2_axis.len());
    for &b2 in beta2_axis {
        let mut ints = Vec::with_capacity(phi_axis.len());
        let mut bgs = Vec::with_capacity(phi_axis.len());
        for &phi in phi_axis {
            let (bg, int) = moments.decompose(&QubitState::from_population(b2, phi)?);
            bgs.push(bg);
            ints.push(int);
        }
        p_int.push(ints);
        p_background.push(bgs);
    }
    Ok(InterferenceMap {
        beta2_axis: beta2_axis.to_vec(),
        phi_axis: phi_axis.to_vec(),
        omega_ratio: params.omega_ratio(),
        channel_group,
        epsilon,
        p_int,
        p_background,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweetSpot {
    pub omega_ratio: f64,
    pub max_abs_p_int: f64,
}

/// max |p_int| along |β|² = 1/2 for each Ω₀, with the acceleration and
/// coupling of `params_base`. The tail cutoff is raised to Ω₀ + 40 where the
/// template config is too short.
pub fn sweet_spot_scan(
    params_base: &DetectorParams,
    omega_ratios: &[f64],
    channel_group: Channel,
    epsilon: f64,
    config: &PvConfig,
    phi_axis: &[f64],
) -> Result<Vec<SweetSpot>> {
    if omega_ratios.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(Error::Config("omega ratios must be > 0".into()));
    }
    check_axes(&[0.5], phi_axis)?;
    omega_ratios
        .par_iter()
        .map(|&r| {
            let p = params_base.with_omega_ratio(r)?;
            let mut c = *config;
            c.tail_cutoff = c.tail_cutoff.max(PvConfig::for_params(&p).tail_cutoff);
            let map = interference_map(&p, channel_group, &[0.5], phi_axis, epsilon, &c)?;
            Ok(SweetSpot { omega_ratio: r, max_abs_p_int: map.max_abs_p_int() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::DEFAULT_EPSILON;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn params(ratio: f64) -> DetectorParams {
        DetectorParams::new(ratio, 1.0, 1.0).unwrap()
    }

    #[test]
    fn single_pathway_has_no_interference() {
        let p = params(1.0);
        for b2 in [0.0, 1.0] {
            let q = QubitState::from_population(b2, 0.7).unwrap();
            for ch in Channel::ALL {
                let d = interference_density(&p, &q, ch, 0.8, 0.05).unwrap();
                assert_eq!(d.p_int, 0.0);
            }
        }
    }

    #[test]
    fn phase_shift_by_pi_flips_sign() {
        let p = params(1.0);
        let a =
            interference_density(&p, &QubitState::from_population(0.3, 0.4).unwrap(), Channel::RR, 0.6, 0.05).unwrap();
        let b = interference_density(&p, &QubitState::from_population(0.3, 0.4 + PI).unwrap(), Channel::RR, 0.6, 0.05)
            .unwrap();
        assert!((a.p_int + b.p_int).abs() < 1e-15 * a.p_int.abs().max(1e-300));
    }

    #[test]
    fn rr_map_peaks_at_equal_superposition_and_pi() {
        let p = params(1.0);
        let c = PvConfig::for_params(&p);
        let m =
            interference_map(&p, Channel::RR, &default_beta2_axis(), &default_phi_axis(), DEFAULT_EPSILON, &c).unwrap();
        let (i, j, _) = m.argmax();
        assert!((m.beta2_axis[i] - 0.5).abs() <= 0.025 + 1e-12);
        assert!((m.phi_axis[j] - PI).abs() <= PI / 20.0 + 1e-12);
    }

    #[test]
    fn map_edges_periodicity_and_antisymmetry() {
        let p = params(0.8);
        let c = PvConfig::for_params(&p);
        for ch in Channel::ALL {
            let m = interference_map(&p, ch, &default_beta2_axis(), &default_phi_axis(), 0.05, &c).unwrap();
            let n = m.phi_axis.len();
            assert!(m.p_int[0].iter().chain(m.p_int[40].iter()).all(|v| *v == 0.0));
            for row in &m.p_int {
                let scale = row.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                assert!((row[0] - row[n - 1]).abs() <= 1e-13 * scale);
                for j in 0..=20 {
                    assert!((row[j] + row[j + 20]).abs() <= 1e-13 * scale);
                }
            }
            assert!(m.p_background.iter().flatten().all(|v| *v >= 0.0));
        }
    }

    #[test]
    fn integrated_map_matches_per_cell_quadrature() {
        // direct Ω-integration of the pointwise density for one cell
        let p = params(1.0);
        let c = PvConfig::for_params(&p);
        let q = QubitState::from_population(0.3, 2.0).unwrap();
        let m = interference_map(&p, Channel::RR, &[0.3], &[2.0], 0.05, &c).unwrap();
        let direct = regularized_integrate(
            |w| C64::new(interference_density(&p, &q, Channel::RR, w, 0.05).unwrap().p_int, 0.0),
            &[-1.0, 0.0, 1.0],
            0.05,
            &c,
        )
        .unwrap()
        .value
        .re;
        assert!((m.p_int[0][0] - direct).abs() < 1e-10 * direct.abs());
    }

    #[test]
    fn ll_map_equals_rr_map() {
        let p = params(1.0);
        let c = PvConfig::for_params(&p);
        let rr = interference_map(&p, Channel::RR, &default_beta2_axis(), &default_phi_axis(), 0.05, &c).unwrap();
        let ll = interference_map(&p, Channel::LL, &default_beta2_axis(), &default_phi_axis(), 0.05, &c).unwrap();
        let scale = rr.max_abs_p_int();
        for (a, b) in rr.p_int.iter().flatten().zip(ll.p_int.iter().flatten()) {
            assert!((a - b).abs() <= 1e-8 * scale);
        }
    }

    #[test]
    fn mixed_channel_fades_with_gap() {
        let p = params(1.0);
        let c = PvConfig::for_params(&p);
        let s = sweet_spot_scan(&p, &[0.5, 3.0], Channel::RL, 0.05, &c, &default_phi_axis()).unwrap();
        assert!(s[1].max_abs_p_int < s[0].max_abs_p_int);
    }

    #[test]
    fn sweet_spot_scales_quartically() {
        let p = params(1.0);
        let p2 = p.with_coupling(2f64.sqrt()).unwrap();
        let c = PvConfig::for_params(&p);
        let a = sweet_spot_scan(&p, &[0.5, 1.0], Channel::RR, 0.05, &c, &default_phi_axis()).unwrap();
        let b = sweet_spot_scan(&p2, &[0.5, 1.0], Channel::RR, 0.05, &c, &default_phi_axis()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((y.max_abs_p_int - 4.0 * x.max_abs_p_int).abs() < 1e-12 * y.max_abs_p_int);
        }
    }

    #[test]
    #[ignore = "not reproduced: the RR interference magnitude decreases monotonically in omega/accel"]
    fn rr_sweet_spot_has_interior_maximum() {
        let p = params(1.0);
        let c = PvConfig::for_params(&p);
        let ratios = uniform_grid(0.05, 3.0, 60).unwrap();
        let s = sweet_spot_scan(&p, &ratios, Channel::RR, 0.05, &c, &default_phi_axis()).unwrap();
        let k = s.iter().enumerate().max_by(|a, b| a.1.max_abs_p_int.total_cmp(&b.1.max_abs_p_int)).unwrap().0;
        assert!(k > 0 && k + 1 < s.len(), "maximum at index {k}");
    }

    #[test]
    fn rejects_bad_axes() {
        let p = params(1.0);
        let c = PvConfig::for_params(&p);
        assert!(interference_map(&p, Channel::RR, &[], &[0.0], 0.05, &c).is_err());
        assert!(interference_map(&p, Channel::RR, &[1.5], &[0.0], 0.05, &c).is_err());
        assert!(sweet_spot_scan(&p, &[0.0], Channel::RR, 0.05, &c, &[0.0]).is_err());
    }

    proptest! {
        #[test]
        fn decomposition_identity(ratio in 0.1f64..4.0, b2 in 0.0f64..=1.0, phi in 0.0f64..6.3, w in -6.0f64..6.0, ch_i in 0usize..3) {
            let ch = Channel::ALL[ch_i];
            let d = interference_density(&params(ratio), &QubitState::from_population(b2, phi).unwrap(), ch, w, 0.05).unwrap();
            prop_assert!((d.p_total - (d.p_background + d.p_int)).abs() <= 1e-12 * d.p_total.max(d.p_background));
        }
    }
}
