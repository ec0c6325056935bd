//! Ramsey protocol for detecting the vacuum-induced Z gate.
//!
//! Basis order is (|g⟩, |e⟩). The sequence is
//!
//! 1. prepare (|g⟩ + |e⟩)/√2,
//! 2. apply ρ ↦ (1 − p)ρ + p ZρZ,
//! 3. apply Rz(φ_R) = diag(1, e^{iφ_R}), then H, then X, and read out P_e.
//!
//! With these choices P_e(φ_R) = ½[1 + (1 − 2p) cos φ_R], so the ungated
//! fringe has P_e(0) = 1.

use nalgebra::{Matrix2, Matrix3, Vector3};
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};

pub type Qubit = Matrix2<C64>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RamseyConfig {
    pub gate_applied: bool,
    /// Weight p of the Z branch.
    pub gate_strength: f64,
    pub phase_axis: Vec<f64>,
}

impl RamseyConfig {
    pub fn new(gate_applied: bool, gate_strength: f64, phase_axis: Vec<f64>) -> Result<Self> {
        let c = Self { gate_applied, gate_strength, phase_axis };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.gate_strength) {
            return Err(Error::Config(format!("gate strength must lie in [0, 1], got {}", self.gate_strength)));
        }
        if self.phase_axis.iter().any(|p| !p.is_finite()) {
            return Err(Error::Config("analysis phases must be finite".into()));
        }
        Ok(())
    }

    /// p actually applied: zero when the gate is switched off.
    pub fn effective_strength(&self) -> f64 {
        if self.gate_applied {
            self.gate_strength
        } else {
            0.0
        }
    }
}

/// 73 phases on [0, 2π] (5° steps).
pub fn default_phase_axis() -> Vec<f64> {
    let n = 73;
    (0..n).map(|i| std::f64::consts::TAU * i as f64 / (n - 1) as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FringePoint {
    pub phi_r: f64,
    pub p_e: f64,
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// (|g⟩ + |e⟩)/√2 as a density matrix.
pub fn prepared_state() -> Qubit {
    Matrix2::from_element(c(0.5))
}

/// ρ ↦ (1 − p)ρ + p ZρZ.
pub fn gate_channel(rho: &Qubit, p: f64) -> Qubit {
    let z = Matrix2::new(c(1.0), c(0.0), c(0.0), c(-1.0));
    rho * c(1.0 - p) + z * rho * z * c(p)
}

/// P_e after Rz(φ_R), H and X.
pub fn analysis_probability(rho: &Qubit, phi_r: f64) -> f64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let rz = Matrix2::new(c(1.0), c(0.0), c(0.0), C64::from_polar(1.0, phi_r));
    let h = Matrix2::new(c(s), c(s), c(s), c(-s));
    let x = Matrix2::new(c(0.0), c(1.0), c(1.0), c(0.0));
    let u = x * h * rz;
    let out = u * rho * u.adjoint();
    out[(1, 1)].re.clamp(0.0, 1.0)
}

pub fn ramsey_fringe(config: &RamseyConfig) -> Result<Vec<FringePoint>> {
    config.validate()?;
    let rho = gate_channel(&prepared_state(), config.effective_strength());
    Ok(config.phase_axis.iter().map(|&phi_r| FringePoint { phi_r, p_e: analysis_probability(&rho, phi_r) }).collect())
}

/// Signed contrast B/A from a least-squares fit of A + B cos φ + C sin φ,
/// i.e. (P_e(0) − P_e(π))/(P_e(0) + P_e(π)) of the fitted fringe. Degenerate
/// fringes give 0.
pub fn fringe_visibility(fringe: &[FringePoint]) -> f64 {
    let mut normal = Matrix3::<f64>::zeros();
    let mut rhs = Vector3::<f64>::zeros();
    for pt in fringe {
        let basis = Vector3::new(1.0, pt.phi_r.cos(), pt.phi_r.sin());
        normal += basis * basis.transpose();
        rhs += basis * pt.p_e;
    }
    let Some(coef) = normal.lu().solve(&rhs) else {
        return 0.0;
    };
    let spread = fringe.iter().fold(0.0f64, |m, pt| m.max((pt.p_e - fringe[0].p_e).abs()));
    if spread <= 1e-14 || coef[0] == 0.0 || !coef.iter().all(|v| v.is_finite()) {
        return 0.0;
    }
    coef[1] / coef[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn fringe(p: f64) -> Vec<FringePoint> {
        ramsey_fringe(&RamseyConfig::new(true, p, default_phase_axis()).unwrap()).unwrap()
    }

    #[test]
    fn endpoints() {
        let axis = vec![0.0, PI];
        let f = ramsey_fringe(&RamseyConfig::new(true, 0.0, axis.clone()).unwrap()).unwrap();
        assert!((f[0].p_e - 1.0).abs() < 1e-15 && f[1].p_e.abs() < 1e-15);
        let f = ramsey_fringe(&RamseyConfig::new(true, 1.0, axis).unwrap()).unwrap();
        assert!(f[0].p_e.abs() < 1e-15 && (f[1].p_e - 1.0).abs() < 1e-15);
    }

    #[test]
    fn half_strength_washes_out() {
        for pt in fringe(0.5) {
            assert!((pt.p_e - 0.5).abs() < 1e-15);
        }
        assert_eq!(fringe_visibility(&fringe(0.5)), 0.0);
    }

    #[test]
    fn closed_form_and_contrast_law() {
        for k in 0..=10 {
            let p = k as f64 / 10.0;
            let f = fringe(p);
            for pt in &f {
                let expect = 0.5 * (1.0 + (1.0 - 2.0 * p) * pt.phi_r.cos());
                assert!((pt.p_e - expect).abs() < 1e-15);
                assert!((0.0..=1.0).contains(&pt.p_e));
            }
            assert!((fringe_visibility(&f) - (1.0 - 2.0 * p)).abs() < 1e-12);
        }
        assert!((fringe_visibility(&fringe(0.75)) + 0.5).abs() < 1e-12);
    }

    #[test]
    fn double_z_is_identity() {
        let once = gate_channel(&prepared_state(), 1.0);
        let twice = gate_channel(&once, 1.0);
        for phi in default_phase_axis() {
            assert_eq!(analysis_probability(&twice, phi), analysis_probability(&prepared_state(), phi));
        }
    }

    #[test]
    fn gate_off_ignores_strength() {
        let f = ramsey_fringe(&RamseyConfig::new(false, 1.0, default_phase_axis()).unwrap()).unwrap();
        assert!((fringe_visibility(&f) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_inputs() {
        assert!(RamseyConfig::new(true, 1.5, vec![0.0]).is_err());
        assert!(RamseyConfig::new(true, -0.1, vec![0.0]).is_err());
        assert_eq!(fringe_visibility(&[]), 0.0);
        assert_eq!(fringe_visibility(&[FringePoint { phi_r: 0.0, p_e: 1.0 }]), 0.0);
    }
}
