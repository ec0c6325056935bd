//! Closed-form two-photon amplitudes of the accelerated two-level detector.
//!
//! Each amplitude is the coefficient multiplying one pair of Unruh-mode
//! creation operators inside the frequency integral of the second-order final
//! state. Units: ħ = 1 and the acceleration is a dimensionless positive number,
//! so `a^{2iΩ} = exp(2iΩ ln a)`.
//!
//! | pathway | prefactor  | RR            | LL            | RL                          |
//! |---------|------------|---------------|---------------|-----------------------------|
//! | GEG     | +i g²/4ħ²  | Ω/(Ω₀−Ω)      | Ω/(Ω₀+Ω)      | 2Ω₀Ω a^{2iΩ}/(Ω₀²−Ω²)       |
//! | EGE     | −i g²/4ħ²  | Ω/(Ω₀+Ω)      | Ω/(Ω₀−Ω)      | 2Ω₀Ω a^{2iΩ}/(Ω₀²−Ω²)       |
//!
//! every entry carrying the common envelope `1/sinh(πΩ)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant; fixed to one throughout.
pub const HBAR: f64 = 1.0;

/// Relative distance to a pole below which exact evaluation is refused.
const POLE_TOLERANCE: f64 = 1e-14;

/// Physical configuration of the detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorParams {
    /// Energy gap ω.
    pub omega: f64,
    /// Proper acceleration a.
    pub accel: f64,
    /// Coupling constant g.
    pub coupling: f64,
}

impl DetectorParams {
    pub fn new(omega: f64, accel: f64, coupling: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::Config(format!("omega must be finite and > 0, got {omega}")));
        }
        if !(accel.is_finite() && accel > 0.0) {
            return Err(Error::Config(format!("accel must be finite and > 0, got {accel}")));
        }
        if !(coupling.is_finite() && coupling >= 0.0) {
            return Err(Error::Config(format!("coupling must be finite and >= 0, got {coupling}")));
        }
        let p = Self { omega, accel, coupling };
        let r = p.omega_ratio();
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::Config(format!("omega/accel must be finite and > 0, got {r}")));
        }
        Ok(p)
    }

    /// Resonance frequency Ω₀ = ω/a.
    pub fn omega_ratio(&self) -> f64 {
        self.omega / self.accel
    }

    /// ln a, the rate of the mixed-channel phase `a^{2iΩ}`.
    pub fn ln_accel(&self) -> f64 {
        self.accel.ln()
    }

    /// g²/(4ħ²).
    pub fn half_coupling_sq(&self) -> f64 {
        self.coupling * self.coupling / (4.0 * HBAR * HBAR)
    }

    pub fn with_coupling(self, coupling: f64) -> Result<Self> {
        Self::new(self.omega, self.accel, coupling)
    }

    /// Same acceleration and coupling, gap rescaled so that ω/a = `ratio`.
    pub fn with_omega_ratio(self, ratio: f64) -> Result<Self> {
        Self::new(ratio * self.accel, self.accel, self.coupling)
    }

    fn kinematics(&self) -> Kinematics {
        Kinematics { ratio: self.omega_ratio(), ln_accel: self.ln_accel(), half_g2: self.half_coupling_sq() }
    }
}

/// Detector qubit α|g⟩ + β|e⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitState {
    pub alpha: C64,
    pub beta: C64,
}

impl QubitState {
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!("qubit must satisfy |alpha|^2 + |beta|^2 = 1, got {norm}")));
        }
        Ok(Self { alpha, beta })
    }

    /// α = √(1−|β|²) real, β = |β| e^{iφ}.
    pub fn from_population(beta2: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&beta2) || !phi.is_finite() {
            return Err(Error::Config(format!("need 0 <= beta2 <= 1 and finite phi, got ({beta2}, {phi})")));
        }
        Ok(Self { alpha: C64::new((1.0 - beta2).sqrt(), 0.0), beta: C64::from_polar(beta2.sqrt(), phi) })
    }

    pub fn ground() -> Self {
        Self { alpha: C64::new(1.0, 0.0), beta: C64::new(0.0, 0.0) }
    }

    pub fn excited() -> Self {
        Self { alpha: C64::new(0.0, 0.0), beta: C64::new(1.0, 0.0) }
    }

    /// Pauli Z: α|g⟩ + β|e⟩ → α|g⟩ − β|e⟩.
    pub fn apply_z(self) -> Self {
        Self { alpha: self.alpha, beta: -self.beta }
    }
}

/// Photon pair produced by the emission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Channel {
    /// A†_Ω A†_{−Ω}
    RR,
    /// B†_Ω B†_{−Ω}
    LL,
    /// A†_Ω B†_Ω
    RL,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::RR, Channel::LL, Channel::RL];

    pub fn label(self) -> &'static str {
        match self {
            Channel::RR => "RR",
            Channel::LL => "LL",
            Channel::RL => "RL",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "RR" => Ok(Channel::RR),
            "LL" => Ok(Channel::LL),
            "RL" | "LR" | "RL+LR" | "MIXED" => Ok(Channel::RL),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

/// Second-order history of the detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pathway {
    /// g → e → g: Unruh excitation followed by decay.
    Geg,
    /// e → g → e: decay followed by re-excitation.
    Ege,
}

impl Pathway {
    pub const ALL: [Pathway; 2] = [Pathway::Geg, Pathway::Ege];

    pub fn label(self) -> &'static str {
        match self {
            Pathway::Geg => "GEG",
            Pathway::Ege => "EGE",
        }
    }
}

impl fmt::Display for Pathway {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Pathway {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "GEG" => Ok(Pathway::Geg),
            "EGE" => Ok(Pathway::Ege),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

/// How pole-bearing denominators are treated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regularization {
    /// Plain closed form; evaluation on a pole is an error.
    Exact,
    /// Each linear factor D = Ω₀ ± Ω replaced by D + iε.
    Broadened(f64),
}

/// Components of the superposed amplitude multiplying |g⟩ and |e⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorComponents {
    pub ground: C64,
    pub excited: C64,
}

/// Signed-gap kinematics. The public API only admits ω > 0; the ω → −ω map
/// is evaluated through this type.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Kinematics {
    pub ratio: f64,
    pub ln_accel: f64,
    pub half_g2: f64,
}

impl Kinematics {
    pub(crate) fn flipped(self) -> Self {
        Self { ratio: -self.ratio, ..self }
    }
}

/// Signs s of the linear factors D = Ω₀ + sΩ in the denominator; the factor
/// vanishes at Ω = −Ω₀/s.
pub(crate) fn factor_signs(pathway: Pathway, channel: Channel) -> &'static [f64] {
    match (pathway, channel) {
        (Pathway::Geg, Channel::RR) | (Pathway::Ege, Channel::LL) => &[-1.0],
        (Pathway::Geg, Channel::LL) | (Pathway::Ege, Channel::RR) => &[1.0],
        (_, Channel::RL) => &[-1.0, 1.0],
    }
}

/// Pole locations of an amplitude, in ascending order.
pub fn pole_locations(params: &DetectorParams, pathway: Pathway, channel: Channel) -> Vec<f64> {
    let r = params.omega_ratio();
    let mut p: Vec<f64> = factor_signs(pathway, channel).iter().map(|s| -r / s).collect();
    p.sort_by(|a, b| a.partial_cmp(b).unwrap());
    p
}

/// Ω / sinh(πΩ), extended by 1/π at the origin.
pub fn x_over_sinh(x: f64) -> f64 {
    let y = PI * x;
    if y.abs() < 1e-4 {
        // x/sinh(πx) = (1/π)(1 − y²/6 + 7y⁴/360 − …)
        (1.0 - y * y / 6.0 + 7.0 * y.powi(4) / 360.0) / PI
    } else {
        x / y.sinh()
    }
}

fn prefactor(k: &Kinematics, pathway: Pathway) -> C64 {
    match pathway {
        Pathway::Geg => C64::new(0.0, k.half_g2),
        Pathway::Ege => C64::new(0.0, -k.half_g2),
    }
}

/// Numerator times the 1/sinh(πΩ) envelope.
fn numerator(k: &Kinematics, channel: Channel, big_omega: f64) -> C64 {
    let env = x_over_sinh(big_omega);
    match channel {
        Channel::RR | Channel::LL => C64::new(env, 0.0),
        Channel::RL => C64::from_polar(2.0 * k.ratio * env, 2.0 * big_omega * k.ln_accel),
    }
}

pub(crate) fn evaluate(
    k: &Kinematics,
    pathway: Pathway,
    channel: Channel,
    big_omega: f64,
    reg: Regularization,
    skip_sign: Option<f64>,
) -> Result<C64> {
    if !big_omega.is_finite() {
        return Err(Error::Domain(format!("Omega must be finite, got {big_omega}")));
    }
    let num = numerator(k, channel, big_omega);
    let mut den = C64::new(1.0, 0.0);
    for &s in factor_signs(pathway, channel) {
        if skip_sign == Some(s) {
            continue;
        }
        let d = k.ratio + s * big_omega;
        match reg {
            Regularization::Exact => {
                if d.abs() <= POLE_TOLERANCE * k.ratio.abs().max(1.0) {
                    return Err(Error::Pole { location: -k.ratio / s });
                }
                den *= d;
            }
            Regularization::Broadened(eps) => den *= C64::new(d, eps),
        }
    }
    let value = if den.im == 0.0 { num / den.re } else { num / den };
    Ok(prefactor(k, pathway) * value)
}

/// Unruh-mode normalisation f(Ω) = e^{−πΩ/2} / √(8πΩ sinh(πΩ)).
///
/// Real and positive for every Ω ≠ 0; evaluated in log space so large |Ω|
/// does not overflow.
pub fn unruh_norm(big_omega: f64) -> Result<f64> {
    if big_omega == 0.0 || !big_omega.is_finite() {
        return Err(Error::Domain(format!("unruh_norm undefined at Omega = {big_omega}")));
    }
    let y = PI * big_omega.abs();
    let ln_sinh = if y > 20.0 { y - std::f64::consts::LN_2 } else { y.sinh().ln() };
    let ln_f = -0.5 * PI * big_omega - 0.5 * (8.0 * PI * big_omega.abs()).ln() - 0.5 * ln_sinh;
    Ok(ln_f.exp())
}

/// Exact coefficient A(Ω) for one pathway and channel, prefactor and envelope
/// included. Ω = 0 takes the removable limit; Ω = ±Ω₀ on a denominator factor
/// is a [`Error::Pole`].
pub fn channel_amplitude(params: &DetectorParams, pathway: Pathway, channel: Channel, big_omega: f64) -> Result<C64> {
    evaluate(&params.kinematics(), pathway, channel, big_omega, Regularization::Exact, None)
}

/// Amplitude with every linear denominator factor D replaced by D + iε.
pub fn regularized_amplitude(
    params: &DetectorParams,
    pathway: Pathway,
    channel: Channel,
    big_omega: f64,
    epsilon: f64,
) -> Result<C64> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::Config(format!("epsilon must be > 0, got {epsilon}")));
    }
    evaluate(&params.kinematics(), pathway, channel, big_omega, Regularization::Broadened(epsilon), None)
}

/// A(Ω)·D(Ω) for the denominator factor vanishing at `pole`, i.e. the
/// amplitude with that factor cancelled. Finite at the pole itself.
pub fn pole_stripped_amplitude(
    params: &DetectorParams,
    pathway: Pathway,
    channel: Channel,
    pole: f64,
    big_omega: f64,
) -> Result<C64> {
    let k = params.kinematics();
    let sign = factor_signs(pathway, channel)
        .iter()
        .copied()
        .find(|s| (-k.ratio / s - pole).abs() <= 1e-12 * k.ratio.max(1.0))
        .ok_or_else(|| Error::Domain(format!("{pathway}-{channel} has no pole at {pole}")))?;
    evaluate(&k, pathway, channel, big_omega, Regularization::Exact, Some(sign))
}

/// The β-branch of the superposed state: same bracket as the EGE amplitude but
/// carrying the common +i g²/4ħ² prefactor, so that A_EGE = −branch.
pub fn ege_branch(params: &DetectorParams, channel: Channel, big_omega: f64, reg: Regularization) -> Result<C64> {
    evaluate(&params.kinematics(), Pathway::Ege, channel, big_omega, reg, None).map(|a| -a)
}

/// Returns (A_EGE(ω), A_GEG(−ω)) at the same |ω|, a and g. The two are equal.
pub fn omega_flip_check(params: &DetectorParams, channel: Channel, big_omega: f64) -> Result<(C64, C64)> {
    let k = params.kinematics();
    let ege = evaluate(&k, Pathway::Ege, channel, big_omega, Regularization::Exact, None)?;
    let geg_flipped = evaluate(&k.flipped(), Pathway::Geg, channel, big_omega, Regularization::Exact, None)?;
    Ok((ege, geg_flipped))
}

/// Coherent superposition α·A_GEG |g⟩ − β·branch |e⟩ for one channel.
pub fn superposed_amplitude(
    params: &DetectorParams,
    qubit: &QubitState,
    channel: Channel,
    big_omega: f64,
) -> Result<DetectorComponents> {
    superposed_amplitude_with(params, qubit, channel, big_omega, Regularization::Exact)
}

pub fn superposed_amplitude_with(
    params: &DetectorParams,
    qubit: &QubitState,
    channel: Channel,
    big_omega: f64,
    reg: Regularization,
) -> Result<DetectorComponents> {
    let k = params.kinematics();
    let geg = evaluate(&k, Pathway::Geg, channel, big_omega, reg, None)?;
    let branch = -evaluate(&k, Pathway::Ege, channel, big_omega, reg, None)?;
    Ok(DetectorComponents { ground: qubit.alpha * geg, excited: -qubit.beta * branch })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn params(ratio: f64, accel: f64, g: f64) -> DetectorParams {
        DetectorParams::new(ratio * accel, accel, g).unwrap()
    }

    #[test]
    fn unruh_norm_oracle_values() {
        // mpmath, 30 digits
        assert_relative_eq!(unruh_norm(1.0).unwrap(), 0.0122018196980692, max_relative = 1e-12);
        assert_relative_eq!(unruh_norm(-1.0).unwrap(), 0.282358559193611, max_relative = 1e-12);
        let ratio = unruh_norm(-1.0).unwrap() / unruh_norm(1.0).unwrap();
        assert_relative_eq!(ratio, PI.exp(), max_relative = 1e-13);
        assert!(matches!(unruh_norm(0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn unruh_norm_large_arguments_stay_finite() {
        for w in [-500.0, -50.0, 50.0, 500.0] {
            let f = unruh_norm(w).unwrap();
            assert!(f.is_finite() && f >= 0.0, "{w} -> {f}");
        }
    }

    #[test]
    fn geg_rr_at_two() {
        // (i g²/4) · 2/(sinh 2π (1 − 2)) = −i g²/(2 sinh 2π); 1/(2 sinh 2π) from mpmath
        let g = 1.3;
        let a = channel_amplitude(&params(1.0, 1.0, g), Pathway::Geg, Channel::RR, 2.0).unwrap();
        assert!(a.re.abs() < 1e-18);
        assert_relative_eq!(a.im, -g * g * 0.001867449244142836, max_relative = 1e-13);
    }

    #[test]
    fn poles_are_reported() {
        let p = params(1.5, 2.0, 1.0);
        match channel_amplitude(&p, Pathway::Geg, Channel::RR, 1.5) {
            Err(Error::Pole { location }) => assert_eq!(location, 1.5),
            other => panic!("{other:?}"),
        }
        match channel_amplitude(&p, Pathway::Geg, Channel::LL, -1.5) {
            Err(Error::Pole { location }) => assert_eq!(location, -1.5),
            other => panic!("{other:?}"),
        }
        for w in [-1.5, 1.5] {
            assert!(channel_amplitude(&p, Pathway::Ege, Channel::RL, w).is_err());
        }
        // RR of GEG has no pole at −Ω₀
        assert!(channel_amplitude(&p, Pathway::Geg, Channel::RR, -1.5).is_ok());
        assert_eq!(pole_locations(&p, Pathway::Ege, Channel::RL), vec![-1.5, 1.5]);
    }

    #[test]
    fn origin_is_the_continuous_limit() {
        let p = params(0.8, 1.7, 1.0);
        for pw in Pathway::ALL {
            for ch in Channel::ALL {
                let at0 = channel_amplitude(&p, pw, ch, 0.0).unwrap();
                let near = channel_amplitude(&p, pw, ch, 1e-7).unwrap();
                assert!(at0.re.is_finite() && at0.im.is_finite());
                assert!((at0 - near).norm() < 1e-6 * at0.norm(), "{pw}-{ch}");
            }
        }
        // GEG-RR(0) = i g²/(4 π Ω₀)
        let a = channel_amplitude(&p, Pathway::Geg, Channel::RR, 0.0).unwrap();
        assert_relative_eq!(a.im, 1.0 / (4.0 * PI * 0.8), max_relative = 1e-14);
    }

    #[test]
    fn omega_flip_examples() {
        for (ratio, ch, w) in [(0.5, Channel::RR, 1.7), (2.0, Channel::LL, -0.3), (1.0, Channel::RL, 0.4)] {
            let (a, b) = omega_flip_check(&params(ratio, 1.9, 0.7), ch, w).unwrap();
            assert!((a - b).norm() <= 1e-13 * a.norm());
        }
    }

    #[test]
    fn ege_rr_is_geg_rr_with_flipped_gap() {
        let p = params(1.0, 1.0, 1.0);
        let ege = channel_amplitude(&p, Pathway::Ege, Channel::RR, 2.0).unwrap();
        // i · 2/(sinh 2π (−1 − 2))
        let expect = C64::new(0.0, 0.25 * 2.0 / ((2.0 * PI).sinh() * -3.0));
        assert_relative_eq!(ege.im, expect.im, max_relative = 1e-13);
    }

    #[test]
    fn superposed_limits() {
        let p = params(1.0, 1.0, 1.0);
        let g = superposed_amplitude(&p, &QubitState::ground(), Channel::RR, 2.0).unwrap();
        assert_eq!(g.ground, channel_amplitude(&p, Pathway::Geg, Channel::RR, 2.0).unwrap());
        assert_eq!(g.excited, C64::new(0.0, 0.0));
        let e = superposed_amplitude(&p, &QubitState::excited(), Channel::RR, 2.0).unwrap();
        assert_eq!(e.ground, C64::new(0.0, 0.0));
        let branch = ege_branch(&p, Channel::RR, 2.0, Regularization::Exact).unwrap();
        assert_eq!(e.excited, -branch);
        assert_eq!(e.excited, channel_amplitude(&p, Pathway::Ege, Channel::RR, 2.0).unwrap());

        let s = 0.5f64.sqrt();
        let plus = QubitState::new(C64::new(s, 0.0), C64::new(s, 0.0)).unwrap();
        let c = superposed_amplitude(&p, &plus, Channel::RR, 2.0).unwrap();
        let sh = (2.0 * PI).sinh();
        // α (i/4)(2/(sinh·(−1))) and −β (i/4)(2/(sinh·3))
        assert_relative_eq!(c.ground.im, -s * 0.25 * 2.0 / sh, max_relative = 1e-13);
        assert_relative_eq!(c.excited.im, -s * 0.25 * 2.0 / (sh * 3.0), max_relative = 1e-13);
    }

    #[test]
    fn rl_phase_uses_log_acceleration() {
        let p = params(1.0, 3.0, 1.0);
        let a = channel_amplitude(&p, Pathway::Geg, Channel::RL, 0.4).unwrap();
        let a1 = channel_amplitude(&params(1.0, 1.0, 1.0), Pathway::Geg, Channel::RL, 0.4).unwrap();
        let rel = a / a1;
        assert_relative_eq!(rel.arg(), 0.8 * 3f64.ln(), max_relative = 1e-13);
        assert_relative_eq!(rel.norm(), 1.0, max_relative = 1e-13);
    }

    #[test]
    fn qubit_validation() {
        assert!(QubitState::new(C64::new(1.0, 0.0), C64::new(0.1, 0.0)).is_err());
        assert!(QubitState::from_population(1.2, 0.0).is_err());
        let q = QubitState::from_population(0.3, 1.1).unwrap();
        assert!((q.alpha.norm_sqr() + q.beta.norm_sqr() - 1.0).abs() < 1e-15);
        assert_eq!(q.apply_z().apply_z(), q);
    }

    #[test]
    fn params_validation() {
        assert!(DetectorParams::new(0.0, 1.0, 1.0).is_err());
        assert!(DetectorParams::new(1.0, -1.0, 1.0).is_err());
        assert!(DetectorParams::new(1.0, 1.0, -0.1).is_err());
        assert!(DetectorParams::new(1.0, 1.0, 0.0).is_ok());
        assert!(DetectorParams::new(1e300, 1e-300, 1.0).is_err());
    }

    #[test]
    fn labels_parse() {
        assert_eq!("rl+lr".parse::<Channel>().unwrap(), Channel::RL);
        assert_eq!("geg".parse::<Pathway>().unwrap(), Pathway::Geg);
        assert!("XX".parse::<Channel>().is_err());
    }

    fn channel() -> impl Strategy<Value = Channel> {
        prop_oneof![Just(Channel::RR), Just(Channel::LL), Just(Channel::RL)]
    }

    proptest! {
        #[test]
        fn omega_flip_symmetry(ratio in 0.05f64..5.0, accel in 0.1f64..10.0, w in -8.0f64..8.0, ch in channel()) {
            prop_assume!((w.abs() - ratio).abs() > 1e-3);
            let (a, b) = omega_flip_check(&params(ratio, accel, 1.0), ch, w).unwrap();
            prop_assert!((a - b).norm() <= 1e-13 * a.norm().max(1e-300));
        }

        #[test]
        fn rr_ll_mirror(ratio in 0.05f64..5.0, w in -8.0f64..8.0) {
            prop_assume!((w.abs() - ratio).abs() > 1e-3);
            let p = params(ratio, 1.3, 1.0);
            for pw in Pathway::ALL {
                let rr = channel_amplitude(&p, pw, Channel::RR, w).unwrap().norm();
                let ll = channel_amplitude(&p, pw, Channel::LL, -w).unwrap().norm();
                prop_assert!((rr - ll).abs() <= 1e-13 * rr.max(1e-300));
            }
        }

        #[test]
        fn rl_conjugate_phase_structure(ratio in 0.05f64..5.0, accel in 0.1f64..10.0, w in 0.01f64..8.0) {
            prop_assume!((w - ratio).abs() > 1e-3);
            let p = params(ratio, accel, 1.0);
            let plus = channel_amplitude(&p, Pathway::Geg, Channel::RL, w).unwrap();
            let minus = channel_amplitude(&p, Pathway::Geg, Channel::RL, -w).unwrap();
            // real factors are even in Ω, so the product carries (i)² times a positive number
            let prod = plus * minus / (plus.norm() * minus.norm());
            prop_assert!((prod - C64::new(-1.0, 0.0)).norm() < 1e-12);
        }

        #[test]
        fn quadratic_in_coupling(ratio in 0.05f64..5.0, w in -8.0f64..8.0, g in 0.01f64..3.0, ch in channel()) {
            prop_assume!((w.abs() - ratio).abs() > 1e-3);
            for pw in Pathway::ALL {
                let a = channel_amplitude(&params(ratio, 1.1, g), pw, ch, w).unwrap();
                let b = channel_amplitude(&params(ratio, 1.1, 2.0 * g), pw, ch, w).unwrap();
                prop_assert!((b - a * 4.0).norm() <= 1e-13 * b.norm().max(1e-300));
            }
        }
    }
}
