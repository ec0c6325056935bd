//! Built-in invariant suite behind the `selftest` subcommand.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::amplitudes::{channel_amplitude, omega_flip_check, Channel, DetectorParams, Pathway, QubitState};
use crate::interference::{
    default_beta2_axis, default_phi_axis, interference_density, interference_map, sweet_spot_scan,
};
use crate::ramsey::{
    analysis_probability, default_phase_axis, fringe_visibility, gate_channel, prepared_state, ramsey_fringe,
    RamseyConfig,
};
use crate::resonance::{pv_integrate, resonant_from_residues, resonant_state, sokhotski_plemelj_check, Mode, PvConfig};
use crate::spectra::{
    default_grid, expected_dominance, full_spectrum, integrated_channel_probability, DEFAULT_EPSILON,
};
use crate::wigner::{
    default_axis, negativity_volume, reduced_state, wigner_of_fock_mixture, wigner_point, Conditioning,
    FockDensityMatrix,
};
use crate::Result;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, outcome: Result<(bool, String)>) -> Check {
    match outcome {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: format!("error: {e}") },
    }
}

fn params(ratio: f64) -> DetectorParams {
    DetectorParams::new(ratio, 1.0, 1.0).expect("valid parameters")
}

/// Deterministic sample points in `[lo, hi)` from a Weyl sequence.
fn weyl(n: usize, seed: f64, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    let golden = 0.618_033_988_749_894_9;
    (0..n).map(move |i| lo + (hi - lo) * (seed + golden * i as f64).fract())
}

fn omega_flip() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for (r, w) in weyl(200, 0.1, 0.05, 5.0).zip(weyl(200, 0.37, -8.0, 8.0)) {
        if (w.abs() - r).abs() < 1e-3 {
            continue;
        }
        for ch in Channel::ALL {
            let (a, b) = omega_flip_check(&params(r), ch, w)?;
            worst = worst.max((a - b).norm() / a.norm().max(f64::MIN_POSITIVE));
        }
    }
    Ok((worst < 1e-12, format!("max relative difference {worst:e}")))
}

fn rr_ll_mirror() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for (r, w) in weyl(100, 0.2, 0.1, 4.0).zip(weyl(100, 0.8, -6.0, 6.0)) {
        if (w.abs() - r).abs() < 1e-3 {
            continue;
        }
        let p = params(r);
        for pw in Pathway::ALL {
            let a = channel_amplitude(&p, pw, Channel::RR, w)?;
            let b = channel_amplitude(&p, pw, Channel::LL, -w)?;
            worst = worst.max((a - b).norm() / a.norm());
        }
    }
    Ok((worst < 1e-12, format!("max relative difference {worst:e}")))
}

fn resonant_residues() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for r in [0.3, 1.0, 2.2] {
        let p = DetectorParams::new(r * 1.7, 1.7, 0.8)?;
        let q = QubitState::from_population(0.4, 1.3)?;
        let s = resonant_state(&p, &q);
        for (pair, g, e) in resonant_from_residues(&p, &q)? {
            let (cg, ce) = s.components(pair);
            worst = worst.max((g - cg).norm() / cg.norm()).max((e - ce).norm() / ce.norm());
        }
    }
    let gamma = resonant_state(&params(1e-6), &QubitState::ground()).gamma;
    Ok((worst < 1e-12 && (gamma - 1.0).abs() < 1e-8, format!("residue mismatch {worst:e}, gamma(1e-6) = {gamma}")))
}

fn z_gate_factor() -> Result<(bool, String)> {
    let mut ok = true;
    for (b2, phi) in weyl(50, 0.3, 0.0, 1.0).zip(weyl(50, 0.6, 0.0, std::f64::consts::TAU)) {
        let q = QubitState::from_population(b2, phi)?;
        let f = resonant_state(&params(1.0), &q).qubit_factor;
        ok &= f == (q.alpha, -q.beta);
        let twice = q.apply_z().apply_z();
        ok &= twice == q;
    }
    Ok((ok, "qubit factor (alpha, -beta); Z twice is identity".into()))
}

fn pv_oracle() -> Result<(bool, String)> {
    const ORACLE: f64 = -1.907442188241755;
    let mut cfg = PvConfig { excision_half_width: 1e-4, tail_cutoff: 12.0, quadrature_points: 64, epsilon: 1e-3 };
    let f = |x: f64| C64::new((-x * x).exp() / (x - 1.0), 0.0);
    let a = pv_integrate(f, &[1.0], &cfg)?.value.re;
    cfg.excision_half_width *= 0.5;
    let b = pv_integrate(f, &[1.0], &cfg)?.value.re;
    let p = params(1.0);
    let mut worst: f64 = 0.0;
    for ch in Channel::ALL {
        worst =
            worst.max(sokhotski_plemelj_check(&p, Pathway::Geg, ch, &PvConfig::for_params(&p))?.relative_discrepancy);
    }
    let ok = (a - ORACLE).abs() < 1e-8 && (a - b).abs() < 1e-6 && worst < 1e-6;
    Ok((ok, format!("Dawson error {:e}, delta halving {:e}, plemelj {worst:e}", (a - ORACLE).abs(), (a - b).abs())))
}

fn dominance() -> Result<(bool, String)> {
    let mut ok = true;
    let mut detail = String::new();
    for r in [0.5, 1.0, 2.0] {
        let p = params(r);
        let s = full_spectrum(&p, &default_grid(&p), DEFAULT_EPSILON)?;
        for pw in Pathway::ALL {
            for ch in [Channel::RR, Channel::LL] {
                let (w, _) = s.argmax(pw, ch).expect("non-empty grid");
                let expected = expected_dominance(pw, ch).expect("RR and LL have a dominant sign");
                if w.signum() != expected {
                    ok = false;
                    detail += &format!("{pw}-{ch} at {r}: argmax {w}; ");
                }
            }
        }
        let (_, a) = s.argmax_where(Pathway::Geg, Channel::RR, |w| w > 0.0).expect("positive half");
        let (_, b) = s.argmax_where(Pathway::Ege, Channel::LL, |w| w > 0.0).expect("positive half");
        if (a - b).abs() > 1e-10 * a {
            ok = false;
            detail += &format!("peak heights differ at {r}; ");
        }
    }
    Ok((ok, if detail.is_empty() { "argmax signs and peak heights as tabulated".into() } else { detail }))
}

fn integrated_symmetry() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for r in [0.5, 1.0, 2.0] {
        let p = params(r);
        let c = PvConfig::for_params(&p);
        for pw in Pathway::ALL {
            let rr = integrated_channel_probability(&p, pw, Channel::RR, DEFAULT_EPSILON, &c)?;
            let ll = integrated_channel_probability(&p, pw, Channel::LL, DEFAULT_EPSILON, &c)?;
            worst = worst.max((rr - ll).abs() / rr);
        }
    }
    Ok((worst < 1e-8, format!("max relative difference {worst:e}")))
}

fn interference_structure() -> Result<(bool, String)> {
    let p = params(1.0);
    let c = PvConfig::for_params(&p);
    let (b2, phi) = (default_beta2_axis(), default_phi_axis());
    let rr = interference_map(&p, Channel::RR, &b2, &phi, DEFAULT_EPSILON, &c)?;
    let ll = interference_map(&p, Channel::LL, &b2, &phi, DEFAULT_EPSILON, &c)?;
    let scale = rr.max_abs_p_int();
    let ll_diff =
        rr.p_int.iter().flatten().zip(ll.p_int.iter().flatten()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let edges = rr.p_int[0].iter().chain(rr.p_int[b2.len() - 1].iter()).all(|v| *v == 0.0);
    let half = (phi.len() - 1) / 2;
    let anti = rr.p_int.iter().all(|row| (0..=half).all(|j| (row[j] + row[j + half]).abs() <= 1e-13 * scale));
    let (i, j, _) = rr.argmax();
    let step = phi[1] - phi[0];
    let peak = (rr.beta2_axis[i] - 0.5).abs() <= b2[1] - b2[0] && (phi[j] - std::f64::consts::PI).abs() <= step;
    let rl = sweet_spot_scan(&p, &[0.5, 3.0], Channel::RL, DEFAULT_EPSILON, &c, &phi)?;
    let fades = rl[1].max_abs_p_int < rl[0].max_abs_p_int;
    let ok = ll_diff <= 1e-8 * scale && edges && anti && peak && fades;
    Ok((
        ok,
        format!(
            "LL-RR {:e}, edges {edges}, antisymmetry {anti}, RR peak ({}, {}), RL fades {fades}",
            ll_diff / scale,
            rr.beta2_axis[i],
            phi[j]
        ),
    ))
}

fn decomposition() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for ((b2, phi), w) in weyl(300, 0.1, 0.0, 1.0).zip(weyl(300, 0.5, 0.0, 6.3)).zip(weyl(300, 0.9, -5.0, 5.0)) {
        let q = QubitState::from_population(b2, phi)?;
        for ch in Channel::ALL {
            let d = interference_density(&params(1.0), &q, ch, w, DEFAULT_EPSILON)?;
            let scale = d.p_total.max(d.p_background);
            worst = worst.max((d.p_total - d.p_background - d.p_int).abs() / scale);
        }
    }
    Ok((worst < 1e-12, format!("max relative residual {worst:e}")))
}

fn wigner_witness() -> Result<(bool, String)> {
    let res = resonant_state(&params(1.0), &QubitState::from_population(0.5, 0.0)?);
    let cond = reduced_state(&res, Mode::APlus, Conditioning::default_for(Mode::APlus))?;
    let origin = wigner_point(&cond, 0.0, 0.0);
    let ax = default_axis();
    let g = wigner_of_fock_mixture(&cond, &ax, &ax)?;
    let norm = g.integral();
    let neg = negativity_volume(&g);
    let exact = 2.0 * (-0.5f64).exp() - 1.0;
    let free = reduced_state(&res, Mode::APlus, Conditioning::None)?;
    let mixed = (free.get(0, 0).re - 0.5).abs() < 1e-12 && (free.get(1, 1).re - 0.5).abs() < 1e-12;
    let vacuum = wigner_point(&FockDensityMatrix::fock(0, 2)?, 0.0, 0.0);
    let ok = (origin + std::f64::consts::FRAC_1_PI).abs() < 1e-10
        && (vacuum - std::f64::consts::FRAC_1_PI).abs() < 1e-12
        && (norm - 1.0).abs() < 1e-4
        && (neg - exact).abs() < 1e-4
        && neg > 0.1
        && mixed;
    Ok((ok, format!("W(0,0) = {origin}, integral {norm}, negativity {neg}, unconditioned diag(1/2,1/2) {mixed}")))
}

fn ramsey() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let f = ramsey_fringe(&RamseyConfig::new(true, p, default_phase_axis())?)?;
        worst = worst.max((fringe_visibility(&f) - (1.0 - 2.0 * p)).abs());
        if f.iter().any(|x| !(0.0..=1.0).contains(&x.p_e)) {
            return Ok((false, format!("P_e out of range at p = {p}")));
        }
    }
    let twice = gate_channel(&gate_channel(&prepared_state(), 1.0), 1.0);
    let restored = default_phase_axis()
        .iter()
        .all(|&phi| analysis_probability(&twice, phi) == analysis_probability(&prepared_state(), phi));
    Ok((worst < 1e-12 && restored, format!("contrast law error {worst:e}, Z twice restores fringe {restored}")))
}

/// Runs every invariant in a fixed order.
pub fn run_selftest() -> Vec<Check> {
    vec![
        check("omega-flip symmetry", omega_flip()),
        check("RR/LL mirror", rr_ll_mirror()),
        check("resonant state from residues", resonant_residues()),
        check("Z-gate qubit factor", z_gate_factor()),
        check("principal-value oracle", pv_oracle()),
        check("spectral dominance", dominance()),
        check("integrated RR = LL", integrated_symmetry()),
        check("interference structure", interference_structure()),
        check("interference decomposition", decomposition()),
        check("Wigner witness", wigner_witness()),
        check("Ramsey inversion", ramsey()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for c in run_selftest() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
