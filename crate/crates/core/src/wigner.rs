//! Single-mode reduced states of the resonant photon pair and their Wigner
//! functions.
//!
//! Conventions: ħ = 1, x = (a + a†)/√2, p = (a − a†)/(i√2), and W is
//! normalised to ∫W dx dp = 1.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::resonance::{Mode, ResonantState};

/// Largest Fock cutoff accepted by the Wigner kernel.
pub const MAX_FOCK_DIM: usize = 64;
/// Default phase-space extent and resolution.
pub const DEFAULT_EXTENT: f64 = 5.0;
pub const DEFAULT_AXIS_POINTS: usize = 201;

const MODES: usize = 4;
const STATES: usize = 1 << MODES;

/// Density matrix in the number basis {|0⟩, …, |N−1⟩}.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    entries: DMatrix<C64>,
}

impl FockDensityMatrix {
    /// Validates Hermiticity (1e−12), unit trace (1e−12) and positivity
    /// (smallest eigenvalue ≥ −1e−10).
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        let n = entries.nrows();
        if n < 2 || entries.ncols() != n {
            return Err(Error::Config(format!(
                "density matrix must be square with dim >= 2, got {}x{}",
                n,
                entries.ncols()
            )));
        }
        if entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Domain("density matrix has non-finite entries".into()));
        }
        let herm = (&entries - entries.adjoint()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if herm > 1e-12 {
            return Err(Error::Domain(format!("density matrix is not Hermitian (deviation {herm:e})")));
        }
        let tr = entries.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::Domain(format!("density matrix trace is {tr}, expected 1")));
        }
        let sym = (&entries + entries.adjoint()) * C64::new(0.5, 0.0);
        let min_eig = sym.symmetric_eigenvalues().iter().fold(f64::INFINITY, |m, v| m.min(*v));
        if min_eig < -1e-10 {
            return Err(Error::Domain(format!("density matrix is not positive (eigenvalue {min_eig:e})")));
        }
        Ok(Self { entries })
    }

    pub fn from_diagonal(populations: &[f64]) -> Result<Self> {
        let n = populations.len();
        let d = DMatrix::from_fn(n, n, |i, j| if i == j { C64::new(populations[i], 0.0) } else { C64::new(0.0, 0.0) });
        Self::new(d)
    }

    /// |n⟩⟨n| in a space of dimension `dim`.
    pub fn fock(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::Config(format!("Fock level {n} outside dimension {dim}")));
        }
        let mut p = vec![0.0; dim];
        p[n] = 1.0;
        Self::from_diagonal(&p)
    }

    /// |ψ⟩⟨ψ| for a normalised state vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(psi);
        Self::new(&v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn get(&self, m: usize, n: usize) -> C64 {
        self.entries[(m, n)]
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.entries[(i, j)] == C64::new(0.0, 0.0)))
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).collect()
    }
}

/// Post-selection applied before tracing out the partner modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Conditioning {
    None,
    /// One photon in the given partner mode and vacuum in the other two
    /// non-target modes.
    PartnerDetected(Mode),
}

impl Conditioning {
    /// Partner-detected conditioning with the pair partner of `target`
    /// (A₊ ↔ A₋, B₊ ↔ B₋).
    pub fn default_for(target: Mode) -> Self {
        Conditioning::PartnerDetected(default_partner(target))
    }
}

impl fmt::Display for Conditioning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conditioning::None => f.write_str("none"),
            Conditioning::PartnerDetected(m) => write!(f, "partner_detected:{m}"),
        }
    }
}

/// Parses `none`, `partner_detected` (partner resolved later from the
/// target) or `partner_detected:<mode>`. The bare form yields `None` as the
/// inner mode.
pub fn parse_conditioning(s: &str) -> Result<(bool, Option<Mode>)> {
    let s = s.trim();
    match s {
        "none" | "unconditioned" => Ok((false, None)),
        "partner_detected" | "partner" => Ok((true, None)),
        _ => match s.strip_prefix("partner_detected:").or_else(|| s.strip_prefix("partner:")) {
            Some(m) => Ok((true, Some(Mode::from_str(m)?))),
            None => Err(Error::UnknownLabel(s.to_string())),
        },
    }
}

pub fn default_partner(target: Mode) -> Mode {
    match target {
        Mode::APlus => Mode::AMinus,
        Mode::AMinus => Mode::APlus,
        Mode::BPlus => Mode::BMinus,
        Mode::BMinus => Mode::BPlus,
    }
}

/// Normalised four-term photon state over the 16 occupation patterns of
/// (A₊, A₋, B₊, B₋); bit k of the index is the occupation of mode k.
pub fn photon_state(res: &ResonantState) -> Result<[C64; STATES]> {
    let mut psi = [C64::new(0.0, 0.0); STATES];
    for (pair, c) in &res.terms {
        let (m1, m2) = pair.modes();
        psi[(1 << m1.index()) | (1 << m2.index())] += *c;
    }
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::ZeroProbability("resonant photon state has zero norm".into()));
    }
    psi.iter_mut().for_each(|z| *z /= norm);
    Ok(psi)
}

/// Reduced 2×2 density matrix of `target` in {|0⟩, |1⟩}.
pub fn reduced_state(res: &ResonantState, target: Mode, conditioning: Conditioning) -> Result<FockDensityMatrix> {
    let mut psi = photon_state(res)?;
    let t = target.index();
    if let Conditioning::PartnerDetected(partner) = conditioning {
        if partner == target {
            return Err(Error::Config(format!("partner mode {partner} coincides with the target")));
        }
        let want = 1usize << partner.index();
        let others = (STATES - 1) & !(1 << t);
        for (idx, z) in psi.iter_mut().enumerate() {
            if idx & others != want {
                *z = C64::new(0.0, 0.0);
            }
        }
        let prob: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if prob <= 0.0 {
            return Err(Error::ZeroProbability(format!("no term has a photon in {partner} alongside {target}")));
        }
        let s = prob.sqrt();
        psi.iter_mut().for_each(|z| *z /= s);
    }
    let mut rho = DMatrix::from_element(2, 2, C64::new(0.0, 0.0));
    for i in 0..STATES {
        for j in 0..STATES {
            // rest of the modes must agree
            if (i & !(1 << t)) != (j & !(1 << t)) {
                continue;
            }
            rho[((i >> t) & 1, (j >> t) & 1)] += psi[i] * psi[j].conj();
        }
    }
    FockDensityMatrix::new(rho)
}

/// W(x_i, p_j) stored as `values[i][j]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WignerGrid {
    pub x_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl WignerGrid {
    /// Σ W Δx Δp with trapezoid cell widths.
    pub fn integral(&self) -> f64 {
        self.weighted_sum(|w| w)
    }

    fn weighted_sum(&self, g: impl Fn(f64) -> f64) -> f64 {
        let wx = cell_widths(&self.x_axis);
        let wp = cell_widths(&self.p_axis);
        let mut acc = 0.0;
        for (row, dx) in self.values.iter().zip(&wx) {
            for (w, dp) in row.iter().zip(&wp) {
                acc += g(*w) * dx * dp;
            }
        }
        acc
    }

    pub fn value_at(&self, x: f64, p: f64) -> Option<f64> {
        let i = self.x_axis.iter().position(|v| *v == x)?;
        let j = self.p_axis.iter().position(|v| *v == p)?;
        Some(self.values[i][j])
    }
}

fn cell_widths(axis: &[f64]) -> Vec<f64> {
    let n = axis.len();
    if n < 2 {
        return vec![1.0; n];
    }
    (0..n)
        .map(|i| {
            let lo = if i == 0 { axis[0] } else { 0.5 * (axis[i - 1] + axis[i]) };
            let hi = if i + 1 == n { axis[n - 1] } else { 0.5 * (axis[i] + axis[i + 1]) };
            hi - lo
        })
        .collect()
}

/// [−5, 5] with 201 points.
pub fn default_axis() -> Vec<f64> {
    let h = 2.0 * DEFAULT_EXTENT / (DEFAULT_AXIS_POINTS - 1) as f64;
    (0..DEFAULT_AXIS_POINTS).map(|i| -DEFAULT_EXTENT + h * i as f64).collect()
}

/// Generalised Laguerre values L_n^{(k)}(y) for n = 0..len.
fn laguerre_all(len: usize, k: f64, y: f64, out: &mut Vec<f64>) {
    out.clear();
    if len == 0 {
        return;
    }
    out.push(1.0);
    if len == 1 {
        return;
    }
    out.push(1.0 + k - y);
    for n in 1..len - 1 {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 + k - y) * out[n] - (nf + k) * out[n - 1]) / (nf + 1.0);
        out.push(next);
    }
}

/// Wigner function of ρ at a single phase-space point.
pub fn wigner_point(rho: &FockDensityMatrix, x: f64, p: f64) -> f64 {
    let dim = rho.dim();
    let r2 = x * x + p * p;
    let y = 2.0 * r2;
    let gauss = (-r2).exp() / std::f64::consts::PI;
    let z = C64::new(x, -p) * std::f64::consts::SQRT_2;
    let mut lag = Vec::with_capacity(dim);
    let mut acc = 0.0;
    // factorial ratios carried in log space
    let ln_fact: Vec<f64> = (0..dim)
        .scan(0.0, |s, n| {
            if n > 0 {
                *s += (n as f64).ln();
            }
            Some(*s)
        })
        .collect();
    let mut zpow = C64::new(1.0, 0.0);
    for k in 0..dim {
        laguerre_all(dim - k, k as f64, y, &mut lag);
        for n in 0..dim - k {
            let m = n + k;
            let rho_mn = rho.get(m, n);
            if rho_mn == C64::new(0.0, 0.0) {
                continue;
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let ratio = (0.5 * (ln_fact[n] - ln_fact[m])).exp();
            let kernel = zpow * (sign * ratio * lag[n]);
            acc += if k == 0 { (rho_mn * kernel).re } else { 2.0 * (rho_mn * kernel).re };
        }
        zpow *= z;
    }
    acc * gauss
}

pub fn wigner_of_fock_mixture(rho: &FockDensityMatrix, x_axis: &[f64], p_axis: &[f64]) -> Result<WignerGrid> {
    if rho.dim() > MAX_FOCK_DIM {
        return Err(Error::Config(format!(
            "Fock dimension {} exceeds the supported maximum {MAX_FOCK_DIM}",
            rho.dim()
        )));
    }
    if x_axis.is_empty() || p_axis.is_empty() {
        return Err(Error::Config("phase-space axes must be non-empty".into()));
    }
    if x_axis.iter().chain(p_axis).any(|v| !v.is_finite()) {
        return Err(Error::Config("phase-space axes must be finite".into()));
    }
    let values = x_axis.par_iter().map(|&x| p_axis.iter().map(|&p| wigner_point(rho, x, p)).collect()).collect();
    Ok(WignerGrid { x_axis: x_axis.to_vec(), p_axis: p_axis.to_vec(), values })
}

/// Σ max(0, −W) Δx Δp.
pub fn negativity_volume(grid: &WignerGrid) -> f64 {
    grid.weighted_sum(|w| (-w).max(0.0))
}
