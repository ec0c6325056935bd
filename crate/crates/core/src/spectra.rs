//! Broadened per-channel emission spectra |A_ε(Ω)|².

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::amplitudes::{regularized_amplitude, Channel, DetectorParams, Pathway};
use crate::error::{Error, Result};
use crate::resonance::{regularized_integrate, PvConfig};

/// Default broadening for figure reproduction.
pub const DEFAULT_EPSILON: f64 = 0.05;
/// Default number of grid points.
pub const DEFAULT_GRID_POINTS: usize = 4001;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSeries {
    pub pathway: Pathway,
    pub channel: Channel,
    pub values: Vec<f64>,
}

impl SpectrumSeries {
    pub fn column_name(&self) -> String {
        format!("{}_{}", self.pathway, self.channel)
    }
}

/// Sampled spectra on a common frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumGrid {
    pub omegas: Vec<f64>,
    pub series: Vec<SpectrumSeries>,
    pub epsilon: f64,
    pub params: DetectorParams,
}

impl SpectrumGrid {
    pub fn get(&self, pathway: Pathway, channel: Channel) -> Option<&[f64]> {
        self.series.iter().find(|s| s.pathway == pathway && s.channel == channel).map(|s| s.values.as_slice())
    }

    /// (Ω, value) of the largest sample, optionally restricted to `filter(Ω)`.
    pub fn argmax_where(&self, pathway: Pathway, channel: Channel, filter: impl Fn(f64) -> bool) -> Option<(f64, f64)> {
        let values = self.get(pathway, channel)?;
        self.omegas.iter().zip(values).filter(|(w, _)| filter(**w)).fold(None, |best: Option<(f64, f64)>, (&w, &v)| {
            match best {
                Some((_, bv)) if bv >= v => best,
                _ => Some((w, v)),
            }
        })
    }

    pub fn argmax(&self, pathway: Pathway, channel: Channel) -> Option<(f64, f64)> {
        self.argmax_where(pathway, channel, |_| true)
    }
}

/// `n` evenly spaced points on `[min, max]`, endpoints included.
pub fn uniform_grid(min: f64, max: f64, n: usize) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite()) || n < 2 || max <= min {
        return Err(Error::Config(format!("bad grid [{min}, {max}] with {n} points")));
    }
    let h = (max - min) / (n - 1) as f64;
    Ok((0..n).map(|i| if i + 1 == n { max } else { min + h * i as f64 }).collect())
}

/// [−4Ω₀−2, 4Ω₀+2] with 4001 points.
pub fn default_grid(params: &DetectorParams) -> Vec<f64> {
    let half = 4.0 * params.omega_ratio() + 2.0;
    uniform_grid(-half, half, DEFAULT_GRID_POINTS).expect("default grid is valid")
}

fn check_inputs(grid: &[f64], epsilon: f64) -> Result<()> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::Config(format!("epsilon must be > 0, got {epsilon}")));
    }
    if grid.iter().any(|w| !w.is_finite()) {
        return Err(Error::Config("spectrum grid must be finite".into()));
    }
    Ok(())
}

fn intensities(
    params: &DetectorParams,
    pathway: Pathway,
    channel: Channel,
    grid: &[f64],
    epsilon: f64,
) -> Result<Vec<f64>> {
    grid.par_iter()
        .map(|&w| regularized_amplitude(params, pathway, channel, w, epsilon).map(|a| a.norm_sqr()))
        .collect()
}

/// |A_ε(Ω)|² for one pathway and channel; finite on the resonances.
pub fn emission_spectrum(
    params: &DetectorParams,
    pathway: Pathway,
    channel: Channel,
    grid: &[f64],
    epsilon: f64,
) -> Result<SpectrumGrid> {
    check_inputs(grid, epsilon)?;
    Ok(SpectrumGrid {
        omegas: grid.to_vec(),
        series: vec![SpectrumSeries {
            pathway,
            channel,
            values: intensities(params, pathway, channel, grid, epsilon)?,
        }],
        epsilon,
        params: *params,
    })
}

/// All six (pathway, channel) spectra in the column order
/// GEG_RR, GEG_LL, GEG_RL, EGE_RR, EGE_LL, EGE_RL.
pub fn full_spectrum(params: &DetectorParams, grid: &[f64], epsilon: f64) -> Result<SpectrumGrid> {
    check_inputs(grid, epsilon)?;
    let mut series = Vec::with_capacity(6);
    for pathway in Pathway::ALL {
        for channel in Channel::ALL {
            series.push(SpectrumSeries {
                pathway,
                channel,
                values: intensities(params, pathway, channel, grid, epsilon)?,
            });
        }
    }
    Ok(SpectrumGrid { omegas: grid.to_vec(), series, epsilon, params: *params })
}

/// ∫ |A_ε(Ω)|² dΩ over [−Ω_max, Ω_max].
pub fn integrated_channel_probability(
    params: &DetectorParams,
    pathway: Pathway,
    channel: Channel,
    epsilon: f64,
    config: &PvConfig,
) -> Result<f64> {
    check_inputs(&[], epsilon)?;
    config.validate_for(params)?;
    let r = params.omega_ratio();
    let f = |w: f64| {
        C64::new(
            regularized_amplitude(params, pathway, channel, w, epsilon).map(|a| a.norm_sqr()).unwrap_or(f64::NAN),
            0.0,
        )
    };
    Ok(regularized_integrate(f, &[-r, 0.0, r], epsilon, config)?.value.re)
}

/// Frequency sign at which a channel dominates, as tabulated for each
/// pathway: RR at +Ω₀ and LL at −Ω₀ for GEG, the reverse for EGE.
pub fn expected_dominance(pathway: Pathway, channel: Channel) -> Option<f64> {
    match (pathway, channel) {
        (Pathway::Geg, Channel::RR) | (Pathway::Ege, Channel::LL) => Some(1.0),
        (Pathway::Geg, Channel::LL) | (Pathway::Ege, Channel::RR) => Some(-1.0),
        (_, Channel::RL) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(ratio: f64) -> DetectorParams {
        DetectorParams::new(ratio, 1.0, 1.0).unwrap()
    }

    #[test]
    fn peaks_sit_on_the_resonance() {
        let p = params(1.0);
        let grid = uniform_grid(-6.0, 6.0, 12001).unwrap();
        let step = grid[1] - grid[0];
        let s = full_spectrum(&p, &grid, 0.01).unwrap();
        let (w, _) = s.argmax(Pathway::Geg, Channel::RR).unwrap();
        assert!((w - 1.0).abs() <= step, "{w}");
        let (w, _) = s.argmax(Pathway::Ege, Channel::RR).unwrap();
        assert!((w + 1.0).abs() <= step, "{w}");
    }

    #[test]
    fn peak_heights_match_across_pathways() {
        let p = params(1.0);
        let s = full_spectrum(&p, &default_grid(&p), DEFAULT_EPSILON).unwrap();
        let (_, a) = s.argmax_where(Pathway::Geg, Channel::RR, |w| w > 0.0).unwrap();
        let (_, b) = s.argmax_where(Pathway::Ege, Channel::LL, |w| w > 0.0).unwrap();
        assert!((a - b).abs() <= 1e-10 * a);
    }

    #[test]
    fn finite_and_nonnegative_on_poles() {
        let p = params(1.0);
        let grid = [-1.0, 0.0, 1.0];
        let s = full_spectrum(&p, &grid, 0.05).unwrap();
        for series in &s.series {
            assert!(series.values.iter().all(|v| v.is_finite() && *v >= 0.0));
        }
    }

    #[test]
    fn rejects_bad_epsilon() {
        let p = params(1.0);
        assert!(emission_spectrum(&p, Pathway::Geg, Channel::RR, &[0.0], 0.0).is_err());
        assert!(emission_spectrum(&p, Pathway::Geg, Channel::RR, &[0.0], -1.0).is_err());
        assert!(integrated_channel_probability(&p, Pathway::Geg, Channel::RR, 0.0, &PvConfig::for_params(&p)).is_err());
    }

    #[test]
    fn peak_grows_as_inverse_epsilon_squared() {
        let p = params(1.0);
        let heights: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&e| {
                let grid = uniform_grid(0.5, 1.5, 20001).unwrap();
                let s = emission_spectrum(&p, Pathway::Geg, Channel::RR, &grid, e).unwrap();
                s.argmax(Pathway::Geg, Channel::RR).unwrap().1
            })
            .collect();
        for w in heights.windows(2) {
            let ratio = w[1] / w[0];
            assert!((ratio - 4.0).abs() < 0.2, "{ratio}");
        }
    }

    #[test]
    fn rl_has_twin_peaks() {
        let p = params(1.0);
        let grid = default_grid(&p);
        let s = emission_spectrum(&p, Pathway::Geg, Channel::RL, &grid, 0.05).unwrap();
        let (wp, hp) = s.argmax_where(Pathway::Geg, Channel::RL, |w| w > 0.0).unwrap();
        let (wm, hm) = s.argmax_where(Pathway::Geg, Channel::RL, |w| w < 0.0).unwrap();
        assert!((wp - 1.0).abs() < 0.05 && (wm + 1.0).abs() < 0.05);
        assert!((hp - hm).abs() < 1e-12 * hp);
    }

    #[test]
    fn integrated_rr_equals_ll() {
        for ratio in [0.5, 1.0, 2.0] {
            let p = params(ratio);
            let c = PvConfig::for_params(&p);
            for pw in Pathway::ALL {
                let rr = integrated_channel_probability(&p, pw, Channel::RR, 0.05, &c).unwrap();
                let ll = integrated_channel_probability(&p, pw, Channel::LL, 0.05, &c).unwrap();
                assert!((rr - ll).abs() <= 1e-8 * rr, "{ratio} {pw}");
            }
            let ege_rr = integrated_channel_probability(&p, Pathway::Ege, Channel::RR, 0.05, &c).unwrap();
            let geg_ll = integrated_channel_probability(&p, Pathway::Geg, Channel::LL, 0.05, &c).unwrap();
            assert!((ege_rr - geg_ll).abs() <= 1e-8 * ege_rr);
        }
    }

    #[test]
    fn integrated_scales_as_g_to_the_fourth() {
        let p = params(1.0);
        let c = PvConfig::for_params(&p);
        let a = integrated_channel_probability(&p, Pathway::Geg, Channel::RL, 0.05, &c).unwrap();
        let b = integrated_channel_probability(&p.with_coupling(2.0).unwrap(), Pathway::Geg, Channel::RL, 0.05, &c)
            .unwrap();
        assert!((b - 16.0 * a).abs() <= 1e-12 * b);
    }

    #[test]
    fn integrated_matches_dense_trapezoid() {
        // independent route: plain trapezoid on a very fine uniform grid
        let p = params(1.0);
        let c = PvConfig::for_params(&p);
        let q = integrated_channel_probability(&p, Pathway::Geg, Channel::RR, 0.05, &c).unwrap();
        let grid = uniform_grid(-20.0, 20.0, 400_001).unwrap();
        let s = emission_spectrum(&p, Pathway::Geg, Channel::RR, &grid, 0.05).unwrap();
        let v = s.get(Pathway::Geg, Channel::RR).unwrap();
        let h = grid[1] - grid[0];
        let trap: f64 = h * (v.iter().sum::<f64>() - 0.5 * (v[0] + v[v.len() - 1]));
        assert!((q - trap).abs() < 1e-8 * q, "{q} {trap}");
    }
}
