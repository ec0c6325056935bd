//! CSV and JSON renderings of the computed data sets.
//!
//! Floats are written with Rust's shortest round-trip exponent form, so every
//! value re-parses to the same `f64`. CSV files start with `# key = value`
//! metadata lines followed by one header row.

use std::fmt::Write as _;

use num_complex::Complex64 as C64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::amplitudes::DetectorParams;
use crate::interference::{group_label, InterferenceMap, SweetSpot};
use crate::ramsey::{FringePoint, RamseyConfig};
use crate::resonance::{Mode, PvCoefficients, ResonantState};
use crate::spectra::SpectrumGrid;
use crate::wigner::{Conditioning, WignerGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(crate::Error::UnknownLabel(s.to_string())),
        }
    }
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:e}")
}

/// Metadata lines plus a table.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { metadata: Vec::new(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn push_floats(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|v| fmt_f64(*v)).collect());
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(s, "# {k} = {v}");
        }
        let _ = writeln!(s, "{}", self.header.join(","));
        for row in &self.rows {
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }
}

/// A parsed CSV document.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCsv {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ParsedCsv {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        self.rows.iter().map(|r| r.get(i).and_then(|v| v.parse().ok())).collect()
    }
}

/// Reads back a document written by [`Table::to_csv`].
pub fn parse_csv(text: &str) -> Result<ParsedCsv, String> {
    let mut metadata = Vec::new();
    let mut header: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if let Some(rest) = line.strip_prefix('#') {
            let (k, v) = rest.split_once('=').ok_or_else(|| format!("line {}: malformed metadata", n + 1))?;
            metadata.push((k.trim().to_string(), v.trim().to_string()));
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<String> = line.split(',').map(str::to_string).collect();
        match &header {
            None => header = Some(cells),
            Some(h) if h.len() != cells.len() => {
                return Err(format!("line {}: expected {} fields, got {}", n + 1, h.len(), cells.len()))
            }
            Some(_) => rows.push(cells),
        }
    }
    Ok(ParsedCsv { metadata, header: header.ok_or("missing header row")?, rows })
}

fn params_meta(t: &mut Table, p: &DetectorParams) {
    t.meta("omega", fmt_f64(p.omega)).meta("accel", fmt_f64(p.accel)).meta("coupling", fmt_f64(p.coupling));
    t.meta("omega_ratio", fmt_f64(p.omega_ratio()));
}

fn params_json(p: &DetectorParams) -> Value {
    json!({ "omega": p.omega, "accel": p.accel, "coupling": p.coupling, "omega_ratio": p.omega_ratio() })
}

fn complex_json(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

pub fn spectra_table(s: &SpectrumGrid) -> Table {
    let mut header = vec!["Omega".to_string()];
    header.extend(s.series.iter().map(|x| x.column_name()));
    let mut t = Table { header, ..Table::default() };
    t.meta("kind", "spectra");
    params_meta(&mut t, &s.params);
    t.meta("epsilon", fmt_f64(s.epsilon));
    t.meta("units", "|A|^2 with the g^2/4 prefactor, hbar = 1");
    for (i, w) in s.omegas.iter().enumerate() {
        let mut row = vec![*w];
        row.extend(s.series.iter().map(|x| x.values[i]));
        t.push_floats(&row);
    }
    t
}

pub fn spectra_json(s: &SpectrumGrid) -> String {
    let mut series = serde_json::Map::new();
    for x in &s.series {
        series.insert(x.column_name(), json!(x.values));
    }
    pretty(&json!({
        "kind": "spectra",
        "params": params_json(&s.params),
        "epsilon": s.epsilon,
        "Omega": s.omegas,
        "series": series,
    }))
}

pub fn interference_table(m: &InterferenceMap, params: &DetectorParams) -> Table {
    let mut t = Table::new(&["beta2", "phi", "p_background", "p_int", "p_total"]);
    t.meta("kind", "interference");
    t.meta("channel_group", group_label(m.channel_group));
    params_meta(&mut t, params);
    t.meta("epsilon", fmt_f64(m.epsilon));
    for (i, b2) in m.beta2_axis.iter().enumerate() {
        for (j, phi) in m.phi_axis.iter().enumerate() {
            t.push_floats(&[*b2, *phi, m.p_background[i][j], m.p_int[i][j], m.p_total(i, j)]);
        }
    }
    t
}

pub fn interference_json(maps: &[InterferenceMap], params: &DetectorParams) -> String {
    let groups: Vec<Value> = maps
        .iter()
        .map(|m| {
            let total: Vec<Vec<f64>> =
                (0..m.beta2_axis.len()).map(|i| (0..m.phi_axis.len()).map(|j| m.p_total(i, j)).collect()).collect();
            json!({
                "channel_group": group_label(m.channel_group),
                "epsilon": m.epsilon,
                "beta2": m.beta2_axis,
                "phi": m.phi_axis,
                "p_background": m.p_background,
                "p_int": m.p_int,
                "p_total": total,
            })
        })
        .collect();
    pretty(&json!({ "kind": "interference", "params": params_json(params), "groups": groups }))
}

/// Wide table: one `max_abs_p_int` column per channel group.
pub fn sweet_spot_table(scans: &[(crate::Channel, Vec<SweetSpot>)], params: &DetectorParams, epsilon: f64) -> Table {
    let mut header = vec!["omega_ratio".to_string()];
    header.extend(scans.iter().map(|(c, _)| group_label(*c).to_string()));
    let mut t = Table { header, ..Table::default() };
    t.meta("kind", "sweet-spot");
    t.meta("accel", fmt_f64(params.accel)).meta("coupling", fmt_f64(params.coupling));
    t.meta("epsilon", fmt_f64(epsilon));
    t.meta("beta2", fmt_f64(0.5));
    let n = scans.first().map_or(0, |s| s.1.len());
    for i in 0..n {
        let mut row = vec![scans[0].1[i].omega_ratio];
        row.extend(scans.iter().map(|(_, s)| s[i].max_abs_p_int));
        t.push_floats(&row);
    }
    t
}

pub fn sweet_spot_json(scans: &[(crate::Channel, Vec<SweetSpot>)], params: &DetectorParams, epsilon: f64) -> String {
    let groups: Vec<Value> = scans
        .iter()
        .map(|(c, s)| {
            json!({
                "channel_group": group_label(*c),
                "omega_ratio": s.iter().map(|x| x.omega_ratio).collect::<Vec<_>>(),
                "max_abs_p_int": s.iter().map(|x| x.max_abs_p_int).collect::<Vec<_>>(),
            })
        })
        .collect();
    pretty(&json!({
        "kind": "sweet-spot",
        "accel": params.accel,
        "coupling": params.coupling,
        "epsilon": epsilon,
        "beta2": 0.5,
        "groups": groups,
    }))
}

pub fn resonant_json(res: &ResonantState, params: &DetectorParams) -> String {
    let terms: Vec<Value> =
        res.terms.iter().map(|(pair, c)| json!({ "pair": pair.label(), "coefficient": complex_json(*c) })).collect();
    pretty(&json!({
        "kind": "resonant",
        "params": params_json(params),
        "gamma": res.gamma,
        "overall": complex_json(res.overall),
        "terms": terms,
        "qubit_factor": { "ground": complex_json(res.qubit_factor.0), "excited": complex_json(res.qubit_factor.1) },
    }))
}

pub fn pv_table(rows: &[PvCoefficients], params: &DetectorParams, delta: f64, cutoff: f64) -> Table {
    let mut t = Table::new(&["channel", "ground_re", "ground_im", "excited_re", "excited_im", "truncated"]);
    t.meta("kind", "pv");
    params_meta(&mut t, params);
    t.meta("pv_delta", fmt_f64(delta)).meta("pv_cutoff", fmt_f64(cutoff));
    for r in rows {
        let mut row = vec![r.channel.label().to_string()];
        row.extend([r.ground.re, r.ground.im, r.excited.re, r.excited.im].iter().map(|v| fmt_f64(*v)));
        row.push(r.truncated.to_string());
        t.push(row);
    }
    t
}

pub fn pv_json(rows: &[PvCoefficients], params: &DetectorParams, delta: f64, cutoff: f64) -> String {
    let coeffs: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "channel": r.channel.label(),
                "ground": complex_json(r.ground),
                "excited": complex_json(r.excited),
                "truncated": r.truncated,
            })
        })
        .collect();
    pretty(&json!({
        "kind": "pv",
        "params": params_json(params),
        "pv_delta": delta,
        "pv_cutoff": cutoff,
        "coefficients": coeffs,
    }))
}

/// Summary values attached to a Wigner grid.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WignerSummary {
    pub mode: Mode,
    pub conditioning: Conditioning,
    pub integral: f64,
    pub negativity_volume: f64,
}

pub fn wigner_table(g: &WignerGrid, params: &DetectorParams, summary: &WignerSummary) -> Table {
    let mut t = Table::new(&["x", "p", "W"]);
    t.meta("kind", "wigner");
    t.meta("mode", summary.mode).meta("conditioning", summary.conditioning);
    params_meta(&mut t, params);
    t.meta("convention", "hbar = 1, integral of W dx dp = 1");
    t.meta("integral", fmt_f64(summary.integral));
    t.meta("negativity_volume", fmt_f64(summary.negativity_volume));
    for (i, x) in g.x_axis.iter().enumerate() {
        for (j, p) in g.p_axis.iter().enumerate() {
            t.push_floats(&[*x, *p, g.values[i][j]]);
        }
    }
    t
}

pub fn wigner_json(g: &WignerGrid, params: &DetectorParams, summary: &WignerSummary) -> String {
    pretty(&json!({
        "kind": "wigner",
        "mode": summary.mode.label(),
        "conditioning": summary.conditioning.to_string(),
        "params": params_json(params),
        "convention": "hbar = 1, integral of W dx dp = 1",
        "integral": summary.integral,
        "negativity_volume": summary.negativity_volume,
        "x": g.x_axis,
        "p": g.p_axis,
        "W": g.values,
    }))
}

pub fn ramsey_table(cfg: &RamseyConfig, fringe: &[FringePoint], visibility: f64) -> Table {
    let mut t = Table::new(&["phi_R", "P_e"]);
    t.meta("kind", "ramsey");
    t.meta("gate_applied", cfg.gate_applied).meta("p", fmt_f64(cfg.gate_strength));
    t.meta("visibility", fmt_f64(visibility));
    for pt in fringe {
        t.push_floats(&[pt.phi_r, pt.p_e]);
    }
    t
}

pub fn ramsey_json(cfg: &RamseyConfig, fringe: &[FringePoint], visibility: f64) -> String {
    pretty(&json!({
        "kind": "ramsey",
        "gate_applied": cfg.gate_applied,
        "p": cfg.gate_strength,
        "visibility": visibility,
        "phi_R": fringe.iter().map(|f| f.phi_r).collect::<Vec<_>>(),
        "P_e": fringe.iter().map(|f| f.p_e).collect::<Vec<_>>(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.0, -0.0, 1.0, 0.1, -2.5e-300, 1.0 / 3.0, f64::MAX, 5e-324] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
    }

    #[test]
    fn csv_round_trip() {
        let mut t = Table::new(&["a", "b"]);
        t.meta("note", "x = y");
        t.push_floats(&[1.0, 1.0 / 3.0]);
        t.push_floats(&[-7e-12, 2.0]);
        let parsed = parse_csv(&t.to_csv()).unwrap();
        assert_eq!(parsed.meta("note"), Some("x = y"));
        assert_eq!(parsed.column("b").unwrap(), vec![1.0 / 3.0, 2.0]);
        assert!(parse_csv("a,b\n1\n").is_err());
        assert!(parse_csv("# only meta = 1\n").is_err());
    }
}
