//! Command-line front end.
//!
//! Every flag can also be given in a flat `key = value` file passed with
//! `--config`; keys are the flag names without the leading dashes (`-` and
//! `_` are interchangeable) and `#` starts a comment. Flags win over the file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::amplitudes::{Channel, DetectorParams, QubitState};
use crate::interference::{default_beta2_axis, default_phi_axis, interference_map, sweet_spot_scan};
use crate::output::{self, Format, WignerSummary};
use crate::ramsey::{fringe_visibility, ramsey_fringe, RamseyConfig};
use crate::resonance::{pv_state_coefficients, resonant_state, Mode, PvConfig};
use crate::selftest::run_selftest;
use crate::spectra::{full_spectrum, uniform_grid, DEFAULT_EPSILON, DEFAULT_GRID_POINTS};
use crate::wigner::{
    self, default_partner, negativity_volume, parse_conditioning, reduced_state, wigner_of_fock_mixture, Conditioning,
};
use crate::Error;

/// Exit status for invalid flags, config values or inputs.
pub const EXIT_USAGE: i32 = 2;
/// Exit status for numerical failures.
pub const EXIT_NUMERICAL: i32 = 3;
/// Environment variable capping the worker pool size (0 = automatic).
pub const THREADS_ENV: &str = "RINDLER_GATE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "rindler-gate", version, about = "Two-photon emission of an accelerated two-level detector")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Broadened emission spectra for both pathways and all channels.
    Spectra,
    /// Integrated interference maps over (|beta|^2, phi), one per channel group.
    Interference,
    /// Largest interference magnitude on |beta|^2 = 1/2 against omega/accel.
    SweetSpot,
    /// Resonant two-photon state as JSON.
    Resonant,
    /// Principal-value state coefficients for every channel.
    Pv,
    /// Wigner function of a reduced single-mode state.
    Wigner,
    /// Ramsey fringe with and without the Z gate.
    Ramsey,
    /// Runs the invariant suite.
    Selftest,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Energy gap omega.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    /// Proper acceleration a.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub accel: Option<f64>,
    /// Coupling g.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub coupling: Option<f64>,
    /// Excited-state population |beta|^2.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta2: Option<f64>,
    /// Relative phase of beta.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Broadening of each denominator factor.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    /// Excision half-width around each pole.
    #[arg(long = "pv-delta", global = true, allow_hyphen_values = true)]
    pub pv_delta: Option<f64>,
    /// Tail cutoff of the frequency integrals.
    #[arg(long = "pv-cutoff", global = true, allow_hyphen_values = true)]
    pub pv_cutoff: Option<f64>,
    /// Lower end of the scan axis (Omega, omega/accel, x/p or phi_R)
    #[arg(long = "grid-min", global = true, allow_hyphen_values = true)]
    pub grid_min: Option<f64>,
    /// Upper end of the scan axis
    #[arg(long = "grid-max", global = true, allow_hyphen_values = true)]
    pub grid_max: Option<f64>,
    /// Number of axis points; interference uses it for both axes
    #[arg(long = "grid-n", global = true)]
    pub grid_n: Option<usize>,
    /// Target mode: A+, A-, B+ or B-.
    #[arg(long, global = true)]
    pub mode: Option<String>,
    /// none, partner_detected or partner_detected:<mode>.
    #[arg(long, global = true)]
    pub conditioning: Option<String>,
    /// Weight p of the Z branch in the Ramsey channel.
    #[arg(long = "gate-strength", global = true, allow_hyphen_values = true)]
    pub gate_strength: Option<f64>,
    /// Run the Ramsey sequence without the gate.
    #[arg(long = "no-gate", global = true)]
    pub no_gate: bool,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// csv or json.
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Treat truncation warnings as failures.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Flat key = value configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self { code: EXIT_NUMERICAL, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::UnknownLabel(_) | Error::ZeroProbability(_) => CliError::usage(e.to_string()),
            Error::Pole { .. } | Error::Domain(_) => CliError::numerical(e.to_string()),
        }
    }
}

const CONFIG_KEYS: &[&str] = &[
    "omega",
    "accel",
    "coupling",
    "beta2",
    "phi",
    "epsilon",
    "pv-delta",
    "pv-cutoff",
    "grid-min",
    "grid-max",
    "grid-n",
    "mode",
    "conditioning",
    "gate-strength",
    "no-gate",
    "output",
    "format",
    "strict",
];

/// Parses the flat configuration format.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("config line {}: expected key = value", n + 1)))?;
        let key = k.trim().replace('_', "-");
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(CliError::usage(format!("config line {}: unknown key `{}`", n + 1, k.trim())));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| CliError::usage(format!("config value for `{key}` is invalid: `{v}`")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool, CliError> {
    match v {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(CliError::usage(format!("config value for `{key}` is not a boolean: `{v}`"))),
    }
}

/// Overlays config-file values beneath the flags.
pub fn merge_config(mut o: Options, file: &BTreeMap<String, String>) -> Result<Options, CliError> {
    macro_rules! fill {
        ($field:ident, $key:literal) => {
            if o.$field.is_none() {
                if let Some(v) = file.get($key) {
                    o.$field = Some(parse_value($key, v)?);
                }
            }
        };
    }
    fill!(omega, "omega");
    fill!(accel, "accel");
    fill!(coupling, "coupling");
    fill!(beta2, "beta2");
    fill!(phi, "phi");
    fill!(epsilon, "epsilon");
    fill!(pv_delta, "pv-delta");
    fill!(pv_cutoff, "pv-cutoff");
    fill!(grid_min, "grid-min");
    fill!(grid_max, "grid-max");
    fill!(grid_n, "grid-n");
    fill!(mode, "mode");
    fill!(conditioning, "conditioning");
    fill!(gate_strength, "gate-strength");
    fill!(output, "output");
    fill!(format, "format");
    if !o.strict {
        if let Some(v) = file.get("strict") {
            o.strict = parse_bool("strict", v)?;
        }
    }
    if !o.no_gate {
        if let Some(v) = file.get("no-gate") {
            o.no_gate = parse_bool("no-gate", v)?;
        }
    }
    Ok(o)
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: DetectorParams,
    pub qubit: QubitState,
    pub pv: PvConfig,
    pub epsilon: f64,
    pub options: Options,
    pub format: Format,
}

impl RunConfig {
    pub fn resolve(options: Options) -> Result<Self, CliError> {
        let options = match &options.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
                merge_config(options.clone(), &parse_config(&text)?)?
            }
            None => options,
        };
        let params = DetectorParams::new(
            options.omega.unwrap_or(1.0),
            options.accel.unwrap_or(1.0),
            options.coupling.unwrap_or(1.0),
        )?;
        let qubit = QubitState::from_population(options.beta2.unwrap_or(0.5), options.phi.unwrap_or(0.0))?;
        let mut pv = PvConfig::for_params(&params);
        if let Some(d) = options.pv_delta {
            pv.excision_half_width = d;
        }
        if let Some(c) = options.pv_cutoff {
            pv.tail_cutoff = c;
        }
        pv.validate()?;
        let epsilon = options.epsilon.unwrap_or(DEFAULT_EPSILON);
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(CliError::usage(format!("epsilon must be > 0, got {epsilon}")));
        }
        let format = match &options.format {
            Some(f) => f.parse()?,
            None => Format::Csv,
        };
        if let Some(p) = options.gate_strength {
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::usage(format!("gate strength must lie in [0, 1], got {p}")));
            }
        }
        Ok(Self { params, qubit, pv, epsilon, options, format })
    }

    fn grid(&self, min: f64, max: f64, n: usize) -> Result<Vec<f64>, CliError> {
        let o = &self.options;
        Ok(uniform_grid(o.grid_min.unwrap_or(min), o.grid_max.unwrap_or(max), o.grid_n.unwrap_or(n))?)
    }

    fn target_mode(&self) -> Result<Mode, CliError> {
        Ok(self.options.mode.as_deref().unwrap_or("A+").parse()?)
    }

    fn conditioning(&self, target: Mode) -> Result<Conditioning, CliError> {
        let (detected, partner) =
            parse_conditioning(self.options.conditioning.as_deref().unwrap_or("partner_detected"))?;
        Ok(if detected {
            Conditioning::PartnerDetected(partner.unwrap_or_else(|| default_partner(target)))
        } else {
            Conditioning::None
        })
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `out.csv` → `out_RR.csv` for per-group files.
fn group_path(base: &Path, tag: &str) -> PathBuf {
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}_{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{tag}"),
    };
    base.with_file_name(name)
}

/// File tag of a channel group.
pub fn group_tag(channel: Channel) -> &'static str {
    match channel {
        Channel::RR => "RR",
        Channel::LL => "LL",
        Channel::RL => "RL_LR",
    }
}

/// Executes one subcommand.
pub fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(cli.options)?;
    let out = cfg.options.output.clone();
    let out = out.as_deref();
    let p = &cfg.params;
    match cli.command {
        Command::Spectra => {
            let half = 4.0 * p.omega_ratio() + 2.0;
            let grid = cfg.grid(-half, half, DEFAULT_GRID_POINTS)?;
            let s = full_spectrum(p, &grid, cfg.epsilon)?;
            match cfg.format {
                Format::Csv => write_out(out, &output::spectra_table(&s).to_csv()),
                Format::Json => write_out(out, &output::spectra_json(&s)),
            }
        }
        Command::Interference => {
            let (b2, phi) = match cfg.options.grid_n {
                Some(n) => (uniform_grid(0.0, 1.0, n)?, uniform_grid(0.0, std::f64::consts::TAU, n)?),
                None => (default_beta2_axis(), default_phi_axis()),
            };
            cfg.pv.validate_for(p)?;
            let maps = Channel::ALL
                .iter()
                .map(|&ch| interference_map(p, ch, &b2, &phi, cfg.epsilon, &cfg.pv))
                .collect::<Result<Vec<_>, _>>()?;
            match cfg.format {
                Format::Json => write_out(out, &output::interference_json(&maps, p)),
                Format::Csv => match out {
                    Some(base) => {
                        for m in &maps {
                            write_out(
                                Some(&group_path(base, group_tag(m.channel_group))),
                                &output::interference_table(m, p).to_csv(),
                            )?;
                        }
                        Ok(())
                    }
                    None => {
                        let text: Vec<String> =
                            maps.iter().map(|m| output::interference_table(m, p).to_csv()).collect();
                        write_out(None, &text.join("\n"))
                    }
                },
            }
        }
        Command::SweetSpot => {
            let ratios = cfg.grid(0.1, 3.0, 30)?;
            let scans = Channel::ALL
                .iter()
                .map(|&ch| Ok((ch, sweet_spot_scan(p, &ratios, ch, cfg.epsilon, &cfg.pv, &default_phi_axis())?)))
                .collect::<Result<Vec<_>, Error>>()?;
            match cfg.format {
                Format::Csv => write_out(out, &output::sweet_spot_table(&scans, p, cfg.epsilon).to_csv()),
                Format::Json => write_out(out, &output::sweet_spot_json(&scans, p, cfg.epsilon)),
            }
        }
        Command::Resonant => write_out(out, &output::resonant_json(&resonant_state(p, &cfg.qubit), p)),
        Command::Pv => {
            let rows = Channel::ALL
                .iter()
                .map(|&ch| pv_state_coefficients(p, &cfg.qubit, ch, &cfg.pv))
                .collect::<Result<Vec<_>, _>>()?;
            let (d, c) = (cfg.pv.excision_half_width, cfg.pv.tail_cutoff);
            match cfg.format {
                Format::Csv => write_out(out, &output::pv_table(&rows, p, d, c).to_csv())?,
                Format::Json => write_out(out, &output::pv_json(&rows, p, d, c))?,
            }
            let truncated: Vec<&str> = rows.iter().filter(|r| r.truncated).map(|r| r.channel.label()).collect();
            if !truncated.is_empty() {
                let msg = format!("tail truncation not negligible for {}; raise --pv-cutoff", truncated.join(", "));
                if cfg.options.strict {
                    return Err(CliError::numerical(msg));
                }
                eprintln!("warning: {msg}");
            }
            Ok(())
        }
        Command::Wigner => {
            let mode = cfg.target_mode()?;
            let conditioning = cfg.conditioning(mode)?;
            let rho = reduced_state(&resonant_state(p, &cfg.qubit), mode, conditioning)?;
            let axis = cfg.grid(-wigner::DEFAULT_EXTENT, wigner::DEFAULT_EXTENT, wigner::DEFAULT_AXIS_POINTS)?;
            let g = wigner_of_fock_mixture(&rho, &axis, &axis)?;
            let summary =
                WignerSummary { mode, conditioning, integral: g.integral(), negativity_volume: negativity_volume(&g) };
            match cfg.format {
                Format::Csv => write_out(out, &output::wigner_table(&g, p, &summary).to_csv()),
                Format::Json => write_out(out, &output::wigner_json(&g, p, &summary)),
            }
        }
        Command::Ramsey => {
            let phases = cfg.grid(0.0, std::f64::consts::TAU, 73)?;
            let rc = RamseyConfig::new(!cfg.options.no_gate, cfg.options.gate_strength.unwrap_or(1.0), phases)?;
            let fringe = ramsey_fringe(&rc)?;
            let v = fringe_visibility(&fringe);
            match cfg.format {
                Format::Csv => write_out(out, &output::ramsey_table(&rc, &fringe, v).to_csv()),
                Format::Json => write_out(out, &output::ramsey_json(&rc, &fringe, v)),
            }
        }
        Command::Selftest => {
            let checks = run_selftest();
            let text = match cfg.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&checks).expect("checks serialize");
                    s.push('\n');
                    s
                }
                Format::Csv => checks
                    .iter()
                    .map(|c| format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
                    .collect(),
            };
            write_out(out, &text)?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(CliError::numerical(format!("{failed} selftest check(s) failed")));
            }
            Ok(())
        }
    }
}

/// Applies the worker-pool cap from the environment.
pub fn configure_threads(value: Option<&str>) -> Result<(), CliError> {
    let Some(v) = value else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("{THREADS_ENV} must be a non-negative integer, got `{v}`")))?;
    if n > 0 {
        // a pool may already exist when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}
