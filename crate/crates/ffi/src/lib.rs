//! C interface to `rindler_gate`.
//!
//! Every function returns an [`RgStatus`]; results go through out-pointers.
//! On failure, [`rg_last_error_message`] describes the most recent error on
//! the calling thread. Objects created by `*_new` are owned by the caller and
//! released with the matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64 as C64;
use rindler_gate::amplitudes::{self, Channel, DetectorParams, Pathway, QubitState};
use rindler_gate::interference::interference_density;
use rindler_gate::ramsey::{fringe_visibility, ramsey_fringe, FringePoint, RamseyConfig};
use rindler_gate::resonance::{pv_state_coefficients, resonant_state, Mode, ModePair, PvConfig, ResonantState};
use rindler_gate::spectra::{emission_spectrum, integrated_channel_probability};
use rindler_gate::wigner::{self, default_partner, Conditioning, FockDensityMatrix};
use rindler_gate::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownLabel = 3,
    Pole = 4,
    Numerical = 5,
    ZeroProbability = 6,
    Panic = 7,
}

/// Pathway codes.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub enum RgPathway {
    Geg = 0,
    Ege = 1,
}

/// Channel codes; `RG_CHANNEL_RL` is the mixed RL+LR term.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub enum RgChannel {
    Rr = 0,
    Ll = 1,
    Rl = 2,
}

/// Resonant mode codes.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub enum RgMode {
    APlus = 0,
    AMinus = 1,
    BPlus = 2,
    BMinus = 3,
}

/// Mode-pair codes of the resonant state.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub enum RgModePair {
    APlusAMinus = 0,
    BPlusBMinus = 1,
    APlusBPlus = 2,
    AMinusBMinus = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RgComplex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for RgComplex {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// Opaque detector parameters.
pub struct RgParams(DetectorParams);

/// Opaque resonant state.
pub struct RgResonantState(ResonantState);

/// Opaque single-mode density matrix.
pub struct RgDensity(FockDensityMatrix);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(RgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Config(_) => RgStatus::InvalidArgument,
            Error::UnknownLabel(_) => RgStatus::UnknownLabel,
            Error::Pole { .. } => RgStatus::Pole,
            Error::Domain(_) => RgStatus::Numerical,
            Error::ZeroProbability(_) => RgStatus::ZeroProbability,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(RgStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: String) -> Failure {
    Failure(RgStatus::InvalidArgument, msg)
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            RgStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RgStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a>(p: *mut f64, len: usize, what: &str) -> Result<&'a mut [f64], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

fn pathway(code: u32) -> Result<Pathway, Failure> {
    match code {
        0 => Ok(Pathway::Geg),
        1 => Ok(Pathway::Ege),
        _ => Err(Failure(RgStatus::UnknownLabel, format!("unknown pathway code {code}"))),
    }
}

fn channel(code: u32) -> Result<Channel, Failure> {
    Channel::ALL
        .get(code as usize)
        .copied()
        .ok_or_else(|| Failure(RgStatus::UnknownLabel, format!("unknown channel code {code}")))
}

fn mode(code: u32) -> Result<Mode, Failure> {
    Mode::ALL
        .get(code as usize)
        .copied()
        .ok_or_else(|| Failure(RgStatus::UnknownLabel, format!("unknown mode code {code}")))
}

fn mode_pair(code: u32) -> Result<ModePair, Failure> {
    ModePair::ALL
        .get(code as usize)
        .copied()
        .ok_or_else(|| Failure(RgStatus::UnknownLabel, format!("unknown mode pair code {code}")))
}

/// Message for the last failing call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn rg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn rg_params_new(omega: f64, accel: f64, coupling: f64, out: *mut *mut RgParams) -> RgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let p = DetectorParams::new(omega, accel, coupling)?;
        out.write(Box::into_raw(Box::new(RgParams(p))));
        Ok(())
    })
}

/// # Safety
/// `params` must come from [`rg_params_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rg_params_free(params: *mut RgParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Exact amplitude A(Ω) for one pathway and channel.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rg_amplitude(
    params: *const RgParams,
    pathway_code: u32,
    channel_code: u32,
    big_omega: f64,
    out: *mut RgComplex,
) -> RgStatus {
    guard(|| {
        let p = get(params, "params")?;
        let a = amplitudes::channel_amplitude(&p.0, pathway(pathway_code)?, channel(channel_code)?, big_omega)?;
        put(out, a.into(), "out")
    })
}

/// Amplitude with every denominator factor D replaced by D + iε.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rg_regularized_amplitude(
    params: *const RgParams,
    pathway_code: u32,
    channel_code: u32,
    big_omega: f64,
    epsilon: f64,
    out: *mut RgComplex,
) -> RgStatus {
    guard(|| {
        let p = get(params, "params")?;
        let a = amplitudes::regularized_amplitude(
            &p.0,
            pathway(pathway_code)?,
            channel(channel_code)?,
            big_omega,
            epsilon,
        )?;
        put(out, a.into(), "out")
    })
}

/// 1/sqrt(2 sinh(πΩ)) for Ω ≠ 0.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rg_unruh_norm(big_omega: f64, out: *mut f64) -> RgStatus {
    guard(|| put(out, amplitudes::unruh_norm(big_omega)?, "out"))
}

/// |A_ε(Ω)|² on `n` grid points written to `out`.
///
/// # Safety
/// `grid` and `out` must each hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn rg_spectrum(
    params: *const RgParams,
    pathway_code: u32,
    channel_code: u32,
    grid: *const f64,
    n: usize,
    epsilon: f64,
    out: *mut f64,
) -> RgStatus {
    guard(|| {
        let p = get(params, "params")?;
        let g = slice(grid, n, "grid")?;
        let (pw, ch) = (pathway(pathway_code)?, channel(channel_code)?);
        let s = emission_spectrum(&p.0, pw, ch, g, epsilon)?;
        slice_mut(out, n, "out")?.copy_from_slice(&s.series[0].values);
        Ok(())
    })
}

fn pv_config(p: &DetectorParams, delta: f64, cutoff: f64) -> PvConfig {
    let mut c = PvConfig::for_params(p);
    if delta > 0.0 {
        c.excision_half_width = delta;
    }
    if cutoff > 0.0 {
        c.tail_cutoff = cutoff;
    }
    c
}

/// ∫|A_ε|² dΩ. Non-positive `cutoff` selects the default Ω₀ + 40.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rg_integrated_probability(
    params: *const RgParams,
    pathway_code: u32,
    channel_code: u32,
    epsilon: f64,
    cutoff: f64,
    out: *mut f64,
) -> RgStatus {
    guard(|| {
        let p = get(params, "params")?;
        let c = pv_config(&p.0, 0.0, cutoff);
        let v = integrated_channel_probability(&p.0, pathway(pathway_code)?, channel(channel_code)?, epsilon, &c)?;
        put(out, v, "out")
    })
}

/// Principal-value coefficients (α P∫A_GEG, β P∫A_EGE) of one channel for
/// the qubit (√(1−β²), √β² e^{iφ}). Non-positive `delta` or `cutoff` select
/// the defaults.
///
/// # Safety
/// Pointers must be valid; `truncated` may be null.
#[no_mangle]
pub unsafe extern "C" fn rg_pv_coefficients(
    params: *const RgParams,
    beta2: f64,
    phi: f64,
    channel_code: u32,
    delta: f64,
    cutoff: f64,
    ground: *mut RgComplex,
    excited: *mut RgComplex,
    truncated: *mut bool,
) -> RgStatus {
    guard(|| {
        let p = get(params, "params")?;
        let q = QubitState::from_population(beta2, phi)?;
        let r = pv_state_coefficients(&p.0, &q, channel(channel_code)?, &pv_config(&p.0, delta, cutoff))?;
        put(ground, r.ground.into(), "ground")?;
        put(excited, r.excited.into(), "excited")?;
        if !truncated.is_null() {
            truncated.write(r.truncated);
        }
        Ok(())
    })
}

/// Pointwise (p_background, p_int, p_total) at frequency Ω.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rg_interference_density(
    params: *const RgParams,
    beta2: f64,
    phi: f64,
    channel_code: u32,
    big_omega: f64,
    epsilon: f64,
    p_background: *mut f64,
    p_int: *mut f64,
    p_total: *mut f64,
) -> RgStatus {
    guard(|| {
        let p = get(params, "params")?;
        let q = QubitState::from_population(beta2, phi)?;
        let d = interference_density(&p.0, &q, channel(channel_code)?, big_omega, epsilon)?;
        put(p_background, d.p_background, "p_background")?;
        put(p_int, d.p_int, "p_int")?;
        put(p_total, d.p_total, "p_total")
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rg_resonant_state_new(
    params: *const RgParams,
    beta2: f64,
    phi: f64,
    out: *mut *mut RgResonantState,
) -> RgStatus {
    guard(|| {
        let p = get(params, "params")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let q = QubitState::from_population(beta2, phi)?;
        out.write(Box::into_raw(Box::new(RgResonantState(resonant_state(&p.0, &q)))));
        Ok(())
    })
}

/// # Safety
/// `state` must come from [`rg_resonant_state_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rg_resonant_state_free(state: *mut RgResonantState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// γ = πΩ₀/sinh(πΩ₀) and the overall factor g²γ/4.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rg_resonant_state_gamma(
    state: *const RgResonantState,
    gamma: *mut f64,
    overall: *mut RgComplex,
) -> RgStatus {
    guard(|| {
        let s = get(state, "state")?;
        put(gamma, s.0.gamma, "gamma")?;
        put(overall, s.0.overall.into(), "overall")
    })
}

/// Relative coefficient of one mode pair.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rg_resonant_state_coefficient(
    state: *const RgResonantState,
    pair_code: u32,
    out: *mut RgComplex,
) -> RgStatus {
    guard(|| {
        let s = get(state, "state")?;
        put(out, s.0.coefficient(mode_pair(pair_code)?).into(), "out")
    })
}

/// Detector factor (α, −β).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rg_resonant_state_qubit_factor(
    state: *const RgResonantState,
    ground: *mut RgComplex,
    excited: *mut RgComplex,
) -> RgStatus {
    guard(|| {
        let s = get(state, "state")?;
        put(ground, s.0.qubit_factor.0.into(), "ground")?;
        put(excited, s.0.qubit_factor.1.into(), "excited")
    })
}

/// Reduced state of one mode. With `partner_detected` false the partner is
/// ignored; otherwise a negative `partner_code` selects the pair partner
/// (A₊ ↔ A₋, B₊ ↔ B₋).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rg_reduced_state_new(
    state: *const RgResonantState,
    mode_code: u32,
    partner_detected: bool,
    partner_code: i32,
    out: *mut *mut RgDensity,
) -> RgStatus {
    guard(|| {
        let s = get(state, "state")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let target = mode(mode_code)?;
        let conditioning = if !partner_detected {
            Conditioning::None
        } else if partner_code < 0 {
            Conditioning::PartnerDetected(default_partner(target))
        } else {
            Conditioning::PartnerDetected(mode(partner_code as u32)?)
        };
        let rho = wigner::reduced_state(&s.0, target, conditioning)?;
        out.write(Box::into_raw(Box::new(RgDensity(rho))));
        Ok(())
    })
}

/// Diagonal density matrix with the given populations.
///
/// # Safety
/// `populations` must hold `n` doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rg_density_from_diagonal(
    populations: *const f64,
    n: usize,
    out: *mut *mut RgDensity,
) -> RgStatus {
    guard(|| {
        let pops = slice(populations, n, "populations")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let rho = FockDensityMatrix::from_diagonal(pops)?;
        out.write(Box::into_raw(Box::new(RgDensity(rho))));
        Ok(())
    })
}

/// # Safety
/// `density` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rg_density_free(density: *mut RgDensity) {
    if !density.is_null() {
        drop(Box::from_raw(density));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rg_density_dim(density: *const RgDensity, out: *mut usize) -> RgStatus {
    guard(|| put(out, get(density, "density")?.0.dim(), "out"))
}

/// Entry ρ_mn in the number basis.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rg_density_entry(
    density: *const RgDensity,
    m: usize,
    n: usize,
    out: *mut RgComplex,
) -> RgStatus {
    guard(|| {
        let d = get(density, "density")?;
        if m >= d.0.dim() || n >= d.0.dim() {
            return Err(invalid(format!("entry ({m}, {n}) outside dimension {}", d.0.dim())));
        }
        put(out, d.0.get(m, n).into(), "out")
    })
}

/// W(x_i, p_j) written row-major to `out[i * np + j]`; the negativity volume
/// goes to `negativity` when it is non-null.
///
/// # Safety
/// `x` holds `nx`, `p` holds `np` and `out` holds `nx * np` doubles.
#[no_mangle]
pub unsafe extern "C" fn rg_density_wigner(
    density: *const RgDensity,
    x: *const f64,
    nx: usize,
    p: *const f64,
    np: usize,
    out: *mut f64,
    negativity: *mut f64,
) -> RgStatus {
    guard(|| {
        let d = get(density, "density")?;
        let xs = slice(x, nx, "x")?;
        let ps = slice(p, np, "p")?;
        let total = nx.checked_mul(np).ok_or_else(|| invalid("grid too large".into()))?;
        let dst = slice_mut(out, total, "out")?;
        let g = wigner::wigner_of_fock_mixture(&d.0, xs, ps)?;
        for (i, row) in g.values.iter().enumerate() {
            dst[i * np..(i + 1) * np].copy_from_slice(row);
        }
        if !negativity.is_null() {
            negativity.write(wigner::negativity_volume(&g));
        }
        Ok(())
    })
}

/// P_e(φ_R) for each of the `n` phases.
///
/// # Safety
/// `phases` and `out` must each hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn rg_ramsey_fringe(
    gate_applied: bool,
    gate_strength: f64,
    phases: *const f64,
    n: usize,
    out: *mut f64,
) -> RgStatus {
    guard(|| {
        let axis = slice(phases, n, "phases")?.to_vec();
        let dst = slice_mut(out, n, "out")?;
        let fringe = ramsey_fringe(&RamseyConfig::new(gate_applied, gate_strength, axis)?)?;
        for (d, pt) in dst.iter_mut().zip(&fringe) {
            *d = pt.p_e;
        }
        Ok(())
    })
}

/// Signed fringe contrast of `n` samples (0 for a flat fringe).
///
/// # Safety
/// `phases` and `p_e` must each hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn rg_fringe_visibility(
    phases: *const f64,
    p_e: *const f64,
    n: usize,
    out: *mut f64,
) -> RgStatus {
    guard(|| {
        let ph = slice(phases, n, "phases")?;
        let pe = slice(p_e, n, "p_e")?;
        let fringe: Vec<FringePoint> = ph.iter().zip(pe).map(|(&phi_r, &p_e)| FringePoint { phi_r, p_e }).collect();
        put(out, fringe_visibility(&fringe), "out")
    })
}
