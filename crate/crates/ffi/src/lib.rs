//! C ABI over the `msq-stdp` engines.
//!
//! Objects are handed out as opaque pointers and must be released with the
//! matching `*_free` function. Every fallible call returns an [`MsqStatus`];
//! on failure, [`msq_last_error_message`] describes the most recent error on
//! the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use msq_stdp::harness::{nmse, relative_rms, ParameterSet};
use msq_stdp::protocols;
use msq_stdp::{
    calibrate, run_circuit, run_model, CircuitParams, Error, MemristiveSynapse, Polarity,
    SpikeTrain, TripletParams, TripletVariant,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Degenerate = 4,
    EngineDisagreement = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsqPolarity {
    Potentiate = 0,
    Depress = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsqTripletVariant {
    PrePostPre = 0,
    PostPrePost = 1,
}

/// Calibrated circuit constants (plain data).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MsqCircuitParams {
    pub v_j_peak: f64,
    pub v_i_peak: f64,
    pub g1: f64,
    pub g2: f64,
    pub tau_j: f64,
    pub tau_i1: f64,
    pub tau_i2: f64,
    pub slot_ms: f64,
    pub slots_per_frame: u32,
    pub delay_ms: f64,
}

impl From<CircuitParams> for MsqCircuitParams {
    fn from(c: CircuitParams) -> Self {
        Self {
            v_j_peak: c.v_j_peak,
            v_i_peak: c.v_i_peak,
            g1: c.g1,
            g2: c.g2,
            tau_j: c.tau_j,
            tau_i1: c.tau_i1,
            tau_i2: c.tau_i2,
            slot_ms: c.slot_ms,
            slots_per_frame: c.slots_per_frame,
            delay_ms: c.delay_ms,
        }
    }
}

/// Opaque parameter set: rule amplitudes, device constants, initial weight.
pub struct MsqParams(ParameterSet);

/// Opaque spike train.
pub struct MsqTrain(SpikeTrain);

/// Opaque memristive synapse.
pub struct MsqSynapse(MemristiveSynapse);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(MsqStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::InvalidArgument(_) => MsqStatus::InvalidArgument,
            Error::Config(_) => MsqStatus::Config,
            Error::DegenerateCalibration(_) | Error::DegenerateMetric(_) => MsqStatus::Degenerate,
            Error::EngineDisagreement { .. } => MsqStatus::EngineDisagreement,
            Error::Io { .. } | Error::Csv { .. } => MsqStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(MsqStatus::NullPointer, format!("{what} is null"))
}

fn guard<F>(f: F) -> MsqStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MsqStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            MsqStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: callers pass pointers obtained from this library or null.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn borrow_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    // SAFETY: as above, and the caller guarantees exclusive access.
    unsafe { p.as_mut() }.ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null and, per the caller contract, valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    // SAFETY: caller guarantees `len` readable doubles at `p`.
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    // SAFETY: caller passes a NUL-terminated string.
    unsafe { CStr::from_ptr(p) }.to_str().map_err(|_| {
        Failure(
            MsqStatus::InvalidArgument,
            format!("{what} is not valid UTF-8"),
        )
    })
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message for the last failed call on this thread, or null if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn msq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn msq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Look up a compiled-in parameter set (`"visual-cortex"` or `"hippocampal"`)
/// or, failing that, load a parameter file from that path.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msq_params_resolve(
    name: *const c_char,
    out: *mut *mut MsqParams,
) -> MsqStatus {
    guard(|| {
        let name = unsafe { c_str(name, "name") }?;
        let set = ParameterSet::resolve(name)?;
        unsafe { write_out(out, boxed(MsqParams(set)), "out") }
    })
}

/// Custom rule amplitudes and time constants on the default device.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msq_params_new(
    a2_plus: f64,
    a3_plus: f64,
    a2_minus: f64,
    tau_j: f64,
    tau_i1: f64,
    tau_i2: f64,
    out: *mut *mut MsqParams,
) -> MsqStatus {
    guard(|| {
        let mut set = ParameterSet::hippocampal();
        set.name = "custom".into();
        set.device = Default::default();
        set.model = TripletParams {
            a2_plus,
            a3_plus,
            a2_minus,
            tau_j,
            tau_i1,
            tau_i2,
            ..TripletParams::HIPPOCAMPAL
        };
        set.validate()?;
        unsafe { write_out(out, boxed(MsqParams(set)), "out") }
    })
}

/// Override the device programming rates (weight units per second).
///
/// # Safety
/// `params` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn msq_params_set_rates(
    params: *mut MsqParams,
    v_p: f64,
    v_d: f64,
) -> MsqStatus {
    guard(|| {
        let p = unsafe { borrow_mut(params, "params") }?;
        let mut device = p.0.device;
        device.v_p = v_p;
        device.v_d = v_d;
        device.validate()?;
        p.0.device = device;
        Ok(())
    })
}

/// Set the initial weight used by runs with these parameters.
///
/// # Safety
/// `params` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn msq_params_set_w0(params: *mut MsqParams, w0: f64) -> MsqStatus {
    guard(|| {
        let p = unsafe { borrow_mut(params, "params") }?;
        let mut set = p.0.clone();
        set.w0 = w0;
        set.validate()?;
        p.0 = set;
        Ok(())
    })
}

/// # Safety
/// `params` must come from this library (or be null) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn msq_params_free(params: *mut MsqParams) {
    if !params.is_null() {
        // SAFETY: allocated by `boxed` in this crate.
        drop(unsafe { Box::from_raw(params) });
    }
}

/// Calibrated circuit constants for `params`.
///
/// # Safety
/// `params` must come from this library and `out` be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msq_params_calibrate(
    params: *const MsqParams,
    out: *mut MsqCircuitParams,
) -> MsqStatus {
    guard(|| {
        let p = &unsafe { borrow(params, "params") }?.0;
        let cp = calibrate(&p.model, p.device.v_p, p.device.v_d, p.slot_ms)?;
        let cp = CircuitParams {
            delay_ms: p.delay_ms,
            ..cp
        };
        unsafe { write_out(out, cp.into(), "out") }
    })
}

/// Build a train from explicit spike times (ms, sorted ascending).
///
/// # Safety
/// `pre` / `post` must point at `n_pre` / `n_post` doubles (may be null when
/// the count is 0) and `out` be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msq_train_new(
    pre: *const f64,
    n_pre: usize,
    post: *const f64,
    n_post: usize,
    duration_ms: f64,
    out: *mut *mut MsqTrain,
) -> MsqStatus {
    guard(|| {
        let pre = unsafe { slice(pre, n_pre, "pre") }?.to_vec();
        let post = unsafe { slice(post, n_post, "post") }?.to_vec();
        let train = SpikeTrain::new(pre, post, duration_ms)?;
        unsafe { write_out(out, boxed(MsqTrain(train)), "out") }
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msq_train_pairing(
    dt_ms: f64,
    rho_hz: f64,
    repetitions: usize,
    out: *mut *mut MsqTrain,
) -> MsqStatus {
    guard(|| {
        let train = protocols::pairing(dt_ms, rho_hz, repetitions)?;
        unsafe { write_out(out, boxed(MsqTrain(train)), "out") }
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msq_train_triplet(
    variant: MsqTripletVariant,
    dt1_ms: f64,
    dt2_ms: f64,
    rho_hz: f64,
    repetitions: usize,
    out: *mut *mut MsqTrain,
) -> MsqStatus {
    guard(|| {
        let variant = match variant {
            MsqTripletVariant::PrePostPre => TripletVariant::PrePostPre,
            MsqTripletVariant::PostPrePost => TripletVariant::PostPrePost,
        };
        let train = protocols::triplet(variant, dt1_ms, dt2_ms, rho_hz, repetitions)?;
        unsafe { write_out(out, boxed(MsqTrain(train)), "out") }
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msq_train_quadruplet(
    t_ms: f64,
    rho_hz: f64,
    repetitions: usize,
    out: *mut *mut MsqTrain,
) -> MsqStatus {
    guard(|| {
        let train = protocols::quadruplet(t_ms, rho_hz, repetitions)?;
        unsafe { write_out(out, boxed(MsqTrain(train)), "out") }
    })
}

/// Number of pre and post spikes in `train`.
///
/// # Safety
/// `train` must come from this library; outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msq_train_counts(
    train: *const MsqTrain,
    n_pre: *mut usize,
    n_post: *mut usize,
) -> MsqStatus {
    guard(|| {
        let t = &unsafe { borrow(train, "train") }?.0;
        unsafe { write_out(n_pre, t.pre().len(), "n_pre") }?;
        unsafe { write_out(n_post, t.post().len(), "n_post") }
    })
}

/// # Safety
/// `train` must come from this library (or be null) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn msq_train_free(train: *mut MsqTrain) {
    if !train.is_null() {
        // SAFETY: allocated by `boxed` in this crate.
        drop(unsafe { Box::from_raw(train) });
    }
}

/// Total weight change of the algorithmic engine.
///
/// # Safety
/// Handles must come from this library; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msq_run_model(
    params: *const MsqParams,
    train: *const MsqTrain,
    out_delta_w: *mut f64,
) -> MsqStatus {
    guard(|| {
        let p = &unsafe { borrow(params, "params") }?.0;
        let t = &unsafe { borrow(train, "train") }?.0;
        let run = run_model(t, &p.model, p.w0)?;
        unsafe { write_out(out_delta_w, run.total_delta_w, "out_delta_w") }
    })
}

/// Total weight change (final minus initial, clamp-aware) of the calibrated
/// circuit engine.
///
/// # Safety
/// Handles must come from this library; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msq_run_circuit(
    params: *const MsqParams,
    train: *const MsqTrain,
    out_delta_w: *mut f64,
) -> MsqStatus {
    guard(|| {
        let p = &unsafe { borrow(params, "params") }?.0;
        let t = &unsafe { borrow(train, "train") }?.0;
        let cp = calibrate(&p.model, p.device.v_p, p.device.v_d, p.slot_ms)?;
        let cp = CircuitParams {
            delay_ms: p.delay_ms,
            ..cp
        };
        let syn = MemristiveSynapse::new(p.device, p.w0)?;
        let run = run_circuit(t, &cp, syn)?;
        unsafe { write_out(out_delta_w, run.total_delta_w, "out_delta_w") }
    })
}

/// A synapse on the device of `params` at `weight`.
///
/// # Safety
/// `params` must come from this library; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msq_synapse_new(
    params: *const MsqParams,
    weight: f64,
    out: *mut *mut MsqSynapse,
) -> MsqStatus {
    guard(|| {
        let p = &unsafe { borrow(params, "params") }?.0;
        let syn = MemristiveSynapse::new(p.device, weight)?;
        unsafe { write_out(out, boxed(MsqSynapse(syn)), "out") }
    })
}

/// # Safety
/// `syn` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn msq_synapse_program(
    syn: *mut MsqSynapse,
    polarity: MsqPolarity,
    pulse_width_s: f64,
) -> MsqStatus {
    guard(|| {
        let s = unsafe { borrow_mut(syn, "synapse") }?;
        let polarity = match polarity {
            MsqPolarity::Potentiate => Polarity::Potentiate,
            MsqPolarity::Depress => Polarity::Depress,
        };
        s.0 = s.0.program(polarity, pulse_width_s)?;
        Ok(())
    })
}

/// # Safety
/// `syn` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn msq_synapse_apply_voltage(
    syn: *mut MsqSynapse,
    volts: f64,
    duration_s: f64,
) -> MsqStatus {
    guard(|| {
        let s = unsafe { borrow_mut(syn, "synapse") }?;
        s.0 = s.0.apply_voltage(volts, duration_s)?;
        Ok(())
    })
}

/// # Safety
/// `syn` must come from this library; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msq_synapse_weight(syn: *const MsqSynapse, out: *mut f64) -> MsqStatus {
    guard(|| {
        let s = unsafe { borrow(syn, "synapse") }?;
        unsafe { write_out(out, s.0.weight(), "out") }
    })
}

/// # Safety
/// `syn` must come from this library (or be null) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn msq_synapse_free(syn: *mut MsqSynapse) {
    if !syn.is_null() {
        // SAFETY: allocated by `boxed` in this crate.
        drop(unsafe { Box::from_raw(syn) });
    }
}

/// Normalized mean square error over `len` points.
///
/// # Safety
/// All arrays must hold `len` doubles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msq_nmse(
    cir: *const f64,
    model: *const f64,
    sigma: *const f64,
    len: usize,
    out: *mut f64,
) -> MsqStatus {
    guard(|| {
        let c = unsafe { slice(cir, len, "cir") }?;
        let m = unsafe { slice(model, len, "model") }?;
        let s = unsafe { slice(sigma, len, "sigma") }?;
        unsafe { write_out(out, nmse(c, m, s)?, "out") }
    })
}

/// Relative RMS deviation of `cir` from `model` over `len` points.
///
/// # Safety
/// Both arrays must hold `len` doubles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn msq_relative_rms(
    cir: *const f64,
    model: *const f64,
    len: usize,
    out: *mut f64,
) -> MsqStatus {
    guard(|| {
        let c = unsafe { slice(cir, len, "cir") }?;
        let m = unsafe { slice(model, len, "model") }?;
        unsafe { write_out(out, relative_rms(c, m)?, "out") }
    })
}
