//! C ABI for `tfloc`.
//!
//! Every fallible function returns a [`TflocStatus`]; on failure a message is
//! kept per thread and can be copied out with [`tfloc_last_error_message`].
//! Solved problems live behind the opaque [`TflocOptimum`] handle, released
//! with [`tfloc_optimum_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tfloc::solver::{sample_profile, u_eval};
use tfloc::weight::Profile;
use tfloc::{classify, optimize, Error, Optimum, ProblemParams, Regime};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TflocStatus {
    Ok = 0,
    InvalidArgument = 1,
    WrongRegime = 2,
    NonConvergence = 3,
    NullPointer = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TflocRegime {
    PDominant = 0,
    QDominant = 1,
    Intermediate = 2,
    DegenerateEqualExponents = 3,
}

impl From<Regime> for TflocRegime {
    fn from(r: Regime) -> Self {
        match r {
            Regime::PDominant => Self::PDominant,
            Regime::QDominant => Self::QDominant,
            Regime::Intermediate => Self::Intermediate,
            Regime::DegenerateEqualExponents => Self::DegenerateEqualExponents,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TflocParams {
    pub d: u32,
    pub p: f64,
    pub q: f64,
    pub a: f64,
    pub b: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TflocDecision {
    pub regime: TflocRegime,
    pub threshold_lower: f64,
    pub threshold_upper: f64,
    pub ratio: f64,
}

/// Summary of a solved problem. Multiplier fields are NaN unless
/// `has_multipliers` is set; Gaussian fields are NaN unless it is clear.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TflocOptimumInfo {
    pub regime: TflocRegime,
    pub bound: f64,
    pub has_multipliers: bool,
    pub lambda1: f64,
    pub lambda2: f64,
    pub c1: f64,
    pub c2: f64,
    pub t_end: f64,
    pub residual_p: f64,
    pub residual_q: f64,
    pub iterations: u64,
    pub amplitude: f64,
    pub decay: f64,
}

/// Opaque solved problem.
pub struct TflocOptimum {
    inner: Optimum,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TflocStatus {
    match e {
        Error::WrongRegime { .. } => TflocStatus::WrongRegime,
        Error::NonConvergence { .. } | Error::NoBracket { .. } | Error::Quadrature { .. } => TflocStatus::NonConvergence,
        _ => TflocStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard<F: FnOnce() -> Result<(), (TflocStatus, String)>>(f: F) -> TflocStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TflocStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            TflocStatus::Panic
        }
    }
}

fn lift<T>(r: tfloc::Result<T>) -> Result<T, (TflocStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(name: &str) -> (TflocStatus, String) {
    (TflocStatus::NullPointer, format!("{name} is null"))
}

fn to_params(p: &TflocParams) -> tfloc::Result<ProblemParams> {
    ProblemParams::new(p.d, p.p, p.q, p.a, p.b)
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length including the NUL, or
/// 0 when there is no error.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn tfloc_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n - 1) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tfloc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `params` and `out` must be null or valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tfloc_classify(params: *const TflocParams, out: *mut TflocDecision) -> TflocStatus {
    guard(|| {
        let params = params.as_ref().ok_or_else(|| null("params"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let d = classify(&lift(to_params(params))?);
        *out = TflocDecision {
            regime: d.regime.into(),
            threshold_lower: d.threshold_lower,
            threshold_upper: d.threshold_upper,
            ratio: d.ratio,
        };
        Ok(())
    })
}

/// `G(s)` in dimension `d`.
///
/// # Safety
/// `out` must be null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tfloc_g_eval(s: f64, d: u32, out: *mut f64) -> TflocStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = lift(tfloc::regimes::g_eval(s, d))?;
        Ok(())
    })
}

/// # Safety
/// `out` must be null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tfloc_u_eval(
    t: f64,
    lambda1: f64,
    lambda2: f64,
    p: f64,
    q: f64,
    d: u32,
    out: *mut f64,
) -> TflocStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = lift(u_eval(t, lambda1, lambda2, p, q, d))?;
        Ok(())
    })
}

/// Solves `params` in whichever regime applies. On success `*out` owns a new
/// handle.
///
/// # Safety
/// `params` and `out` must be null or valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tfloc_optimize(params: *const TflocParams, tol: f64, out: *mut *mut TflocOptimum) -> TflocStatus {
    guard(|| {
        let params = params.as_ref().ok_or_else(|| null("params"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let inner = lift(optimize(&lift(to_params(params))?, tol))?;
        *out = Box::into_raw(Box::new(TflocOptimum { inner }));
        Ok(())
    })
}

/// # Safety
/// `handle` must be null or come from [`tfloc_optimize`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tfloc_optimum_free(handle: *mut TflocOptimum) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// # Safety
/// `handle` and `out` must be null or valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tfloc_optimum_info(handle: *const TflocOptimum, out: *mut TflocOptimumInfo) -> TflocStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let o = &h.inner;
        let nan = f64::NAN;
        let mut info = TflocOptimumInfo {
            regime: o.decision.regime.into(),
            bound: o.bound,
            has_multipliers: false,
            lambda1: nan,
            lambda2: nan,
            c1: nan,
            c2: nan,
            t_end: nan,
            residual_p: nan,
            residual_q: nan,
            iterations: 0,
            amplitude: nan,
            decay: nan,
        };
        if let Some(s) = &o.solution {
            info.has_multipliers = true;
            info.lambda1 = s.lambda1;
            info.lambda2 = s.lambda2;
            info.c1 = s.c1;
            info.c2 = s.c2;
            info.t_end = s.t_end;
            info.residual_p = s.residual_p;
            info.residual_q = s.residual_q;
            info.iterations = s.iterations as u64;
        }
        if let Profile::Gaussian { amplitude, decay } = o.weight.profile {
            info.amplitude = amplitude;
            info.decay = decay;
        }
        *out = info;
        Ok(())
    })
}

/// `ψ(v)` of an intermediate-regime solution.
///
/// # Safety
/// `handle` and `out` must be null or valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tfloc_optimum_psi(handle: *const TflocOptimum, v: f64, out: *mut f64) -> TflocStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let Some(s) = &h.inner.solution else {
            return Err((
                TflocStatus::WrongRegime,
                format!("psi is only defined in the intermediate regime, not {}", h.inner.decision.regime),
            ));
        };
        *out = lift(s.psi(v))?;
        Ok(())
    })
}

/// Writes `n` equispaced radii in `[0, r_max]` and the profile values there
/// into caller buffers of length `n`.
///
/// # Safety
/// `handle` must be valid; `r_out` and `f_out` must be null or valid for `n` writes.
#[no_mangle]
pub unsafe extern "C" fn tfloc_optimum_profile(
    handle: *const TflocOptimum,
    r_max: f64,
    n: usize,
    r_out: *mut f64,
    f_out: *mut f64,
) -> TflocStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        if r_out.is_null() {
            return Err(null("r_out"));
        }
        if f_out.is_null() {
            return Err(null("f_out"));
        }
        let table = lift(sample_profile(&h.inner.weight, r_max, n))?;
        let Profile::Tabulated(t) = &table.profile else {
            return Err((TflocStatus::Panic, "profile was not tabulated".into()));
        };
        ptr::copy_nonoverlapping(t.r.as_ptr(), r_out, n);
        ptr::copy_nonoverlapping(t.f.as_ptr(), f_out, n);
        Ok(())
    })
}
