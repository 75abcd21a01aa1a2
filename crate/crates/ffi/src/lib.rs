//! C ABI over the `zeromode` library.
//!
//! Every entry point returns a [`ZmStatus`]. Objects cross the boundary as
//! opaque handles created by `zm_*_new`/`zm_*_load`/`zm_*_run` and released
//! with the matching `zm_*_free`. On failure the message is kept per thread
//! and can be copied out with [`zm_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use zeromode::decay_lab::{bootstrap_exponents, parse_rational, BootstrapRun};
use zeromode::field_zoo::{load_field, lp_norm, FieldModel, LpQuadrature};
use zeromode::quotient::{
    assemble_forms, minimize_quotient, zero_mode_residual, EigenOptions, FormOptions, RayleighResult, Scheme,
    SpinorSource,
};
use zeromode::spinor_calculus::GridSpec;
use zeromode::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The computation ran but a numerical or hypothesis check failed.
    Numeric = 3,
    Panic = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZmScheme {
    Centered = 0,
    Peierls = 1,
}

impl From<ZmScheme> for Scheme {
    fn from(s: ZmScheme) -> Self {
        match s {
            ZmScheme::Centered => Scheme::Centered,
            ZmScheme::Peierls => Scheme::Peierls,
        }
    }
}

/// Eigensolver and discretization settings for [`zm_quotient_run`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct ZmQuotientOptions {
    pub h: f64,
    pub half_width: f64,
    pub scheme: ZmScheme,
    pub tol: f64,
    pub max_iter: u32,
    pub block: u32,
    pub seed: u64,
    pub shift: f64,
}

/// A loaded field with its optional potential and spinor.
pub struct ZmField(FieldModel);

/// Result of a quotient minimization.
pub struct ZmQuotient(RayleighResult);

/// Exact bootstrap exponent sequence.
pub struct ZmBootstrap(BootstrapRun);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> ZmStatus {
    if e.is_validation_failure() {
        ZmStatus::Numeric
    } else {
        ZmStatus::InvalidArgument
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ZmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ZmStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            ZmStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            let s = status_of(&e);
            set_error(e.to_string());
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            ZmStatus::Panic
        }
    }
}

unsafe fn arg<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn string<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Lib(Error::InvalidArgument(format!("{what} is not valid UTF-8"))))
}

/// Copies the calling thread's last error message, NUL-terminated and
/// truncated to `len` bytes. Returns the full message length (without NUL).
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn zm_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn zm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Loads a built-in field by label or a JSON field document by path.
///
/// # Safety
/// `source` must be a NUL-terminated string; `out_field` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zm_field_load(source: *const c_char, out_field: *mut *mut ZmField) -> ZmStatus {
    guard(|| {
        let slot = out(out_field, "out_field")?;
        *slot = ptr::null_mut();
        let (_, model) = load_field(string(source, "source")?)?;
        *slot = Box::into_raw(Box::new(ZmField(model)));
        Ok(())
    })
}

/// # Safety
/// `field` must be null or a handle from [`zm_field_load`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zm_field_free(field: *mut ZmField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Evaluates `B(x)`.
///
/// # Safety
/// `x` and `b` must point to three doubles.
#[no_mangle]
pub unsafe extern "C" fn zm_field_eval(field: *const ZmField, x: *const f64, b: *mut f64) -> ZmStatus {
    guard(|| {
        let f = arg(field, "field")?;
        let x = arg(x.cast::<[f64; 3]>(), "x")?;
        *out(b.cast::<[f64; 3]>(), "b")? = f.0.field.eval(*x);
        Ok(())
    })
}

/// Evaluates the vector potential `A(x)`; invalid argument if the field has none.
///
/// # Safety
/// `x` and `a` must point to three doubles.
#[no_mangle]
pub unsafe extern "C" fn zm_field_potential(field: *const ZmField, x: *const f64, a: *mut f64) -> ZmStatus {
    guard(|| {
        let f = arg(field, "field")?;
        let x = arg(x.cast::<[f64; 3]>(), "x")?;
        let pot = f.0.potential.as_ref().ok_or_else(|| Error::InvalidArgument("field has no vector potential".into()))?;
        *out(a.cast::<[f64; 3]>(), "a")? = pot.eval(*x);
        Ok(())
    })
}

/// `‖B‖_p` with the default quadrature.
///
/// # Safety
/// `field` must be a live handle; `value` writable.
#[no_mangle]
pub unsafe extern "C" fn zm_field_lp_norm(field: *const ZmField, p: f64, value: *mut f64) -> ZmStatus {
    guard(|| {
        let f = arg(field, "field")?;
        let v = out(value, "value")?;
        *v = lp_norm(&f.0.field, p, &LpQuadrature::default())?.value;
        Ok(())
    })
}

/// Defaults matching the command-line tool.
#[no_mangle]
pub extern "C" fn zm_quotient_options_default() -> ZmQuotientOptions {
    let e = EigenOptions::default();
    ZmQuotientOptions {
        h: 0.25,
        half_width: 6.0,
        scheme: ZmScheme::Centered,
        tol: e.tol,
        max_iter: e.max_iter as u32,
        block: e.block as u32,
        seed: e.seed,
        shift: e.shift,
    }
}

/// Minimizes the discrete quotient for the field's potential.
///
/// # Safety
/// `field` and `options` must be valid; `out_result` writable.
#[no_mangle]
pub unsafe extern "C" fn zm_quotient_run(
    field: *const ZmField,
    options: *const ZmQuotientOptions,
    out_result: *mut *mut ZmQuotient,
) -> ZmStatus {
    guard(|| {
        let slot = out(out_result, "out_result")?;
        *slot = ptr::null_mut();
        let f = arg(field, "field")?;
        let o = *arg(options, "options")?;
        let pot = f.0.potential.as_ref().ok_or_else(|| Error::InvalidArgument("field has no vector potential".into()))?;
        let spec = GridSpec::new(o.h, o.half_width)?;
        let forms = assemble_forms(pot, &f.0.field, spec, &FormOptions { scheme: o.scheme.into(), ..Default::default() })?;
        let eig = EigenOptions {
            tol: o.tol,
            max_iter: o.max_iter as usize,
            block: o.block as usize,
            seed: o.seed,
            shift: o.shift,
        };
        *slot = Box::into_raw(Box::new(ZmQuotient(minimize_quotient(&forms, &eig)?)));
        Ok(())
    })
}

/// # Safety
/// `result` must be null or a live handle from [`zm_quotient_run`].
#[no_mangle]
pub unsafe extern "C" fn zm_quotient_free(result: *mut ZmQuotient) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `result` must be a live handle; outputs writable or null to skip.
#[no_mangle]
pub unsafe extern "C" fn zm_quotient_get(
    result: *const ZmQuotient,
    lambda_min: *mut f64,
    delta_surrogate: *mut f64,
    iterations: *mut u32,
) -> ZmStatus {
    guard(|| {
        let r = &arg(result, "result")?.0;
        if let Some(v) = lambda_min.as_mut() {
            *v = r.lambda_min;
        }
        if let Some(v) = delta_surrogate.as_mut() {
            *v = r.delta_surrogate;
        }
        if let Some(v) = iterations.as_mut() {
            *v = r.iterations as u32;
        }
        Ok(())
    })
}

/// `‖Dψ‖/‖ψ‖` on the grid for the field's own potential and zero-mode spinor.
///
/// # Safety
/// `field` must be a live handle; `value` writable.
#[no_mangle]
pub unsafe extern "C" fn zm_zero_mode_residual(
    field: *const ZmField,
    h: f64,
    half_width: f64,
    scheme: ZmScheme,
    value: *mut f64,
) -> ZmStatus {
    guard(|| {
        let f = arg(field, "field")?;
        let v = out(value, "value")?;
        let pot = f.0.potential.as_ref().ok_or_else(|| Error::InvalidArgument("field has no vector potential".into()))?;
        let psi = f.0.spinor.as_ref().ok_or_else(|| Error::InvalidArgument("field has no zero-mode spinor".into()))?;
        let spec = GridSpec::new(h, half_width)?;
        *v = zero_mode_residual(pot, SpinorSource::Evaluator(psi.as_ref()), spec, scheme.into())?;
        Ok(())
    })
}

/// Runs the exponent bootstrap; `p` and `alpha` are integers, fractions
/// (`"1/2"`) or decimals.
///
/// # Safety
/// Strings must be NUL-terminated; `out_run` writable.
#[no_mangle]
pub unsafe extern "C" fn zm_bootstrap_run(p: *const c_char, alpha: *const c_char, out_run: *mut *mut ZmBootstrap) -> ZmStatus {
    guard(|| {
        let slot = out(out_run, "out_run")?;
        *slot = ptr::null_mut();
        let p = parse_rational(string(p, "p")?)?;
        let alpha = parse_rational(string(alpha, "alpha")?)?;
        *slot = Box::into_raw(Box::new(ZmBootstrap(bootstrap_exponents(&p, &alpha)?)));
        Ok(())
    })
}

/// # Safety
/// `run` must be null or a live handle from [`zm_bootstrap_run`].
#[no_mangle]
pub unsafe extern "C" fn zm_bootstrap_free(run: *mut ZmBootstrap) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Number of steps; the sequence has `steps + 1` entries.
///
/// # Safety
/// `run` must be a live handle; `steps` writable.
#[no_mangle]
pub unsafe extern "C" fn zm_bootstrap_steps(run: *const ZmBootstrap, steps: *mut u32) -> ZmStatus {
    guard(|| {
        *out(steps, "steps")? = arg(run, "run")?.0.steps as u32;
        Ok(())
    })
}

/// Entry `k` as an exact fraction. Invalid argument when it does not fit in 64 bits.
///
/// # Safety
/// `run` must be a live handle; `num` and `den` writable.
#[no_mangle]
pub unsafe extern "C" fn zm_bootstrap_epsilon(run: *const ZmBootstrap, k: u32, num: *mut i64, den: *mut u64) -> ZmStatus {
    guard(|| {
        let r = &arg(run, "run")?.0;
        let num = out(num, "num")?;
        let den = out(den, "den")?;
        let e = r
            .sequence
            .get(k as usize)
            .ok_or_else(|| Error::InvalidArgument(format!("index {k} beyond {} entries", r.sequence.len())))?;
        let too_big = || Error::InvalidArgument(format!("{e} does not fit in 64 bits"));
        *num = i64::try_from(e.numer()).map_err(|_| too_big())?;
        *den = u64::try_from(e.denom()).map_err(|_| too_big())?;
        Ok(())
    })
}
