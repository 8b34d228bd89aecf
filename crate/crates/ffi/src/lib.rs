//! C ABI for `fibercomplex`.
//!
//! Every function returns an [`FcStatus`]. On failure a message is kept per
//! thread and can be read with [`fc_last_error`]. Handles are opaque and
//! must be released with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;

use fibercomplex::catalog::parse_class_name;
use fibercomplex::cochain::{CochainComplex, CochainError};
use fibercomplex::invariants::{Invariant, InvariantError};
use fibercomplex::morse::{count_fibers, validate_trace, MorseError, MorseTrace};
use fibercomplex::universal::{complex, ComplexVariant, ExpectedFormulae};
use fibercomplex::verify::{verify, VerifyOptions};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidTrace = 4,
    NotCocycle = 5,
    OutOfRange = 6,
    InvalidArgument = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcVariant {
    Full = 0,
    Admissible = 1,
    Morse = 2,
}

impl From<FcVariant> for ComplexVariant {
    fn from(v: FcVariant) -> Self {
        match v {
            FcVariant::Full => ComplexVariant::Full32,
            FcVariant::Admissible => ComplexVariant::Admissible32,
            FcVariant::Morse => ComplexVariant::Morse21,
        }
    }
}

/// One of the universal complexes.
pub struct FcComplex {
    inner: &'static CochainComplex,
}

/// A parsed Morse function trace.
pub struct FcTrace {
    inner: MorseTrace,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn fail(status: FcStatus, msg: impl Into<String>) -> FcStatus {
    set_error(msg);
    status
}

fn guard<F: FnOnce() -> FcStatus + UnwindSafe>(f: F) -> FcStatus {
    catch_unwind(f).unwrap_or_else(|_| fail(FcStatus::Internal, "internal panic"))
}

/// Borrows a C string, or returns the failing status.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, FcStatus> {
    if s.is_null() {
        return Err(fail(FcStatus::NullPointer, "string argument is null"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(FcStatus::InvalidUtf8, "string argument is not UTF-8"))
}

fn invariant_status(e: &InvariantError) -> FcStatus {
    match e {
        InvariantError::Cochain(CochainError::NotCocycle { .. }) => FcStatus::NotCocycle,
        InvariantError::Morse(MorseError::Invalid(_)) => FcStatus::InvalidTrace,
        InvariantError::NotSuspendable(_) => FcStatus::InvalidArgument,
        _ => FcStatus::Parse,
    }
}

macro_rules! out_ptr {
    ($p:expr) => {
        if $p.is_null() {
            return fail(FcStatus::NullPointer, "output pointer is null");
        }
    };
}

macro_rules! handle {
    ($p:expr) => {
        match unsafe { $p.as_ref() } {
            Some(h) => h,
            None => return fail(FcStatus::NullPointer, "handle is null"),
        }
    };
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn fc_complex_new(variant: FcVariant, out: *mut *mut FcComplex) -> FcStatus {
    out_ptr!(out);
    guard(|| {
        let handle = Box::new(FcComplex {
            inner: complex(variant.into()),
        });
        unsafe { *out = Box::into_raw(handle) };
        FcStatus::Ok
    })
}

/// # Safety
/// `c` must come from [`fc_complex_new`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fc_complex_free(c: *mut FcComplex) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Dimension of the cochain group in `degree` (0, 1 or 2).
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_complex_dim(
    c: *const FcComplex,
    degree: u32,
    out: *mut usize,
) -> FcStatus {
    let c = handle!(c);
    out_ptr!(out);
    if degree > 2 {
        return fail(
            FcStatus::OutOfRange,
            format!("degree {degree} is not 0, 1 or 2"),
        );
    }
    *out = c.inner.dim(degree as usize);
    FcStatus::Ok
}

/// Dimension of the cohomology group in `degree` (0, 1 or 2).
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_complex_betti(
    c: *const FcComplex,
    degree: u32,
    out: *mut usize,
) -> FcStatus {
    let c = handle!(c);
    out_ptr!(out);
    if degree > 2 {
        return fail(
            FcStatus::OutOfRange,
            format!("degree {degree} is not 0, 1 or 2"),
        );
    }
    let inner = c.inner;
    guard(move || {
        unsafe { *out = inner.betti(degree as usize) };
        FcStatus::Ok
    })
}

/// `Ok` when the complex has consistent shapes and squares to zero.
///
/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fc_complex_check(c: *const FcComplex) -> FcStatus {
    let c = handle!(c);
    match c.inner.check() {
        Ok(()) => FcStatus::Ok,
        Err(e) => fail(FcStatus::Internal, e.to_string()),
    }
}

/// Parses a trace in the text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_trace_parse(text: *const c_char, out: *mut *mut FcTrace) -> FcStatus {
    out_ptr!(out);
    let s = match read_str(text) {
        Ok(s) => s,
        Err(status) => return status,
    };
    match MorseTrace::parse(s) {
        Ok(t) => {
            *out = Box::into_raw(Box::new(FcTrace { inner: t }));
            FcStatus::Ok
        }
        Err(e) => fail(FcStatus::Parse, e.to_string()),
    }
}

/// # Safety
/// `t` must come from [`fc_trace_parse`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fc_trace_free(t: *mut FcTrace) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_trace_event_count(t: *const FcTrace, out: *mut usize) -> FcStatus {
    let t = handle!(t);
    out_ptr!(out);
    *out = t.inner.events.len();
    FcStatus::Ok
}

/// Writes the number of violated trace invariants (0 for a valid trace).
/// The full report is available through [`fc_last_error`] when nonzero.
///
/// # Safety
/// `t` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_trace_validate(t: *const FcTrace, out: *mut usize) -> FcStatus {
    let t = handle!(t);
    out_ptr!(out);
    let report = validate_trace(&t.inner);
    if !report.is_valid() {
        set_error(report.to_string());
    }
    *out = report.violations.len();
    FcStatus::Ok
}

/// Occurrences of a refined class (for example `bI^2_e`) in a valid trace.
/// An unrefined name counts both refinements.
///
/// # Safety
/// `t` must be a live handle, `class_name` a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_trace_count(
    t: *const FcTrace,
    class_name: *const c_char,
    out: *mut u64,
) -> FcStatus {
    let t = handle!(t);
    out_ptr!(out);
    let s = match read_str(class_name) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let name = match parse_class_name(s) {
        Ok(p) => p.name,
        Err(e) => return fail(FcStatus::Parse, e.to_string()),
    };
    match count_fibers(&t.inner) {
        Ok(counts) => {
            *out = counts.get_unrefined(&name);
            FcStatus::Ok
        }
        Err(e) => fail(FcStatus::InvalidTrace, e.to_string()),
    }
}

/// Value (0 or 1) of the invariant of a degree-one cocycle on a trace.
/// `class_expr` is `alpha`, `beta`, `gamma` or a cochain expression;
/// `variant` must be `Full` or `Admissible`.
///
/// # Safety
/// `t` must be a live handle, `class_expr` a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_invariant_evaluate(
    variant: FcVariant,
    class_expr: *const c_char,
    t: *const FcTrace,
    out: *mut u8,
) -> FcStatus {
    let t = handle!(t);
    out_ptr!(out);
    let s = match read_str(class_expr) {
        Ok(s) => s,
        Err(status) => return status,
    };
    let result = Invariant::parse(variant.into(), s).and_then(|inv| inv.evaluate(&t.inner));
    match result {
        Ok(v) => {
            *out = v.as_u8();
            FcStatus::Ok
        }
        Err(e) => fail(invariant_status(&e), e.to_string()),
    }
}

/// Runs all twelve verification claims with `trials` random traces and
/// writes how many passed.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_verify_all(trials: u64, out: *mut u32) -> FcStatus {
    out_ptr!(out);
    guard(move || {
        let opts = VerifyOptions {
            trials,
            ..VerifyOptions::default()
        };
        let report = verify(ExpectedFormulae::standard(), &opts);
        if let Some(first) = report.failed().next() {
            set_error(first.to_string());
        }
        let passed = report.claims.iter().filter(|c| c.passed).count();
        unsafe { *out = passed as u32 };
        FcStatus::Ok
    })
}
