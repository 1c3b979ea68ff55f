//! C ABI for `varexp`.
//!
//! Every fallible function returns a [`VxStatus`] and writes its results
//! through out-pointers. On failure a message is kept per thread and can be
//! read with [`vx_last_error`]. Objects are opaque handles released with their
//! `_free` function; strings returned by the library are released with
//! [`vx_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use varexp::hilbert::{discrete_hilbert, pointwise_bound, HilbertOptions};
use varexp::space::{luxemburg_norm_seq, modular_seq};
use varexp::verify::{estimate_operator_norm, run_suite, SuiteConfig};
use varexp::{conjugate, Error, ExponentSequence, Sequence, Window};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    UnknownName = 4,
    /// A norm was computed but its modular missed the tolerance.
    Tolerance = 5,
    Io = 6,
    Panic = 7,
}

/// Exact summation, for the `method` argument of [`vx_hilbert`].
pub const VX_HILBERT_DIRECT: u32 = 0;
/// Zero-padded FFT convolution.
pub const VX_HILBERT_FFT: u32 = 1;

/// An exponent sequence.
pub struct VxExponent(ExponentSequence);

/// A real sequence on a finite window.
pub struct VxSequence(Sequence);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> VxStatus {
    match e {
        Error::Io(_) => VxStatus::Io,
        Error::Parse(_) | Error::Json(_) => VxStatus::Parse,
        Error::UnknownSuite(_) | Error::UnknownSymbol(_) => VxStatus::UnknownName,
        _ => VxStatus::InvalidArgument,
    }
}

fn fail(e: Error) -> VxStatus {
    let status = status_of(&e);
    set_error(e.to_string());
    status
}

/// Runs `f`, turning panics into `VxStatus::Panic`.
fn guard(f: impl FnOnce() -> VxStatus) -> VxStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            VxStatus::Panic
        }
    }
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            set_error(concat!("`", stringify!($p), "` is null"));
            return VxStatus::NullPointer;
        })+
    };
}

macro_rules! try_vx {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return fail(e),
        }
    };
}

unsafe fn slice<'a>(values: *const f64, len: usize) -> &'a [f64] {
    if len == 0 {
        &[]
    } else {
        std::slice::from_raw_parts(values, len)
    }
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, Error> {
    CStr::from_ptr(s).to_str().map_err(|_| Error::Parse("string argument is not UTF-8".into()))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// The message of the last failure on this thread, or null. Valid until the
/// next library call on the same thread.
#[no_mangle]
pub extern "C" fn vx_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn vx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vx_exponent_constant(q: f64, out: *mut *mut VxExponent) -> VxStatus {
    guard(|| {
        non_null!(out);
        let p = try_vx!(ExponentSequence::constant(q));
        *out = Box::into_raw(Box::new(VxExponent(p)));
        VxStatus::Ok
    })
}

/// `values[i]` is the exponent at index `window_start + i`; `tail` applies elsewhere.
///
/// # Safety
/// `values` must point to `len` doubles (it may be null when `len` is 0) and
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn vx_exponent_new(
    window_start: i64,
    values: *const f64,
    len: usize,
    tail: f64,
    out: *mut *mut VxExponent,
) -> VxStatus {
    guard(|| {
        non_null!(out);
        if len > 0 {
            non_null!(values);
        }
        let p = try_vx!(ExponentSequence::new(window_start, slice(values, len).to_vec(), tail));
        *out = Box::into_raw(Box::new(VxExponent(p)));
        VxStatus::Ok
    })
}

/// The exponent at index `n`.
///
/// # Safety
/// `p` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn vx_exponent_get(p: *const VxExponent, n: i64, out: *mut f64) -> VxStatus {
    guard(|| {
        non_null!(p, out);
        *out = (*p).0.get(n);
        VxStatus::Ok
    })
}

/// # Safety
/// `p` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn vx_exponent_free(p: *mut VxExponent) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `values` must point to `len` doubles (it may be null when `len` is 0) and
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn vx_sequence_new(
    window_start: i64,
    values: *const f64,
    len: usize,
    out: *mut *mut VxSequence,
) -> VxStatus {
    guard(|| {
        non_null!(out);
        if len > 0 {
            non_null!(values);
        }
        let v = slice(values, len);
        if v.iter().any(|x| !x.is_finite()) {
            set_error("sequence values must be finite");
            return VxStatus::InvalidArgument;
        }
        *out = Box::into_raw(Box::new(VxSequence(Sequence::new(window_start, v.to_vec()))));
        VxStatus::Ok
    })
}

/// Parses `{"window_start": ..., "values": [...]}`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn vx_sequence_from_json(json: *const c_char, out: *mut *mut VxSequence) -> VxStatus {
    guard(|| {
        non_null!(json, out);
        let text = try_vx!(str_arg(json));
        let b: Sequence = try_vx!(serde_json::from_str(text).map_err(Error::from));
        *out = Box::into_raw(Box::new(VxSequence(b)));
        VxStatus::Ok
    })
}

/// # Safety
/// `b` and `out` must be valid; free the string with [`vx_string_free`].
#[no_mangle]
pub unsafe extern "C" fn vx_sequence_to_json(b: *const VxSequence, out: *mut *mut c_char) -> VxStatus {
    guard(|| {
        non_null!(b, out);
        let s = try_vx!(serde_json::to_string(&(*b).0).map_err(Error::from));
        *out = into_c_string(s);
        VxStatus::Ok
    })
}

/// # Safety
/// `b`, `start` and `len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn vx_sequence_window(b: *const VxSequence, start: *mut i64, len: *mut usize) -> VxStatus {
    guard(|| {
        non_null!(b, start, len);
        let w = (*b).0.window();
        *start = w.start;
        *len = w.len;
        VxStatus::Ok
    })
}

/// Copies up to `cap` values into `out`; `written` receives the full length.
///
/// # Safety
/// `b` and `written` must be valid and `out` must have room for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn vx_sequence_values(
    b: *const VxSequence,
    out: *mut f64,
    cap: usize,
    written: *mut usize,
) -> VxStatus {
    guard(|| {
        non_null!(b, written);
        let values = (*b).0.values();
        let n = values.len().min(cap);
        if n > 0 {
            non_null!(out);
            ptr::copy_nonoverlapping(values.as_ptr(), out, n);
        }
        *written = values.len();
        VxStatus::Ok
    })
}

/// # Safety
/// `b` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn vx_sequence_free(b: *mut VxSequence) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// `sum_n |b_n|^{p_n}`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn vx_modular(b: *const VxSequence, p: *const VxExponent, out: *mut f64) -> VxStatus {
    guard(|| {
        non_null!(b, p, out);
        *out = modular_seq(&(*b).0, &(*p).0);
        VxStatus::Ok
    })
}

/// The Luxemburg norm. On `Tolerance` the value is still written.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn vx_luxemburg_norm(
    b: *const VxSequence,
    p: *const VxExponent,
    tol: f64,
    out: *mut f64,
) -> VxStatus {
    guard(|| {
        non_null!(b, p, out);
        let r = try_vx!(luxemburg_norm_seq(&(*b).0, &(*p).0, tol));
        *out = r.value;
        if r.tolerance_met {
            VxStatus::Ok
        } else {
            set_error(format!("modular at the computed norm is {}", r.modular_at_value));
            VxStatus::Tolerance
        }
    })
}

/// `(Hb)_n` for `n` in `[out_start, out_start + out_len)`.
///
/// # Safety
/// `b` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn vx_hilbert(
    b: *const VxSequence,
    out_start: i64,
    out_len: usize,
    method: u32,
    out: *mut *mut VxSequence,
) -> VxStatus {
    guard(|| {
        non_null!(b, out);
        let opts = match method {
            VX_HILBERT_DIRECT => HilbertOptions::direct(),
            VX_HILBERT_FFT => HilbertOptions::fft(),
            other => {
                set_error(format!("unknown method {other}"));
                return VxStatus::InvalidArgument;
            }
        };
        let hb = try_vx!(discrete_hilbert(&(*b).0, Window::new(out_start, out_len), &opts));
        *out = Box::into_raw(Box::new(VxSequence(hb)));
        VxStatus::Ok
    })
}

/// `4 * 2^{-2/p} / (1 - 2^{-1/p})`, the bound on `sup_n |Hb_n|` for `||b|| <= 1`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn vx_pointwise_bound(p_bar: f64, out: *mut f64) -> VxStatus {
    guard(|| {
        non_null!(out);
        *out = try_vx!(pointwise_bound(p_bar)).constant;
        VxStatus::Ok
    })
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn vx_conjugate(p: f64, out: *mut f64) -> VxStatus {
    guard(|| {
        non_null!(out);
        *out = try_vx!(conjugate(p));
        VxStatus::Ok
    })
}

/// Lower bound for the norm of `H` on `l^{p_n}` over the window
/// `[start, start + len)`. `witness` may be null; otherwise it receives the
/// maximizing sequence.
///
/// # Safety
/// `p` and `lower_bound` must be valid; `witness` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn vx_estimate_norm(
    p: *const VxExponent,
    start: i64,
    len: usize,
    trials: usize,
    seed: u64,
    lower_bound: *mut f64,
    witness: *mut *mut VxSequence,
) -> VxStatus {
    guard(|| {
        non_null!(p, lower_bound);
        let est = try_vx!(estimate_operator_norm(&(*p).0, Window::new(start, len), trials, seed));
        *lower_bound = est.lower_bound;
        if !witness.is_null() {
            *witness = Box::into_raw(Box::new(VxSequence(est.witness)));
        }
        VxStatus::Ok
    })
}

/// Runs a check suite. `config_json` may be null for defaults. The report is
/// returned as JSON in `report`; `passed` is set to 1 or 0.
///
/// # Safety
/// `name`, and `config_json` when non-null, must be nul-terminated strings;
/// `report` and `passed` must be valid.
#[no_mangle]
pub unsafe extern "C" fn vx_run_suite(
    name: *const c_char,
    config_json: *const c_char,
    report: *mut *mut c_char,
    passed: *mut c_int,
) -> VxStatus {
    guard(|| {
        non_null!(name, report, passed);
        let name = try_vx!(str_arg(name));
        let cfg: SuiteConfig = if config_json.is_null() {
            SuiteConfig::default()
        } else {
            try_vx!(serde_json::from_str(try_vx!(str_arg(config_json))).map_err(Error::from))
        };
        let r = try_vx!(run_suite(name, &cfg));
        *passed = r.passed as c_int;
        *report = into_c_string(try_vx!(r.to_json()));
        VxStatus::Ok
    })
}
