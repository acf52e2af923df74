//! C ABI over the core library: opaque LP handles, status codes, and a
//! thread-local last-error message. The generated header lives at
//! `include/pathlab.h` and is kept in the tree by the build script.
//!
//! Ownership rules: every `*mut PathlabLp` produced here is freed with
//! [`pathlab_lp_free`], every string with [`pathlab_string_free`]. Output
//! buffers are caller-allocated; their required lengths come from
//! [`pathlab_lp_rows`] / [`pathlab_lp_cols`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use nalgebra::DVector;
use pathlab::barrier::Barrier;
use pathlab::centering::{center, solve_lp, CenterOptions, Mu};
use pathlab::error::Error;
use pathlab::io::LpFile;
use pathlab::lp::{generate_lw, LinearProgram, LwParams};
use pathlab::oracle::min_value_oracle;

/// Opaque handle to a loaded linear program.
pub struct PathlabLp(LinearProgram);

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathlabStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Arguments were structurally invalid (bad dimensions, bad params).
    InvalidArgument = 2,
    /// The computation failed numerically (lost interiority, no
    /// convergence, enumeration guard, ...).
    NumericalError = 3,
    /// JSON could not be parsed or produced.
    JsonError = 4,
    /// A string argument was not valid UTF-8.
    Utf8Error = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(err: &Error) -> PathlabStatus {
    set_error(&err.to_string());
    match err {
        Error::Dimension { .. }
        | Error::InvalidParameter(_)
        | Error::MissingOptimalValue
        | Error::MissingInteriorWitness => PathlabStatus::InvalidArgument,
        Error::Json(_) => PathlabStatus::JsonError,
        _ => PathlabStatus::NumericalError,
    }
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread. Never null.
#[no_mangle]
pub extern "C" fn pathlab_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parses an LP from interchange JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string, `out` a valid pointer. On
/// `Ok`, `*out` owns a handle that must be freed with `pathlab_lp_free`.
#[no_mangle]
pub unsafe extern "C" fn pathlab_lp_from_json(
    json: *const c_char,
    out: *mut *mut PathlabLp,
) -> PathlabStatus {
    if json.is_null() || out.is_null() {
        set_error("null pointer argument");
        return PathlabStatus::NullPointer;
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("json argument is not valid UTF-8");
            return PathlabStatus::Utf8Error;
        }
    };
    let file: LpFile = match serde_json::from_str(text) {
        Ok(f) => f,
        Err(e) => {
            set_error(&e.to_string());
            return PathlabStatus::JsonError;
        }
    };
    match LinearProgram::try_from(file) {
        Ok(lp) => {
            *out = Box::into_raw(Box::new(PathlabLp(lp)));
            PathlabStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Generates the worst-case instance with `r` blocks and parameter `t`.
///
/// # Safety
/// `out` must be a valid pointer; on `Ok`, `*out` owns a handle that must
/// be freed with `pathlab_lp_free`.
#[no_mangle]
pub unsafe extern "C" fn pathlab_lp_lw(r: u32, t: f64, out: *mut *mut PathlabLp) -> PathlabStatus {
    if out.is_null() {
        set_error("null pointer argument");
        return PathlabStatus::NullPointer;
    }
    match LwParams::new(r, t) {
        Ok(params) => {
            *out = Box::into_raw(Box::new(PathlabLp(generate_lw(params))));
            PathlabStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Frees a handle. Null is a no-op.
///
/// # Safety
/// `lp` must be null or a pointer previously returned by this library
/// and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pathlab_lp_free(lp: *mut PathlabLp) {
    if !lp.is_null() {
        drop(Box::from_raw(lp));
    }
}

/// Number of constraints (rows of A). Zero for a null handle.
///
/// # Safety
/// `lp` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn pathlab_lp_rows(lp: *const PathlabLp) -> usize {
    lp.as_ref().map_or(0, |h| h.0.num_constraints())
}

/// Number of variables (columns of A). Zero for a null handle.
///
/// # Safety
/// `lp` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn pathlab_lp_cols(lp: *const PathlabLp) -> usize {
    lp.as_ref().map_or(0, |h| h.0.num_vars())
}

/// Serializes a handle back to interchange JSON.
///
/// # Safety
/// `lp` must be a live handle, `out` a valid pointer. On `Ok`, `*out`
/// owns a NUL-terminated string freed with `pathlab_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pathlab_lp_to_json(
    lp: *const PathlabLp,
    out: *mut *mut c_char,
) -> PathlabStatus {
    let Some(handle) = lp.as_ref() else {
        set_error("null pointer argument");
        return PathlabStatus::NullPointer;
    };
    if out.is_null() {
        set_error("null pointer argument");
        return PathlabStatus::NullPointer;
    }
    let file = LpFile::from(&handle.0);
    match serde_json::to_string_pretty(&file) {
        Ok(text) => match CString::new(text) {
            Ok(cstr) => {
                *out = cstr.into_raw();
                PathlabStatus::Ok
            }
            Err(_) => {
                set_error("serialized JSON contained an interior NUL");
                PathlabStatus::JsonError
            }
        },
        Err(e) => {
            set_error(&e.to_string());
            PathlabStatus::JsonError
        }
    }
}

/// Frees a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be null or a pointer previously returned by this library and
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pathlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Follows the central path down to duality gap `tol` and writes the
/// solution into `x_out` and its objective value into `value_out`.
/// The instance must carry an interior witness.
///
/// # Safety
/// `lp` must be a live handle; `x_out` must point to at least
/// `pathlab_lp_cols(lp)` doubles; `value_out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pathlab_solve(
    lp: *const PathlabLp,
    tol: f64,
    x_out: *mut f64,
    value_out: *mut f64,
) -> PathlabStatus {
    let Some(handle) = lp.as_ref() else {
        set_error("null pointer argument");
        return PathlabStatus::NullPointer;
    };
    if x_out.is_null() || value_out.is_null() {
        set_error("null pointer argument");
        return PathlabStatus::NullPointer;
    }
    match solve_lp(&handle.0, tol) {
        Ok(res) => {
            std::ptr::copy_nonoverlapping(res.x.as_slice().as_ptr(), x_out, res.x.len());
            *value_out = res.value;
            PathlabStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Centers at barrier parameter `mu` with the log barrier, starting from
/// the instance's interior witness; an infinite `mu` computes the
/// analytic center. Writes the point into `x_out` and the final Newton
/// decrement into `decrement_out`.
///
/// # Safety
/// `lp` must be a live handle; `x_out` must point to at least
/// `pathlab_lp_cols(lp)` doubles; `decrement_out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pathlab_center(
    lp: *const PathlabLp,
    mu: f64,
    tol: f64,
    x_out: *mut f64,
    decrement_out: *mut f64,
) -> PathlabStatus {
    let Some(handle) = lp.as_ref() else {
        set_error("null pointer argument");
        return PathlabStatus::NullPointer;
    };
    if x_out.is_null() || decrement_out.is_null() {
        set_error("null pointer argument");
        return PathlabStatus::NullPointer;
    }
    let mu = if mu.is_infinite() && mu > 0.0 {
        Mu::Infinite
    } else {
        match Mu::finite(mu) {
            Ok(m) => m,
            Err(e) => return fail(&e),
        }
    };
    let inner = &handle.0;
    let Some(witness) = inner.interior_witness.clone() else {
        return fail(&Error::MissingInteriorWitness);
    };
    let bar = Barrier::log(inner);
    let opts = CenterOptions::with_tol(tol);
    match center(&bar, mu, &witness, &opts) {
        Ok(res) => {
            std::ptr::copy_nonoverlapping(res.x.as_slice().as_ptr(), x_out, res.x.len());
            *decrement_out = res.newton_decrement;
            PathlabStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Exact minimum objective value by basis enumeration. `guard` caps the
/// number of basis combinations (0 uses the built-in default).
///
/// # Safety
/// `lp` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pathlab_min_value_oracle(
    lp: *const PathlabLp,
    guard: u64,
    out: *mut f64,
) -> PathlabStatus {
    let Some(handle) = lp.as_ref() else {
        set_error("null pointer argument");
        return PathlabStatus::NullPointer;
    };
    if out.is_null() {
        set_error("null pointer argument");
        return PathlabStatus::NullPointer;
    }
    let guard = if guard == 0 {
        None
    } else {
        Some(guard as u128)
    };
    match min_value_oracle(&handle.0, guard) {
        Ok(v) => {
            *out = v;
            PathlabStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Duality gap of a candidate point, available when the instance carries
/// its optimal value. `x` holds `pathlab_lp_cols(lp)` doubles.
///
/// # Safety
/// `lp` must be a live handle; `x` must point to `pathlab_lp_cols(lp)`
/// doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pathlab_gap(
    lp: *const PathlabLp,
    x: *const f64,
    out: *mut f64,
) -> PathlabStatus {
    let Some(handle) = lp.as_ref() else {
        set_error("null pointer argument");
        return PathlabStatus::NullPointer;
    };
    if x.is_null() || out.is_null() {
        set_error("null pointer argument");
        return PathlabStatus::NullPointer;
    }
    let n = handle.0.num_vars();
    let point = DVector::from_column_slice(std::slice::from_raw_parts(x, n));
    match handle.0.gap(&point) {
        Ok(v) => {
            *out = v;
            PathlabStatus::Ok
        }
        Err(e) => fail(&e),
    }
}
