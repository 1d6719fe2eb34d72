//! C interface to the `ybhom` library: opaque operator handles, status
//! codes, and string-valued results (matrix text, homology JSON).
//!
//! Every fallible call returns a [`YbhStatus`]; on a non-OK status a
//! description is available from [`ybh_last_error_message`] until the next
//! failing call on the same thread. Strings handed out through `out`
//! parameters are owned by the caller and must be released with
//! [`ybh_string_free`]; operator handles with [`ybh_operator_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use ybhom::homology::{compute_homology, expected_for, ExpectKind, HomologyError};
use ybhom::ring::RingMode;
use ybhom::ybop::YBOperator;

/// Result of a C-interface call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YbhStatus {
    Ok = 0,
    /// A pointer was null or an argument was out of range.
    InvalidArgument = 1,
    /// The computation itself reported an error.
    Failed = 2,
    /// The boundary maps do not compose to zero, so homology is undefined.
    BrokenChain = 3,
    /// An internal panic was caught at the boundary.
    Panic = 4,
}

/// Opaque handle around a Yang-Baxter operator.
pub struct YbhOperator {
    inner: YBOperator,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let stored = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(stored));
}

fn invalid(msg: &str) -> YbhStatus {
    set_error(msg.to_string());
    YbhStatus::InvalidArgument
}

fn guard(body: impl FnOnce() -> YbhStatus) -> YbhStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic".to_string());
            YbhStatus::Panic
        }
    }
}

/// Message for the most recent failure on this thread, or null. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ybh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null(), |msg| msg.as_ptr())
    })
}

unsafe fn construct(
    out: *mut *mut YbhOperator,
    build: impl FnOnce() -> Result<YBOperator, ybhom::ybop::OpError>,
) -> YbhStatus {
    if out.is_null() {
        return invalid("out pointer is null");
    }
    *out = ptr::null_mut();
    guard(|| match build() {
        Ok(op) => {
            unsafe { *out = Box::into_raw(Box::new(YbhOperator { inner: op })) };
            YbhStatus::Ok
        }
        Err(e) => invalid(&e.to_string()),
    })
}

/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn ybh_operator_homflypt(m: usize, out: *mut *mut YbhOperator) -> YbhStatus {
    construct(out, || YBOperator::homflypt(m))
}

/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn ybh_operator_homflypt_inverse(
    m: usize,
    out: *mut *mut YbhOperator,
) -> YbhStatus {
    construct(out, || YBOperator::homflypt_inverse(m))
}

/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn ybh_operator_jones(m: usize, out: *mut *mut YbhOperator) -> YbhStatus {
    construct(out, || YBOperator::jones(m))
}

/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn ybh_operator_identity(m: usize, out: *mut *mut YbhOperator) -> YbhStatus {
    construct(out, || YBOperator::identity(m))
}

/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn ybh_operator_kauffman(out: *mut *mut YbhOperator) -> YbhStatus {
    construct(out, YBOperator::kauffman)
}

/// Releases a handle. Null is a no-op.
///
/// # Safety
/// `op` must have come from one of the constructors and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ybh_operator_free(op: *mut YbhOperator) {
    if !op.is_null() {
        drop(unsafe { Box::from_raw(op) });
    }
}

/// Releases a string returned through an `out` parameter. Null is a no-op.
///
/// # Safety
/// `s` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ybh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Checks the Yang-Baxter equation on all basis triples; writes the verdict
/// to `holds`.
///
/// # Safety
/// `op` must be a live handle and `holds` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ybh_verify_ybe(op: *const YbhOperator, holds: *mut bool) -> YbhStatus {
    if op.is_null() || holds.is_null() {
        return invalid("null pointer");
    }
    guard(|| match unsafe { &(*op).inner }.verify_ybe() {
        Ok(report) => {
            unsafe { *holds = report.holds() };
            YbhStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            YbhStatus::Failed
        }
    })
}

/// Checks that `a` and `b` compose to the identity in both orders.
///
/// # Safety
/// `a` and `b` must be live handles and `holds` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ybh_verify_inverse(
    a: *const YbhOperator,
    b: *const YbhOperator,
    holds: *mut bool,
) -> YbhStatus {
    if a.is_null() || b.is_null() || holds.is_null() {
        return invalid("null pointer");
    }
    guard(|| {
        unsafe { *holds = (*a).inner.verify_inverse(&(*b).inner) };
        YbhStatus::Ok
    })
}

/// Writes whether every column of the operator sums to 1.
///
/// # Safety
/// `op` must be a live handle and `unital` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ybh_column_unital(op: *const YbhOperator, unital: *mut bool) -> YbhStatus {
    if op.is_null() || unital.is_null() {
        return invalid("null pointer");
    }
    guard(|| {
        unsafe { *unital = (*op).inner.is_column_unital() };
        YbhStatus::Ok
    })
}

/// Returns the operator's matrix as `;`-separated rows of textual
/// polynomials (one row per line).
///
/// # Safety
/// `op` must be a live handle and `out` a valid pointer to a string slot.
#[no_mangle]
pub unsafe extern "C" fn ybh_operator_matrix_text(
    op: *const YbhOperator,
    out: *mut *mut c_char,
) -> YbhStatus {
    if op.is_null() || out.is_null() {
        return invalid("null pointer");
    }
    unsafe { *out = ptr::null_mut() };
    guard(|| {
        let text = unsafe { &(*op).inner }.to_matrix_text();
        match CString::new(text) {
            Ok(s) => {
                unsafe { *out = s.into_raw() };
                YbhStatus::Ok
            }
            Err(_) => invalid("matrix text contains an interior nul"),
        }
    })
}

fn expect_kind(tag: &str) -> Result<Option<ExpectKind>, String> {
    match tag {
        "" | "none" => Ok(None),
        "thm" => Ok(Some(ExpectKind::Theorem)),
        "table" => Ok(Some(ExpectKind::Table)),
        "conj-pw" => Ok(Some(ExpectKind::ConjecturePw)),
        "conj-h3" => Ok(Some(ExpectKind::ConjectureH3)),
        other => Err(format!("unknown expectation `{other}`")),
    }
}

unsafe fn opt_str<'a>(s: *const c_char, what: &str) -> Result<Option<&'a str>, String> {
    if s.is_null() {
        return Ok(None);
    }
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map(Some)
        .map_err(|_| format!("{what} is not valid UTF-8"))
}

/// Computes `H_n` of the operator's complex and returns the report as a
/// JSON string. `ring_tag` is `"qy"` or `"laurent"` (null means `"qy"`),
/// `expect_tag` one of `none`, `thm`, `table`, `conj-pw`, `conj-h3` (null
/// means `none`), and `cache_dir` an optional boundary cache directory.
///
/// # Safety
/// `op` must be a live handle, `label` a valid C string, `out` a valid
/// pointer to a string slot; the optional strings must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn ybh_homology_json(
    op: *const YbhOperator,
    label: *const c_char,
    n: usize,
    ring_tag: *const c_char,
    expect_tag: *const c_char,
    cache_dir: *const c_char,
    out: *mut *mut c_char,
) -> YbhStatus {
    if op.is_null() || label.is_null() || out.is_null() {
        return invalid("null pointer");
    }
    unsafe { *out = ptr::null_mut() };
    let label = match unsafe { opt_str(label, "label") } {
        Ok(Some(l)) => l,
        Ok(None) => unreachable!(),
        Err(msg) => return invalid(&msg),
    };
    let mode = match unsafe { opt_str(ring_tag, "ring tag") } {
        Ok(tag) => match RingMode::from_tag(tag.unwrap_or("qy")) {
            Some(mode) => mode,
            None => return invalid(&format!("unknown ring `{}`", tag.unwrap_or_default())),
        },
        Err(msg) => return invalid(&msg),
    };
    let expect = match unsafe { opt_str(expect_tag, "expectation tag") } {
        Ok(tag) => match expect_kind(tag.unwrap_or("none")) {
            Ok(kind) => kind,
            Err(msg) => return invalid(&msg),
        },
        Err(msg) => return invalid(&msg),
    };
    let cache = match unsafe { opt_str(cache_dir, "cache directory") } {
        Ok(dir) => dir.map(PathBuf::from),
        Err(msg) => return invalid(&msg),
    };
    guard(|| {
        let operator = unsafe { &(*op).inner };
        match compute_homology(operator, label, n, mode, cache.as_deref()) {
            Ok(result) => {
                let expected = expect.and_then(|k| expected_for(k, result.m, result.n));
                let json = result.report(expected).to_json();
                match CString::new(json) {
                    Ok(s) => {
                        unsafe { *out = s.into_raw() };
                        YbhStatus::Ok
                    }
                    Err(_) => invalid("report contains an interior nul"),
                }
            }
            Err(HomologyError::ChainBroken { m, n }) => {
                set_error(format!("boundary composition is nonzero at m={m} n={n}"));
                YbhStatus::BrokenChain
            }
            Err(e) => {
                set_error(e.to_string());
                YbhStatus::Failed
            }
        }
    })
}
