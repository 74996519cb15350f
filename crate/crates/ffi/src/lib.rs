//! C ABI over `klm-core`. Every fallible call returns a [`KlmStatus`] and writes its
//! result through an out-pointer; `klm_last_error` describes the most recent failure on
//! the calling thread.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};

use klm_core::arith::render_rational;
use klm_core::klcoeff::{kl_poly, Route};
use klm_core::oracle::{char_poly, RankedLattice};
use klm_core::realroot::all_zeros_real_negative;
use klm_core::zcoeff::z_from_kl;
use klm_core::{Certificate, Error, Poly};
use libc::c_char;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KlmStatus {
    Ok = 0,
    InvalidArgument = 1,
    Integrity = 2,
    NullPointer = 3,
    OutOfRange = 4,
    Panic = 5,
}

/// Opaque polynomial with exact rational coefficients.
pub struct KlmPoly(Poly);

/// Opaque certificate.
pub struct KlmCertificate(Certificate);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn status_of(e: &Error) -> KlmStatus {
    match e {
        Error::InvalidArgument(_) => KlmStatus::InvalidArgument,
        Error::Integrity(_) => KlmStatus::Integrity,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (KlmStatus, String)> + UnwindSafe) -> KlmStatus {
    match catch_unwind(f) {
        Ok(Ok(())) => {
            set_error("");
            KlmStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            KlmStatus::Panic
        }
    }
}

fn core<T>(r: klm_core::Result<T>) -> Result<T, (KlmStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (KlmStatus, String) {
    (KlmStatus::NullPointer, "null pointer argument".into())
}

unsafe fn emit_poly(out: *mut *mut KlmPoly, p: Poly) -> Result<(), (KlmStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(KlmPoly(p)));
    Ok(())
}

unsafe fn emit_string(out: *mut *mut c_char, s: String) -> Result<(), (KlmStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    let c = CString::new(s).map_err(|_| (KlmStatus::Integrity, "string contains NUL".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Kazhdan-Lusztig polynomial of `U_{m,d}`.
///
/// # Safety
/// `out` must be valid for a write; free the result with [`klm_poly_free`].
#[no_mangle]
pub unsafe extern "C" fn klm_kl_poly(m: i64, d: i64, out: *mut *mut KlmPoly) -> KlmStatus {
    guard(move || emit_poly(out, core(kl_poly(m, d, Route::Positive))?))
}

/// Z-polynomial of `U_{m,d}`.
///
/// # Safety
/// As for [`klm_kl_poly`].
#[no_mangle]
pub unsafe extern "C" fn klm_z_poly(m: i64, d: i64, out: *mut *mut KlmPoly) -> KlmStatus {
    guard(move || emit_poly(out, core(z_from_kl(m, d))?))
}

/// Characteristic polynomial of `U_{m,d}` from its lattice of flats.
///
/// # Safety
/// As for [`klm_kl_poly`].
#[no_mangle]
pub unsafe extern "C" fn klm_char_poly(m: i64, d: i64, out: *mut *mut KlmPoly) -> KlmStatus {
    guard(move || {
        if m < 0 || d < 0 {
            return Err((KlmStatus::InvalidArgument, format!("need m, d >= 0, got ({m}, {d})")));
        }
        emit_poly(out, char_poly(&RankedLattice::Uniform { m: m as usize, d: d as usize }))
    })
}

/// Degree, or -1 for the zero polynomial.
///
/// # Safety
/// `p` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn klm_poly_degree(p: *const KlmPoly, out: *mut i64) -> KlmStatus {
    guard(move || {
        let (Some(p), false) = (p.as_ref(), out.is_null()) else {
            return Err(null());
        };
        *out = p.0.degree().map_or(-1, |n| n as i64);
        Ok(())
    })
}

/// Coefficient of `t^k` as a decimal or `p/q` string; free with [`klm_string_free`].
///
/// # Safety
/// `p` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn klm_poly_coeff(p: *const KlmPoly, k: usize, out: *mut *mut c_char) -> KlmStatus {
    guard(move || {
        let p = p.as_ref().ok_or_else(null)?;
        if k >= p.0.coeffs().len() && !p.0.is_zero() {
            return Err((KlmStatus::OutOfRange, format!("no coefficient at index {k}")));
        }
        emit_string(out, render_rational(&p.0.coeff(k)))
    })
}

/// Canonical ascending rendering in `t`; free with [`klm_string_free`].
///
/// # Safety
/// `p` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn klm_poly_render(p: *const KlmPoly, out: *mut *mut c_char) -> KlmStatus {
    guard(move || {
        let p = p.as_ref().ok_or_else(null)?;
        emit_string(out, p.0.render("t"))
    })
}

/// # Safety
/// `p` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn klm_poly_free(p: *mut KlmPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn klm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Certifies that every zero of `p` is real and negative.
///
/// # Safety
/// `p` must be a live handle and `out` valid for a write; free the result with
/// [`klm_certificate_free`].
#[no_mangle]
pub unsafe extern "C" fn klm_certify_negative_zeros(
    p: *const KlmPoly,
    out: *mut *mut KlmCertificate,
) -> KlmStatus {
    guard(move || {
        let (Some(p), false) = (p.as_ref(), out.is_null()) else {
            return Err(null());
        };
        let cert = core(all_zeros_real_negative(&p.0))?;
        *out = Box::into_raw(Box::new(KlmCertificate(cert)));
        Ok(())
    })
}

/// 1 for a passing certificate, 0 for failing, -1 for null.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn klm_certificate_passed(c: *const KlmCertificate) -> i32 {
    c.as_ref().map_or(-1, |c| c.0.passed() as i32)
}

/// # Safety
/// `c` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn klm_certificate_json(c: *const KlmCertificate, out: *mut *mut c_char) -> KlmStatus {
    guard(move || {
        let c = c.as_ref().ok_or_else(null)?;
        emit_string(out, c.0.to_json())
    })
}

/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn klm_certificate_free(c: *mut KlmCertificate) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Message for the last failing call on this thread (empty after a success). The pointer
/// stays valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn klm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Copies the last error message; handy for Rust callers and tests.
pub fn last_error_string() -> String {
    // SAFETY: klm_last_error returns a valid NUL-terminated string owned by the thread-local.
    unsafe { CStr::from_ptr(klm_last_error()) }.to_string_lossy().into_owned()
}

