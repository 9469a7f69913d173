//! C ABI over `spinforge`. Multivectors (coefficients in `Q(zeta_8)`) are
//! opaque handles; structured results come back as JSON strings that the
//! caller releases with [`sf_string_free`].
//!
//! Every function returns an [`SfStatus`]; on failure the message is kept in
//! a thread-local slot readable through [`sf_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use spinforge::clifford::MultiVector;
use spinforge::coeff::Cyclo8;
use spinforge::spingroup::{self, SpinElement};
use spinforge::{galois, rootdata, Error};

#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SfStatus {
    SF_OK = 0,
    SF_NULL_POINTER = 1,
    SF_INVALID_UTF8 = 2,
    SF_PARSE_ERROR = 3,
    SF_INVALID_DIMENSION = 4,
    SF_NOT_IN_GROUP = 5,
    SF_BOUND_EXHAUSTED = 6,
    SF_PRECONDITION = 7,
    SF_INTERNAL = 8,
}

/// Opaque multivector handle.
pub struct SfMultiVector {
    inner: MultiVector<Cyclo8>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SfStatus {
    set_error(&e.to_string());
    match e {
        Error::Parse(_) => SfStatus::SF_PARSE_ERROR,
        Error::InvalidDimension(..) | Error::DimensionMismatch(..) => SfStatus::SF_INVALID_DIMENSION,
        Error::Membership(_) => SfStatus::SF_NOT_IN_GROUP,
        Error::BoundExhausted(_) => SfStatus::SF_BOUND_EXHAUSTED,
        Error::Precondition(_) | Error::InvalidModulus(_) | Error::RankMismatch(..) => SfStatus::SF_PRECONDITION,
        _ => SfStatus::SF_INTERNAL,
    }
}

fn guard(f: impl FnOnce() -> Result<(), SfStatus>) -> SfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SfStatus::SF_OK,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside spinforge");
            SfStatus::SF_INTERNAL
        }
    }
}

fn null() -> SfStatus {
    set_error("null pointer argument");
    SfStatus::SF_NULL_POINTER
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, SfStatus> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("input is not valid UTF-8");
        SfStatus::SF_INVALID_UTF8
    })
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), SfStatus> {
    if out.is_null() {
        return Err(null());
    }
    *out = CString::new(s).expect("no interior nul").into_raw();
    Ok(())
}

unsafe fn write_json<T: serde::Serialize>(out: *mut *mut c_char, v: &T) -> Result<(), SfStatus> {
    write_string(out, serde_json::to_string(v).expect("serializable"))
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread; valid until the next call.
#[no_mangle]
pub extern "C" fn sf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses text such as `"1 + e1 f2"` in the Clifford algebra of dimension `m`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sf_multivector_parse(m: usize, text: *const c_char, out: *mut *mut SfMultiVector) -> SfStatus {
    guard(|| {
        let text = read_str(text)?;
        if out.is_null() {
            return Err(null());
        }
        let inner = MultiVector::<Cyclo8>::parse(m, &(), text).map_err(|e| status_of(&e))?;
        *out = Box::into_raw(Box::new(SfMultiVector { inner }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `h` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sf_multivector_free(h: *mut SfMultiVector) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Ambient dimension, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_multivector_dim(h: *const SfMultiVector) -> usize {
    h.as_ref().map_or(0, |h| h.inner.dim())
}

/// Clifford product `a * b` as a new handle.
///
/// # Safety
/// `a`, `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sf_multivector_mul(
    a: *const SfMultiVector,
    b: *const SfMultiVector,
    out: *mut *mut SfMultiVector,
) -> SfStatus {
    guard(|| {
        let (Some(a), Some(b)) = (a.as_ref(), b.as_ref()) else { return Err(null()) };
        if out.is_null() {
            return Err(null());
        }
        let inner = a.inner.mul(&b.inner).map_err(|e| status_of(&e))?;
        *out = Box::into_raw(Box::new(SfMultiVector { inner }));
        Ok(())
    })
}

/// Canonical text form; free with [`sf_string_free`].
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sf_multivector_to_text(h: *const SfMultiVector, out: *mut *mut c_char) -> SfStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(null)?;
        write_string(out, h.inner.to_text())
    })
}

/// Image in `SO_m` of a `GSpin_m` element as a JSON matrix of strings.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sf_multivector_project(h: *const SfMultiVector, out: *mut *mut c_char) -> SfStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(null)?;
        let el = SpinElement::new(h.inner.clone()).map_err(|e| status_of(&e))?;
        write_json(out, &spingroup::project(&el))
    })
}

/// Parity classification of `m` as JSON.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_parity(m: usize, out: *mut *mut c_char) -> SfStatus {
    guard(|| {
        let r = rootdata::parity_classify(m).map_err(|e| status_of(&e))?;
        write_json(out, &r)
    })
}

/// Prime tower of length `n` below `bound` as JSON.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_prime_tower(n: usize, bound: u64, out: *mut *mut c_char) -> SfStatus {
    guard(|| {
        let t = galois::prime_tower(n, bound).map_err(|e| status_of(&e))?;
        write_json(out, &t)
    })
}

/// Full search pipeline for `m`; the certificate is written as JSON.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_prop26(m: usize, bound: u64, out: *mut *mut c_char) -> SfStatus {
    guard(|| {
        let c = galois::prop26(m, bound).map_err(|e| status_of(&e))?;
        write_json(out, &c)
    })
}

/// Re-verifies a certificate produced by [`sf_prop26`].
///
/// # Safety
/// `json` must be a NUL-terminated string and `ok` writable.
#[no_mangle]
pub unsafe extern "C" fn sf_verify_certificate(json: *const c_char, ok: *mut bool) -> SfStatus {
    guard(|| {
        let text = read_str(json)?;
        if ok.is_null() {
            return Err(null());
        }
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| status_of(&Error::Parse(e.to_string())))?;
        *ok = galois::verify_certificate(&v).map_err(|e| status_of(&e))?;
        Ok(())
    })
}
