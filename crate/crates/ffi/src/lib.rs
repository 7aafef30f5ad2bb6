//! C ABI over `isodeg`.
//!
//! Every fallible call returns an `IsodegStatus` and writes its result
//! through an out-pointer. On failure the message is available from
//! `isodeg_last_error` until the next call on the same thread. Handles
//! and strings returned here must be released with the matching `_free`.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use isodeg::action::{min_orbit_size, Space};
use isodeg::catalog::{self, CatalogKind};
use isodeg::degrees::{degree_lower_bound_with, DegreeReport};
use isodeg::field::{check_nonresidue, check_supported_prime, smallest_nonresidue, Fp};
use isodeg::isogeny_sets::{conditional_iq, unconditional_upper_bound, PrimeSet};
use isodeg::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsodegStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    /// p lies in I_Q(1); no bound applies.
    DomainRefusal = 3,
    CapExceeded = 4,
    Inconsistent = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsodegGroup {
    Gl2 = 0,
    Borel = 1,
    Cns = 2,
    CnsPlus = 3,
    CnsPower = 4,
    CnsPlusPower = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsodegSpace {
    Lines = 0,
    Vectors = 1,
}

/// Opaque degree report for one prime.
pub struct IsodegDegreeReport(DegreeReport);

/// Opaque sorted set of primes.
pub struct IsodegPrimeSet(PrimeSet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> IsodegStatus {
    match err {
        Error::InBaseSet { .. } => IsodegStatus::DomainRefusal,
        Error::CapExceeded { .. } => IsodegStatus::CapExceeded,
        Error::Inconsistent(_) => IsodegStatus::Inconsistent,
        _ => IsodegStatus::InvalidInput,
    }
}

/// Runs `f`, turning errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), (IsodegStatus, String)>) -> IsodegStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IsodegStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            IsodegStatus::Panic
        }
    }
}

fn lift<T>(r: isodeg::Result<T>) -> Result<T, (IsodegStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (IsodegStatus, String) {
    (IsodegStatus::NullPointer, format!("{what} is null"))
}

fn json_out<T: serde::Serialize>(value: &T, out: *mut *mut c_char) -> Result<(), (IsodegStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let s = serde_json::to_string(value).map_err(|e| (IsodegStatus::Inconsistent, e.to_string()))?;
    let c = CString::new(s).map_err(|e| (IsodegStatus::Inconsistent, e.to_string()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message for the last failed call on this thread, or null. Owned by the
/// library; valid until the next call.
#[no_mangle]
pub extern "C" fn isodeg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn isodeg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from an `isodeg_*` call and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn isodeg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Degree report for `p`. `epsilon = 0` selects the smallest non-residue.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn isodeg_degrees(p: u64, epsilon: u32, out: *mut *mut IsodegDegreeReport) -> IsodegStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let eps = (epsilon != 0).then_some(epsilon);
        let report = lift(degree_lower_bound_with(p, eps))?;
        *out = Box::into_raw(Box::new(IsodegDegreeReport(report)));
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a live handle from `isodeg_degrees`.
#[no_mangle]
pub unsafe extern "C" fn isodeg_degree_report_free(report: *mut IsodegDegreeReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// `d_lower`, or 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn isodeg_degree_report_d_lower(report: *const IsodegDegreeReport) -> u64 {
    report.as_ref().map_or(0, |r| r.0.d_lower)
}

/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn isodeg_degree_report_epsilon(report: *const IsodegDegreeReport) -> u32 {
    report.as_ref().map_or(0, |r| r.0.epsilon)
}

/// Number of allowed images in the report.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn isodeg_degree_report_image_count(report: *const IsodegDegreeReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.per_image.len())
}

/// Minimal line-orbit size for image `index`.
///
/// # Safety
/// `report` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn isodeg_degree_report_min_orbit(
    report: *const IsodegDegreeReport,
    index: usize,
    out: *mut u64,
) -> IsodegStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let img = r.0.per_image.get(index).ok_or_else(|| {
            (IsodegStatus::InvalidInput, format!("index {index} out of range ({} images)", r.0.per_image.len()))
        })?;
        *out = img.min_orbit;
        Ok(())
    })
}

/// The report as JSON. Free with `isodeg_string_free`.
///
/// # Safety
/// `report` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn isodeg_degree_report_json(
    report: *const IsodegDegreeReport,
    out: *mut *mut c_char,
) -> IsodegStatus {
    guard(|| json_out(&report.as_ref().ok_or_else(|| null("report"))?.0, out))
}

/// `conditional = false` gives the unconditional upper bound for I_Q(d);
/// `true` gives I_Q(d) assuming Serre uniformity.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn isodeg_iq(d: u64, conditional: bool, out: *mut *mut IsodegPrimeSet) -> IsodegStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let set = lift(if conditional { conditional_iq(d) } else { unconditional_upper_bound(d) })?;
        *out = Box::into_raw(Box::new(IsodegPrimeSet(set)));
        Ok(())
    })
}

/// # Safety
/// `set` must be null or a live handle from `isodeg_iq`.
#[no_mangle]
pub unsafe extern "C" fn isodeg_prime_set_free(set: *mut IsodegPrimeSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn isodeg_prime_set_len(set: *const IsodegPrimeSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.len())
}

/// The `index`-th prime in ascending order, or 0 when out of range.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn isodeg_prime_set_get(set: *const IsodegPrimeSet, index: usize) -> u64 {
    set.as_ref().and_then(|s| s.0.primes.get(index).copied()).unwrap_or(0)
}

/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn isodeg_prime_set_contains(set: *const IsodegPrimeSet, p: u64) -> bool {
    set.as_ref().is_some_and(|s| s.0.contains(p))
}

/// # Safety
/// `set` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn isodeg_prime_set_json(set: *const IsodegPrimeSet, out: *mut *mut c_char) -> IsodegStatus {
    guard(|| json_out(&set.as_ref().ok_or_else(|| null("set"))?.0, out))
}

/// Smallest orbit of a catalog group on lines or nonzero vectors.
/// `exponent` is used only by the power groups; `epsilon = 0` selects the
/// smallest non-residue.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn isodeg_min_orbit_size(
    p: u64,
    group: IsodegGroup,
    exponent: u32,
    space: IsodegSpace,
    epsilon: u32,
    out: *mut u64,
) -> IsodegStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let p = lift(check_supported_prime(p))?;
        let eps = if epsilon == 0 {
            lift(smallest_nonresidue(p))?
        } else {
            let e = Fp::new(epsilon as i64, p);
            lift(check_nonresidue(e))?;
            e
        };
        let kind = match group {
            IsodegGroup::Gl2 => CatalogKind::Gl2,
            IsodegGroup::Borel => CatalogKind::Borel,
            IsodegGroup::Cns => CatalogKind::Cns,
            IsodegGroup::CnsPlus => CatalogKind::CnsPlus,
            IsodegGroup::CnsPower | IsodegGroup::CnsPlusPower if exponent == 0 => {
                return Err((IsodegStatus::InvalidInput, "exponent must be at least 1".into()))
            }
            IsodegGroup::CnsPower => CatalogKind::CnsPower(exponent),
            IsodegGroup::CnsPlusPower => CatalogKind::CnsPlusPower(exponent),
        };
        let space = match space {
            IsodegSpace::Lines => Space::ProjectiveLine,
            IsodegSpace::Vectors => Space::NonzeroVectors,
        };
        let entry = lift(catalog::entry(&kind, p, eps))?;
        *out = min_orbit_size(&entry.group, space).0;
        Ok(())
    })
}

/// Copies the last error message; for callers that prefer owned strings.
/// Returns null when there is none. Free with `isodeg_string_free`.
#[no_mangle]
pub extern "C" fn isodeg_last_error_copy() -> *mut c_char {
    let p = isodeg_last_error();
    if p.is_null() {
        return ptr::null_mut();
    }
    unsafe { CStr::from_ptr(p) }.to_owned().into_raw()
}
