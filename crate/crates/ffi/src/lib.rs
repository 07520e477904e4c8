//! C ABI over heegner-core.
//!
//! Reports are opaque handles released with `heegner_report_free`; strings
//! returned to the caller are released with `heegner_string_free`. Every
//! fallible call returns a `HeegnerStatus` and records a message readable
//! through `heegner_last_error` on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use heegner_core::cli::request::AnalyzeRequest;
use heegner_core::embedtables::{cartan_exists, division_exists, eichler_exists};
use heegner_core::engine::{HeegnerReport as CoreReport, Verdict};
use heegner_core::quadarith::{class_number, LocalQuadExt, QuadOrder, SplittingType};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeegnerStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Input = 4,
    Unavailable = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeegnerVerdict {
    Exists = 0,
    NoEmbedding = 1,
    Undetermined = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeegnerCase {
    Eichler = 0,
    Cartan = 1,
    Division = 2,
}

/// Result of one analysis.
pub struct HeegnerReport {
    report: CoreReport,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn guard(f: impl FnOnce() -> Result<(), (HeegnerStatus, String)>) -> HeegnerStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HeegnerStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HeegnerStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (HeegnerStatus, String)> {
    if s.is_null() {
        return Err((HeegnerStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (HeegnerStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn null(what: &str) -> (HeegnerStatus, String) {
    (HeegnerStatus::NullPointer, format!("{what} is null"))
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn heegner_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static version string.
#[no_mangle]
pub extern "C" fn heegner_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Runs an analyze request given as JSON.
///
/// # Safety
/// `request_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn heegner_analyze_json(
    request_json: *const c_char,
    out: *mut *mut HeegnerReport,
) -> HeegnerStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = read_str(request_json, "request_json")?;
        let req: AnalyzeRequest = serde_json::from_str(text)
            .map_err(|e| (HeegnerStatus::Parse, format!("invalid request: {e}")))?;
        let output = req
            .run()
            .map_err(|e| (HeegnerStatus::Input, e.to_string()))?;
        let json =
            serde_json::to_string(&output).map_err(|e| (HeegnerStatus::Panic, e.to_string()))?;
        let handle = HeegnerReport {
            report: output.report,
            json: CString::new(json).unwrap(),
        };
        *out = Box::into_raw(Box::new(handle));
        Ok(())
    })
}

/// # Safety
/// `report` must come from `heegner_analyze_json` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn heegner_report_free(report: *mut HeegnerReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `report` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn heegner_report_verdict(
    report: *const HeegnerReport,
    out: *mut HeegnerVerdict,
) -> HeegnerStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = match r.report.verdict {
            Verdict::Exists => HeegnerVerdict::Exists,
            Verdict::NoEmbedding => HeegnerVerdict::NoEmbedding,
            Verdict::Blocked => HeegnerVerdict::Undetermined,
        };
        Ok(())
    })
}

unsafe fn report_u64(
    report: *const HeegnerReport,
    out: *mut u64,
    what: &str,
    get: fn(&CoreReport) -> Option<u64>,
) -> HeegnerStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = get(&r.report).ok_or_else(|| {
            (
                HeegnerStatus::Unavailable,
                format!("{what} is not available"),
            )
        })?;
        Ok(())
    })
}

/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn heegner_report_c_prime(
    report: *const HeegnerReport,
    out: *mut u64,
) -> HeegnerStatus {
    report_u64(report, out, "c'", |r| r.c_prime)
}

/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn heegner_report_level(
    report: *const HeegnerReport,
    out: *mut u64,
) -> HeegnerStatus {
    report_u64(report, out, "level", |r| r.level)
}

/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn heegner_report_heegner_count(
    report: *const HeegnerReport,
    out: *mut u64,
) -> HeegnerStatus {
    report_u64(report, out, "heegner count", |r| r.heegner_count)
}

/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn heegner_report_delta(
    report: *const HeegnerReport,
    out: *mut u64,
) -> HeegnerStatus {
    report_u64(report, out, "delta", |r| r.sigma.delta)
}

/// Full output as JSON; borrowed from the handle.
///
/// # Safety
/// `report` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn heegner_report_json(report: *const HeegnerReport) -> *const c_char {
    match report.as_ref() {
        Some(r) => r.json.as_ptr(),
        None => {
            set_error("report is null");
            ptr::null()
        }
    }
}

/// Copy of the full output as JSON; release with `heegner_string_free`.
///
/// # Safety
/// `report` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn heegner_report_json_copy(report: *const HeegnerReport) -> *mut c_char {
    match report.as_ref() {
        Some(r) => r.json.clone().into_raw(),
        None => {
            set_error("report is null");
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn heegner_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn splitting_of(s: &str) -> Option<SplittingType> {
    match s {
        "split" => Some(SplittingType::Split),
        "inert" => Some(SplittingType::Inert),
        "ramified" => Some(SplittingType::Ramified),
        other => LocalQuadExt::parse(other).map(LocalQuadExt::splitting),
    }
}

/// Local table lookup; `case` is a `HeegnerCase` value. `k_class` is
/// required except for Cartan, `l_class` only for Division. `exists`
/// receives 1 or 0.
///
/// # Safety
/// String arguments must be NUL-terminated or NULL where optional; `exists`
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn heegner_embed(
    case: c_int,
    p: u64,
    m: u32,
    n: u32,
    k_class: *const c_char,
    l_class: *const c_char,
    exists: *mut c_int,
) -> HeegnerStatus {
    guard(|| {
        let exists = exists.as_mut().ok_or_else(|| null("exists"))?;
        let bad = |s: &str| (HeegnerStatus::Input, format!("unknown class {s:?}"));
        let v = match case {
            c if c == HeegnerCase::Cartan as c_int => cartan_exists(m, n),
            c if c == HeegnerCase::Eichler as c_int => {
                let k = read_str(k_class, "k_class")?;
                eichler_exists(m, n, splitting_of(k).ok_or_else(|| bad(k))?)
            }
            c if c == HeegnerCase::Division as c_int => {
                let k = read_str(k_class, "k_class")?;
                let l = read_str(l_class, "l_class")?;
                let kc = LocalQuadExt::parse(k).ok_or_else(|| bad(k))?;
                let lc = LocalQuadExt::parse(l).ok_or_else(|| bad(l))?;
                division_exists(p, m, n, kc, lc)
            }
            c => return Err((HeegnerStatus::Input, format!("unknown case {c}"))),
        };
        *exists = v.exists as c_int;
        Ok(())
    })
}

/// h(R_c) for the order of conductor c in the field of discriminant disc.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn heegner_class_number(disc: i64, c: u64, out: *mut u64) -> HeegnerStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let k = QuadOrder::new(disc, c).map_err(|e| (HeegnerStatus::Input, e.to_string()))?;
        *out = class_number(&k).map_err(|e| (HeegnerStatus::Input, e.to_string()))?;
        Ok(())
    })
}
