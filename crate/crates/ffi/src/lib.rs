//! C ABI for the covins toolkit.
//!
//! The surface mirrors the CLI contract: a JSON job configuration goes
//! in, an opaque report handle comes out, and the caller inspects it as
//! JSON (schema `covins-report/1`) or through the `passed` flag. All
//! strings are UTF-8 and NUL-terminated; every pointer returned by this
//! library must be released with the matching `covins_*_free` function.
//!
//! Errors are reported through [`CovinsStatus`] return codes; the most
//! recent failure message is kept per thread and retrieved with
//! [`covins_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use covins_core::cli::{run, JobConfig, Report};

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).ok();
    });
}

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovinsStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// An input string was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The configuration failed to parse or validate.
    InvalidConfig = 3,
    /// The job ran but a module reported an error.
    ExecutionFailed = 4,
}

/// Opaque job report; inspect via `covins_report_*` and release with
/// [`covins_report_free`].
pub struct CovinsReport {
    inner: Report,
}

/// Library version as a static NUL-terminated string; do not free.
#[no_mangle]
pub extern "C" fn covins_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Runs one job from a JSON configuration.
///
/// On success writes a report handle into `out_report` and returns
/// [`CovinsStatus::Ok`]. On failure leaves `out_report` untouched,
/// records a message for [`covins_last_error_message`] and returns the
/// matching status.
///
/// # Safety
///
/// `config_json` must point to a NUL-terminated string and `out_report`
/// to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn covins_run_json(
    config_json: *const c_char,
    out_report: *mut *mut CovinsReport,
) -> CovinsStatus {
    if config_json.is_null() || out_report.is_null() {
        set_last_error("null pointer argument".into());
        return CovinsStatus::NullPointer;
    }
    let text = match CStr::from_ptr(config_json).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_last_error("configuration is not valid UTF-8".into());
            return CovinsStatus::InvalidUtf8;
        }
    };
    let config = match JobConfig::from_json_str(text) {
        Ok(c) => c,
        Err(e) => {
            set_last_error(e.to_string());
            return CovinsStatus::InvalidConfig;
        }
    };
    match run(&config) {
        Ok(report) => {
            let handle = Box::new(CovinsReport { inner: report });
            *out_report = Box::into_raw(handle);
            CovinsStatus::Ok
        }
        Err(e) => {
            set_last_error(e.to_string());
            match e {
                covins_core::Error::Config(_)
                | covins_core::Error::Json { .. }
                | covins_core::Error::UnknownFixture(_) => CovinsStatus::InvalidConfig,
                _ => CovinsStatus::ExecutionFailed,
            }
        }
    }
}

/// Whether every check of the report passed: 1 yes, 0 no, -1 on NULL.
///
/// # Safety
///
/// `report` must be NULL or a handle from [`covins_run_json`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn covins_report_passed(report: *const CovinsReport) -> i32 {
    if report.is_null() {
        return -1;
    }
    i32::from((*report).inner.passed)
}

/// Serializes the report as JSON; free with [`covins_string_free`].
/// Returns NULL on NULL input.
///
/// # Safety
///
/// `report` must be NULL or a live handle from [`covins_run_json`].
#[no_mangle]
pub unsafe extern "C" fn covins_report_to_json(report: *const CovinsReport) -> *mut c_char {
    if report.is_null() {
        return ptr::null_mut();
    }
    let text = (*report).inner.to_json_string();
    match CString::new(text) {
        Ok(s) => s.into_raw(),
        Err(_) => ptr::null_mut(),
    }
}

/// Releases a report handle. NULL is a no-op.
///
/// # Safety
///
/// `report` must be NULL or a handle from [`covins_run_json`], freed at
/// most once.
#[no_mangle]
pub unsafe extern "C" fn covins_report_free(report: *mut CovinsReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Releases a string returned by this library. NULL is a no-op.
///
/// # Safety
///
/// `s` must be NULL or a pointer produced by this library's string
/// returning functions, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn covins_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The most recent error message on this thread, or NULL when the last
/// call succeeded; free with [`covins_string_free`].
#[no_mangle]
pub extern "C" fn covins_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some(msg) => msg.clone().into_raw(),
        None => ptr::null_mut(),
    })
}
