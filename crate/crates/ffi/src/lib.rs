//! C ABI for the spectral-torsion engine.
//!
//! Scenarios and reports are opaque handles owned by the caller and released
//! with their `_free` functions. Every fallible call returns a [`StStatus`];
//! on failure [`st_last_error`] describes the problem on the calling thread.
//! Strings returned through out-parameters are released with
//! [`st_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spectral_torsion::cli::{
    lemma_check, load_scenario, run_report, verify_sweep, CliError, LemmaName, Report, ScenarioDoc,
};
use spectral_torsion::ScalarKind;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    InvalidScenario = 5,
    Usage = 6,
    Computation = 7,
    Panic = 8,
}

/// A parsed and validated scenario.
pub struct StScenario {
    doc: ScenarioDoc,
}

/// The result of running one scenario.
pub struct StReport {
    report: Report,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<Vec<u8>>) {
    let mut bytes = message.into();
    bytes.retain(|&b| b != 0);
    let c = CString::new(bytes).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: StStatus, message: impl std::fmt::Display) -> StStatus {
    set_error(message.to_string());
    status
}

fn from_cli(e: CliError) -> StStatus {
    let status = match &e {
        CliError::Io { .. } => StStatus::Io,
        CliError::Parse(_) => StStatus::Parse,
        CliError::Invalid { .. } => StStatus::InvalidScenario,
        CliError::Usage(_) => StStatus::Usage,
        CliError::Torsion(_) => StStatus::Computation,
    };
    fail(status, e)
}

/// Runs `f`, turning a panic into [`StStatus::Panic`].
fn guard(f: impl FnOnce() -> StStatus) -> StStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(StStatus::Panic, format!("internal error: {msg}"))
        }
    }
}

/// # Safety
/// `s` must be null or a NUL-terminated string valid for reads.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, StStatus> {
    if s.is_null() {
        return Err(fail(StStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| fail(StStatus::InvalidUtf8, e))
}

/// # Safety
/// `out` must be null or valid for writes.
unsafe fn write_string(out: *mut *mut c_char, s: String) -> StStatus {
    if out.is_null() {
        return fail(StStatus::NullPointer, "null output pointer");
    }
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            StStatus::Ok
        }
        Err(e) => fail(StStatus::Computation, e),
    }
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn st_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn st_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses and validates a scenario document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn st_scenario_from_json(
    json: *const c_char,
    out: *mut *mut StScenario,
) -> StStatus {
    guard(|| {
        if out.is_null() {
            return fail(StStatus::NullPointer, "null output pointer");
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let doc = match ScenarioDoc::from_json(text).and_then(|d| d.validate().map(|()| d)) {
            Ok(d) => d,
            Err(e) => return from_cli(e),
        };
        *out = Box::into_raw(Box::new(StScenario { doc }));
        StStatus::Ok
    })
}

/// Reads, parses and validates a scenario file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn st_scenario_from_file(
    path: *const c_char,
    out: *mut *mut StScenario,
) -> StStatus {
    guard(|| {
        if out.is_null() {
            return fail(StStatus::NullPointer, "null output pointer");
        }
        let path = match read_str(path) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match load_scenario(path) {
            Ok(doc) => {
                *out = Box::into_raw(Box::new(StScenario { doc }));
                StStatus::Ok
            }
            Err(e) => from_cli(e),
        }
    })
}

/// Half the dimension of the scenario, or 0 for a null handle.
///
/// # Safety
/// `scenario` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn st_scenario_m(scenario: *const StScenario) -> u32 {
    scenario.as_ref().map_or(0, |s| s.doc.m as u32)
}

/// # Safety
/// `scenario` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn st_scenario_free(scenario: *mut StScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Computes every density term and comparison for `scenario`. `tolerance`
/// applies to float-mode scenarios.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn st_run_report(
    scenario: *const StScenario,
    tolerance: f64,
    out: *mut *mut StReport,
) -> StStatus {
    guard(|| {
        let Some(s) = scenario.as_ref() else {
            return fail(StStatus::NullPointer, "null scenario");
        };
        if out.is_null() {
            return fail(StStatus::NullPointer, "null output pointer");
        }
        match run_report(&s.doc, tolerance) {
            Ok(report) => {
                *out = Box::into_raw(Box::new(StReport { report }));
                StStatus::Ok
            }
            Err(e) => from_cli(e),
        }
    })
}

/// 1 when every comparison passed, 0 when one failed, -1 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn st_report_pass(report: *const StReport) -> c_int {
    report.as_ref().map_or(-1, |r| c_int::from(r.report.pass))
}

/// Number of comparisons in the report, 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn st_report_diff_count(report: *const StReport) -> usize {
    report.as_ref().map_or(0, |r| r.report.diffs.len())
}

/// Name and verdict of comparison `index`. The name is a new string.
///
/// # Safety
/// `report` must be a live handle; `name` and `pass` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn st_report_diff(
    report: *const StReport,
    index: usize,
    name: *mut *mut c_char,
    pass: *mut c_int,
) -> StStatus {
    guard(|| {
        let Some(r) = report.as_ref() else {
            return fail(StStatus::NullPointer, "null report");
        };
        if pass.is_null() {
            return fail(StStatus::NullPointer, "null output pointer");
        }
        let Some(d) = r.report.diffs.get(index) else {
            return fail(
                StStatus::Usage,
                format!(
                    "index {index} out of range for {} comparisons",
                    r.report.diffs.len()
                ),
            );
        };
        let status = write_string(name, d.name.clone());
        if status == StStatus::Ok {
            *pass = c_int::from(d.pass);
        }
        status
    })
}

/// The full report as pretty-printed JSON.
///
/// # Safety
/// `report` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn st_report_to_json(
    report: *const StReport,
    out: *mut *mut c_char,
) -> StStatus {
    guard(|| match report.as_ref() {
        Some(r) => write_string(out, r.report.to_json()),
        None => fail(StStatus::NullPointer, "null report"),
    })
}

/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn st_report_free(report: *mut StReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Random-scenario sweep. `float_mode` selects float arithmetic when
/// nonzero. Writes the summary JSON to `out` and 1 or 0 to `pass`.
///
/// # Safety
/// `out` and `pass` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn st_verify_sweep(
    m: u32,
    trials: u32,
    seed: u64,
    float_mode: c_int,
    tolerance: f64,
    out: *mut *mut c_char,
    pass: *mut c_int,
) -> StStatus {
    guard(|| {
        if pass.is_null() {
            return fail(StStatus::NullPointer, "null output pointer");
        }
        let mode = if float_mode != 0 {
            ScalarKind::Float
        } else {
            ScalarKind::Exact
        };
        match verify_sweep(m as usize, trials as usize, seed, mode, tolerance) {
            Ok(summary) => {
                let json = serde_json::to_string_pretty(&summary).expect("summaries serialize");
                let status = write_string(out, json);
                if status == StStatus::Ok {
                    *pass = c_int::from(summary.pass);
                }
                status
            }
            Err(e) => from_cli(e),
        }
    })
}

/// One targeted verification by name (`laplacian`, `square`, `inverse`,
/// `trace`, `contraction`, `sphere`, `gamma`).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` and `pass` must be valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn st_lemma_check(
    name: *const c_char,
    seed: u64,
    out: *mut *mut c_char,
    pass: *mut c_int,
) -> StStatus {
    guard(|| {
        if pass.is_null() {
            return fail(StStatus::NullPointer, "null output pointer");
        }
        let name: LemmaName = match read_str(name).map(str::parse) {
            Ok(Ok(n)) => n,
            Ok(Err(e)) => return from_cli(e),
            Err(s) => return s,
        };
        let summary = lemma_check(name, seed);
        let json = serde_json::to_string_pretty(&summary).expect("summaries serialize");
        let status = write_string(out, json);
        if status == StStatus::Ok {
            *pass = c_int::from(summary.pass);
        }
        status
    })
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn st_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
