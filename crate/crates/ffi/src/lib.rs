//! C interface to psikit.
//!
//! Scripts are parsed into opaque handles and run into newly allocated
//! strings. Every call returns a [`PsikitStatus`]; on failure the message is
//! available from [`psikit_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use psikit::cli::{exit_code, overall_exit, parse_script, run, RunOptions, Script, Selection};
use psikit::psi::{quadratic_order_psi, QuadraticInstance, Status};
use psikit::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsikitStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    UnknownName = 4,
    /// A script or input error other than syntax.
    Invalid = 5,
    Unsupported = 6,
    Limit = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsikitVerdict {
    No = 0,
    Yes = 1,
    Unknown = 2,
}

/// A parsed script.
pub struct PsikitScript {
    script: Script,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> PsikitStatus {
    match e {
        Error::Syntax { .. } => PsikitStatus::Syntax,
        Error::UnknownName(_) => PsikitStatus::UnknownName,
        _ => match exit_code(e) {
            2 => PsikitStatus::Unsupported,
            3 => PsikitStatus::Limit,
            _ => PsikitStatus::Invalid,
        },
    }
}

fn fail(e: &Error) -> PsikitStatus {
    set_error(e.to_string());
    status_of(e)
}

fn guard(f: impl FnOnce() -> PsikitStatus) -> PsikitStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            PsikitStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, PsikitStatus> {
    if p.is_null() {
        set_error("null argument");
        return Err(PsikitStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("input is not UTF-8");
        PsikitStatus::InvalidUtf8
    })
}

fn into_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Parses `source`; on success `*out` receives a handle to free with
/// `psikit_script_free`.
///
/// # Safety
/// `source` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn psikit_script_parse(source: *const c_char, out: *mut *mut PsikitScript) -> PsikitStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return PsikitStatus::NullArgument;
        }
        *out = ptr::null_mut();
        let src = match text(source) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match parse_script(src) {
            Ok(script) => {
                *out = Box::into_raw(Box::new(PsikitScript { script }));
                PsikitStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Number of statements in a parsed script, or -1 for a null handle.
///
/// # Safety
/// `script` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn psikit_script_len(script: *const PsikitScript) -> i64 {
    match script.as_ref() {
        Some(s) => s.script.stmts.len() as i64,
        None => -1,
    }
}

/// Runs every command. `*report` receives the reports, one JSON object per
/// line when `json` is nonzero; `*exit_code_out` receives the command-line
/// exit code. A `bound` of 0 selects the default prime search bound.
///
/// # Safety
/// `script` must be a live handle; `report` and `exit_code_out` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn psikit_script_run(
    script: *const PsikitScript,
    bound: u64,
    json: i32,
    report: *mut *mut c_char,
    exit_code_out: *mut i32,
) -> PsikitStatus {
    guard(|| {
        let Some(s) = script.as_ref() else {
            set_error("null script handle");
            return PsikitStatus::NullArgument;
        };
        if report.is_null() || exit_code_out.is_null() {
            set_error("null output pointer");
            return PsikitStatus::NullArgument;
        }
        let opts = RunOptions { bound: if bound == 0 { RunOptions::default().bound } else { bound }, parallel: false };
        let reports = run(&s.script, &Selection::All, &opts);
        let lines: Vec<String> =
            reports.iter().map(|r| if json != 0 { r.to_json() } else { r.to_string() }).collect();
        let mut body = lines.join("\n");
        if !body.is_empty() {
            body.push('\n');
        }
        *report = into_c(body);
        *exit_code_out = i32::from(overall_exit(&reports));
        PsikitStatus::Ok
    })
}

/// Frees a handle from `psikit_script_parse`. Null is ignored.
///
/// # Safety
/// `script` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn psikit_script_free(script: *mut PsikitScript) {
    if !script.is_null() {
        drop(Box::from_raw(script));
    }
}

/// PSI for the order `ℤ[√d] → ℤ[(1 + √d)/2]`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn psikit_quadratic_psi(d: i64, out: *mut PsikitVerdict) -> PsikitStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return PsikitStatus::NullArgument;
        }
        let v = QuadraticInstance::new(d).and_then(quadratic_order_psi);
        match v {
            Ok(v) => {
                *out = match v.status {
                    Status::Yes => PsikitVerdict::Yes,
                    Status::No => PsikitVerdict::No,
                    Status::Unknown => PsikitVerdict::Unknown,
                };
                PsikitStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn psikit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The message of the last failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn psikit_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
