//! C interface to `xic-core`.
//!
//! Functions and adversary reports are opaque handles owned by the caller
//! and released with the matching `_free`. Every fallible call returns an
//! [`XicStatus`]; on failure [`xic_last_error`] describes the cause for the
//! current thread. Strings handed out are NUL-terminated and must be
//! released with [`xic_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use xic_core::adversaries::{
    fool_composition_with, fool_length, fool_modulus_with, mirror_demo, AdversaryError, BudgetedNaive, ConstantOp,
    CounterexampleReport, GridComposer, GridProbe, IdentityOnOracle, NullExtractor, PrefixPeek, SilentComposer,
    MARGIN,
};
use xic_core::catalog::{self, Entry};
use xic_core::encodings::{decode_dyadic, Dyadic, Word};
use xic_core::evaluation::{evaluate, Schedule};
use xic_core::funcrep::{validate_xic, XicCheck};
use xic_core::reals::real_from_dyadic;
use xic_core::sopoly::IntPoly;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XicStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    UnknownFunction = 3,
    InvalidPoint = 4,
    InvalidPolynomial = 5,
    UnknownCandidate = 6,
    /// A machine faulted or produced a malformed answer.
    Fault = 7,
    /// The candidate ran over its budget.
    Budget = 8,
    /// An enumeration would exceed its cap.
    Cap = 9,
    /// No usable `N` or clean region exists for the construction.
    NoMargin = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XicConstruction {
    Modulus = 0,
    Composition = 1,
    Length = 2,
    Mirror = 3,
}

/// A function from the catalog together with its name.
pub struct XicFunction {
    entry: Entry,
}

/// Outcome of an adversary run.
pub struct XicReport {
    report: CounterexampleReport,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

type Outcome = Result<(), (XicStatus, String)>;

fn guard(f: impl FnOnce() -> Outcome) -> XicStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => XicStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            XicStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (XicStatus, String)> {
    if p.is_null() {
        return Err((XicStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (XicStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn null(what: &str) -> (XicStatus, String) {
    (XicStatus::NullArgument, format!("{what} is null"))
}

fn to_c(s: impl Into<String>) -> *mut c_char {
    CString::new(s.into().replace('\0', " ")).unwrap_or_default().into_raw()
}

fn parse_point(s: &str) -> Result<Dyadic, (XicStatus, String)> {
    let x = match s.parse::<Word>().ok().and_then(|w| decode_dyadic(&w).ok()) {
        Some(d) => d,
        None => Dyadic::from_decimal(s).map_err(|e| (XicStatus::InvalidPoint, format!("{s:?}: {e}")))?,
    };
    if !x.in_unit_interval() {
        return Err((XicStatus::InvalidPoint, format!("{s:?} is outside [0,1]")));
    }
    Ok(x)
}

fn adversary_status(e: AdversaryError) -> (XicStatus, String) {
    let status = match e {
        AdversaryError::Budget { .. } => XicStatus::Budget,
        AdversaryError::Cap(_) => XicStatus::Cap,
        AdversaryError::NoCleanInterval { .. } | AdversaryError::NoMargin { .. } | AdversaryError::NoUnqueriedWord(_) => {
            XicStatus::NoMargin
        }
        AdversaryError::Fault(_) => XicStatus::Fault,
    };
    (status, e.to_string())
}

/// Message for the last failed call on this thread. Valid until the next
/// call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn xic_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn xic_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Looks up a catalog id (`zero`, `sawtooth`, `tent`, `pwl:<path>`,
/// `bump:<c>,<h>,<s>`, ...).
///
/// # Safety
/// `id` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn xic_function_new(id: *const c_char, out: *mut *mut XicFunction) -> XicStatus {
    guard(|| {
        let id = read_str(id, "id")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let entry = catalog::lookup(id).map_err(|e| (XicStatus::UnknownFunction, e.to_string()))?;
        *out = Box::into_raw(Box::new(XicFunction { entry }));
        Ok(())
    })
}

/// # Safety
/// `f` must be null or a handle from [`xic_function_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn xic_function_free(f: *mut XicFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Evaluates `f(x)` to within `2^-n`. `x` is a dyadic word such as `00#11`
/// or an exact decimal in `[0,1]`. On success `*word` receives the answer as
/// a dyadic word and `*iterations`, if not null, the number of loop rounds.
///
/// # Safety
/// `f` must be a live handle, `x` a NUL-terminated string, `word` a valid
/// pointer and `iterations` null or valid.
#[no_mangle]
pub unsafe extern "C" fn xic_function_eval(
    f: *const XicFunction,
    x: *const c_char,
    n: u64,
    suggested_schedule: bool,
    word: *mut *mut c_char,
    iterations: *mut u64,
) -> XicStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("f"))?;
        let x = parse_point(read_str(x, "x")?)?;
        if word.is_null() {
            return Err(null("word"));
        }
        let schedule = if suggested_schedule { Schedule::Suggested } else { Schedule::Increment };
        let ev = evaluate(&f.entry.fresh_xic(), &real_from_dyadic(&x), n, schedule)
            .map_err(|e| (XicStatus::Fault, e.to_string()))?;
        *word = to_c(ev.word.to_string());
        if !iterations.is_null() {
            *iterations = ev.iterations;
        }
        Ok(())
    })
}

/// Checks the function's name for precisions up to `n_max`. `*clean` is
/// set when no violation was found; `*violations`, if not null, receives the
/// number found.
///
/// # Safety
/// `f` must be a live handle, `clean` valid and `violations` null or valid.
#[no_mangle]
pub unsafe extern "C" fn xic_function_validate(
    f: *const XicFunction,
    n_max: u64,
    clean: *mut bool,
    violations: *mut usize,
) -> XicStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("f"))?;
        if clean.is_null() {
            return Err(null("clean"));
        }
        let cfg = XicCheck { n_max, exhaustive_n: 6, ..Default::default() };
        let r = validate_xic(&f.entry.fresh_xic(), &cfg).map_err(|e| (XicStatus::Fault, e.to_string()))?;
        if let Some(cap) = r.cap {
            return Err((XicStatus::Cap, cap.to_string()));
        }
        *clean = r.is_clean();
        if !violations.is_null() {
            *violations = r.violations.len();
        }
        Ok(())
    })
}

/// Runs a fooling construction against a built-in candidate. `p` is the
/// budget polynomial in `x`; null selects the default (`x*x`, or `2*x+2` for
/// the length construction). `param` is `N` for the length construction and
/// the lookahead `C` for the mirror demo; it is ignored otherwise.
///
/// # Safety
/// `candidate` must be a NUL-terminated string, `p` null or one, and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn xic_adversary_run(
    construction: XicConstruction,
    candidate: *const c_char,
    p: *const c_char,
    param: u64,
    out: *mut *mut XicReport,
) -> XicStatus {
    guard(|| {
        let candidate = read_str(candidate, "candidate")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let p_src = if p.is_null() {
            if construction == XicConstruction::Length { "2*x+2" } else { "x*x" }
        } else {
            read_str(p, "p")?
        };
        let p: IntPoly = p_src.parse().map_err(|e| (XicStatus::InvalidPolynomial, format!("{p_src:?}: {e}")))?;
        let unknown = || (XicStatus::UnknownCandidate, format!("unknown candidate {candidate:?}"));
        let report = match (construction, candidate) {
            (XicConstruction::Modulus, "grid-probe") => {
                fool_modulus_with(&GridProbe { budget: p.clone() }, &p, MARGIN).map(|r| r.report)
            }
            (XicConstruction::Modulus, "null") => fool_modulus_with(&NullExtractor, &p, MARGIN).map(|r| r.report),
            (XicConstruction::Composition, "grid-composer") => {
                fool_composition_with(&GridComposer { grid: 4, budget: p.clone() }, &p, MARGIN).map(|r| r.report)
            }
            (XicConstruction::Composition, "silent") => {
                fool_composition_with(&SilentComposer, &p, MARGIN).map(|r| r.report)
            }
            (XicConstruction::Length, "identity-op") => {
                fool_length(&IdentityOnOracle, &p, param as usize).map(|r| r.report)
            }
            (XicConstruction::Length, "constant") => fool_length(&ConstantOp(3), &p, param as usize).map(|r| r.report),
            (XicConstruction::Mirror, "budgeted-naive") => mirror_demo(&p, param, &BudgetedNaive).map(|r| r.report),
            (XicConstruction::Mirror, "prefix-peek") => {
                let peek = p.eval(param + 1) as usize;
                mirror_demo(&p, param, &PrefixPeek { peek }).map(|r| r.report)
            }
            _ => return Err(unknown()),
        }
        .map_err(adversary_status)?;
        *out = Box::into_raw(Box::new(XicReport { report }));
        Ok(())
    })
}

/// Whether the run exhibited identical views together with a contradiction.
/// A null handle yields false.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn xic_report_fooled(r: *const XicReport) -> bool {
    r.as_ref().is_some_and(|r| r.report.fooled())
}

/// The `N` the construction worked at.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn xic_report_n(r: *const XicReport) -> u64 {
    r.as_ref().map_or(0, |r| r.report.n)
}

/// Plain-text rendering of the report; free with [`xic_string_free`].
/// Returns null for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn xic_report_text(r: *const XicReport) -> *mut c_char {
    match r.as_ref() {
        Some(r) => to_c(r.report.to_text()),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `r` must be null or a handle from [`xic_adversary_run`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn xic_report_free(r: *mut XicReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
