use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use xic_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(xic_last_error()) }.to_string_lossy().into_owned()
}

fn eval(id: &str, x: &str, n: u64) -> (String, u64) {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(xic_function_new(c(id).as_ptr(), &mut f), XicStatus::Ok);
        let mut word = ptr::null_mut();
        let mut iterations = 0;
        assert_eq!(xic_function_eval(f, c(x).as_ptr(), n, true, &mut word, &mut iterations), XicStatus::Ok);
        let s = CStr::from_ptr(word).to_str().unwrap().to_owned();
        xic_string_free(word);
        xic_function_free(f);
        (s, iterations)
    }
}

#[test]
fn evaluation_round_trip() {
    assert_eq!(eval("sawtooth", "00#11", 10).0, "01#");
    assert_eq!(eval("tent", "0.25", 8).0, "00#1");
    assert_eq!(eval("zero", "1", 20).0, "00#");
}

#[test]
fn error_codes() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(xic_function_new(c("nope").as_ptr(), &mut f), XicStatus::UnknownFunction);
        assert!(f.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(xic_function_new(ptr::null(), &mut f), XicStatus::NullArgument);

        assert_eq!(xic_function_new(c("identity").as_ptr(), &mut f), XicStatus::Ok);
        let mut word = ptr::null_mut();
        let status = xic_function_eval(f, c("1.5").as_ptr(), 4, false, &mut word, ptr::null_mut());
        assert_eq!(status, XicStatus::InvalidPoint);
        assert!(last_error().contains("outside"));
        assert_eq!(xic_function_eval(ptr::null(), c("0").as_ptr(), 4, false, &mut word, ptr::null_mut()), XicStatus::NullArgument);
        xic_function_free(f);
        xic_function_free(ptr::null_mut());
        xic_string_free(ptr::null_mut());
    }
}

#[test]
fn validation() {
    unsafe {
        let mut f = ptr::null_mut();
        let mut clean = false;
        let mut violations = 0usize;
        assert_eq!(xic_function_new(c("sawtooth").as_ptr(), &mut f), XicStatus::Ok);
        assert_eq!(xic_function_validate(f, 8, &mut clean, &mut violations), XicStatus::Ok);
        assert!(clean);
        assert_eq!(violations, 0);
        xic_function_free(f);

        assert_eq!(xic_function_new(c("broken-fixture").as_ptr(), &mut f), XicStatus::Ok);
        assert_eq!(xic_function_validate(f, 8, &mut clean, &mut violations), XicStatus::Ok);
        assert!(!clean);
        assert!(violations > 0);
        xic_function_free(f);
    }
}

#[test]
fn adversary_reports() {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(xic_adversary_run(XicConstruction::Modulus, c("null").as_ptr(), ptr::null(), 0, &mut r), XicStatus::Ok);
        assert!(xic_report_fooled(r));
        assert_eq!(xic_report_n(r), 10);
        let text = xic_report_text(r);
        assert!(CStr::from_ptr(text).to_str().unwrap().contains("modulus"));
        xic_string_free(text);
        xic_report_free(r);

        let status = xic_adversary_run(XicConstruction::Length, c("identity-op").as_ptr(), ptr::null(), 9, &mut r);
        assert_eq!(status, XicStatus::Cap);
        let status = xic_adversary_run(XicConstruction::Mirror, c("who").as_ptr(), ptr::null(), 2, &mut r);
        assert_eq!(status, XicStatus::UnknownCandidate);
        let status = xic_adversary_run(XicConstruction::Mirror, c("prefix-peek").as_ptr(), c("x*").as_ptr(), 2, &mut r);
        assert_eq!(status, XicStatus::InvalidPolynomial);

        assert_eq!(xic_adversary_run(XicConstruction::Mirror, c("budgeted-naive").as_ptr(), ptr::null(), 2, &mut r), XicStatus::Ok);
        assert!(xic_report_fooled(r));
        xic_report_free(r);
        assert!(!xic_report_fooled(ptr::null()));
        assert!(xic_report_text(ptr::null()).is_null());
    }
}

#[test]
fn header_declares_every_export() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/xic.h")).unwrap();
    for sym in [
        "xic_last_error",
        "xic_string_free",
        "xic_function_new",
        "xic_function_free",
        "xic_function_eval",
        "xic_function_validate",
        "xic_adversary_run",
        "xic_report_fooled",
        "xic_report_n",
        "xic_report_text",
        "xic_report_free",
        "typedef struct XicFunction XicFunction",
        "XIC_STATUS_OK = 0",
    ] {
        assert!(header.contains(sym), "missing {sym}");
    }
    // The header must also be valid C when a compiler is around.
    if Command::new("cc").arg("--version").output().is_ok() {
        let status = Command::new("cc")
            .args(["-fsyntax-only", "-Wall", "-Werror"])
            .arg(dir.join("include/xic.h"))
            .status()
            .unwrap();
        assert!(status.success());
    }
}
