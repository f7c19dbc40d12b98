use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use klorentz_ffi::*;

const CUBIC: &str = r#"{"nvars":2,"terms":[{"exp":[3,0],"coef":"4"},{"exp":[2,1],"coef":"15"},{"exp":[1,2],"coef":"18"},{"exp":[0,3],"coef":"6"}]}"#;
const SYS2: &str = r#"{"A":{"rows":[[1,2],[1,1]]},"cone":{"nvars":2,"generators":[[1,0],[0,1]]}}"#;
const SYS3: &str = r#"{"A":{"rows":[[1,3,2],[5,-1,1],[-3,10,2]]},"cone":{"nvars":3,"generators":[[1,0,0],[0,1,0],[0,0,1]]}}"#;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    kl_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let e = kl_last_error();
    assert!(!e.is_null());
    CStr::from_ptr(e).to_string_lossy().into_owned()
}

unsafe fn cubic() -> *mut KlPolynomial {
    let mut p = ptr::null_mut();
    assert_eq!(kl_polynomial_from_json(c(CUBIC).as_ptr(), &mut p), KlStatus::Ok);
    p
}

#[test]
fn polynomial_handle_round_trip() {
    unsafe {
        let p = cubic();
        assert_eq!(kl_polynomial_nvars(p), 2);
        let mut v = 0.0;
        assert_eq!(kl_polynomial_eval(p, [2.0, 1.0].as_ptr(), 2, &mut v), KlStatus::Ok);
        assert_eq!(v, 134.0);
        assert_eq!(kl_polynomial_eval(p, [2.0].as_ptr(), 1, &mut v), KlStatus::Precondition);
        let mut s = ptr::null_mut();
        assert_eq!(kl_polynomial_to_json(p, &mut s), KlStatus::Ok);
        let json = take(s);
        assert!(json.contains("\"15/1\""), "{json}");
        kl_polynomial_free(p);
    }
}

#[test]
fn certificates_use_status_codes() {
    unsafe {
        let p = cubic();
        let mut ulc = false;
        assert_eq!(kl_certify_ulc(p, &mut ulc), KlStatus::Ok);
        assert!(ulc);
        let mut s = ptr::null_mut();
        assert_eq!(kl_certify_hyperbolic(p, c("[1,1]").as_ptr(), 100, 0, &mut s), KlStatus::CertifiedNo);
        let cert: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(cert["witness"]["x"], serde_json::json!(["2/1", "1/1"]));
        let k = kl_cone_orthant(2);
        let mut s = ptr::null_mut();
        let status = kl_certify_lorentzian(p, k, 50, 0, &mut s);
        assert!(matches!(status, KlStatus::Ok | KlStatus::CertifiedNo));
        let cert: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert!(cert["status"].is_string());
        kl_cone_free(k);
        kl_polynomial_free(p);
    }
}

#[test]
fn errors_set_last_error() {
    unsafe {
        let mut p = ptr::null_mut();
        let bad = c(r#"{"nvars":2,"terms":[{"exp":[1,0],"coef":"one"}]}"#);
        assert_eq!(kl_polynomial_from_json(bad.as_ptr(), &mut p), KlStatus::InvalidInput);
        assert!(p.is_null());
        assert!(last_error().contains("terms[0].coef"));
        assert_eq!(kl_polynomial_from_json(ptr::null(), &mut p), KlStatus::InvalidArgument);
        assert_eq!(kl_polynomial_eval(ptr::null(), ptr::null(), 0, ptr::null_mut()), KlStatus::InvalidArgument);
        assert!(kl_cone_orthant(0).is_null());
        let mut k = ptr::null_mut();
        assert_eq!(kl_cone_from_json(c(r#"{"nvars":2,"generators":[[0,0]]}"#).as_ptr(), &mut k), KlStatus::InvalidInput);
        assert!(last_error().contains("zero vector"));
        kl_polynomial_free(ptr::null_mut());
        kl_cone_free(ptr::null_mut());
        kl_string_free(ptr::null_mut());
    }
}

#[test]
fn cone_queries() {
    unsafe {
        let mut k = ptr::null_mut();
        assert_eq!(kl_cone_from_json(c(r#"{"nvars":2,"generators":[[1,0],[1,1]]}"#).as_ptr(), &mut k), KlStatus::Ok);
        assert_eq!(kl_cone_nvars(k), 2);
        let mut inside = false;
        assert_eq!(kl_cone_contains(k, [2.0, 1.0].as_ptr(), 2, 1e-9, &mut inside), KlStatus::Ok);
        assert!(inside);
        assert_eq!(kl_cone_contains(k, [0.0, 1.0].as_ptr(), 2, 1e-9, &mut inside), KlStatus::Ok);
        assert!(!inside);
        let mut proj = [0.0; 2];
        assert_eq!(kl_cone_project(k, [0.0, 2.0].as_ptr(), 2, proj.as_mut_ptr()), KlStatus::Ok);
        assert!((proj[0] - 1.0).abs() < 1e-12 && (proj[1] - 1.0).abs() < 1e-12);
        assert_eq!(kl_cone_project(k, [0.0, 2.0].as_ptr(), 2, ptr::null_mut()), KlStatus::InvalidArgument);
        kl_cone_free(k);
    }
}

#[test]
fn levi_through_handles() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(kl_system_from_json(c(SYS2).as_ptr(), &mut s), KlStatus::Ok);
        let mut next = [0.0; 2];
        assert_eq!(kl_levi_step(s, [0.0, 1.0].as_ptr(), 2, 0.1, next.as_mut_ptr()), KlStatus::Ok);
        assert!((next[0]).abs() < 1e-15 && (next[1] - 0.9).abs() < 1e-15);
        let mut csv = ptr::null_mut();
        assert_eq!(kl_levi_simulate(s, [1.0, 1.0].as_ptr(), 2, 0.1, 1.0, &mut csv), KlStatus::Ok);
        let csv = take(csv);
        assert!(csv.starts_with("t,x1,x2\n0,1,1\n"));
        assert_eq!(csv.lines().count(), 12);
        let mut csv = ptr::null_mut();
        assert_eq!(kl_levi_simulate(s, [-1.0, 1.0].as_ptr(), 2, 0.1, 1.0, &mut csv), KlStatus::Precondition);
        let mut cert = ptr::null_mut();
        assert_eq!(kl_levi_copositivity(s, 100, 0, &mut cert), KlStatus::Ok);
        kl_string_free(cert);
        kl_system_free(s);

        let mut s = ptr::null_mut();
        assert_eq!(kl_system_from_json(c(SYS3).as_ptr(), &mut s), KlStatus::Ok);
        let mut cert = ptr::null_mut();
        assert_eq!(kl_levi_copositivity(s, 100, 0, &mut cert), KlStatus::CertifiedNo);
        let v: serde_json::Value = serde_json::from_str(&take(cert)).unwrap();
        assert_eq!(v["witness"]["value"], "-1/1");
        kl_system_free(s);
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(kl_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "klorentz.h"

int main(void) {
    const char *json = "{\"nvars\":2,\"terms\":[{\"exp\":[3,0],\"coef\":\"4\"},{\"exp\":[2,1],\"coef\":\"15\"},"
                       "{\"exp\":[1,2],\"coef\":\"18\"},{\"exp\":[0,3],\"coef\":\"6\"}]}";
    KlPolynomial *p = NULL;
    if (kl_polynomial_from_json(json, &p) != KL_STATUS_OK) return 10;
    double x[2] = {2.0, 1.0};
    double v = 0.0;
    if (kl_polynomial_eval(p, x, 2, &v) != KL_STATUS_OK || v != 134.0) return 11;
    char *cert = NULL;
    if (kl_certify_hyperbolic(p, "[1,1]", 100, 0, &cert) != KL_STATUS_CERTIFIED_NO) return 12;
    if (strstr(cert, "\"2/1\"") == NULL) return 13;
    kl_string_free(cert);
    if (kl_polynomial_from_json("{", &p) != KL_STATUS_INVALID_INPUT || kl_last_error() == NULL) return 14;
    kl_polynomial_free(p);
    printf("ok %s\n", kl_version());
    return 0;
}
"#;

/// Compiles a C program against the generated header and the static
/// library. Skipped when no C compiler or static library is present.
#[test]
fn c_program_links_against_the_header() {
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    assert!(include.join("klorentz.h").exists());
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libklorentz_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: static library or C compiler not available");
        return;
    }
    let dir = tempfile::TempDir::new().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let bin = dir.path().join("main");
    let status = Command::new("cc")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
