use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use qimage_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    qim_string_free(p);
    s
}

unsafe fn last_error() -> String {
    CStr::from_ptr(qim_last_error()).to_str().unwrap().to_string()
}

#[test]
fn evaluate_and_classify() {
    unsafe {
        let mut alg = ptr::null_mut();
        assert_eq!(qim_algebra_new(cs("GF(3)").as_ptr(), cs("H(1,1)").as_ptr(), &mut alg), QimStatus::Ok);
        assert_eq!(qim_algebra_characteristic(alg), 3);
        let mut p = ptr::null_mut();
        assert_eq!(qim_poly_parse(alg, cs("s2").as_ptr(), &mut p), QimStatus::Ok);
        assert_eq!(qim_poly_arity(p), 2);

        let args = [cs("i"), cs("j")];
        let ptrs: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
        let mut out = ptr::null_mut();
        assert_eq!(qim_evaluate(alg, p, ptrs.as_ptr(), 2, &mut out), QimStatus::Ok);
        assert_eq!(take(out), "2*k");

        let mut class = ptr::null_mut();
        let mut size = 0u64;
        assert_eq!(qim_classify(alg, p, 1_000_000, &mut class, &mut size), QimStatus::Ok);
        assert_eq!((take(class).as_str(), size), ("S2SetEqual", 27));
        assert_eq!(qim_classify(alg, p, 10, &mut class, &mut size), QimStatus::BudgetExceeded);
        assert!(last_error().contains("budget"));

        assert_eq!(qim_evaluate(alg, p, ptrs.as_ptr(), 1, &mut out), QimStatus::ParseError);
        qim_poly_free(p);
        qim_algebra_free(alg);
    }
}

#[test]
fn commutator_decompose_round_trip() {
    unsafe {
        let mut alg = ptr::null_mut();
        assert_eq!(qim_algebra_new(cs("GF(5)").as_ptr(), cs("H(1,1)").as_ptr(), &mut alg), QimStatus::Ok);
        let (mut x, mut y) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(qim_commutator_decompose(alg, cs("k").as_ptr(), &mut x, &mut y), QimStatus::Ok);
        let (x, y) = (take(x), take(y));
        let mut p = ptr::null_mut();
        assert_eq!(qim_poly_parse(alg, cs("s2").as_ptr(), &mut p), QimStatus::Ok);
        let args = [cs(&x), cs(&y)];
        let ptrs: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
        let mut out = ptr::null_mut();
        assert_eq!(qim_evaluate(alg, p, ptrs.as_ptr(), 2, &mut out), QimStatus::Ok);
        assert_eq!(take(out), "k");
        let (mut x, mut y) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(qim_commutator_decompose(alg, cs("1").as_ptr(), &mut x, &mut y), QimStatus::SolverFailure);
        qim_poly_free(p);
        qim_algebra_free(alg);
    }
}

#[test]
fn errors_and_null_handling() {
    unsafe {
        let mut alg = ptr::null_mut();
        assert_eq!(qim_algebra_new(ptr::null(), cs("H(1,1)").as_ptr(), &mut alg), QimStatus::NullPointer);
        assert_eq!(qim_algebra_new(cs("GF(4").as_ptr(), cs("H(1,1)").as_ptr(), &mut alg), QimStatus::ParseError);
        assert!(!last_error().is_empty());
        let bad = [0xffu8, 0];
        assert_eq!(
            qim_algebra_new(bad.as_ptr().cast(), cs("H(1,1)").as_ptr(), &mut alg),
            QimStatus::InvalidUtf8
        );
        assert_eq!(qim_algebra_characteristic(ptr::null()), 0);
        assert_eq!(qim_poly_arity(ptr::null()), 0);
        qim_algebra_free(ptr::null_mut());
        qim_poly_free(ptr::null_mut());
        qim_string_free(ptr::null_mut());
        assert_eq!(qim_algebra_new(cs("GF(3)").as_ptr(), cs("H(1,1)").as_ptr(), &mut alg), QimStatus::Ok);
        assert!(last_error().is_empty());
        qim_algebra_free(alg);
    }
}

#[test]
fn run_reports_exit_codes() {
    unsafe {
        let mut report = ptr::null_mut();
        let mut code = -1;
        let cfg = cs(r#"{"command": "classify", "field": "GF(3)", "poly": "s2"}"#);
        assert_eq!(qim_run(cfg.as_ptr(), &mut report, &mut code), QimStatus::Ok);
        assert_eq!(code, 0);
        let json = take(report);
        assert!(json.contains("\"class\": \"S2SetEqual\""), "{json}");

        let cfg = cs(r#"{"command": "matrix-center", "poly": "s2"}"#);
        assert_eq!(qim_run(cfg.as_ptr(), &mut report, &mut code), QimStatus::Ok);
        assert_eq!(code, 2);
        qim_string_free(report);

        let cfg = cs(r#"{"command": "classify", "colour": "blue"}"#);
        assert_eq!(qim_run(cfg.as_ptr(), &mut report, &mut code), QimStatus::ParseError);
    }
}

fn target_dir() -> PathBuf {
    // tests live in target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_static_library() {
    let lib = target_dir().join("libqimage_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <string.h>
#include "qimage.h"

int main(void) {
    QimAlgebra *alg = NULL;
    QimPoly *p = NULL;
    if (qim_algebra_new("GF(7)", "H(1,1)", &alg) != QIM_STATUS_OK) return 1;
    if (qim_poly_parse(alg, "s2", &p) != QIM_STATUS_OK) return 2;
    char *x = NULL, *y = NULL, *v = NULL;
    if (qim_commutator_decompose(alg, "1 + i", &x, &y) != QIM_STATUS_SOLVER_FAILURE) return 3;
    if (qim_commutator_decompose(alg, "i + 2*j", &x, &y) != QIM_STATUS_OK) return 4;
    const char *args[2] = {x, y};
    if (qim_evaluate(alg, p, args, 2, &v) != QIM_STATUS_OK) return 5;
    printf("%s\n", v);
    int ok = strcmp(v, "i + 2*j") == 0;
    qim_string_free(x);
    qim_string_free(y);
    qim_string_free(v);
    qim_poly_free(p);
    qim_algebra_free(alg);
    return ok ? 0 : 6;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("smoke");
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "i + 2*j");
}
