//! C interface to `qimage`.
//!
//! Algebras and polynomials are opaque handles; quaternions and reports
//! cross the boundary as UTF-8 strings in the same syntax the command-line
//! tool uses. Every function returns a [`QimStatus`]; on failure the message
//! is available from [`qim_last_error`] until the next call on the same
//! thread. Strings returned through out-parameters are owned by the caller
//! and released with [`qim_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qimage::cli::{self, JobConfig};
use qimage::fields::FieldDescriptor;
use qimage::multilinear::{parse_poly, MultilinearPoly};
use qimage::oracle::{enumerate_image, OracleError};
use qimage::quaternion::AlgebraSpec;
use qimage::solvers::{commutator_decompose, SolveCtx};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QimStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    /// A legitimate negative answer: no solution exists.
    NoSolution = 4,
    SolverFailure = 5,
    BudgetExceeded = 6,
    Panic = 7,
}

/// A quaternion algebra over a field.
pub struct QimAlgebra {
    spec: AlgebraSpec,
}

/// A multilinear polynomial over the field of the algebra it was parsed for.
pub struct QimPoly {
    poly: MultilinearPoly,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Fail(QimStatus, String);

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> QimStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QimStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QimStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(QimStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(QimStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(QimStatus::NullPointer, format!("{what} is null")))
}

fn out_ptr<T>(p: *mut T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(QimStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

fn parse_err(e: impl std::fmt::Display) -> Fail {
    Fail(QimStatus::ParseError, e.to_string())
}

/// Creates an algebra from a field spec (`"GF(3)"`, `"QTower[2]"`, ...) and
/// an algebra spec (`"H(1,1)"`, `"Hq(-1,-1)"`, `"H2[1,1]"`).
///
/// # Safety
/// `field` and `algebra` must be NUL-terminated strings; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn qim_algebra_new(
    field: *const c_char,
    algebra: *const c_char,
    out: *mut *mut QimAlgebra,
) -> QimStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let f: FieldDescriptor = text(field, "field")?.parse().map_err(parse_err)?;
        let spec = AlgebraSpec::parse(f, text(algebra, "algebra")?).map_err(parse_err)?;
        *out = Box::into_raw(Box::new(QimAlgebra { spec }));
        Ok(())
    })
}

/// # Safety
/// `alg` must come from [`qim_algebra_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qim_algebra_free(alg: *mut QimAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Characteristic of the base field (0 for towers over Q, and for null).
///
/// # Safety
/// `alg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qim_algebra_characteristic(alg: *const QimAlgebra) -> u64 {
    alg.as_ref().map_or(0, |a| a.spec.field().characteristic())
}

/// Parses a polynomial (`"s2"`, `"standard:3"`, `"deg3:1,0"`, JSON, ...)
/// over the field of `alg`.
///
/// # Safety
/// `alg` must be a live handle, `spec` a NUL-terminated string, `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn qim_poly_parse(
    alg: *const QimAlgebra,
    spec: *const c_char,
    out: *mut *mut QimPoly,
) -> QimStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let a = handle(alg, "algebra")?;
        let poly = parse_poly(a.spec.field(), text(spec, "poly")?).map_err(parse_err)?;
        *out = Box::into_raw(Box::new(QimPoly { poly }));
        Ok(())
    })
}

/// # Safety
/// `p` must come from [`qim_poly_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qim_poly_free(p: *mut QimPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of variables (0 for null).
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qim_poly_arity(p: *const QimPoly) -> usize {
    p.as_ref().map_or(0, |p| p.poly.arity())
}

/// Evaluates `p` on `n_args` quaternions given as strings.
///
/// # Safety
/// `args` must point to `n_args` NUL-terminated strings; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn qim_evaluate(
    alg: *const QimAlgebra,
    p: *const QimPoly,
    args: *const *const c_char,
    n_args: usize,
    out: *mut *mut c_char,
) -> QimStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let a = handle(alg, "algebra")?;
        let p = handle(p, "poly")?;
        if args.is_null() && n_args > 0 {
            return Err(Fail(QimStatus::NullPointer, "args is null".into()));
        }
        let mut xs = Vec::with_capacity(n_args);
        for t in 0..n_args {
            let s = text(*args.add(t), "argument")?;
            xs.push(a.spec.parse_quaternion(s).map_err(parse_err)?);
        }
        let v = p.poly.evaluate(&a.spec, &xs).map_err(parse_err)?;
        *out = c_string(a.spec.format_quaternion(&v));
        Ok(())
    })
}

/// Writes `x`, `y` with `xy − yx = target`.
///
/// # Safety
/// `target` must be a NUL-terminated string; `out_x`, `out_y` writable.
#[no_mangle]
pub unsafe extern "C" fn qim_commutator_decompose(
    alg: *const QimAlgebra,
    target: *const c_char,
    out_x: *mut *mut c_char,
    out_y: *mut *mut c_char,
) -> QimStatus {
    guard(|| {
        out_ptr(out_x, "out_x")?;
        out_ptr(out_y, "out_y")?;
        let a = handle(alg, "algebra")?;
        let t = a.spec.parse_quaternion(text(target, "target")?).map_err(parse_err)?;
        let mut ctx = SolveCtx::new(a.spec.clone());
        let (x, y) = commutator_decompose(&mut ctx, &t).map_err(|e| {
            let status = if e.is_negative_result() {
                QimStatus::NoSolution
            } else {
                QimStatus::SolverFailure
            };
            Fail(status, e.to_string())
        })?;
        let s = ctx.spec();
        *out_x = c_string(s.format_quaternion(&x));
        *out_y = c_string(s.format_quaternion(&y));
        Ok(())
    })
}

/// Enumerates the image of `p` (finite fields only) and writes its class
/// name and size.
///
/// # Safety
/// Handles must be live; `out_class` and `out_size` writable.
#[no_mangle]
pub unsafe extern "C" fn qim_classify(
    alg: *const QimAlgebra,
    p: *const QimPoly,
    budget: u64,
    out_class: *mut *mut c_char,
    out_size: *mut u64,
) -> QimStatus {
    guard(|| {
        out_ptr(out_class, "out_class")?;
        out_ptr(out_size, "out_size")?;
        let a = handle(alg, "algebra")?;
        let p = handle(p, "poly")?;
        let img = enumerate_image(&p.poly, &a.spec, budget).map_err(|e| match e {
            OracleError::BudgetExceeded { .. } => Fail(QimStatus::BudgetExceeded, e.to_string()),
            _ => Fail(QimStatus::SolverFailure, e.to_string()),
        })?;
        *out_class = c_string(img.class().name().to_string());
        *out_size = img.cardinality() as u64;
        Ok(())
    })
}

/// Runs a command-line job described by a JSON config (or an earlier
/// report) and writes the report JSON. `exit_code` receives the exit code
/// the command-line tool would return: 0 success, 1 error, 2 negative.
///
/// # Safety
/// `config_json` must be a NUL-terminated string; `out_report` and
/// `exit_code` writable.
#[no_mangle]
pub unsafe extern "C" fn qim_run(
    config_json: *const c_char,
    out_report: *mut *mut c_char,
    exit_code: *mut i32,
) -> QimStatus {
    guard(|| {
        out_ptr(out_report, "out_report")?;
        out_ptr(exit_code, "exit_code")?;
        let config = JobConfig::from_json(text(config_json, "config")?).map_err(parse_err)?;
        let report = cli::run(&config, false);
        *exit_code = report.exit_code();
        *out_report = c_string(report.to_json());
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qim_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread (empty after success).
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn qim_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
