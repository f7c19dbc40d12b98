//! C ABI over `klorentz`.
//!
//! Objects cross the boundary as opaque handles created by `*_from_json`
//! (or `kl_cone_orthant`) and released with the matching `*_free`.
//! Every fallible call returns a [`KlStatus`]; on an error status the
//! message is available from [`kl_last_error`] until the next failing call
//! on the same thread. Strings returned through `out` parameters are owned
//! by the caller and must be released with [`kl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use klorentz::levi::{self, LeviSystem};
use klorentz::lorentz;
use klorentz::{Certificate, Error, GeneratedCone, Polynomial, Rational};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KlStatus {
    /// Success, CertifiedYes or Unknown.
    Ok = 0,
    /// The certificate is CertifiedNo; the witness is in the JSON output.
    CertifiedNo = 1,
    /// Null pointer, bad UTF-8 or a length that does not match.
    InvalidArgument = 2,
    /// Malformed JSON or values rejected by the library.
    InvalidInput = 3,
    /// An operation precondition failed (dimensions, degree, properness).
    Precondition = 4,
    /// Singular matrix or failed projection.
    Numerical = 5,
    /// Internal panic caught at the boundary.
    Panic = 6,
}

pub struct KlPolynomial(Polynomial);
pub struct KlCone(GeneratedCone);
pub struct KlSystem(LeviSystem);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: KlStatus, msg: impl Into<String>) -> KlStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> KlStatus {
    let status = match e {
        Error::InvalidInput(_) => KlStatus::InvalidInput,
        Error::SingularMatrix | Error::Projection(_) => KlStatus::Numerical,
        Error::DimensionMismatch { .. }
        | Error::NotHomogeneous
        | Error::ZeroPolynomial
        | Error::NotFullDimensional
        | Error::Precondition(_) => KlStatus::Precondition,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> KlStatus) -> KlStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(KlStatus::Panic, "internal panic"))
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return from_error(e),
        }
    };
}

macro_rules! arg {
    ($e:expr, $what:literal) => {
        match $e {
            Some(v) => v,
            None => return fail(KlStatus::InvalidArgument, concat!($what, " is null or invalid")),
        }
    };
}

unsafe fn str_arg<'a>(s: *const c_char) -> Option<&'a str> {
    if s.is_null() {
        return None;
    }
    CStr::from_ptr(s).to_str().ok()
}

unsafe fn slice_arg<'a>(p: *const f64, n: usize) -> Option<&'a [f64]> {
    if p.is_null() {
        return if n == 0 { Some(&[]) } else { None };
    }
    Some(std::slice::from_raw_parts(p, n))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> KlStatus {
    if out.is_null() {
        return fail(KlStatus::InvalidArgument, "output pointer is null");
    }
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            KlStatus::Ok
        }
        Err(_) => fail(KlStatus::InvalidInput, "output contains a NUL byte"),
    }
}

unsafe fn put_certificate(out: *mut *mut c_char, c: &Certificate) -> KlStatus {
    let json = serde_json::to_string(c).expect("certificates serialize");
    match put_string(out, json) {
        KlStatus::Ok if c.is_no() => KlStatus::CertifiedNo,
        s => s,
    }
}

fn rationals(what: &str, json: &str) -> Result<Vec<Rational>, Error> {
    let v: serde_json::Value =
        serde_json::from_str(json).map_err(|e| Error::InvalidInput(format!("{what}: {e}")))?;
    let arr = v.as_array().ok_or_else(|| Error::InvalidInput(format!("{what} must be a JSON array")))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| klorentz::rational::from_json(x).map_err(|e| Error::InvalidInput(format!("{what}[{i}]: {e}"))))
        .collect()
}

unsafe fn write_floats(out: *mut f64, cap: usize, xs: &[f64]) -> KlStatus {
    if out.is_null() || cap != xs.len() {
        return fail(KlStatus::InvalidArgument, format!("output buffer must hold {} values", xs.len()));
    }
    std::ptr::copy_nonoverlapping(xs.as_ptr(), out, xs.len());
    KlStatus::Ok
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn kl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last error on this thread, or null. Owned by the library.
#[no_mangle]
pub extern "C" fn kl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned through an `out` parameter.
///
/// # Safety
/// `s` must be null or a string produced by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn kl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kl_polynomial_from_json(json: *const c_char, out: *mut *mut KlPolynomial) -> KlStatus {
    guard(|| {
        let s = arg!(str_arg(json), "json");
        if out.is_null() {
            return fail(KlStatus::InvalidArgument, "out is null");
        }
        let p = tri!(Polynomial::from_json_str(s));
        *out = Box::into_raw(Box::new(KlPolynomial(p)));
        KlStatus::Ok
    })
}

/// # Safety
/// `p` must be null or a handle from `kl_polynomial_from_json`, freed once.
#[no_mangle]
pub unsafe extern "C" fn kl_polynomial_free(p: *mut KlPolynomial) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of variables, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kl_polynomial_nvars(p: *const KlPolynomial) -> usize {
    p.as_ref().map_or(0, |p| p.0.nvars())
}

/// # Safety
/// `x` must point to `n` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kl_polynomial_eval(p: *const KlPolynomial, x: *const f64, n: usize, out: *mut f64) -> KlStatus {
    guard(|| {
        let p = arg!(p.as_ref(), "polynomial");
        let x = arg!(slice_arg(x, n), "x");
        if out.is_null() {
            return fail(KlStatus::InvalidArgument, "out is null");
        }
        *out = tri!(p.0.eval_f64(x));
        KlStatus::Ok
    })
}

/// Canonical polynomial JSON.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kl_polynomial_to_json(p: *const KlPolynomial, out: *mut *mut c_char) -> KlStatus {
    guard(|| {
        let p = arg!(p.as_ref(), "polynomial");
        put_string(out, p.0.to_json_string())
    })
}

/// Ultra log-concavity of a bivariate form.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kl_certify_ulc(p: *const KlPolynomial, out: *mut bool) -> KlStatus {
    guard(|| {
        let p = arg!(p.as_ref(), "polynomial");
        if out.is_null() {
            return fail(KlStatus::InvalidArgument, "out is null");
        }
        *out = tri!(lorentz::ulc_bivariate(&p.0));
        KlStatus::Ok
    })
}

/// Hyperbolicity with respect to `dir_json` (a JSON array of rationals).
/// The certificate JSON is written to `out`.
///
/// # Safety
/// `p` must be a live handle, `dir_json` NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kl_certify_hyperbolic(
    p: *const KlPolynomial,
    dir_json: *const c_char,
    samples: u64,
    seed: u64,
    out: *mut *mut c_char,
) -> KlStatus {
    guard(|| {
        let p = arg!(p.as_ref(), "polynomial");
        let dir = tri!(rationals("dir", arg!(str_arg(dir_json), "dir_json")));
        let c = tri!(lorentz::hyperbolicity_check(&p.0, &dir, samples, seed));
        put_certificate(out, &c)
    })
}

/// K-Lorentzian check; the certificate JSON is written to `out`.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kl_certify_lorentzian(
    p: *const KlPolynomial,
    cone: *const KlCone,
    samples: u64,
    seed: u64,
    out: *mut *mut c_char,
) -> KlStatus {
    guard(|| {
        let p = arg!(p.as_ref(), "polynomial");
        let k = arg!(cone.as_ref(), "cone");
        let c = tri!(lorentz::k_lorentzian_check(&p.0, &k.0, samples, seed));
        put_certificate(out, &c)
    })
}

/// # Safety
/// `json` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kl_cone_from_json(json: *const c_char, out: *mut *mut KlCone) -> KlStatus {
    guard(|| {
        let s = arg!(str_arg(json), "json");
        if out.is_null() {
            return fail(KlStatus::InvalidArgument, "out is null");
        }
        let k = tri!(GeneratedCone::from_json_str(s));
        *out = Box::into_raw(Box::new(KlCone(k)));
        KlStatus::Ok
    })
}

/// The nonnegative orthant of dimension `n`, or null when `n` is 0.
#[no_mangle]
pub extern "C" fn kl_cone_orthant(n: usize) -> *mut KlCone {
    if n == 0 {
        set_error("orthant dimension must be positive".into());
        return ptr::null_mut();
    }
    Box::into_raw(Box::new(KlCone(GeneratedCone::orthant(n))))
}

/// # Safety
/// `k` must be null or a cone handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn kl_cone_free(k: *mut KlCone) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// # Safety
/// `k` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kl_cone_nvars(k: *const KlCone) -> usize {
    k.as_ref().map_or(0, |k| k.0.nvars())
}

/// Tolerance membership of `x`.
///
/// # Safety
/// `x` must point to `n` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kl_cone_contains(k: *const KlCone, x: *const f64, n: usize, tol: f64, out: *mut bool) -> KlStatus {
    guard(|| {
        let k = arg!(k.as_ref(), "cone");
        let x = arg!(slice_arg(x, n), "x");
        if out.is_null() {
            return fail(KlStatus::InvalidArgument, "out is null");
        }
        *out = tri!(k.0.contains_f64(x, tol));
        KlStatus::Ok
    })
}

/// Euclidean projection of `z` (length `n`) into `out` (length `n`).
///
/// # Safety
/// `z` and `out` must point to `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn kl_cone_project(k: *const KlCone, z: *const f64, n: usize, out: *mut f64) -> KlStatus {
    guard(|| {
        let k = arg!(k.as_ref(), "cone");
        let z = arg!(slice_arg(z, n), "z");
        let p = tri!(k.0.project(z));
        write_floats(out, n, &p)
    })
}

/// LEVI system from `{"A": {"rows": …}, "F": [poly…]?, "cone": {…}}`.
///
/// # Safety
/// `json` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kl_system_from_json(json: *const c_char, out: *mut *mut KlSystem) -> KlStatus {
    guard(|| {
        let s = arg!(str_arg(json), "json");
        if out.is_null() {
            return fail(KlStatus::InvalidArgument, "out is null");
        }
        let sys = tri!(LeviSystem::from_json_str(s));
        *out = Box::into_raw(Box::new(KlSystem(sys)));
        KlStatus::Ok
    })
}

/// # Safety
/// `s` must be null or a system handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn kl_system_free(s: *mut KlSystem) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// One projected Euler step from `x` into `out` (both length `n`).
///
/// # Safety
/// `x` and `out` must point to `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn kl_levi_step(s: *const KlSystem, x: *const f64, n: usize, h: f64, out: *mut f64) -> KlStatus {
    guard(|| {
        let s = arg!(s.as_ref(), "system");
        let x = arg!(slice_arg(x, n), "x");
        let next = tri!(levi::step(&s.0, x, h));
        write_floats(out, n, &next)
    })
}

/// Trajectory CSV `t,x1,…,xn` from `x0` with step `h` up to time `t_end`.
///
/// # Safety
/// `x0` must point to `n` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kl_levi_simulate(
    s: *const KlSystem,
    x0: *const f64,
    n: usize,
    h: f64,
    t_end: f64,
    out: *mut *mut c_char,
) -> KlStatus {
    guard(|| {
        let s = arg!(s.as_ref(), "system");
        let x0 = arg!(slice_arg(x0, n), "x0");
        let t = tri!(levi::simulate(&s.0, x0, h, t_end));
        put_string(out, t.to_csv())
    })
}

/// Copositivity of the symmetric part of the system matrix on its cone;
/// the certificate JSON is written to `out`.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kl_levi_copositivity(s: *const KlSystem, samples: u64, seed: u64, out: *mut *mut c_char) -> KlStatus {
    guard(|| {
        let s = arg!(s.as_ref(), "system");
        let q = tri!(s.0.matrix().symmetric_part());
        let c = tri!(levi::copositivity(&q, s.0.cone(), samples, seed));
        put_certificate(out, &c)
    })
}
