//! C interface to `polyzero`.
//!
//! Objects cross the boundary as opaque handles that the caller frees with
//! the matching `pz_*_free`. Every function returns a [`PzStatus`]; on
//! failure `pz_last_error` describes the problem for the calling thread.
//! Complex numbers are passed as interleaved `(re, im)` doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;

use polyzero::geometry::{ArcFormula, Gear};
use polyzero::harness::{certify, BoundReport, CertifyConfig};
use polyzero::norms::{mahler, p_norm, sup_norm_enclosure, MahlerMethod, Tolerances};
use polyzero::poly::{make_family, read_polynomial, FamilyKind, FamilySpec, PolyFormat, Polynomial};
use polyzero::roots::{find_roots, RootSet};
use polyzero::zerostats::angular_discrepancy;
use polyzero::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PzStatus {
    PzOk = 0,
    PzNullPointer = 1,
    PzInvalidArgument = 2,
    PzParse = 3,
    PzNonConvergence = 4,
    PzGridCap = 5,
    PzIo = 6,
    PzBufferTooSmall = 7,
    PzPanic = 8,
}

pub struct PzPolynomial(Polynomial);
pub struct PzRoots(RootSet);
pub struct PzReport(BoundReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> PzStatus {
    match e {
        Error::Parse(_) => PzStatus::PzParse,
        Error::NonConvergence { .. } => PzStatus::PzNonConvergence,
        Error::GridCap { .. } => PzStatus::PzGridCap,
        Error::Io(_) => PzStatus::PzIo,
        _ => PzStatus::PzInvalidArgument,
    }
}

fn guard<F: FnOnce() -> Result<(), (PzStatus, String)>>(f: F) -> PzStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            PzStatus::PzOk
        }
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            PzStatus::PzPanic
        }
    }
}

fn lib<T>(r: polyzero::Result<T>) -> Result<T, (PzStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (PzStatus, String) {
    (PzStatus::PzNullPointer, format!("{what} is null"))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (PzStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn in_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (PzStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn in_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (PzStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (PzStatus::PzInvalidArgument, format!("{what} is not UTF-8")))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next `pz_*` call on the same thread.
#[no_mangle]
pub extern "C" fn pz_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a polynomial from `count` interleaved `(re, im)` pairs in
/// ascending degree.
///
/// # Safety
/// `coeffs` must point to `2 * count` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pz_polynomial_new(coeffs: *const f64, count: usize, out: *mut *mut PzPolynomial) -> PzStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        if coeffs.is_null() {
            return Err(null("coeffs"));
        }
        let raw = std::slice::from_raw_parts(coeffs, 2 * count);
        let c = raw.chunks_exact(2).map(|w| Complex64::new(w[0], w[1])).collect();
        *out = Box::into_raw(Box::new(PzPolynomial(lib(Polynomial::new(c))?)));
        Ok(())
    })
}

/// A member of a named family (`littlewood`, `unimodular`, `g_class`,
/// `lehmer`, `power_minus_one`, `rudin_shapiro_p`, ...).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pz_polynomial_family(
    name: *const c_char,
    parameter: usize,
    seed: u64,
    out: *mut *mut PzPolynomial,
) -> PzStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let kind: FamilyKind = lib(in_str(name, "name")?.parse())?;
        let p = lib(make_family(&FamilySpec::new(kind, parameter, seed)))?;
        *out = Box::into_raw(Box::new(PzPolynomial(p)));
        Ok(())
    })
}

/// Parses the JSON polynomial format, `{"coeffs": [[re, im], ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pz_polynomial_from_json(json: *const c_char, out: *mut *mut PzPolynomial) -> PzStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let text = in_str(json, "json")?;
        let p = lib(read_polynomial(text.as_bytes(), PolyFormat::Json))?;
        *out = Box::into_raw(Box::new(PzPolynomial(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must be a live handle or null; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pz_polynomial_degree(p: *const PzPolynomial, out: *mut usize) -> PzStatus {
    guard(|| {
        *out_ref(out, "out")? = in_ref(p, "polynomial")?.0.degree();
        Ok(())
    })
}

/// # Safety
/// `p` must come from a `pz_polynomial_*` constructor and not be used
/// afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pz_polynomial_free(p: *mut PzPolynomial) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Aberth iteration; `tol` bounds the scaled residual of every root.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pz_roots_find(
    p: *const PzPolynomial,
    tol: f64,
    max_iter: usize,
    out: *mut *mut PzRoots,
) -> PzStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let r = lib(find_roots(&in_ref(p, "polynomial")?.0, tol, max_iter))?;
        *out = Box::into_raw(Box::new(PzRoots(r)));
        Ok(())
    })
}

/// # Safety
/// `r` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pz_roots_len(r: *const PzRoots, out: *mut usize) -> PzStatus {
    guard(|| {
        *out_ref(out, "out")? = in_ref(r, "roots")?.0.len();
        Ok(())
    })
}

/// Copies the roots as `(re, im)` pairs into `buf`, which holds `cap`
/// doubles. `PzBufferTooSmall` if `cap < 2 * len`.
///
/// # Safety
/// `r` must be a live handle and `buf` must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn pz_roots_copy(r: *const PzRoots, buf: *mut f64, cap: usize) -> PzStatus {
    guard(|| {
        let roots = in_ref(r, "roots")?.0.roots();
        if cap < 2 * roots.len() {
            return Err((
                PzStatus::PzBufferTooSmall,
                format!("need {} doubles, got {cap}", 2 * roots.len()),
            ));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        let dst = std::slice::from_raw_parts_mut(buf, 2 * roots.len());
        for (w, z) in dst.chunks_exact_mut(2).zip(roots) {
            w[0] = z.re;
            w[1] = z.im;
        }
        Ok(())
    })
}

/// # Safety
/// `r` must come from `pz_roots_find` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pz_roots_free(r: *mut PzRoots) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Exact angular discrepancy of the root set.
///
/// # Safety
/// `r` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pz_angular_discrepancy(r: *const PzRoots, out: *mut f64) -> PzStatus {
    guard(|| {
        *out_ref(out, "out")? = angular_discrepancy(&in_ref(r, "roots")?.0);
        Ok(())
    })
}

/// Normalized `p`-norm on the unit circle, `p` finite and positive.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pz_p_norm(p: *const PzPolynomial, exponent: f64, out: *mut f64) -> PzStatus {
    guard(|| {
        let v = lib(p_norm(&in_ref(p, "polynomial")?.0, exponent, Tolerances::default().p_norm))?;
        *out_ref(out, "out")? = v;
        Ok(())
    })
}

/// Enclosure `[lo, hi]` of the sup norm on the unit circle.
///
/// # Safety
/// `p` must be a live handle; `lo` and `hi` writable.
#[no_mangle]
pub unsafe extern "C" fn pz_sup_norm(p: *const PzPolynomial, lo: *mut f64, hi: *mut f64) -> PzStatus {
    guard(|| {
        let iv = lib(sup_norm_enclosure(&in_ref(p, "polynomial")?.0, Tolerances::default().sup_norm))?;
        *out_ref(lo, "lo")? = iv.lo;
        *out_ref(hi, "hi")? = iv.hi;
        Ok(())
    })
}

/// Mahler measure by quadrature.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pz_mahler(p: *const PzPolynomial, out: *mut f64) -> PzStatus {
    guard(|| {
        let (m, _) = lib(mahler(&in_ref(p, "polynomial")?.0, None, MahlerMethod::Quadrature))?;
        *out_ref(out, "out")? = m;
        Ok(())
    })
}

/// Checks every bound with the default configuration.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pz_certify(p: *const PzPolynomial, out: *mut *mut PzReport) -> PzStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let rep = lib(certify(&in_ref(p, "polynomial")?.0, &CertifyConfig::default()))?;
        *out = Box::into_raw(Box::new(PzReport(rep)));
        Ok(())
    })
}

/// # Safety
/// `r` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pz_report_hard_violations(r: *const PzReport, out: *mut usize) -> PzStatus {
    guard(|| {
        *out_ref(out, "out")? = in_ref(r, "report")?.0.hard_violations();
        Ok(())
    })
}

/// Writes the report as NUL-terminated JSON into `buf` (`cap` bytes).
/// `needed` receives the size including the terminator; a null `buf`
/// with `cap == 0` just queries it.
///
/// # Safety
/// `r` must be a live handle, `buf` must hold `cap` bytes, `needed`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn pz_report_json(r: *const PzReport, buf: *mut c_char, cap: usize, needed: *mut usize) -> PzStatus {
    guard(|| {
        let rep = in_ref(r, "report")?;
        let json = serde_json::to_string(&rep.0).map_err(|e| (PzStatus::PzIo, e.to_string()))?;
        let size = json.len() + 1;
        *out_ref(needed, "needed")? = size;
        if buf.is_null() && cap == 0 {
            return Ok(());
        }
        if cap < size {
            return Err((PzStatus::PzBufferTooSmall, format!("need {size} bytes, got {cap}")));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        ptr::copy_nonoverlapping(json.as_ptr(), buf as *mut u8, json.len());
        *buf.add(json.len()) = 0;
        Ok(())
    })
}

/// # Safety
/// `r` must come from `pz_certify` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pz_report_free(r: *mut PzReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Smallest `n >= 2` with `coefficient · log n / √n <= bound`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pz_min_degree_for_radius(coefficient: f64, bound: f64, out: *mut u64) -> PzStatus {
    guard(|| {
        *out_ref(out, "out")? = lib(polyzero::bounds::min_degree_for_radius(coefficient, bound))?;
        Ok(())
    })
}

/// Teeth count of the gear wheel with radius `gamma` and spacing `delta`.
/// `statement_formula` selects the tooth arc formula as printed in the
/// theorem instead of the chord form.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pz_gear_teeth(gamma: f64, delta: f64, statement_formula: bool, out: *mut usize) -> PzStatus {
    guard(|| {
        let formula = if statement_formula {
            ArcFormula::Statement
        } else {
            ArcFormula::Geometric
        };
        *out_ref(out, "out")? = lib(Gear::new(gamma, delta, formula, 0.0))?.teeth;
        Ok(())
    })
}
