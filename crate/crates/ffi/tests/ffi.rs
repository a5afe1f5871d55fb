use std::ffi::{CStr, CString};
use std::ptr;

use polyzero_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(pz_last_error()) }.to_string_lossy().into_owned()
}

unsafe fn unit_roots(n: usize) -> *mut PzPolynomial {
    let mut c = vec![0.0; 2 * (n + 1)];
    c[0] = -1.0;
    c[2 * n] = 1.0;
    let mut p = ptr::null_mut();
    assert_eq!(pz_polynomial_new(c.as_ptr(), n + 1, &mut p), PzStatus::PzOk);
    p
}

#[test]
fn roots_and_statistics() {
    unsafe {
        let p = unit_roots(16);
        let mut deg = 0;
        assert_eq!(pz_polynomial_degree(p, &mut deg), PzStatus::PzOk);
        assert_eq!(deg, 16);

        let mut r = ptr::null_mut();
        assert_eq!(pz_roots_find(p, 1e-12, 500, &mut r), PzStatus::PzOk);
        let mut len = 0;
        pz_roots_len(r, &mut len);
        assert_eq!(len, 16);

        let mut small = [0.0; 4];
        assert_eq!(pz_roots_copy(r, small.as_mut_ptr(), 4), PzStatus::PzBufferTooSmall);
        assert!(last_error().contains("need 32"));
        let mut buf = vec![0.0; 32];
        assert_eq!(pz_roots_copy(r, buf.as_mut_ptr(), 32), PzStatus::PzOk);
        for w in buf.chunks(2) {
            assert!((w[0].hypot(w[1]) - 1.0).abs() < 1e-10);
        }

        let mut d = 0.0;
        pz_angular_discrepancy(r, &mut d);
        assert!((d - 1.0 / 16.0).abs() < 1e-9, "{d}");

        let mut v = 0.0;
        assert_eq!(pz_p_norm(p, 2.0, &mut v), PzStatus::PzOk);
        assert!((v - 2f64.sqrt()).abs() < 1e-9);
        let (mut lo, mut hi) = (0.0, 0.0);
        assert_eq!(pz_sup_norm(p, &mut lo, &mut hi), PzStatus::PzOk);
        assert!(lo <= 2.0 + 1e-12 && hi >= 2.0 - 1e-12);
        assert_eq!(pz_mahler(p, &mut v), PzStatus::PzOk);
        assert!((v - 1.0).abs() < 1e-6, "{v}");

        pz_roots_free(r);
        pz_polynomial_free(p);
    }
}

#[test]
fn family_and_report() {
    unsafe {
        let name = CString::new("littlewood").unwrap();
        let mut p = ptr::null_mut();
        assert_eq!(pz_polynomial_family(name.as_ptr(), 24, 5, &mut p), PzStatus::PzOk);
        let mut rep = ptr::null_mut();
        assert_eq!(pz_certify(p, &mut rep), PzStatus::PzOk);
        let mut hv = 99;
        pz_report_hard_violations(rep, &mut hv);
        assert_eq!(hv, 0);

        let mut need = 0;
        assert_eq!(pz_report_json(rep, ptr::null_mut(), 0, &mut need), PzStatus::PzOk);
        let mut tiny = [0 as std::ffi::c_char; 8];
        assert_eq!(pz_report_json(rep, tiny.as_mut_ptr(), 8, &mut need), PzStatus::PzBufferTooSmall);
        let mut buf = vec![0 as std::ffi::c_char; need];
        assert_eq!(pz_report_json(rep, buf.as_mut_ptr(), need, &mut need), PzStatus::PzOk);
        let text = CStr::from_ptr(buf.as_ptr()).to_str().unwrap();
        let v: serde_json::Value = serde_json::from_str(text).unwrap();
        assert_eq!(v["polynomial"]["degree"], 24);
        assert_eq!(text.len() + 1, need);

        pz_report_free(rep);
        pz_polynomial_free(p);
    }
}

#[test]
fn json_input() {
    unsafe {
        let js = CString::new(r#"{"coeffs": [[1, 0], [0, 0], [1, 0]]}"#).unwrap();
        let mut p = ptr::null_mut();
        assert_eq!(pz_polynomial_from_json(js.as_ptr(), &mut p), PzStatus::PzOk);
        let mut deg = 0;
        pz_polynomial_degree(p, &mut deg);
        assert_eq!(deg, 2);
        pz_polynomial_free(p);

        let bad = CString::new("{nope").unwrap();
        assert_eq!(pz_polynomial_from_json(bad.as_ptr(), &mut p), PzStatus::PzParse);
        assert!(p.is_null());
        assert!(!last_error().is_empty());
    }
}

#[test]
fn errors() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(pz_polynomial_new(ptr::null(), 3, &mut p), PzStatus::PzNullPointer);
        assert_eq!(pz_polynomial_degree(ptr::null(), ptr::null_mut()), PzStatus::PzNullPointer);
        let nan = [f64::NAN, 0.0, 1.0, 0.0];
        assert_eq!(pz_polynomial_new(nan.as_ptr(), 2, &mut p), PzStatus::PzInvalidArgument);
        let name = CString::new("nope").unwrap();
        assert_ne!(pz_polynomial_family(name.as_ptr(), 3, 0, &mut p), PzStatus::PzOk);

        let q = unit_roots(64);
        let mut r = ptr::null_mut();
        assert_eq!(pz_roots_find(q, 1e-14, 1, &mut r), PzStatus::PzNonConvergence);
        assert!(r.is_null());
        pz_polynomial_free(q);

        // success clears the message
        let mut n = 0;
        assert_eq!(pz_min_degree_for_radius(9.0, 1.0, &mut n), PzStatus::PzOk);
        assert_eq!(n, 6170);
        assert!(last_error().is_empty());
        assert_eq!(pz_min_degree_for_radius(-1.0, 1.0, &mut n), PzStatus::PzInvalidArgument);

        pz_polynomial_free(ptr::null_mut());
        pz_roots_free(ptr::null_mut());
        pz_report_free(ptr::null_mut());
    }
}

#[test]
fn gear_teeth() {
    let mut t = 0;
    unsafe {
        assert_eq!(pz_gear_teeth(0.04, 0.0, false, &mut t), PzStatus::PzOk);
        assert_eq!(t, 78);
        assert_eq!(pz_gear_teeth(std::f64::consts::PI / 60.0, 0.2577, true, &mut t), PzStatus::PzOk);
        assert_eq!(t, 48);
        assert_eq!(pz_gear_teeth(0.1, 1.5, false, &mut t), PzStatus::PzInvalidArgument);
    }
}

#[test]
fn header_is_current() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/polyzero.h")).unwrap();
    assert!(h.contains("#ifndef POLYZERO_H"));
    for f in [
        "pz_last_error",
        "pz_polynomial_new",
        "pz_roots_find",
        "pz_certify",
        "pz_report_json",
        "pz_gear_teeth",
        "PZ_BUFFER_TOO_SMALL = 7",
    ] {
        assert!(h.contains(f), "{f} missing from header");
    }
}
