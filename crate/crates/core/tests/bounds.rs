use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use proptest::prelude::*;

use polyzero::bounds::*;
use polyzero::geometry::{Gear, ArcFormula};
use polyzero::norms::{norm_profiles, Exponent, Tolerances};
use polyzero::poly::{make_family, FamilyKind, FamilySpec, Polynomial};
use polyzero::roots::{find_roots, RootSet};
use polyzero::zerostats::{angular_discrepancy, outside_annulus};

fn profiles(p: &Polynomial, roots: Option<&RootSet>) -> Vec<polyzero::norms::NormProfile> {
    let exps = [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity];
    norm_profiles(p, roots, &exps, &Tolerances::default()).unwrap()
}

#[test]
fn catalan_constant() {
    let k = catalan();
    assert!((0.91596559..=0.91596560).contains(&k));
    // (π/8) log(2 + √3) + (3/8) Σ (n!)² / ((2n)! (2n+1)²)
    let mut term = 1.0;
    let mut s = 0.0;
    for n in 0..40 {
        let nf = n as f64;
        s += term / ((2.0 * nf + 1.0) * (2.0 * nf + 1.0));
        term *= (nf + 1.0) / (2.0 * (2.0 * nf + 1.0));
    }
    let oracle = PI / 8.0 * (2.0 + 3f64.sqrt()).ln() + 0.375 * s;
    assert!((k - oracle).abs() < 1e-14, "{k} vs {oracle}");
}

#[test]
fn named_constants() {
    assert!((ganelius_constant() - (2.0 * PI / catalan()).sqrt()).abs() < 1e-15);
    assert!((ganelius_constant() - 2.61909).abs() < 1e-5);
    assert!((soundararajan_constant() - 2.5464).abs() < 1e-4);
    assert!((carneiro_constant() - 2.2567583).abs() < 1e-7);
}

#[test]
fn erf_against_series() {
    assert_eq!(erf(0.0), 0.0);
    assert!((erf(10.0) - 1.0).abs() < 1e-15);
    for k in 0..=400 {
        let x = k as f64 * 0.01;
        // e^{-x²} Σ 2^n x^{2n+1} / (2n+1)!!, all terms positive
        let mut term = x;
        let mut s = 0.0f64;
        let mut n = 0.0;
        while term > 1e-18 * s.max(1e-300) || n < 5.0 {
            s += term;
            term *= 2.0 * x * x / (2.0 * n + 3.0);
            n += 1.0;
        }
        let oracle = 2.0 / PI.sqrt() * (-x * x).exp() * s;
        assert!((erf(x) - oracle).abs() <= 1e-10, "x = {x}");
    }
}

#[test]
fn shafer_fink_on_a_grid() {
    for k in 0..=10_000 {
        let x = k as f64 / 10_000.0;
        assert!(x.asin() <= shafer_fink(x) + 1e-12, "x = {x}");
    }
}

#[test]
fn gear_factor_stays_above_constant() {
    for k in 1..=100_000 {
        let g = 0.5 * k as f64 / 100_000.0;
        assert!(gear_factor(g) > GEAR_CONSTANT, "γ = {g}");
    }
    // the teeth count exceeds 0.97π/(γ(1+δ)) less one
    for k in 1..=200 {
        let g = 0.5 * k as f64 / 200.0;
        for delta in [0.0, 0.25, 0.5] {
            let gear = Gear::new(g, delta, ArcFormula::Geometric, 0.0).unwrap();
            assert!(gear.teeth as f64 > GEAR_CONSTANT * PI / (g * (1.0 + delta)) - 1.0);
        }
    }
}

#[test]
fn closed_form_fraction() {
    let frac = 1.0 - GEAR_CONSTANT * PI / 9.0;
    assert!((frac - 0.661).abs() < 1e-3);
    let g = Gear::new(0.1, 0.0, ArcFormula::Geometric, 0.0).unwrap();
    let n = 8100;
    let b = 0.1 * (n as f64).sqrt() / 18.0;
    let gb = gear_zero_upper_bound(n, b, 1.0, 0.0, GearVariant::P9, &g).unwrap();
    assert!((gb.closed_form / n as f64 - frac).abs() < 1e-12);
    assert!(gb.applicable);
}

#[test]
fn thresholds() {
    assert_eq!(min_degree_for_radius(9.0, 1.0).unwrap(), 6170);
    assert_eq!(min_degree_for_radius(33.0 * PI, 1.0).unwrap(), 2_307_257);
    assert_eq!(min_degree_for_radius(9.0, 0.5).unwrap(), 35_583);
    assert_eq!(min_degree_for_radius(1.0, 1.0).unwrap(), 2);
    assert!(min_degree_for_radius(0.0, 1.0).is_err());
    let rows = default_thresholds();
    assert_eq!(rows.iter().map(|r| r.min_degree).collect::<Vec<_>>(), vec![6170, 2_307_257, 35_583]);
}

proptest! {
    #[test]
    fn threshold_postcondition(c in 0.5f64..200.0, b in 0.01f64..2.0) {
        let n = min_degree_for_radius(c, b).unwrap();
        let f = |n: u64| c * (n as f64).ln() / (n as f64).sqrt();
        prop_assert!(f(n) <= b);
        if n > 2 {
            prop_assert!(f(n - 1) > b);
        }
    }
}

#[test]
fn disk_lower_bound_examples() {
    let d = disk_lower_bound(6170, 0.0, 1.0, DiskVariant::Gn9, None).unwrap();
    assert!(d.applicable);
    assert!(!disk_lower_bound(6169, 0.0, 1.0, DiskVariant::Gn9, None).unwrap().applicable);
    let d = disk_lower_bound(10_000, 2f64.ln(), 1.0, DiskVariant::Sup7, None).unwrap();
    assert!((d.gamma - 0.0970406).abs() < 1e-6);
    assert!((d.min_zeros - 138.629).abs() < 1e-3);
    let d = disk_lower_bound(2_307_257, 0.0, 1.0, DiskVariant::CustomRadius, None).unwrap();
    assert!(d.applicable && d.gamma <= 1.0);
    assert!(!disk_lower_bound(2_307_256, 0.0, 1.0, DiskVariant::CustomRadius, None).unwrap().applicable);
    assert!(disk_lower_bound(100, 1.0, 0.4, DiskVariant::Sup7, None).is_err());
    assert!(!disk_lower_bound(100, -0.1, 1.0, DiskVariant::Sup7, None).unwrap().applicable);
}

#[test]
fn annular_constant_examples() {
    let (mut worst, mut first) = (0.0f64, 0.0f64);
    for n in 1..2000 {
        for k in 0..=100 {
            let e = k as f64 / 100.0;
            worst = worst.max(annular_constant(n, e));
            first = first.max((8.0 / PI * (1.0 - e + 1.0 / (std::f64::consts::E * ((n + 1) as f64).ln()))).sqrt());
        }
    }
    // the min with √2 is what keeps the constant small; the first term
    // alone peaks at n = 1
    assert!(worst <= 1.974 && worst == SQRT_2);
    assert!((1.974..1.975).contains(&first), "{first}");
    for n in [10usize, 100, 10_000] {
        for e in [0.0, 0.1, 0.2, 1.0 - PI / 4.0 - 1e-9] {
            assert_eq!(annular_constant(n, e), SQRT_2);
        }
    }
}

#[test]
fn shu_wang_examples() {
    let p = Polynomial::from_real(&[1.0, 1.0]).unwrap();
    let r = find_roots(&p, 1e-10, 100).unwrap();
    let t = discrepancy_bounds(&p, &profiles(&p, Some(&r)));
    let sw = t.get("ShuWang").unwrap();
    assert!((sw.value - (2.0 * 2f64.ln()).sqrt()).abs() < 1e-8);
    assert!(sw.conservative >= angular_discrepancy(&r));
    for n in 1..=64 {
        let p = Polynomial::power_minus_one(n).unwrap();
        let r = RootSet::roots_of_unity(n);
        let t = discrepancy_bounds(&p, &profiles(&p, Some(&r)));
        let sw = t.get("ShuWang").unwrap();
        assert!(sw.applicable && sw.conservative >= 1.0 / n as f64, "n = {n}");
    }
}

#[test]
fn discrepancy_bound_ordering() {
    for seed in 0..10 {
        for kind in [FamilyKind::Littlewood, FamilyKind::Unimodular, FamilyKind::GClass] {
            let p = make_family(&FamilySpec::new(kind, 24, seed)).unwrap();
            let t = discrepancy_bounds(&p, &profiles(&p, None));
            let v = |id: &str| t.get(id).unwrap().value;
            assert!(v("Carneiro") <= v("Soundararajan"));
            assert!(v("Soundararajan") <= v("Mignotte"));
            assert!(v("Mignotte") <= v("Ganelius"));
            assert!(v("Ganelius") <= v("ET16"));
            for e in &t.entries {
                assert!(e.conservative <= e.value + 1e-12 && e.value <= e.favorable + 1e-12, "{}", e.id);
            }
        }
    }
}

#[test]
fn hypothesis_screening() {
    // P(0) = 0
    let p = Polynomial::from_real(&[0.0, 1.0, 1.0]).unwrap();
    let t = discrepancy_bounds(&p, &profiles(&p, None));
    assert!(t.entries.iter().filter(|e| e.id != "CorollaryKn" && e.id != "CorollaryKnErf").all(|e| !e.applicable));
    // ‖P‖_1 < 1
    let p = Polynomial::from_real(&[0.3, 0.0, 0.3]).unwrap();
    let t = discrepancy_bounds(&p, &profiles(&p, None));
    assert!(!t.get("PropThm0_p[p=1]").unwrap().applicable);
    let p = make_family(&FamilySpec::new(FamilyKind::Unimodular, 12, 1)).unwrap();
    let t = discrepancy_bounds(&p, &profiles(&p, None));
    assert!(t.get("CorollaryKn").unwrap().applicable);
    assert!(!t.get("CorollaryKnErf").unwrap().hard);
}

#[test]
fn lem2_on_explicit_roots() {
    let p = Polynomial::from_roots(
        Complex64::new(1.0, 0.0),
        &[
            Complex64::new(0.1, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ],
    )
    .unwrap();
    let r = find_roots(&p, 1e-10, 500).unwrap();
    let prof = profiles(&p, Some(&r));
    let t = annular_bounds(&p, &prof[1], 0.5).unwrap();
    let outside = outside_annulus(&r, 0.5).unwrap();
    assert!((outside - 0.2).abs() < 1e-15);
    let e = t.get("Lem2_tau_outside[p=2,rho=0.5]").unwrap();
    assert!(outside <= e.conservative);
    // |c_0 c_n| = 0.1
    assert!(!e.applicable);
    assert!(annular_bounds(&p, &prof[1], 1.0).is_err());
}

#[test]
fn lem2_and_thm4_entries() {
    let p = make_family(&FamilySpec::new(FamilyKind::GClass, 40, 3)).unwrap();
    let r = find_roots(&p, 1e-10, 2000).unwrap();
    let prof = profiles(&p, Some(&r));
    for rho in [0.5, 0.9] {
        let t = annular_bounds(&p, &prof[1], rho).unwrap();
        let outside = outside_annulus(&r, rho).unwrap();
        for id in [format!("Lem2_tau_outside[p=2,rho={rho}]"), format!("Lem2_tau_outside_m[rho={rho}]")] {
            let e = t.get(&id).unwrap();
            assert!(e.applicable && e.hard && outside <= e.conservative, "{id}");
        }
        let m = t.get(&format!("Lem2_tau_outside_m[rho={rho}]")).unwrap();
        let b = t.get(&format!("Lem2_tau_outside[p=2,rho={rho}]")).unwrap();
        assert!(m.value <= b.value);
        assert!(!t.get(&format!("Thm4_annular_p[p=2,rho={rho}]")).unwrap().hard);
        assert!(t.get(&format!("Thm4_annular_Gn[rho={rho}]")).unwrap().applicable);
    }
}

#[test]
fn gear_bound_for_roots_of_unity() {
    let n = 100_000;
    let b = 2f64.ln();
    for delta in [0.0, 0.25] {
        let gamma = gear_radius(n, b, 1.0, GearVariant::Sup7).unwrap();
        let gear = Gear::new(gamma, delta, ArcFormula::Geometric, 0.0).unwrap();
        let gb = gear_zero_upper_bound(n, b, 1.0, delta, GearVariant::Sup7, &gear).unwrap();
        assert!(gb.applicable);
        // root j/n is outside the removed disk at angle 2πk/G when its arc
        // distance exceeds half the tooth arc
        let count = (0..n)
            .filter(|&j| {
                let t = j as f64 / n as f64;
                let g = gear.teeth as f64;
                let d = (t * g - (t * g).round()).abs() / g;
                std::f64::consts::TAU * d > 0.5 * gear.tooth_arc
            })
            .count();
        assert!((count as f64) <= gb.exact_form, "δ = {delta}: {count} vs {}", gb.exact_form);
        assert!(gear_zero_upper_bound(n, b * 1.1, 1.0, delta, GearVariant::Sup7, &gear).is_err());
    }
}
