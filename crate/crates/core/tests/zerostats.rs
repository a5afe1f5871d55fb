use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polyzero::geometry::Region;
use polyzero::poly::{make_family, FamilyKind, FamilySpec, Polynomial};
use polyzero::roots::{find_roots, RootSet};
use polyzero::zerostats::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn shifted_square() -> RootSet {
    // (z - 0.1)(z^4 - 1)
    RootSet::from_exact(vec![c(0.1, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)])
}

fn random_angles(rng: &mut ChaCha8Rng, n: usize) -> RootSet {
    let roots = (0..n)
        .map(|_| Complex64::from_polar(rng.random_range(0.3..2.0), TAU * rng.random::<f64>()))
        .collect();
    RootSet::from_exact(roots)
}

/// Largest `|count[a, b)/n - |b - a||` with both ends on an `m`-point grid.
/// Every such arc, wrapping or not, gives `H(b) - H(a)` for
/// `H(x) = count[0, x)/n - x`, so the grid value is `max H - min H`.
fn grid_discrepancy(roots: &RootSet, m: usize) -> f64 {
    let n = roots.len() as f64;
    let mut hist = vec![0usize; m];
    for &t in roots.thetas() {
        // the root at angle t lies in [k/m, (k+1)/m)
        hist[((t * m as f64) as usize).min(m - 1)] += 1;
    }
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    let mut below = 0usize;
    for (k, &h) in hist.iter().enumerate() {
        let v = below as f64 / n - k as f64 / m as f64;
        lo = lo.min(v);
        hi = hi.max(v);
        below += h;
    }
    hi - lo
}

#[test]
fn sector_count_examples() {
    let r = RootSet::roots_of_unity(8);
    let s = SectorSpec::new(PI / 8.0, 9.0 * PI / 8.0).unwrap();
    let st = sector_count(&r, &s);
    assert_eq!(st.count, 4);
    assert_eq!(st.tau, 0.5);
    assert_eq!(st.reference, Some(0.5));
    assert_eq!(sector_count(&r, &SectorSpec::full()).count, 8);
}

#[test]
fn sector_count_matches_membership_scan() {
    let p = make_family(&FamilySpec::new(FamilyKind::Littlewood, 9, 5)).unwrap();
    let r = find_roots(&p, 1e-10, 2000).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let a = rng.random_range(-TAU..TAU);
        let b = a + rng.random_range(0.01..TAU);
        let s = SectorSpec::new(a, b).unwrap();
        let expected = r
            .roots()
            .iter()
            .filter(|z| {
                let d = (z.arg() - a).rem_euclid(TAU);
                d < b - a
            })
            .count();
        assert_eq!(sector_count(&r, &s).count, expected, "arc [{a}, {b})");
    }
}

#[test]
fn region_count_examples() {
    let r8 = RootSet::roots_of_unity(8);
    let ann = Region::annulus(0.5).unwrap();
    assert_eq!(region_count(&r8, &ann).count, 8);
    let st = region_count(&shifted_square(), &ann);
    assert_eq!(st.count, 4);
    assert!((outside_annulus(&shifted_square(), 0.5).unwrap() - 0.2).abs() < 1e-15);
    let disk = Region::disk(0.0, 0.3, true).unwrap();
    assert_eq!(region_count(&r8, &disk).count, 1);
}

#[test]
fn slack_moves_roots_towards_or_away() {
    let r = RootSet::from_exact(vec![c(1.3, 0.0)]);
    let disk = Region::disk(0.0, 0.3 - 1e-12, true).unwrap();
    assert_eq!(region_count(&r, &disk).count, 0);
    assert_eq!(region_count_with_slack(&r, &disk, 1e-9).count, 1);
    let ann = Region::annulus(0.5).unwrap();
    let edge = RootSet::from_exact(vec![c(2.0 - 1e-12, 0.0)]);
    assert_eq!(region_count(&edge, &ann).count, 1);
    assert_eq!(region_count_with_slack(&edge, &ann, -1e-9).count, 0);
}

#[test]
fn discrepancy_examples() {
    for n in 1..=64 {
        let d = angular_discrepancy_detailed(&RootSet::roots_of_unity(n));
        assert!((d.value - 1.0 / n as f64).abs() < 1e-14, "n = {n}: {}", d.value);
        let p = Polynomial::power_minus_one(n).unwrap();
        let found = find_roots(&p, 1e-10, 2000).unwrap();
        assert!((angular_discrepancy(&found) - 1.0 / n as f64).abs() < 1e-9, "n = {n}");
    }
    let single = RootSet::roots_of_unity(1);
    let d = angular_discrepancy_detailed(&single);
    assert_eq!(d.value, 1.0);
    assert!(!d.attained);
}

#[test]
fn discrepancy_of_a_cluster() {
    // three roots at one angle: the arc shrinking onto them
    let r = RootSet::from_exact(vec![c(1.0, 0.0), c(2.0, 0.0), c(0.5, 0.0), c(-1.0, 0.0)]);
    assert!((angular_discrepancy(&r) - 0.75).abs() < 1e-15);
    // a cluster straddling angle 0 is one group
    let r = RootSet::from_exact(vec![c(1.0, 0.0), c(1.0, 1e-14), c(1.0, -1e-14)]);
    assert!((angular_discrepancy(&r) - 1.0).abs() < 1e-12);
}

#[test]
fn discrepancy_against_grid_oracle_littlewood() {
    let m = 10_000;
    for seed in 0..200u64 {
        let n = 1 + (seed % 12) as usize;
        let p = make_family(&FamilySpec::new(FamilyKind::Littlewood, n, seed)).unwrap();
        let r = find_roots(&p, 1e-10, 2000).unwrap();
        let exact = angular_discrepancy(&r);
        let grid = grid_discrepancy(&r, m);
        let slack = TAU * n as f64 / m as f64;
        assert!(grid <= exact + 1e-12 && exact - grid <= slack, "{exact} vs {grid}");
    }
}

#[test]
fn discrepancy_against_grid_oracle_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let m = 100_000;
    for _ in 0..200 {
        let n = rng.random_range(1..=12);
        let r = random_angles(&mut rng, n);
        let exact = angular_discrepancy(&r);
        let grid = grid_discrepancy(&r, m);
        assert!(grid <= exact + 1e-12, "{exact} vs {grid}");
        assert!(exact - grid <= 2.0 / m as f64 + 1e-12, "{exact} vs {grid}");
    }
}

#[test]
fn annular_examples() {
    let r8 = RootSet::roots_of_unity(8);
    let s = SectorSpec::new(PI / 8.0, 9.0 * PI / 8.0).unwrap();
    let st = annular_discrepancy(&r8, 0.5, &s).unwrap();
    assert_eq!(st.value, 0.0);
    let st = annular_discrepancy(&shifted_square(), 0.5, &SectorSpec::full()).unwrap();
    assert!((st.value - 0.2).abs() < 1e-15);
    assert!((st.outside - 0.2).abs() < 1e-15);
    assert!(annular_discrepancy(&r8, 1.0, &s).is_err());
}

#[test]
fn tiny_rho_matches_sector_statistic() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let r = random_angles(&mut rng, 20);
    for _ in 0..50 {
        let a = rng.random_range(0.0..TAU);
        let s = SectorSpec::new(a, a + rng.random_range(0.1..TAU)).unwrap();
        let st = sector_count(&r, &s);
        let ann = annular_discrepancy(&r, 1e-6, &s).unwrap();
        assert_eq!(ann.value, (st.tau - s.length_turns()).abs());
    }
    let (sup, outside) = annular_discrepancy_sup(&r, 1e-6).unwrap();
    assert_eq!(outside, 0.0);
    assert_eq!(sup.value, angular_discrepancy(&r));
}

#[test]
fn annular_sup_against_sectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..40 {
        let r = random_angles(&mut rng, 10);
        let (sup, _) = annular_discrepancy_sup(&r, 0.6).unwrap();
        // arcs with ends next to root angles bound the sup from below
        let mut best = 0.0f64;
        let thetas = r.thetas();
        for &a in thetas {
            for &b in thetas {
                for da in [-1e-9, 0.0, 1e-9] {
                    for db in [-1e-9, 0.0, 1e-9] {
                        if let Ok(s) = SectorSpec::from_turns(a + da, (b + db - a - da).rem_euclid(1.0)) {
                            best = best.max(annular_discrepancy(&r, 0.6, &s).unwrap().value);
                        }
                    }
                }
            }
        }
        assert!(best <= sup.value + 1e-12 && sup.value - best < 1e-8, "{} vs {best}", sup.value);
    }
}

proptest! {
    #[test]
    fn rotation_invariance(seed in 0u64..1000, n in 1usize..30, phi in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_angles(&mut rng, n);
        let d0 = angular_discrepancy(&r);
        let d1 = angular_discrepancy(&r.rotated(phi));
        prop_assert!((d0 - d1).abs() < 1e-9);
    }

    #[test]
    fn scale_invariance(seed in 0u64..500, k in 0.1f64..10.0) {
        let p = make_family(&FamilySpec::new(FamilyKind::Littlewood, 10, seed)).unwrap();
        let q = p.scale(Complex64::new(k, 0.0)).unwrap();
        let d0 = angular_discrepancy(&find_roots(&p, 1e-10, 2000).unwrap());
        let d1 = angular_discrepancy(&find_roots(&q, 1e-10, 2000).unwrap());
        prop_assert!((d0 - d1).abs() < 1e-9);
    }

    #[test]
    fn annular_domination(seed in 0u64..1000, rho in 0.05f64..0.95, a in 0.0f64..1.0, len in 0.01f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_angles(&mut rng, 15);
        let s = SectorSpec::from_turns(a, len).unwrap();
        let st = annular_discrepancy(&r, rho, &s).unwrap();
        let d = angular_discrepancy(&r);
        prop_assert!(st.value <= d + st.outside + 1e-12);
        let (sup, outside) = annular_discrepancy_sup(&r, rho).unwrap();
        prop_assert!(st.value <= sup.value + 1e-12);
        prop_assert!(sup.value <= d + outside + 1e-12);
    }

    #[test]
    fn partition_sums_to_n(seed in 0u64..1000, k in 1usize..12, start in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_angles(&mut rng, 25);
        let mut cuts: Vec<f64> = (0..k - 1).map(|_| rng.random::<f64>()).collect();
        cuts.push(0.0);
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut total = 0;
        for i in 0..k {
            let a = TAU * (start + cuts[i]);
            let b = if i + 1 < k { TAU * (start + cuts[i + 1]) } else { TAU * (start + 1.0) };
            if b > a {
                total += sector_count(&r, &SectorSpec::new(a, b).unwrap()).count;
            }
        }
        prop_assert_eq!(total, 25);
    }
}
