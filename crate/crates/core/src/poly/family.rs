//! Deterministic polynomial families.
//!
//! Random families draw each coefficient from its own ChaCha stream keyed by
//! `(seed, coefficient index)`, so a family member is a pure function of its
//! spec no matter how generation is scheduled.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{cis_turns, Polynomial};
use crate::error::{Error, Result};

pub const MAX_RUDIN_SHAPIRO_K: usize = 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Littlewood,
    Unimodular,
    GClass,
    CyclotomicProduct,
    Lehmer,
    PowerMinusOne,
    RudinShapiroP,
    RudinShapiroQ,
    Explicit(Vec<[f64; 2]>),
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Littlewood => "littlewood",
            FamilyKind::Unimodular => "unimodular",
            FamilyKind::GClass => "g_class",
            FamilyKind::CyclotomicProduct => "cyclotomic_product",
            FamilyKind::Lehmer => "lehmer",
            FamilyKind::PowerMinusOne => "power_minus_one",
            FamilyKind::RudinShapiroP => "rudin_shapiro_p",
            FamilyKind::RudinShapiroQ => "rudin_shapiro_q",
            FamilyKind::Explicit(_) => "explicit",
        }
    }

    /// Whether the seed influences the generated polynomial.
    pub fn is_random(&self) -> bool {
        matches!(
            self,
            FamilyKind::Littlewood
                | FamilyKind::Unimodular
                | FamilyKind::GClass
                | FamilyKind::CyclotomicProduct
        )
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "littlewood" => FamilyKind::Littlewood,
            "unimodular" => FamilyKind::Unimodular,
            "g_class" | "gclass" => FamilyKind::GClass,
            "cyclotomic_product" | "cyclotomic" => FamilyKind::CyclotomicProduct,
            "lehmer" => FamilyKind::Lehmer,
            "power_minus_one" => FamilyKind::PowerMinusOne,
            "rudin_shapiro_p" | "rudin_shapiro_P" => FamilyKind::RudinShapiroP,
            "rudin_shapiro_q" | "rudin_shapiro_Q" => FamilyKind::RudinShapiroQ,
            other => return Err(Error::Parse(format!("unknown family `{other}`"))),
        })
    }
}

/// `parameter` is the degree for every kind except the Rudin–Shapiro pair,
/// where it is the recursion depth `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub parameter: usize,
    pub seed: u64,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, parameter: usize, seed: u64) -> Self {
        FamilySpec {
            kind,
            parameter,
            seed,
        }
    }
}

fn coefficient_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

pub fn make_family(spec: &FamilySpec) -> Result<Polynomial> {
    let n = spec.parameter;
    let need_two = |reason| {
        if n == 0 {
            Err(Error::Degree { degree: 0, reason })
        } else {
            Ok(())
        }
    };
    let p = match &spec.kind {
        FamilyKind::Littlewood => {
            need_two("littlewood polynomials need both end coefficients")?;
            let c = (0..=n)
                .map(|j| {
                    let s = if coefficient_rng(spec.seed, j).random::<bool>() { 1.0 } else { -1.0 };
                    Complex64::new(s, 0.0)
                })
                .collect();
            Polynomial::new(c)?
        }
        FamilyKind::Unimodular => {
            need_two("unimodular family requires degree >= 1")?;
            let c = (0..=n)
                .map(|j| cis_turns(coefficient_rng(spec.seed, j).random::<f64>()))
                .collect();
            Polynomial::new(c)?
        }
        FamilyKind::GClass => {
            need_two("g_class needs distinct end coefficients a_0 and a_n")?;
            let c = (0..=n)
                .map(|j| {
                    let mut rng = coefficient_rng(spec.seed, j);
                    if j == 0 || j == n {
                        cis_turns(rng.random::<f64>())
                    } else {
                        // area-uniform on the closed disk
                        let r = rng.random::<f64>().sqrt();
                        r * cis_turns(rng.random::<f64>())
                    }
                })
                .collect();
            Polynomial::new(c)?
        }
        FamilyKind::CyclotomicProduct => {
            need_two("cyclotomic product needs a positive degree budget")?;
            random_cyclotomic_product(n, spec.seed)?
        }
        FamilyKind::Lehmer => lehmer(),
        FamilyKind::PowerMinusOne => Polynomial::power_minus_one(n)?,
        FamilyKind::RudinShapiroP => rudin_shapiro_pair(n)?.0,
        FamilyKind::RudinShapiroQ => rudin_shapiro_pair(n)?.1,
        FamilyKind::Explicit(c) => {
            Polynomial::new(c.iter().map(|&[re, im]| Complex64::new(re, im)).collect())?
        }
    };
    Ok(p.with_label(spec.kind.name()))
}

fn lehmer() -> Polynomial {
    Polynomial::from_real(&[1.0, 1.0, 0.0, -1.0, -1.0, -1.0, -1.0, -1.0, 0.0, 1.0, 1.0])
        .expect("Lehmer polynomial is valid")
}

/// `(P_k, Q_k)` from `P_0 = Q_0 = 1`, `P_{k+1} = P_k + z^{2^k} Q_k`,
/// `Q_{k+1} = P_k - z^{2^k} Q_k`.
pub fn rudin_shapiro_pair(k: usize) -> Result<(Polynomial, Polynomial)> {
    if k > MAX_RUDIN_SHAPIRO_K {
        return Err(Error::Range(format!(
            "Rudin-Shapiro depth {k} exceeds {MAX_RUDIN_SHAPIRO_K}"
        )));
    }
    let mut p = vec![1.0f64];
    let mut q = vec![1.0f64];
    for _ in 0..k {
        let mut np = p.clone();
        np.extend_from_slice(&q);
        let mut nq = p;
        nq.extend(q.iter().map(|v| -v));
        p = np;
        q = nq;
    }
    Ok((
        Polynomial::from_real(&p)?.with_label(format!("rudin_shapiro_p_{k}")),
        Polynomial::from_real(&q)?.with_label(format!("rudin_shapiro_q_{k}")),
    ))
}

/// Integer coefficients of the cyclotomic polynomial `Φ_d`, ascending.
pub fn cyclotomic(d: usize) -> Vec<i64> {
    assert!(d >= 1, "Φ_0 is undefined");
    // z^d - 1 divided by Φ_e for every proper divisor e
    let mut num = vec![0i64; d + 1];
    num[0] = -1;
    num[d] = 1;
    for e in (1..d).filter(|e| d.is_multiple_of(*e)) {
        num = exact_divide(&num, &cyclotomic(e));
    }
    num
}

fn exact_divide(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let lead = den[dn];
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let coef = rem[i + dn] / lead;
        q[i] = coef;
        for (j, &b) in den.iter().enumerate() {
            rem[i + j] -= coef * b;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

fn euler_phi(mut d: usize) -> usize {
    let mut result = d;
    let mut p = 2;
    while p * p <= d {
        if d.is_multiple_of(p) {
            while d.is_multiple_of(p) {
                d /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if d > 1 {
        result -= result / d;
    }
    result
}

/// Product of distinct cyclotomic factors, chosen by the seed, with total
/// degree at most `budget`. Distinct factors keep the product square-free.
fn random_cyclotomic_product(budget: usize, seed: u64) -> Result<Polynomial> {
    let mut used = Vec::new();
    let mut remaining = budget;
    let mut coeffs = vec![1i64];
    let mut draw = 0usize;
    loop {
        let candidates: Vec<usize> = (1..=budget + 1)
            .filter(|d| !used.contains(d) && euler_phi(*d) <= remaining)
            .collect();
        if candidates.is_empty() {
            break;
        }
        let pick = coefficient_rng(seed, draw).random_range(0..candidates.len());
        draw += 1;
        let d = candidates[pick];
        used.push(d);
        remaining -= euler_phi(d);
        let phi = cyclotomic(d);
        let mut next = vec![0i64; coeffs.len() + phi.len() - 1];
        for (i, &a) in coeffs.iter().enumerate() {
            for (j, &b) in phi.iter().enumerate() {
                next[i + j] = next[i + j]
                    .checked_add(a.checked_mul(b).ok_or_else(overflow)?)
                    .ok_or_else(overflow)?;
            }
        }
        coeffs = next;
        if remaining == 0 {
            break;
        }
    }
    let real: Vec<f64> = coeffs.iter().map(|&c| c as f64).collect();
    Polynomial::from_real(&real)
}

fn overflow() -> Error {
    Error::Range("cyclotomic product coefficients overflow i64".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lehmer_coefficients() {
        let p = make_family(&FamilySpec::new(FamilyKind::Lehmer, 0, 0)).unwrap();
        let re: Vec<f64> = p.coeffs().iter().map(|c| c.re).collect();
        assert_eq!(re, vec![1.0, 1.0, 0.0, -1.0, -1.0, -1.0, -1.0, -1.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn littlewood_is_deterministic_and_signed() {
        let spec = FamilySpec::new(FamilyKind::Littlewood, 4, 99);
        let a = make_family(&spec).unwrap();
        let b = make_family(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.coeffs().len(), 5);
        assert!(a.is_littlewood());
        let other = make_family(&FamilySpec::new(FamilyKind::Littlewood, 64, 100)).unwrap();
        let again = make_family(&FamilySpec::new(FamilyKind::Littlewood, 64, 101)).unwrap();
        assert_ne!(other, again);
    }

    #[test]
    fn class_membership() {
        for seed in 0..20 {
            let u = make_family(&FamilySpec::new(FamilyKind::Unimodular, 12, seed)).unwrap();
            assert!(u.is_unimodular());
            let g = make_family(&FamilySpec::new(FamilyKind::GClass, 12, seed)).unwrap();
            assert!(g.is_g_class());
        }
    }

    #[test]
    fn degree_zero_rejected_for_random_kinds() {
        for kind in [FamilyKind::Littlewood, FamilyKind::GClass, FamilyKind::Unimodular] {
            assert!(matches!(
                make_family(&FamilySpec::new(kind, 0, 1)),
                Err(Error::Degree { .. })
            ));
        }
    }

    #[test]
    fn rudin_shapiro_small_cases() {
        let (p0, q0) = rudin_shapiro_pair(0).unwrap();
        assert_eq!(p0.coeffs(), &[Complex64::new(1.0, 0.0)]);
        assert_eq!(q0.coeffs(), &[Complex64::new(1.0, 0.0)]);
        // by hand: P1 = 1 + z, Q1 = 1 - z, P2 = P1 + z^2 Q1
        let (p2, _) = rudin_shapiro_pair(2).unwrap();
        let re: Vec<f64> = p2.coeffs().iter().map(|c| c.re).collect();
        assert_eq!(re, vec![1.0, 1.0, 1.0, -1.0]);
        let (p8, _) = rudin_shapiro_pair(8).unwrap();
        assert_eq!(p8.coeff_energy(), 256.0);
        assert!(rudin_shapiro_pair(25).is_err());
    }

    #[test]
    fn rudin_shapiro_prefix_property() {
        for k in 0..12 {
            let (pk, _) = rudin_shapiro_pair(k).unwrap();
            let (pn, qn) = rudin_shapiro_pair(k + 1).unwrap();
            let m = 1usize << k;
            assert_eq!(&pn.coeffs()[..m], pk.coeffs());
            assert_eq!(&qn.coeffs()[..m], pk.coeffs());
            assert!(pn.is_littlewood() && qn.is_littlewood());
            assert_eq!(pn.degree(), 2 * m - 1);
        }
    }

    #[test]
    fn cyclotomic_values() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic(12), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of modulus 2
        assert!(cyclotomic(105).contains(&-2));
        assert_eq!(euler_phi(105), 48);
    }

    #[test]
    fn cyclotomic_product_respects_budget() {
        for seed in 0..10 {
            let p = make_family(&FamilySpec::new(FamilyKind::CyclotomicProduct, 20, seed)).unwrap();
            assert!(p.degree() <= 20 && p.degree() >= 1);
            assert!(p.coeffs().iter().all(|c| c.im == 0.0 && c.re.fract() == 0.0));
        }
    }
}
