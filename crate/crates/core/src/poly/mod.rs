//! Polynomials with complex coefficients in ascending degree.
//!
//! A [`Polynomial`] always has an honest degree: the leading coefficient is
//! nonzero and every coefficient is finite. Angles on the unit circle are
//! measured in turns, so `on_circle(t)` evaluates at `e^{2πit}`.

mod family;
mod io;

pub use family::{cyclotomic, make_family, rudin_shapiro_pair, FamilyKind, FamilySpec};
pub use io::{read_polynomial, write_polynomial, PolyFormat};

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficient tolerance used by the class-membership predicates.
pub const CLASS_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
    // Nonzero terms, kept only when they are a small fraction of the
    // coefficient vector.
    sparse: Option<Vec<(usize, Complex64)>>,
    label: Option<String>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(index) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if *coeffs.last().unwrap() == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroLeading);
        }
        let nnz = coeffs.iter().filter(|c| c.norm_sqr() != 0.0).count();
        let sparse = if nnz * 8 <= coeffs.len() {
            Some(
                coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.norm_sqr() != 0.0)
                    .map(|(j, &c)| (j, c))
                    .collect(),
            )
        } else {
            None
        };
        Ok(Polynomial {
            coeffs,
            sparse,
            label: None,
        })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `c (z - r_1) ... (z - r_n)`.
    pub fn from_roots(leading: Complex64, roots: &[Complex64]) -> Result<Self> {
        let mut coeffs = vec![leading];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (j, &c) in coeffs.iter().enumerate() {
                next[j + 1] += c;
                next[j] -= c * r;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    /// `z^n - 1`.
    pub fn power_minus_one(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Degree {
                degree: 0,
                reason: "z^n - 1 vanishes identically for n = 0",
            });
        }
        let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
        c[0] = Complex64::new(-1.0, 0.0);
        c[n] = Complex64::new(1.0, 0.0);
        Self::new(c)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Hex SHA-256 of the coefficients as little-endian `(re, im)` pairs.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        for c in &self.coeffs {
            h.update(c.re.to_le_bytes());
            h.update(c.im.to_le_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    pub fn constant(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// `|c_0 c_n|`.
    pub fn end_product_abs(&self) -> f64 {
        self.constant().norm() * self.leading().norm()
    }

    pub fn is_sparse(&self) -> bool {
        self.sparse.is_some()
    }

    /// Horner evaluation.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `(P(z), P'(z))` by a single Horner pass.
    pub fn evaluate_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Horner on the reversed coefficients: `R(w) = w^n P(1/w)` and `R'(w)`.
    fn reversed_with_derivative(&self, w: Complex64) -> (Complex64, Complex64) {
        let mut r = Complex64::new(0.0, 0.0);
        let mut dr = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter() {
            dr = dr * w + r;
            r = r * w + c;
        }
        (r, dr)
    }

    /// Newton correction `P(z)/P'(z)`, evaluated through the reversed
    /// polynomial when `|z| > 1` so that large degrees do not overflow.
    pub fn newton_ratio(&self, z: Complex64) -> Complex64 {
        let n = self.degree() as f64;
        if z.norm_sqr() <= 1.0 {
            let (p, dp) = self.evaluate_with_derivative(z);
            p / dp
        } else {
            let w = z.inv();
            let (r, dr) = self.reversed_with_derivative(w);
            z / (Complex64::new(n, 0.0) - w * dr / r)
        }
    }

    /// `log |P(z)|` without overflow for large `|z|`.
    pub fn log_abs(&self, z: Complex64) -> f64 {
        if z.norm_sqr() <= 1.0 {
            self.evaluate(z).norm().ln()
        } else {
            let w = z.inv();
            let (r, _) = self.reversed_with_derivative(w);
            self.degree() as f64 * z.norm().ln() + r.norm().ln()
        }
    }

    /// Stopping test for root iterations: `|P(z)|` is below a running
    /// rounding-error bound of Horner's rule.
    pub fn is_numerically_zero(&self, z: Complex64) -> bool {
        let eps = f64::EPSILON;
        let n = self.coeffs.len() as f64;
        if z.norm_sqr() <= 1.0 {
            let a = z.norm();
            let s = self.coeffs.iter().rev().fold(0.0, |acc, c| acc * a + c.norm());
            self.evaluate(z).norm() <= 4.0 * n * eps * s
        } else {
            let w = z.inv();
            let a = w.norm();
            let s = self.coeffs.iter().fold(0.0, |acc, c| acc * a + c.norm());
            let (r, _) = self.reversed_with_derivative(w);
            r.norm() <= 4.0 * n * eps * s
        }
    }

    /// `P(e(t))`.
    pub fn on_circle(&self, t: f64) -> Complex64 {
        match &self.sparse {
            Some(terms) => terms
                .iter()
                .map(|&(j, c)| c * cis_turns(j as f64 * t))
                .sum(),
            None => self.evaluate(cis_turns(t)),
        }
    }

    /// `(P(e(t)), d/dt P(e(t)))` with `t` in turns.
    pub fn on_circle_with_derivative(&self, t: f64) -> (Complex64, Complex64) {
        match &self.sparse {
            Some(terms) => {
                let mut p = Complex64::new(0.0, 0.0);
                let mut d = Complex64::new(0.0, 0.0);
                for &(j, c) in terms {
                    let v = c * cis_turns(j as f64 * t);
                    p += v;
                    d += v * j as f64;
                }
                (p, d * Complex64::new(0.0, TAU))
            }
            None => {
                let z = cis_turns(t);
                let (p, dp) = self.evaluate_with_derivative(z);
                (p, dp * z * Complex64::new(0.0, TAU))
            }
        }
    }

    /// `Σ j^k |c_j|` for `k = 0, 1, 2`.
    pub fn weighted_abs_sums(&self) -> [f64; 3] {
        let mut s = [0.0; 3];
        for (j, c) in self.coeffs.iter().enumerate() {
            let a = c.norm();
            let jf = j as f64;
            s[0] += a;
            s[1] += jf * a;
            s[2] += jf * jf * a;
        }
        s
    }

    /// `Σ |c_j|^2`.
    pub fn coeff_energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Result<Self> {
        let p = Self::new(self.coeffs.iter().map(|&c| c * factor).collect())?;
        Ok(Polynomial {
            label: self.label.clone(),
            ..p
        })
    }

    /// `P(e(phi) z)`.
    pub fn rotate(&self, phi: f64) -> Result<Self> {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, &c)| c * cis_turns(j as f64 * phi))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Self> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Synthetic division by `(z - root)`; the remainder is dropped.
    pub fn deflate(&self, root: Complex64) -> Result<Self> {
        let n = self.degree();
        if n == 0 {
            return Err(Error::Degree {
                degree: 0,
                reason: "cannot deflate a constant",
            });
        }
        let mut q = vec![Complex64::new(0.0, 0.0); n];
        let mut acc = Complex64::new(0.0, 0.0);
        for j in (1..=n).rev() {
            acc = acc * root + self.coeffs[j];
            q[j - 1] = acc;
        }
        Self::new(q)
    }

    /// Every coefficient has modulus one (the class of unimodular polynomials).
    pub fn is_unimodular(&self) -> bool {
        self.coeffs.iter().all(|c| (c.norm() - 1.0).abs() <= CLASS_TOL)
    }

    pub fn is_littlewood(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.im == 0.0 && (c.re == 1.0 || c.re == -1.0))
    }

    /// Unimodular end coefficients and interior coefficients in the closed
    /// unit disk.
    pub fn is_g_class(&self) -> bool {
        let n = self.degree();
        n >= 1
            && (self.coeffs[0].norm() - 1.0).abs() <= CLASS_TOL
            && (self.coeffs[n].norm() - 1.0).abs() <= CLASS_TOL
            && self.coeffs[1..n].iter().all(|c| c.norm() <= 1.0 + CLASS_TOL)
    }
}

/// `e(t) = e^{2πit}` with the argument reduced to `[0, 1)` first.
pub fn cis_turns(t: f64) -> Complex64 {
    let r = t - t.floor();
    Complex64::from_polar(1.0, TAU * r)
}
