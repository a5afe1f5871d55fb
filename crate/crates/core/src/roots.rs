//! All roots of a polynomial by Aberth–Ehrlich simultaneous iteration.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{cis_turns, Polynomial};

/// Residual tolerance used when callers do not supply one.
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootSource {
    Aberth,
    /// Supplied in closed form; residuals are not computed.
    Analytic,
}

/// Roots `α_j = ρ_j e(θ_j)` with residual certificates.
#[derive(Clone, Debug, Serialize)]
pub struct RootSet {
    #[serde(serialize_with = "ser_complex")]
    roots: Vec<Complex64>,
    residuals: Vec<f64>,
    moduli: Vec<f64>,
    /// Arguments in turns, in `[0, 1)`.
    thetas: Vec<f64>,
    source: RootSource,
    iterations: usize,
    min_separation: f64,
}

fn ser_complex<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

/// Normalized argument in turns, folded into `[0, 1)`.
pub fn turns_of(z: Complex64) -> f64 {
    let t = z.im.atan2(z.re) / TAU;
    let t = if t < 0.0 { t + 1.0 } else { t };
    if t >= 1.0 {
        0.0
    } else {
        t
    }
}

impl RootSet {
    /// Exact roots given in closed form. Angles come from `atan2`.
    pub fn from_exact(roots: Vec<Complex64>) -> Self {
        let thetas = roots.iter().map(|&z| turns_of(z)).collect();
        Self::assemble_analytic(roots, thetas)
    }

    /// Roots of `z^n - 1`, with angles `j/n` stored exactly.
    pub fn roots_of_unity(n: usize) -> Self {
        let thetas: Vec<f64> = (0..n).map(|j| j as f64 / n as f64).collect();
        let roots = thetas.iter().map(|&t| cis_turns(t)).collect();
        Self::assemble_analytic(roots, thetas)
    }

    fn assemble_analytic(roots: Vec<Complex64>, thetas: Vec<f64>) -> Self {
        let moduli = roots.iter().map(|z| z.norm()).collect();
        RootSet {
            residuals: vec![0.0; roots.len()],
            roots,
            moduli,
            thetas,
            source: RootSource::Analytic,
            iterations: 0,
            min_separation: f64::NAN,
        }
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }
    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }
    pub fn moduli(&self) -> &[f64] {
        &self.moduli
    }
    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }
    pub fn len(&self) -> usize {
        self.roots.len()
    }
    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
    pub fn source(&self) -> RootSource {
        self.source
    }
    pub fn iterations(&self) -> usize {
        self.iterations
    }
    /// Smallest pairwise distance (the cluster radius scale); NaN for
    /// analytic sets.
    pub fn min_separation(&self) -> f64 {
        self.min_separation
    }
    pub fn worst_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }

    /// Multiply every root by `e(phi)`.
    pub fn rotated(&self, phi: f64) -> Self {
        let w = cis_turns(phi);
        let roots: Vec<Complex64> = self.roots.iter().map(|&z| z * w).collect();
        let thetas = self
            .thetas
            .iter()
            .map(|&t| {
                let r = (t + phi).rem_euclid(1.0);
                if r >= 1.0 {
                    0.0
                } else {
                    r
                }
            })
            .collect();
        RootSet {
            roots,
            thetas,
            ..self.clone()
        }
    }
}

/// Starting points on circles whose radii come from the upper convex hull
/// of `(j, log|c_j|)`, so each annulus gets as many points as it holds
/// roots (up to the hull's accuracy).
fn initial_guesses(c: &[Complex64]) -> Vec<Complex64> {
    let pts: Vec<(usize, f64)> = c
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 0.0)
        .map(|(j, a)| (j, a.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &q in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (q.1 - a.1) - (b.1 - a.1) * (q.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(q);
    }
    let n = c.len() - 1;
    // roots at zero for the missing low coefficients
    let mut z = vec![Complex64::new(0.0, 0.0); pts[0].0];
    let nf = n as f64;
    for w in hull.windows(2) {
        let (i, k) = (w[0].0, w[1].0);
        let count = k - i;
        let r = ((w[0].1 - w[1].1) / count as f64).exp();
        let offset = TAU * i as f64 / nf + 0.7;
        for m in 0..count {
            z.push(Complex64::from_polar(r, offset + TAU * (m as f64 + 0.25) / count as f64));
        }
    }
    z
}

/// Aberth–Ehrlich iteration from Newton-polygon starting circles.
///
/// Every returned root satisfies `|P(α_j)| / scale_j <= tol` where
/// `scale_j = |c_n| Π_{k≠j} max(1, |α_j - α_k|)`.
pub fn find_roots(p: &Polynomial, tol: f64, max_iter: usize) -> Result<RootSet> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::Degree {
            degree: 0,
            reason: "a constant has no roots",
        });
    }
    let lead = p.leading();
    let mut z = initial_guesses(p.coeffs());

    let mut done = vec![false; n];
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let mut active = false;
        for j in 0..n {
            if done[j] {
                continue;
            }
            if p.is_numerically_zero(z[j]) {
                done[j] = true;
                continue;
            }
            active = true;
            aberth_step(p, &mut z, j);
        }
        if !active {
            break;
        }
    }
    // one polishing sweep over every root
    for j in 0..n {
        aberth_step(p, &mut z, j);
    }

    let roots = z;
    let mut residuals = Vec::with_capacity(n);
    let mut min_sep = f64::INFINITY;
    let log_lead = lead.norm().ln();
    for (j, &a) in roots.iter().enumerate() {
        let mut log_scale = log_lead;
        for (k, &b) in roots.iter().enumerate() {
            if k != j {
                let d = (a - b).norm();
                min_sep = min_sep.min(d);
                if d > 1.0 {
                    log_scale += d.ln();
                }
            }
        }
        let res = (p.log_abs(a) - log_scale).exp();
        residuals.push(if res.is_nan() { f64::INFINITY } else { res });
    }
    let worst = residuals.iter().cloned().fold(0.0, f64::max);
    if !(worst <= tol) {
        return Err(Error::NonConvergence {
            iterations,
            worst_residual: worst,
        });
    }
    let moduli = roots.iter().map(|z| z.norm()).collect();
    let thetas = roots.iter().map(|&z| turns_of(z)).collect();
    Ok(RootSet {
        roots,
        residuals,
        moduli,
        thetas,
        source: RootSource::Aberth,
        iterations,
        min_separation: if n > 1 { min_sep } else { f64::NAN },
    })
}

fn aberth_step(p: &Polynomial, z: &mut [Complex64], j: usize) {
    let zj = z[j];
    let ratio = p.newton_ratio(zj);
    if ratio.norm_sqr() == 0.0 {
        return;
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, &zk) in z.iter().enumerate() {
        if k != j {
            sum += (zj - zk).inv();
        }
    }
    let denom = Complex64::new(1.0, 0.0) - ratio * sum;
    let step = if denom.is_finite() && denom.norm_sqr() > 0.0 {
        ratio / denom
    } else {
        ratio
    };
    if step.is_finite() {
        z[j] = zj - step;
    }
}
