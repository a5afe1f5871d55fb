//! Evaluation of a polynomial on uniform grids of the unit circle.
//!
//! `P(e((k + s)/N))` for all `k` is one length-`N` DFT of the coefficient
//! vector, twisted by `e(j s / N)` and folded modulo `N`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::poly::{cis_turns, Polynomial};

/// Largest grid any routine in this crate will build.
pub const GRID_CAP: usize = 1 << 22;

/// Values `P(e((k + shift)/n))`, `k = 0..n`.
pub fn grid_values(p: &Polynomial, n: usize, shift: f64) -> Vec<Complex64> {
    grid_weighted(p, n, shift, |_, c| c)
}

/// Values of `d/dt P(e(t))` on the same grid.
pub fn grid_derivative(p: &Polynomial, n: usize, shift: f64) -> Vec<Complex64> {
    grid_weighted(p, n, shift, |j, c| c * Complex64::new(0.0, TAU * j as f64))
}

fn grid_weighted(
    p: &Polynomial,
    n: usize,
    shift: f64,
    weight: impl Fn(usize, Complex64) -> Complex64,
) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (j, &c) in p.coeffs().iter().enumerate() {
        if c.norm_sqr() == 0.0 {
            continue;
        }
        let twist = if shift == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            // j*shift/n reduced with integer arithmetic first: j mod n
            cis_turns(((j % n) as f64 * shift) / n as f64 + ((j / n) as f64 * shift).fract())
        };
        buf[j % n] += weight(j, c) * twist;
    }
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_inverse(n).process(&mut buf);
    buf
}

/// Smallest power of two that is at least `x` (and at least 16).
pub fn pow2_at_least(x: usize) -> usize {
    x.max(16).next_power_of_two()
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let nf = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=order {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if order == 0 { 1.0 } else if order == 1 { x } else { p1 };
            let pm = if order == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_matches_direct_evaluation() {
        let p = Polynomial::from_real(&[1.0, -2.0, 0.5, 0.0, 3.0, 1.0]).unwrap();
        for &(n, shift) in &[(16usize, 0.0), (16, 0.3), (4, 0.5)] {
            let v = grid_values(&p, n, shift);
            let d = grid_derivative(&p, n, shift);
            for k in 0..n {
                let t = (k as f64 + shift) / n as f64;
                let (pv, pd) = p.on_circle_with_derivative(t);
                assert!((v[k] - pv).norm() < 1e-12, "n={n} k={k}");
                assert!((d[k] - pd).norm() < 1e-11, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for order in [1usize, 2, 5, 8, 12] {
            let (x, w) = gauss_legendre(order);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-14);
            // x^(2 order - 2) integrates exactly
            let k = 2 * order - 2;
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
            assert!((got - 2.0 / (k as f64 + 1.0)).abs() < 1e-13, "order {order}");
        }
    }
}
