//! Norms and heights of a polynomial on the unit circle.
//!
//! Most functionals here work with `f(t) = |P(e(t))|^2`, a real trigonometric
//! polynomial of degree `n`. Cell bounds use `f`, `f'` at a cell centre and a
//! bound on `|f''|`: either Bernstein's `(2πn)^2 sup f` or the coefficient
//! bound `2(S_1^2 + S_0 S_2)` with `S_k = Σ (2πj)^k |c_j|`.

use std::f64::consts::{E, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

use crate::circle::{gauss_legendre, grid_derivative, grid_values, pow2_at_least, GRID_CAP};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::roots::RootSet;

/// Largest trapezoid grid for p-norms and heights.
pub const QUAD_CAP: usize = 1 << 20;

const MAX_EVALS: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }
    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Norm exponent in `(0, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if p > 0.0 && p.is_finite() {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::Range(format!("norm exponent {p} must lie in (0, inf)")))
        }
    }
    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinity)
    }
    pub fn value(&self) -> f64 {
        match *self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            t => {
                let v = if let Some((a, b)) = t.split_once('/') {
                    let a: f64 = a.parse().map_err(|_| Error::Parse(format!("bad exponent `{s}`")))?;
                    let b: f64 = b.parse().map_err(|_| Error::Parse(format!("bad exponent `{s}`")))?;
                    a / b
                } else {
                    t.parse().map_err(|_| Error::Parse(format!("bad exponent `{s}`")))?
                };
                Exponent::finite(v)
            }
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Exponent::Finite(p) => s.serialize_f64(p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

/// Tolerances for every quadrature in a norm profile.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Tolerances {
    /// Relative, between successive trapezoid estimates.
    pub p_norm: f64,
    /// Relative width of the sup-norm enclosure.
    pub sup_norm: f64,
    /// Width of the cells left undecided around each `|P| = 1` crossing.
    pub e_measure: f64,
    /// Absolute, on `m⁺`.
    pub mahler_plus: f64,
    /// Absolute, on `m` by quadrature.
    pub mahler: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            p_norm: 1e-10,
            sup_norm: 1e-9,
            e_measure: 1e-10,
            mahler_plus: 1e-10,
            mahler: 1e-12,
        }
    }
}

// ---------------------------------------------------------------- p-norms

/// Trapezoid estimate of a p-norm together with how it stopped.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PNormEstimate {
    pub value: f64,
    pub points: usize,
    /// `|last - previous|` at the final doubling.
    pub last_change: f64,
    pub converged: bool,
}

impl PNormEstimate {
    /// Enclosure used downstream: the stated tolerance when converged, a
    /// wider band built from the last change otherwise.
    pub fn interval(&self, tol: f64) -> Interval {
        let w = if self.converged {
            tol * (1.0 + self.value)
        } else {
            (4.0 * self.last_change).max(tol * (1.0 + self.value))
        };
        Interval::new((self.value - w).max(0.0), self.value + w)
    }
}

pub fn p_norm(p: &Polynomial, exponent: f64, tol: f64) -> Result<f64> {
    let est = p_norm_estimate(p, exponent, tol)?;
    if est.converged {
        Ok(est.value)
    } else {
        Err(Error::GridCap {
            what: "p-norm quadrature",
            cap: QUAD_CAP,
        })
    }
}

/// Like [`p_norm`] but returns the last estimate instead of failing at the
/// grid cap.
pub fn p_norm_estimate(p: &Polynomial, exponent: f64, tol: f64) -> Result<PNormEstimate> {
    if !(exponent > 0.0 && exponent.is_finite()) {
        return Err(Error::Range(format!("norm exponent {exponent} must lie in (0, inf)")));
    }
    let n = p.degree();
    let mut size = pow2_at_least(4 * (n + 1));
    if size > QUAD_CAP {
        return Err(Error::GridCap {
            what: "p-norm quadrature",
            cap: QUAD_CAP,
        });
    }
    let power = |v: Vec<Complex64>| -> f64 {
        if exponent == 2.0 {
            v.iter().map(|z| z.norm_sqr()).sum()
        } else {
            let h = 0.5 * exponent;
            v.iter().map(|z| z.norm_sqr().powf(h)).sum()
        }
    };
    let mut sum = power(grid_values(p, size, 0.0));
    let mut prev = (sum / size as f64).powf(1.0 / exponent);
    let mut change = f64::INFINITY;
    while size * 2 <= QUAD_CAP {
        sum += power(grid_values(p, size, 0.5));
        size *= 2;
        let cur = (sum / size as f64).powf(1.0 / exponent);
        change = (cur - prev).abs();
        prev = cur;
        if change <= tol * cur {
            return Ok(PNormEstimate {
                value: cur,
                points: size,
                last_change: change,
                converged: true,
            });
        }
    }
    Ok(PNormEstimate {
        value: prev,
        points: size,
        last_change: change.min(prev),
        converged: false,
    })
}

// ------------------------------------------------------------ cell bounds

#[derive(Clone, Copy, Debug)]
struct Cell {
    center: f64,
    half: f64,
    f: f64,
    fp: f64,
}

impl Cell {
    fn new(center: f64, half: f64, v: Complex64, d: Complex64) -> Self {
        Cell {
            center,
            half,
            f: v.norm_sqr(),
            fp: 2.0 * (v.conj() * d).re,
        }
    }

    fn at(p: &Polynomial, center: f64, half: f64) -> Self {
        let (v, d) = p.on_circle_with_derivative(center);
        Cell::new(center, half, v, d)
    }

    fn children(&self, p: &Polynomial) -> [Cell; 2] {
        let h = 0.5 * self.half;
        [Cell::at(p, self.center - h, h), Cell::at(p, self.center + h, h)]
    }
}

#[derive(Clone, Copy, Debug)]
struct Curvature {
    bernstein: f64,
    coeff: f64,
}

impl Curvature {
    fn new(p: &Polynomial) -> Self {
        let [s0, s1, s2] = p.weighted_abs_sums();
        let s1 = TAU * s1;
        let s2 = TAU * TAU * s2;
        let n = p.degree() as f64;
        Curvature {
            bernstein: (TAU * n).powi(2),
            coeff: 2.0 * (s1 * s1 + s0 * s2),
        }
    }

    /// Bound on `|f''|` given `sup f <= fsup`.
    fn bound(&self, fsup: f64) -> f64 {
        (self.bernstein * fsup).min(self.coeff)
    }

    /// Upper bound for `sup f` that holds whenever the global maximum lies
    /// in the cell.
    fn cell_upper(&self, c: &Cell) -> f64 {
        let a = c.f + c.half * c.fp.abs();
        let k = 0.5 * c.half * c.half * self.bernstein;
        let own = if k < 1.0 { a / (1.0 - k) } else { f64::INFINITY };
        own.min(a + 0.5 * c.half * c.half * self.coeff)
    }
}

fn eval_cost(p: &Polynomial) -> usize {
    if p.is_sparse() {
        p.coeffs().iter().filter(|c| c.norm_sqr() != 0.0).count()
    } else {
        p.coeffs().len()
    }
}

fn base_cells(p: &Polynomial, size: usize) -> Vec<Cell> {
    let vals = grid_values(p, size, 0.5);
    let ders = grid_derivative(p, size, 0.5);
    let half = 0.5 / size as f64;
    (0..size)
        .map(|k| Cell::new((k as f64 + 0.5) / size as f64, half, vals[k], ders[k]))
        .collect()
}

// --------------------------------------------------------------- sup-norm

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SupEnclosure {
    pub interval: Interval,
    pub base_points: usize,
    pub evaluations: usize,
    pub depth: usize,
}

/// Interval containing `max |P(e(θ))|`, with relative width below `tol`.
pub fn sup_norm_enclosure(p: &Polynomial, tol: f64) -> Result<Interval> {
    Ok(sup_norm_detailed(p, tol)?.interval)
}

pub fn sup_norm_detailed(p: &Polynomial, tol: f64) -> Result<SupEnclosure> {
    let n = p.degree();
    if n == 0 {
        let a = p.constant().norm();
        return Ok(SupEnclosure {
            interval: Interval::point(a),
            base_points: 1,
            evaluations: 1,
            depth: 0,
        });
    }
    let base = pow2_at_least(8 * (n + 1));
    if base > GRID_CAP {
        return Err(Error::GridCap {
            what: "sup-norm grid",
            cap: GRID_CAP,
        });
    }
    let curv = Curvature::new(p);
    let mut cells = base_cells(p, base);
    let mut lo_f = cells.iter().map(|c| c.f).fold(0.0, f64::max);
    let mut settled = 0.0f64;
    let mut evaluations = base;
    let mut depth = 0;
    // refinement evaluations beyond the base grid
    let budget = (MAX_EVALS * 16 / eval_cost(p).max(1)).clamp(1 << 16, 8 * MAX_EVALS);
    loop {
        let ubs: Vec<f64> = cells.iter().map(|c| curv.cell_upper(c)).collect();
        let hi_f = ubs.iter().cloned().fold(settled, f64::max);
        let (lo, hi) = (lo_f.sqrt(), hi_f.sqrt());
        if hi - lo <= tol * hi {
            return Ok(SupEnclosure {
                interval: Interval::new(lo, hi),
                base_points: base,
                evaluations,
                depth,
            });
        }
        let target = lo_f / (1.0 - 0.5 * tol.min(1.0)).powi(2);
        let mut next = Vec::new();
        for (c, &ub) in cells.iter().zip(&ubs) {
            if ub <= target {
                settled = settled.max(ub);
            } else {
                for child in c.children(p) {
                    lo_f = lo_f.max(child.f);
                    next.push(child);
                }
            }
        }
        evaluations += next.len();
        depth += 1;
        if depth > 60 || evaluations - base > budget {
            return Err(Error::GridCap {
                what: "sup-norm refinement",
                cap: budget,
            });
        }
        cells = next;
    }
}

// ---------------------------------------------------------- level sets

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelClass {
    /// `|P| < level` throughout.
    Below,
    /// `|P| >= level` throughout.
    Above,
    Uncertain,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub class: LevelClass,
}

/// Partition of `[0, 1)` by the sign of `|P(e(t))| - level`.
#[derive(Clone, Debug, Serialize)]
pub struct LevelSet {
    pub level: f64,
    #[serde(skip)]
    pub segments: Vec<Segment>,
    pub below: f64,
    pub uncertain: f64,
    /// Number of undecided runs; each holds at least one crossing or a
    /// tangency.
    pub crossings: usize,
    pub tangency: bool,
    pub base_points: usize,
    pub evaluations: usize,
}

impl LevelSet {
    /// Enclosure of `meas{t : |P(e(t))| < level}`.
    pub fn measure(&self) -> Interval {
        Interval::new(self.below, (self.below + self.uncertain).min(1.0))
    }

    fn push(&mut self, start: f64, end: f64, class: LevelClass) {
        if end <= start {
            return;
        }
        match class {
            LevelClass::Below => self.below += end - start,
            LevelClass::Uncertain => self.uncertain += end - start,
            LevelClass::Above => {}
        }
        if let Some(last) = self.segments.last_mut() {
            if last.class == class && last.end == start {
                last.end = end;
                return;
            }
        }
        if class == LevelClass::Uncertain {
            self.crossings += 1;
        }
        self.segments.push(Segment { start, end, class });
    }
}

/// Classify the circle against `|P| = level`. `sup_hi` must bound
/// `sup |P|` from above; cells narrower than `tol` may stay undecided.
pub fn level_set(p: &Polynomial, level: f64, sup_hi: f64, tol: f64) -> Result<LevelSet> {
    let n = p.degree();
    let lsq = level * level;
    let mut out = LevelSet {
        level,
        segments: Vec::new(),
        below: 0.0,
        uncertain: 0.0,
        crossings: 0,
        tangency: false,
        base_points: 1,
        evaluations: 0,
    };
    if n == 0 {
        let class = if p.constant().norm_sqr() < lsq {
            LevelClass::Below
        } else {
            LevelClass::Above
        };
        out.push(0.0, 1.0, class);
        return Ok(out);
    }
    let curv = Curvature::new(p);
    let m2 = curv.bound(sup_hi * sup_hi);
    // cells narrow enough that the curvature term is small against the level
    let r = (lsq / (4.0 * m2)).sqrt();
    let want = if r > 0.0 { (0.5 / r).ceil() as usize } else { usize::MAX };
    let base = pow2_at_least((8 * (n + 1)).max(want.min(QUAD_CAP)));
    if base > GRID_CAP {
        return Err(Error::GridCap {
            what: "level-set grid",
            cap: GRID_CAP,
        });
    }
    out.base_points = base;
    let budget = (MAX_EVALS * 16 / eval_cost(p).max(1)).clamp(1 << 16, MAX_EVALS);
    // rounding allowance on computed values of f
    let s0 = p.weighted_abs_sums()[0];
    let err = 4.0 * (n + 1) as f64 * f64::EPSILON * s0 * s0;
    let mut evals = 0usize;
    let mut stack: Vec<Cell> = Vec::new();
    for c in base_cells(p, base) {
        stack.push(c);
        while let Some(c) = stack.pop() {
            let (a, b) = (c.center - c.half, c.center + c.half);
            let spread = c.half * c.fp.abs() + 0.5 * c.half * c.half * m2;
            if c.f + spread + err < lsq {
                out.push(a, b, LevelClass::Below);
            } else if c.f - spread - err >= lsq {
                out.push(a, b, LevelClass::Above);
            } else if (c.f - lsq).abs() <= err && c.half * c.fp.abs() <= err {
                // |P| agrees with the level to rounding across the cell
                out.tangency = true;
                out.push(a, b, LevelClass::Uncertain);
            } else if c.fp.abs() > c.half * m2 && evals + 2 < budget {
                // f is monotone on the cell
                let ga = p.on_circle(a).norm_sqr() - lsq;
                let gb = p.on_circle(b).norm_sqr() - lsq;
                evals += 2;
                let side = |g: f64| if g < 0.0 { LevelClass::Below } else { LevelClass::Above };
                if (ga < 0.0) == (gb < 0.0) {
                    out.push(a, b, side(ga));
                } else {
                    let (lo, hi, used) = bracket_crossing(p, lsq, a, b, ga, tol);
                    evals += used;
                    out.push(a, lo, side(ga));
                    out.push(lo, hi, LevelClass::Uncertain);
                    out.push(hi, b, side(gb));
                }
            } else if 2.0 * c.half <= tol || evals + 2 >= budget {
                if evals + 2 >= budget || c.fp.abs() <= c.half * m2 {
                    out.tangency = true;
                }
                out.push(a, b, LevelClass::Uncertain);
            } else {
                let [l, r] = c.children(p);
                evals += 2;
                stack.push(r);
                stack.push(l);
            }
        }
    }
    out.evaluations = base + evals;
    Ok(out)
}

/// Shrink a sign change of `|P|^2 - lsq` on a monotone cell to width `tol`.
fn bracket_crossing(p: &Polynomial, lsq: f64, a: f64, b: f64, ga: f64, tol: f64) -> (f64, f64, usize) {
    let (mut lo, mut hi) = (a, b);
    let mut t = 0.5 * (a + b);
    let mut used = 0;
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let (v, d) = p.on_circle_with_derivative(t);
        used += 1;
        let g = v.norm_sqr() - lsq;
        let gp = 2.0 * (v.conj() * d).re;
        if (g < 0.0) == (ga < 0.0) {
            lo = t;
        } else {
            hi = t;
        }
        let newton = t - g / gp;
        let mut next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - t).abs() < 0.25 * tol {
            // step onto the far side so the bracket closes
            next = if t == lo {
                (t + 0.5 * tol).min(0.5 * (t + hi))
            } else {
                (t - 0.5 * tol).max(0.5 * (lo + t))
            };
        }
        t = next;
    }
    (lo, hi, used)
}

#[derive(Clone, Debug, Serialize)]
pub struct EEnclosure {
    pub interval: Interval,
    pub crossings: usize,
    pub tangency: bool,
    pub points: usize,
}

/// Enclosure of `|E| = meas{θ : |P(e(θ))| < 1}`.
pub fn e_measure_enclosure(p: &Polynomial, tol: f64) -> Result<Interval> {
    Ok(e_measure_detailed(p, tol)?.interval)
}

pub fn e_measure_detailed(p: &Polynomial, tol: f64) -> Result<EEnclosure> {
    let sup = sup_norm_enclosure(p, 1e-6)?;
    let set = level_set(p, 1.0, sup.hi, tol)?;
    Ok(EEnclosure {
        interval: set.measure(),
        crossings: set.crossings,
        tangency: set.tangency,
        points: set.evaluations,
    })
}

// ----------------------------------------------------------------- heights

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MahlerMethod {
    FromRoots,
    Quadrature,
}

impl FromStr for MahlerMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "from_roots" | "roots" => Ok(MahlerMethod::FromRoots),
            "quadrature" => Ok(MahlerMethod::Quadrature),
            other => Err(Error::Parse(format!("unknown Mahler method `{other}`"))),
        }
    }
}

/// `(M(P), m(P))`.
pub fn mahler(p: &Polynomial, roots: Option<&RootSet>, method: MahlerMethod) -> Result<(f64, f64)> {
    let m = match method {
        MahlerMethod::FromRoots => {
            let r = roots.ok_or_else(|| Error::Range("the from_roots method needs a root set".into()))?;
            log_mahler_from_roots(p, r)
        }
        MahlerMethod::Quadrature => log_mahler_quadrature(p, Tolerances::default().mahler)?.0,
    };
    Ok((m.exp(), m))
}

pub fn log_mahler_from_roots(p: &Polynomial, roots: &RootSet) -> f64 {
    p.leading().norm().ln() + roots.moduli().iter().map(|&r| r.ln().max(0.0)).sum::<f64>()
}

/// `m(P)` as the mean of `log |P|` on the circle. Roots close to the circle
/// are located by Newton's method and divided out first; their `log⁺|α|`
/// is added back. Returns the value and the final grid size.
pub fn log_mahler_quadrature(p: &Polynomial, tol: f64) -> Result<(f64, usize)> {
    if p.degree() == 0 {
        return Ok((p.constant().norm().ln(), 1));
    }
    let mut q = p.clone();
    let mut extra = 0.0;
    let size = pow2_at_least(8 * (p.degree() + 1));
    if size > QUAD_CAP {
        return Err(Error::GridCap {
            what: "Mahler quadrature",
            cap: QUAD_CAP,
        });
    }
    for _ in 0..6 {
        if q.degree() == 0 {
            break;
        }
        let found = near_circle_roots(&q, size);
        if found.is_empty() {
            break;
        }
        for a in found {
            extra += a.norm().ln().max(0.0);
            q = q.deflate(a)?;
            if q.degree() == 0 {
                break;
            }
        }
    }
    if q.degree() == 0 {
        return Ok((q.constant().norm().ln() + extra, size));
    }
    let log_sum = |v: Vec<Complex64>| -> f64 { v.iter().map(|z| 0.5 * z.norm_sqr().ln()).sum() };
    let mut n = pow2_at_least(4 * (q.degree() + 1));
    let mut shift = 0.25;
    let mut sum = log_sum(grid_values(&q, n, shift));
    let mut prev = sum / n as f64;
    loop {
        if n * 2 > QUAD_CAP {
            return Err(Error::GridCap {
                what: "Mahler quadrature",
                cap: QUAD_CAP,
            });
        }
        sum += log_sum(grid_values(&q, n, shift + 0.5));
        shift = (2.0 * shift).fract();
        n *= 2;
        let cur = sum / n as f64;
        if !cur.is_finite() {
            return Err(Error::Range("log |P| is not finite on the quadrature grid".into()));
        }
        if (cur - prev).abs() <= tol {
            return Ok((cur + extra, n));
        }
        prev = cur;
    }
}

fn near_circle_roots(q: &Polynomial, size: usize) -> Vec<Complex64> {
    let vals = grid_values(q, size, 0.5);
    let ders = grid_derivative(q, size, 0.5);
    let d_max = 40.0 / size as f64;
    let step = TAU / size as f64;
    let est: Vec<f64> = vals
        .iter()
        .zip(&ders)
        .map(|(v, d)| v.norm() * TAU / d.norm())
        .collect();
    let mut found: Vec<Complex64> = Vec::new();
    for k in 0..size {
        let e = est[k];
        if !(e < d_max + step) {
            continue;
        }
        let (l, r) = (est[(k + size - 1) % size], est[(k + 1) % size]);
        if e > l || e > r {
            continue;
        }
        let start = crate::poly::cis_turns((k as f64 + 0.5) / size as f64);
        let mut z = start;
        let mut ok = false;
        for _ in 0..80 {
            let s = q.newton_ratio(z);
            if !s.is_finite() {
                break;
            }
            z -= s;
            if s.norm() <= 1e-14 * z.norm().max(1.0) || q.is_numerically_zero(z) {
                ok = true;
                break;
            }
        }
        if !ok || (z.norm() - 1.0).abs() >= d_max || (z - start).norm() > 4.0 * step + d_max {
            continue;
        }
        if found.iter().any(|&w| (w - z).norm() < 1e-9) {
            continue;
        }
        found.push(z);
    }
    found
}

/// `(M⁺(P), m⁺(P))` with `m⁺ = ∫ log⁺|P(e(θ))| dθ`.
pub fn mahler_plus(p: &Polynomial, tol: f64) -> Result<(f64, f64)> {
    let sup = sup_norm_enclosure(p, 1e-6)?;
    let set = level_set(p, 1.0, sup.hi, tol.min(1e-9))?;
    let (m, _) = log_plus_integral(p, &set, tol)?;
    Ok((m.exp(), m))
}

/// `∫ max(0, log(|P|/level))` over the circle, integrating each panel by
/// 8-point Gauss–Legendre and splitting panels at the level-set boundaries.
pub fn log_plus_integral(p: &Polynomial, set: &LevelSet, tol: f64) -> Result<(f64, usize)> {
    if set.segments.iter().all(|s| s.class == LevelClass::Below) {
        return Ok((0.0, 0));
    }
    let shift = set.level.ln();
    let g = |v: Complex64| (0.5 * v.norm_sqr().ln() - shift).max(0.0);
    let (x, w) = gauss_legendre(8);
    let gl = |a: f64, b: f64| -> f64 {
        let h = 0.5 * (b - a);
        x.iter()
            .zip(&w)
            .map(|(&xi, &wi)| wi * g(p.on_circle(a + h * (xi + 1.0))))
            .sum::<f64>()
            * h
    };
    let integrate = |panels: usize| -> f64 {
        let grids: Vec<Vec<Complex64>> = x
            .iter()
            .map(|&xi| grid_values(p, panels, 0.5 * (xi + 1.0)))
            .collect();
        let width = 1.0 / panels as f64;
        let segs = &set.segments;
        let mut si = 0;
        let mut total = 0.0;
        for k in 0..panels {
            let a = k as f64 * width;
            let b = (k + 1) as f64 * width;
            while si + 1 < segs.len() && segs[si].end <= a {
                si += 1;
            }
            let s = segs[si];
            if s.start <= a && s.end >= b {
                if s.class != LevelClass::Below {
                    let q: f64 = (0..8).map(|i| w[i] * g(grids[i][k])).sum();
                    total += 0.5 * width * q;
                }
                continue;
            }
            let mut j = si;
            while j < segs.len() && segs[j].start < b {
                let lo = segs[j].start.max(a);
                let hi = segs[j].end.min(b);
                if hi > lo && segs[j].class != LevelClass::Below {
                    total += gl(lo, hi);
                }
                j += 1;
            }
        }
        total
    };
    let mut panels = pow2_at_least(2 * (p.degree() + 1));
    let mut prev = integrate(panels);
    loop {
        if panels * 2 * 8 > 8 * QUAD_CAP {
            return Err(Error::GridCap {
                what: "log-plus quadrature",
                cap: 8 * QUAD_CAP,
            });
        }
        panels *= 2;
        let cur = integrate(panels);
        if (cur - prev).abs() <= tol {
            return Ok((cur, 8 * panels));
        }
        prev = cur;
    }
}

// ------------------------------------------------------------------ profile

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Point,
    CertifyUpper,
    CertifyLower,
}

/// Grid and evaluation counts behind a profile.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct GridSizes {
    pub p_norm: usize,
    pub sup_norm: usize,
    pub e_measure: usize,
    pub mahler_plus: usize,
    pub mahler: usize,
}

/// Every scalar functional of one polynomial for one exponent.
#[derive(Clone, Debug, Serialize)]
pub struct NormProfile {
    pub p: Exponent,
    pub p_norm: f64,
    pub p_norm_interval: Interval,
    pub sup_norm: Interval,
    pub mahler: f64,
    pub log_mahler: f64,
    pub mahler_method: MahlerMethod,
    pub mahler_plus: f64,
    pub log_mahler_plus: f64,
    /// `m⁺(P/√|c_0 c_n|)`, padded by the quadrature tolerance; NaN when
    /// `c_0 = 0`.
    pub log_mahler_plus_normalized: Interval,
    pub e_measure: Interval,
    pub e_crossings: usize,
    pub e_tangency: bool,
    /// `|c_0 c_n|`.
    pub end_product: f64,
    pub b_value: f64,
    /// `[certify_lower, certify_upper]`.
    pub b_interval: Interval,
    pub quad_points: usize,
    pub grids: GridSizes,
    pub flags: Vec<String>,
}

impl NormProfile {
    pub fn compute(
        p: &Polynomial,
        roots: Option<&RootSet>,
        exponent: Exponent,
        tol: &Tolerances,
    ) -> Result<Self> {
        Ok(norm_profiles(p, roots, &[exponent], tol)?.remove(0))
    }

    pub fn b(&self, direction: Direction) -> f64 {
        b_from_parts(self.p, self.p_norm_interval, self.e_measure, self.end_product, direction)
    }

    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.iter().any(|f| f == flag)
    }
}

/// Profiles for several exponents; the exponent-free parts are computed once.
pub fn norm_profiles(
    p: &Polynomial,
    roots: Option<&RootSet>,
    exponents: &[Exponent],
    tol: &Tolerances,
) -> Result<Vec<NormProfile>> {
    let sup = sup_norm_detailed(p, tol.sup_norm)?;
    let set = level_set(p, 1.0, sup.interval.hi, tol.e_measure)?;
    let (log_mp, mp_points) = log_plus_integral(p, &set, tol.mahler_plus)?;
    let (log_m, method, m_points) = match roots {
        Some(r) => (log_mahler_from_roots(p, r), MahlerMethod::FromRoots, 0),
        None => {
            let (m, n) = log_mahler_quadrature(p, tol.mahler)?;
            (m, MahlerMethod::Quadrature, n)
        }
    };
    let end_product = p.end_product_abs();
    let mp_norm = if end_product == 0.0 {
        Interval::point(f64::NAN)
    } else {
        let level = end_product.sqrt();
        let v = if level == 1.0 {
            log_mp
        } else {
            let set = level_set(p, level, sup.interval.hi, tol.e_measure)?;
            log_plus_integral(p, &set, tol.mahler_plus)?.0
        };
        let pad = tol.mahler_plus * (1.0 + v);
        Interval::new((v - pad).max(0.0), v + pad)
    };
    let mut out = Vec::with_capacity(exponents.len());
    for &exponent in exponents {
        let mut flags = Vec::new();
        let (norm, norm_iv, points) = match exponent {
            Exponent::Infinity => (sup.interval.mid(), sup.interval, sup.evaluations),
            Exponent::Finite(e) => {
                let est = p_norm_estimate(p, e, tol.p_norm)?;
                if !est.converged {
                    flags.push("p_norm_unconverged".to_string());
                }
                (est.value, est.interval(tol.p_norm), est.points)
            }
        };
        if !exponent.is_infinite() && norm < 1.0 {
            flags.push("norm_below_one".to_string());
        }
        if end_product == 0.0 {
            flags.push("zero_constant_term".to_string());
        } else if end_product < 1.0 {
            flags.push("end_product_below_one".to_string());
        }
        if set.tangency {
            flags.push("e_tangency".to_string());
        }
        let e = set.measure();
        let b = |d| b_from_parts(exponent, norm_iv, e, end_product, d);
        let grids = GridSizes {
            p_norm: points,
            sup_norm: sup.evaluations,
            e_measure: set.evaluations,
            mahler_plus: mp_points,
            mahler: m_points,
        };
        out.push(NormProfile {
            p: exponent,
            p_norm: norm,
            p_norm_interval: norm_iv,
            sup_norm: sup.interval,
            mahler: log_m.exp(),
            log_mahler: log_m,
            mahler_method: method,
            mahler_plus: log_mp.exp(),
            log_mahler_plus: log_mp,
            log_mahler_plus_normalized: mp_norm,
            e_measure: e,
            e_crossings: set.crossings,
            e_tangency: set.tangency,
            end_product,
            b_value: b(Direction::Point),
            b_interval: Interval::new(b(Direction::CertifyLower), b(Direction::CertifyUpper)),
            quad_points: points.max(mp_points),
            grids,
            flags,
        });
    }
    Ok(out)
}

/// `B_p(P)` for the given exponent, taken from `profile` when the exponents
/// match and recomputed otherwise.
pub fn b_norm(p: &Polynomial, exponent: Exponent, profile: &NormProfile, direction: Direction) -> Result<f64> {
    if exponent == profile.p {
        return Ok(profile.b(direction));
    }
    let norm = match exponent {
        Exponent::Infinity => profile.sup_norm,
        Exponent::Finite(e) => {
            let tol = Tolerances::default().p_norm;
            p_norm_estimate(p, e, tol)?.interval(tol)
        }
    };
    Ok(b_from_parts(exponent, norm, profile.e_measure, profile.end_product, direction))
}

/// `B_∞ = log(‖P‖_∞ / √|c_0 c_n|)` and
/// `B_p = (1 - |E|) log(‖P‖_p / √|c_0 c_n|) + 1/(e p)` from enclosures.
pub fn b_from_parts(exponent: Exponent, norm: Interval, e: Interval, end_product: f64, direction: Direction) -> f64 {
    let s = 0.5 * end_product.ln();
    match exponent {
        Exponent::Infinity => match direction {
            Direction::Point => norm.mid().ln() - s,
            Direction::CertifyUpper => norm.hi.ln() - s,
            Direction::CertifyLower => norm.lo.ln() - s,
        },
        Exponent::Finite(p) => {
            let tail = 1.0 / (E * p);
            let f = |l: f64, m: f64| (1.0 - m) * (l.ln() - s) + tail;
            match direction {
                Direction::Point => f(norm.mid(), e.mid()),
                _ => {
                    let corners = [
                        f(norm.lo, e.lo),
                        f(norm.lo, e.hi),
                        f(norm.hi, e.lo),
                        f(norm.hi, e.hi),
                    ];
                    if direction == Direction::CertifyUpper {
                        corners.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                    } else {
                        corners.iter().cloned().fold(f64::INFINITY, f64::min)
                    }
                }
            }
        }
    }
}
