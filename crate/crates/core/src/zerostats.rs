//! Counting measures of a root set and its exact discrepancies.
//!
//! Angles are in turns. A sector is the half-open arc `[a, b)` of the circle
//! taken counterclockwise, wrapping through 0 when `b < a`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Region;
use crate::roots::RootSet;

/// Roots whose angles differ by less than this are treated as one group.
pub const TIE_TOL: f64 = 1e-12;

/// The arc `[alpha, beta)` with angles in radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorSpec {
    pub alpha: f64,
    pub beta: f64,
}

fn fold_turns(t: f64) -> f64 {
    let r = t.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

impl SectorSpec {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::Range("sector angles must be finite".into()));
        }
        let s = SectorSpec { alpha, beta };
        let len = beta - alpha;
        if len > TAU * (1.0 + 1e-15) {
            return Err(Error::Range(format!("sector [{alpha}, {beta}) is longer than a full turn")));
        }
        if s.length_turns() <= 0.0 {
            return Err(Error::Range(format!("sector [{alpha}, {beta}) is empty")));
        }
        Ok(s)
    }

    pub fn full() -> Self {
        SectorSpec { alpha: 0.0, beta: TAU }
    }

    /// Sector starting at `start` turns with `length` turns.
    pub fn from_turns(start: f64, length: f64) -> Result<Self> {
        Self::new(TAU * start, TAU * (start + length))
    }

    /// `(β - α)/2π` folded into `(0, 1]`.
    pub fn length_turns(&self) -> f64 {
        let len = self.beta - self.alpha;
        if len > 0.0 {
            (len / TAU).min(1.0)
        } else {
            len.rem_euclid(TAU) / TAU
        }
    }

    pub fn is_full(&self) -> bool {
        self.length_turns() >= 1.0 - 1e-15
    }

    pub fn start_turns(&self) -> f64 {
        fold_turns(self.alpha / TAU)
    }

    pub fn end_turns(&self) -> f64 {
        fold_turns(self.beta / TAU)
    }

    pub fn contains_turns(&self, t: f64) -> bool {
        if self.is_full() {
            return true;
        }
        let (a, b) = (self.start_turns(), self.end_turns());
        if a < b {
            a <= t && t < b
        } else {
            t >= a || t < b
        }
    }

    /// The same arc widened by `slack` turns at both ends, or narrowed when
    /// `slack` is negative. A narrowed arc may become empty.
    pub fn contains_turns_with_slack(&self, t: f64, slack: f64) -> bool {
        if slack == 0.0 {
            return self.contains_turns(t);
        }
        let len = self.length_turns() + 2.0 * slack;
        if len >= 1.0 {
            return true;
        }
        if len <= 0.0 {
            return false;
        }
        let d = fold_turns(t - (self.start_turns() - slack));
        d < len
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CountStat {
    pub count: usize,
    pub n: usize,
    pub tau: f64,
    /// Normalized arc length, for sectors.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<f64>,
}

impl CountStat {
    fn new(count: usize, n: usize, reference: Option<f64>) -> Self {
        CountStat {
            count,
            n,
            tau: if n == 0 { 0.0 } else { count as f64 / n as f64 },
            reference,
        }
    }
}

pub fn sector_count(roots: &RootSet, s: &SectorSpec) -> CountStat {
    let count = roots.thetas().iter().filter(|&&t| s.contains_turns(t)).count();
    CountStat::new(count, roots.len(), Some(s.length_turns()))
}

pub fn region_count(roots: &RootSet, r: &Region) -> CountStat {
    region_count_with_slack(roots, r, 0.0)
}

/// Count with every root moved by up to `slack` in the direction that
/// helps (`slack > 0`) or hurts (`slack < 0`) membership.
pub fn region_count_with_slack(roots: &RootSet, r: &Region, slack: f64) -> CountStat {
    let count = roots
        .roots()
        .iter()
        .zip(roots.thetas())
        .filter(|(&z, &t)| r.contains_root_with_slack(z, t, slack))
        .count();
    let reference = match r {
        Region::Sector(s) | Region::AnnularSector { sector: s, .. } => Some(s.length_turns()),
        _ => None,
    };
    CountStat::new(count, roots.len(), reference)
}

/// A discrepancy value with an arc that realizes it, possibly as a limit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Discrepancy {
    pub value: f64,
    /// False when the value is only approached by arcs shrinking onto or
    /// closing past a root angle.
    pub attained: bool,
    /// Witness arc `[start, end)` in turns.
    pub arc_start: f64,
    pub arc_end: f64,
}

/// Sorted groups `(angle, multiplicity)` with near-equal angles merged,
/// including across 0.
fn group_angles(thetas: impl Iterator<Item = f64>) -> Vec<(f64, usize)> {
    let mut t: Vec<f64> = thetas.collect();
    t.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut groups: Vec<(f64, usize)> = Vec::new();
    for x in t {
        match groups.last_mut() {
            Some((g, m)) if x - *g <= TIE_TOL => *m += 1,
            _ => groups.push((x, 1)),
        }
    }
    if groups.len() > 1 {
        let last = groups[groups.len() - 1];
        if 1.0 - last.0 + groups[0].0 <= TIE_TOL {
            groups[0].1 += last.1;
            groups.pop();
        }
    }
    groups
}

/// `sup |count(arc)/n - |arc||` over half-open arcs, where only the grouped
/// angles are counted and `n` is the full degree.
///
/// With `H(x) = count[0, x)/n - x`, a plain arc `[a, b)` gives
/// `H(b) - H(a)` and a wrapping one adds `W - 1`, `W = count/n`. The
/// extremes of `H` sit at root angles (from the left for minima, as limits
/// from the right for maxima) and at both ends of `[0, 1]`.
fn sup_over_arcs(groups: &[(f64, usize)], n: usize) -> Discrepancy {
    #[derive(Clone, Copy)]
    struct Cand {
        value: f64,
        pos: f64,
        min_ok: bool,
        max_ok: bool,
        limit: bool,
    }
    let nf = n as f64;
    let total: usize = groups.iter().map(|g| g.1).sum();
    let w = total as f64 / nf;
    let mut seq = Vec::with_capacity(2 * groups.len() + 2);
    seq.push(Cand { value: 0.0, pos: 0.0, min_ok: true, max_ok: true, limit: false });
    let mut c = 0usize;
    for &(phi, m) in groups {
        seq.push(Cand { value: c as f64 / nf - phi, pos: phi, min_ok: true, max_ok: false, limit: false });
        c += m;
        seq.push(Cand { value: c as f64 / nf - phi, pos: phi, min_ok: false, max_ok: true, limit: true });
    }
    seq.push(Cand { value: w - 1.0, pos: 1.0, min_ok: true, max_ok: true, limit: false });

    // min before max
    let mut best_a = (f64::NEG_INFINITY, 0usize, 0usize);
    // max before min
    let mut best_b = (f64::NEG_INFINITY, 0usize, 0usize);
    let mut run_min: Option<usize> = None;
    let mut run_max: Option<usize> = None;
    for (k, s) in seq.iter().enumerate() {
        if s.min_ok && run_min.is_none_or(|i| s.value < seq[i].value) {
            run_min = Some(k);
        }
        if s.max_ok && run_max.is_none_or(|i| s.value > seq[i].value) {
            run_max = Some(k);
        }
        if s.max_ok {
            if let Some(i) = run_min {
                let v = s.value - seq[i].value;
                if v > best_a.0 {
                    best_a = (v, i, k);
                }
            }
        }
        if s.min_ok {
            if let Some(i) = run_max {
                let v = seq[i].value - s.value;
                if v > best_b.0 {
                    best_b = (v, i, k);
                }
            }
        }
    }
    let wrap = best_a.0 + (1.0 - w);
    let (value, lo, hi, wrapped) = if best_b.0 >= wrap && best_b.0 >= best_a.0 {
        (best_b.0, best_b.1, best_b.2, false)
    } else if w >= 1.0 || best_a.0 >= wrap {
        (best_a.0, best_a.1, best_a.2, false)
    } else {
        (wrap, best_a.1, best_a.2, true)
    };
    let (first, second) = (seq[lo], seq[hi]);
    // `first` precedes `second` on [0, 1]; a wrapped arc runs from the
    // later point through 0 to the earlier one
    let (arc_start, arc_end) = if wrapped {
        (second.pos, first.pos)
    } else {
        (first.pos, second.pos)
    };
    let limit = first.limit || second.limit;
    Discrepancy {
        value: value.max(0.0),
        attained: !limit,
        arc_start: fold_turns(arc_start),
        arc_end: fold_turns(arc_end),
    }
}

/// `D(P) = sup |τ(S(α, β)) - (β - α)/2π|` over all half-open arcs.
pub fn angular_discrepancy(roots: &RootSet) -> f64 {
    angular_discrepancy_detailed(roots).value
}

pub fn angular_discrepancy_detailed(roots: &RootSet) -> Discrepancy {
    let groups = group_angles(roots.thetas().iter().cloned());
    sup_over_arcs(&groups, roots.len().max(1))
}

/// Per-sector annular statistic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnnularStat {
    /// `|τ(A_ρ(α, β)) - (β - α)/2π|`.
    pub value: f64,
    pub tau: f64,
    pub reference: f64,
    /// `τ(ℂ \ A_ρ)`.
    pub outside: f64,
}

fn in_annulus(modulus: f64, rho: f64) -> bool {
    rho < modulus && modulus < 1.0 / rho
}

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho < 1.0 {
        Ok(())
    } else {
        Err(Error::Range(format!("annulus parameter {rho} must lie in (0, 1)")))
    }
}

/// Fraction of roots outside the open annulus `ρ < |z| < 1/ρ`.
pub fn outside_annulus(roots: &RootSet, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let inside = roots.moduli().iter().filter(|&&m| in_annulus(m, rho)).count();
    Ok(1.0 - inside as f64 / roots.len().max(1) as f64)
}

pub fn annular_discrepancy(roots: &RootSet, rho: f64, s: &SectorSpec) -> Result<AnnularStat> {
    check_rho(rho)?;
    let n = roots.len().max(1) as f64;
    let mut inside = 0usize;
    let mut count = 0usize;
    for (&m, &t) in roots.moduli().iter().zip(roots.thetas()) {
        if in_annulus(m, rho) {
            inside += 1;
            if s.contains_turns(t) {
                count += 1;
            }
        }
    }
    let tau = count as f64 / n;
    let reference = s.length_turns();
    Ok(AnnularStat {
        value: (tau - reference).abs(),
        tau,
        reference,
        outside: 1.0 - inside as f64 / n,
    })
}

/// Supremum of the annular statistic over every sector, with `τ(ℂ \ A_ρ)`.
pub fn annular_discrepancy_sup(roots: &RootSet, rho: f64) -> Result<(Discrepancy, f64)> {
    annular_discrepancy_sup_with_slack(roots, rho, 0.0)
}

/// As [`annular_discrepancy_sup`] with the annulus widened to
/// `ρ - slack < |z| < 1/ρ + slack` (narrowed for negative `slack`).
pub fn annular_discrepancy_sup_with_slack(roots: &RootSet, rho: f64, slack: f64) -> Result<(Discrepancy, f64)> {
    check_rho(rho)?;
    let groups = group_angles(
        roots
            .moduli()
            .iter()
            .zip(roots.thetas())
            .filter(|(&m, _)| rho - slack < m && m < 1.0 / rho + slack)
            .map(|(_, &t)| t),
    );
    let n = roots.len().max(1);
    let inside: usize = groups.iter().map(|g| g.1).sum();
    Ok((sup_over_arcs(&groups, n), 1.0 - inside as f64 / n as f64))
}
