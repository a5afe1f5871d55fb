//! Checks every bound against the zero statistics of one polynomial, and
//! sweeps whole families.
//!
//! A check compares the observed statistic with the bound twice. The
//! conservative comparison takes the worst end of every enclosure and moves
//! each root by the root slack in the unhelpful direction; the favorable
//! comparison does the opposite. PASS needs the conservative comparison,
//! VIOLATION needs the favorable one to fail as well.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    annular_bounds, disk_bounds, discrepancy_bounds, gear_radius, gear_zero_upper_bound, BoundEntry, BoundTable,
    GearVariant, Sense,
};
use crate::error::{Error, Result};
use crate::geometry::{ArcFormula, Gear, Region};
use crate::norms::{norm_profiles, Direction, Exponent, Interval, NormProfile, Tolerances};
use crate::poly::{make_family, FamilyKind, FamilySpec, Polynomial};
use crate::roots::{find_roots, RootSet, RootSource, DEFAULT_MAX_ITER, DEFAULT_ROOT_TOL};
use crate::zerostats::{angular_discrepancy_detailed, annular_discrepancy_sup_with_slack, Discrepancy};

pub const REPORT_SCHEMA: &str = "polyzero-report/1";

/// How far a solver root may sit from the true zero.
pub const DEFAULT_ROOT_SLACK: f64 = 1e-9;
/// The same for closed-form roots.
pub const ANALYTIC_ROOT_SLACK: f64 = 1e-12;

/// Environment variable capping sweep threads.
pub const THREADS_ENV: &str = "POLYZERO_THREADS";

#[derive(Clone, Debug, Serialize)]
pub struct CertifyConfig {
    /// Finite exponents; `∞` is always added.
    pub exponents: Vec<Exponent>,
    pub thetas: Vec<f64>,
    pub rhos: Vec<f64>,
    pub disk_centers: usize,
    pub deltas: Vec<f64>,
    pub tolerances: Tolerances,
    pub root_tol: f64,
    pub max_iter: usize,
    pub root_slack: f64,
    pub arc_formula: ArcFormula,
    pub center_seed: u64,
    /// Keep every centre's counts in the report.
    pub record_centers: bool,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            exponents: vec![Exponent::Finite(1.0), Exponent::Finite(2.0)],
            thetas: vec![1.0],
            rhos: vec![0.5, 0.9],
            disk_centers: 720,
            deltas: vec![0.0, 0.25],
            tolerances: Tolerances::default(),
            root_tol: DEFAULT_ROOT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            root_slack: DEFAULT_ROOT_SLACK,
            arc_formula: ArcFormula::Geometric,
            center_seed: 0,
            record_centers: true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepConfig {
    pub families: Vec<FamilyKind>,
    pub degrees: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub certify: CertifyConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            families: vec![FamilyKind::Littlewood, FamilyKind::Unimodular, FamilyKind::GClass],
            degrees: vec![16, 32, 64, 128, 256],
            trials: 50,
            seed: 1,
            certify: CertifyConfig {
                record_centers: false,
                ..CertifyConfig::default()
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Violation,
    Indeterminate,
    Inapplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Violation => "VIOLATION",
            Verdict::Indeterminate => "INDETERMINATE",
            Verdict::Inapplicable => "INAPPLICABLE",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub bound_id: String,
    pub sense: Sense,
    pub hard: bool,
    /// Observed value on the conservative side.
    pub observed: f64,
    pub observed_favorable: f64,
    /// Bound (or required count) on the conservative side.
    pub bound: f64,
    pub bound_favorable: f64,
    pub margin_conservative: f64,
    pub margin_favorable: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn verdict(applicable: bool, hard: bool, margin_c: f64, margin_f: f64) -> Verdict {
    if !applicable {
        Verdict::Inapplicable
    } else if margin_c >= 0.0 {
        Verdict::Pass
    } else if margin_f >= 0.0 || !hard || margin_f.is_nan() {
        Verdict::Indeterminate
    } else {
        Verdict::Violation
    }
}

impl Check {
    fn new(entry: &BoundEntry, observed: f64, observed_favorable: f64) -> Self {
        Self::with_bounds(entry, observed, observed_favorable, entry.conservative, entry.favorable)
    }

    fn with_bounds(entry: &BoundEntry, obs_c: f64, obs_f: f64, bound_c: f64, bound_f: f64) -> Self {
        let (mc, mf) = match entry.sense {
            Sense::Upper => (bound_c - obs_c, bound_f - obs_f),
            Sense::Lower => (obs_c - bound_c, obs_f - bound_f),
        };
        Check {
            bound_id: entry.id.clone(),
            sense: entry.sense,
            hard: entry.hard,
            observed: obs_c,
            observed_favorable: obs_f,
            bound: bound_c,
            bound_favorable: bound_f,
            margin_conservative: mc,
            margin_favorable: mf,
            verdict: verdict(entry.applicable, entry.hard, mc, mf),
            notes: entry.notes.clone(),
        }
    }

    fn unavailable(entry: &BoundEntry, why: &str) -> Self {
        let mut c = Self::new(entry, f64::NAN, f64::NAN);
        c.margin_conservative = f64::NAN;
        c.margin_favorable = f64::NAN;
        c.verdict = Verdict::Inapplicable;
        c.notes.push(why.to_string());
        c
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Descriptor {
    pub family: String,
    pub degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RootSummary {
    pub source: RootSource,
    pub count: usize,
    pub worst_residual: f64,
    pub iterations: usize,
    pub min_separation: f64,
    pub slack: f64,
    /// Centres re-counted with roots found at a tenth of the tolerance.
    pub reexamined_centers: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnnularObservation {
    pub rho: f64,
    /// `τ(ℂ \ A_ρ)`.
    pub outside: Interval,
    /// Supremum of the annular statistic over sectors.
    pub sup: Interval,
    pub witness: Discrepancy,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiskObservation {
    pub bound_id: String,
    pub radius: Interval,
    pub centers: usize,
    /// Smallest open-disk count at radius `radius.lo`, roots pushed out.
    pub min_open: usize,
    /// Smallest closed-disk count at radius `radius.hi`, roots pulled in.
    pub min_closed: usize,
    /// Radians.
    pub worst_center: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub open_counts: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub closed_counts: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GearEndpoint {
    pub b: f64,
    pub gamma: f64,
    pub teeth: usize,
    pub tooth_arc: f64,
    pub applicable: bool,
    /// Roots pulled towards the gear.
    pub count_conservative: usize,
    pub count_favorable: usize,
    pub exact_form: f64,
    pub closed_form: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GearObservation {
    pub bound_id: String,
    pub theta: f64,
    pub delta: f64,
    pub endpoints: Vec<GearEndpoint>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Observed {
    pub discrepancy: Option<Discrepancy>,
    /// The discrepancy widened by the angular effect of the root slack.
    pub discrepancy_interval: Option<Interval>,
    pub annular: Vec<AnnularObservation>,
    pub disks: Vec<DiskObservation>,
    pub gears: Vec<GearObservation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub schema: &'static str,
    pub polynomial: Descriptor,
    pub roots: Option<RootSummary>,
    pub profiles: Vec<NormProfile>,
    pub observed: Observed,
    pub bounds: BoundTable,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl BoundReport {
    pub fn hard_violations(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.hard && c.verdict == Verdict::Violation)
            .count()
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.bound_id == id)
    }
}

/// Roots sorted by angle, for disk queries.
struct AngularIndex<'a> {
    roots: &'a [Complex64],
    order: Vec<usize>,
    sorted: Vec<f64>,
}

impl<'a> AngularIndex<'a> {
    fn new(set: &'a RootSet) -> Self {
        let mut order: Vec<usize> = (0..set.len()).collect();
        let t = set.thetas();
        order.sort_by(|&a, &b| t[a].partial_cmp(&t[b]).unwrap());
        let sorted = order.iter().map(|&i| t[i]).collect();
        AngularIndex {
            roots: set.roots(),
            order,
            sorted,
        }
    }

    /// Roots within `|z - e^{iφ}| < r` (or `<=`), after moving each by
    /// `slack` towards (`> 0`) or away from the centre.
    fn disk_count(&self, phi: f64, r: f64, closed: bool, slack: f64) -> usize {
        let reach = r + slack.max(0.0);
        let c = Complex64::from_polar(1.0, phi);
        let hit = |z: Complex64| {
            let d = (z - c).norm();
            if closed {
                d <= r + slack
            } else {
                d < r + slack
            }
        };
        if reach >= 1.0 {
            return self.roots.iter().filter(|&&z| hit(z)).count();
        }
        // a disk of radius < 1 centred on the circle subtends asin(reach)
        let w = reach.asin() / TAU + 1e-12;
        let t = (phi / TAU).rem_euclid(1.0);
        let range = |a: f64, b: f64| {
            let i = self.sorted.partition_point(|&x| x < a);
            let j = self.sorted.partition_point(|&x| x <= b);
            (i, j)
        };
        let mut count = 0;
        let mut scan = |(i, j): (usize, usize)| {
            for &k in &self.order[i..j] {
                if hit(self.roots[k]) {
                    count += 1;
                }
            }
        };
        let (a, b) = (t - w, t + w);
        if a < 0.0 {
            scan(range(0.0, b));
            scan(range(a + 1.0, 1.0));
        } else if b >= 1.0 {
            scan(range(a, 1.0));
            scan(range(0.0, b - 1.0));
        } else {
            scan(range(a, b));
        }
        count
    }
}

/// Largest angular displacement, in turns, caused by moving a root by
/// `slack`.
fn angular_slack(roots: &RootSet, slack: f64) -> f64 {
    if slack == 0.0 {
        return 0.0;
    }
    roots
        .moduli()
        .iter()
        .map(|&m| if m <= slack { 0.5 } else { (slack / m).min(1.0).asin() / TAU })
        .fold(0.0, f64::max)
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of trial `trial` at degree `degree`.
pub fn instance_seed(seed: u64, degree: usize, trial: usize) -> u64 {
    splitmix(splitmix(splitmix(seed) ^ degree as u64) ^ trial as u64)
}

/// Stratified-uniform angles `2π(k + u_k)/count`.
pub fn disk_centers(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| TAU * (k as f64 + rng.random::<f64>()) / count as f64)
        .collect()
}

fn exponent_list(cfg: &CertifyConfig) -> Vec<Exponent> {
    let mut out: Vec<Exponent> = Vec::new();
    for &e in &cfg.exponents {
        if !e.is_infinite() && !out.contains(&e) {
            out.push(e);
        }
    }
    out.push(Exponent::Infinity);
    out
}

/// Finds the roots and checks every bound. A solver failure yields a
/// report with norms only and `error` set.
pub fn certify(p: &Polynomial, cfg: &CertifyConfig) -> Result<BoundReport> {
    if p.degree() == 0 {
        return certify_with_roots(p, None, cfg);
    }
    match find_roots(p, cfg.root_tol, cfg.max_iter) {
        Ok(r) => certify_with_roots(p, Some(r), cfg),
        Err(e @ Error::NonConvergence { .. }) => {
            let mut rep = certify_with_roots(p, None, cfg)?;
            rep.error = Some(e.to_string());
            Ok(rep)
        }
        Err(e) => Err(e),
    }
}

pub fn certify_with_roots(p: &Polynomial, roots: Option<RootSet>, cfg: &CertifyConfig) -> Result<BoundReport> {
    let n = p.degree();
    let exps = exponent_list(cfg);
    let profiles = norm_profiles(p, roots.as_ref(), &exps, &cfg.tolerances)?;
    let finite: Vec<&NormProfile> = profiles.iter().filter(|q| !q.p.is_infinite()).collect();
    let slack = match roots.as_ref().map(|r| r.source()) {
        Some(RootSource::Analytic) => ANALYTIC_ROOT_SLACK,
        _ => cfg.root_slack,
    };

    let mut table = discrepancy_bounds(p, &profiles);
    let mut annular_entries: Vec<(f64, BoundEntry)> = Vec::new();
    for &rho in &cfg.rhos {
        for prof in &finite {
            for e in annular_bounds(p, prof, rho)?.entries {
                if !annular_entries.iter().any(|(_, x)| x.id == e.id) {
                    annular_entries.push((rho, e));
                }
            }
        }
    }
    let disks = disk_bounds(p, &profiles, &cfg.thetas)?;

    let mut observed = Observed::default();
    let mut checks = Vec::new();
    let mut reexamined = 0;

    // angular discrepancy
    let d_iv = roots.as_ref().map(|r| {
        let d = angular_discrepancy_detailed(r);
        let eta = 2.0 * angular_slack(r, slack);
        observed.discrepancy = Some(d);
        Interval::new((d.value - eta).max(0.0), (d.value + eta).min(1.0))
    });
    observed.discrepancy_interval = d_iv;
    for e in &table.entries {
        checks.push(match d_iv {
            Some(iv) => Check::new(e, iv.hi, iv.lo),
            None => Check::unavailable(e, "roots unavailable"),
        });
    }

    // annuli
    for &rho in &cfg.rhos {
        let Some(r) = roots.as_ref() else { break };
        let eta = 2.0 * angular_slack(r, slack);
        let (shrunk, out_hi) = annular_discrepancy_sup_with_slack(r, rho, -slack)?;
        let (grown, out_lo) = annular_discrepancy_sup_with_slack(r, rho, slack)?;
        let hi = shrunk.value.max(grown.value) + eta;
        let lo = (shrunk.value.min(grown.value) - eta).max(0.0);
        observed.annular.push(AnnularObservation {
            rho,
            outside: Interval::new(out_lo, out_hi),
            sup: Interval::new(lo, hi),
            witness: angular_sup_witness(r, rho)?,
        });
    }
    for (rho, e) in &annular_entries {
        let obs = observed.annular.iter().find(|a| a.rho == *rho);
        checks.push(match obs {
            None => Check::unavailable(e, "roots unavailable"),
            Some(a) if e.id.starts_with("Lem2_tau_outside") => Check::new(e, a.outside.hi, a.outside.lo),
            Some(a) => Check::new(e, a.sup.hi, a.sup.lo),
        });
    }
    table.entries.extend(annular_entries.into_iter().map(|(_, e)| e));

    // disks
    let centers = disk_centers(cfg.disk_centers, cfg.center_seed);
    let mut refined: Option<Option<RootSet>> = None;
    for e in &disks.entries {
        let (Some(r), true) = (roots.as_ref(), e.applicable) else {
            checks.push(if roots.is_none() {
                Check::unavailable(e, "roots unavailable")
            } else {
                Check::new(e, f64::NAN, f64::NAN)
            });
            continue;
        };
        let radius = e.radius.expect("disk entries carry radii");
        let idx = AngularIndex::new(r);
        let mut open: Vec<usize> = centers.iter().map(|&c| idx.disk_count(c, radius.lo, false, -slack)).collect();
        let closed: Vec<usize> = centers.iter().map(|&c| idx.disk_count(c, radius.hi, true, slack)).collect();
        let failing: Vec<usize> = (0..centers.len())
            .filter(|&k| (open[k] as f64) < e.conservative)
            .collect();
        if !failing.is_empty() && r.source() == RootSource::Aberth {
            let better = refined.get_or_insert_with(|| find_roots(p, cfg.root_tol / 10.0, cfg.max_iter).ok());
            if let Some(b) = better {
                let bidx = AngularIndex::new(b);
                for &k in &failing {
                    open[k] = bidx.disk_count(centers[k], radius.lo, false, -slack);
                    reexamined += 1;
                }
            }
        }
        let (worst, &min_open) = open.iter().enumerate().min_by_key(|&(_, c)| *c).unwrap_or((0, &0));
        let min_closed = closed.iter().cloned().min().unwrap_or(0);
        checks.push(Check::new(e, min_open as f64, min_closed as f64));
        observed.disks.push(DiskObservation {
            bound_id: e.id.clone(),
            radius,
            centers: centers.len(),
            min_open,
            min_closed,
            worst_center: centers.get(worst).cloned().unwrap_or(f64::NAN),
            open_counts: if cfg.record_centers { open } else { Vec::new() },
            closed_counts: if cfg.record_centers { closed } else { Vec::new() },
        });
    }
    table.extend(disks);

    // gear wheels
    let b_inf_iv = profiles.last().expect("the ∞ profile is always present").b_interval;
    let mut gear_cases: Vec<(GearVariant, Option<&NormProfile>, Interval)> = vec![(GearVariant::Sup7, None, b_inf_iv)];
    for prof in &finite {
        gear_cases.push((GearVariant::P9, Some(prof), prof.b_interval));
    }
    for &theta in &cfg.thetas {
        for &delta in &cfg.deltas {
            for (variant, prof, b) in &gear_cases {
                let tag = match prof {
                    None => format!("variant={},theta={theta},delta={delta}", variant.name()),
                    Some(q) => format!("variant={},p={},theta={theta},delta={delta}", variant.name(), q.p),
                };
                let (exact, closed, obs) = gear_check(p, roots.as_ref(), slack, cfg, *variant, *prof, *b, theta, delta, &tag)?;
                match roots.as_ref() {
                    Some(_) if exact.applicable => {
                        let cons = obs
                            .endpoints
                            .iter()
                            .min_by(|a, b| (a.exact_form - a.count_conservative as f64).total_cmp(&(b.exact_form - b.count_conservative as f64)))
                            .unwrap();
                        let fav = obs
                            .endpoints
                            .iter()
                            .max_by(|a, b| (a.exact_form - a.count_favorable as f64).total_cmp(&(b.exact_form - b.count_favorable as f64)))
                            .unwrap();
                        checks.push(Check::with_bounds(
                            &exact,
                            cons.count_conservative as f64,
                            fav.count_favorable as f64,
                            cons.exact_form,
                            fav.exact_form,
                        ));
                        let cons = obs.endpoints.iter().max_by_key(|e| e.count_conservative).unwrap();
                        let fav = obs.endpoints.iter().min_by_key(|e| e.count_favorable).unwrap();
                        checks.push(Check::with_bounds(
                            &closed,
                            cons.count_conservative as f64,
                            fav.count_favorable as f64,
                            closed.value,
                            closed.value,
                        ));
                    }
                    Some(_) => {
                        checks.push(Check::new(&exact, f64::NAN, f64::NAN));
                        checks.push(Check::new(&closed, f64::NAN, f64::NAN));
                    }
                    None => {
                        checks.push(Check::unavailable(&exact, "roots unavailable"));
                        checks.push(Check::unavailable(&closed, "roots unavailable"));
                    }
                }
                if !obs.endpoints.is_empty() {
                    observed.gears.push(obs);
                }
                table.entries.push(exact);
                table.entries.push(closed);
            }
        }
    }

    let root_summary = roots.as_ref().map(|r| RootSummary {
        source: r.source(),
        count: r.len(),
        worst_residual: r.worst_residual(),
        iterations: r.iterations(),
        min_separation: r.min_separation(),
        slack,
        reexamined_centers: reexamined,
    });
    Ok(BoundReport {
        schema: REPORT_SCHEMA,
        polynomial: Descriptor {
            family: p.label().unwrap_or("input").to_string(),
            degree: n,
            seed: None,
            sha256: p.digest(),
        },
        roots: root_summary,
        profiles,
        observed,
        bounds: table,
        checks,
        error: None,
    })
}

fn angular_sup_witness(r: &RootSet, rho: f64) -> Result<Discrepancy> {
    Ok(annular_discrepancy_sup_with_slack(r, rho, 0.0)?.0)
}

/// Bound entries and root counts for one gear configuration, evaluated at
/// both ends of the `B` enclosure.
#[allow(clippy::too_many_arguments)]
fn gear_check(
    p: &Polynomial,
    roots: Option<&RootSet>,
    slack: f64,
    cfg: &CertifyConfig,
    variant: GearVariant,
    prof: Option<&NormProfile>,
    b: Interval,
    theta: f64,
    delta: f64,
    tag: &str,
) -> Result<(BoundEntry, BoundEntry, GearObservation)> {
    let n = p.degree();
    let mut notes = Vec::new();
    let mut ok = n >= 1;
    if n == 0 {
        notes.push("degree 0".to_string());
    }
    let end = p.end_product_abs();
    match (variant, prof) {
        (GearVariant::Sup7, _) => {
            if end == 0.0 {
                ok = false;
                notes.push("P(0) = 0".into());
            }
        }
        (GearVariant::P9, Some(q)) => {
            if end < 1.0 - 1e-12 {
                ok = false;
                notes.push("|c_0 c_n| < 1".into());
            }
            if q.p_norm_interval.lo < 1.0 {
                ok = false;
                notes.push("‖P‖_p >= 1 not certified".into());
            }
        }
        (GearVariant::P9, None) => unreachable!("p9 gear needs a finite exponent"),
    }
    if cfg.arc_formula != ArcFormula::Geometric {
        notes.push(format!("tooth arc from the {:?} formula", cfg.arc_formula));
    }

    let mut endpoints = Vec::new();
    let mut values = Vec::new();
    let region_count = |gear: &Gear, s: f64| {
        let r = Region::GearWheel(gear.clone());
        roots.map_or(0, |rs| {
            rs.roots()
                .iter()
                .zip(rs.thetas())
                .filter(|(&z, &t)| r.contains_root_with_slack(z, t, s))
                .count()
        })
    };
    let mut ends_ok = true;
    let mut any_ok = false;
    for bv in [b.lo, b.hi, b.mid()] {
        let gamma = if n >= 1 { gear_radius(n, bv, theta, variant)? } else { f64::NAN };
        let usable = bv > 0.0 && gamma > 0.0 && gamma < 2.0;
        let gear = if usable { Gear::new(gamma, delta, cfg.arc_formula, 0.0).ok() } else { None };
        let Some(gear) = gear else {
            if values.len() < 2 {
                ends_ok = false;
            }
            values.push((f64::NAN, f64::NAN));
            continue;
        };
        let gb = gear_zero_upper_bound(n, bv, theta, delta, variant, &gear)?;
        values.push((gb.exact_form, gb.closed_form));
        if values.len() <= 2 {
            ends_ok &= gb.applicable;
            any_ok |= gb.applicable;
            if gb.applicable && ok && roots.is_some() {
                endpoints.push(GearEndpoint {
                    b: bv,
                    gamma,
                    teeth: gear.teeth,
                    tooth_arc: gear.tooth_arc,
                    applicable: gb.applicable,
                    count_conservative: region_count(&gear, slack),
                    count_favorable: region_count(&gear, -slack),
                    exact_form: gb.exact_form,
                    closed_form: gb.closed_form,
                });
            }
        }
    }
    if !ends_ok {
        ok = false;
        notes.push(if any_ok {
            "radius <= 1/2 undecided by the enclosure".into()
        } else {
            "radius > 1/2 or B <= 0".into()
        });
    }
    if !ok {
        endpoints.clear();
    }
    let (ex_lo, cl) = values[0];
    let ex_hi = values[1].0;
    let make = |id: String, hard: bool, value: f64, conservative: f64, favorable: f64| BoundEntry {
        id,
        sense: Sense::Upper,
        hard,
        applicable: ok,
        value,
        conservative,
        favorable,
        side: Direction::CertifyUpper,
        radius: None,
        notes: notes.clone(),
    };
    let exact = make(
        format!("GearUpper_exact[{tag}]"),
        true,
        values[2].0,
        ex_lo.min(ex_hi),
        ex_lo.max(ex_hi),
    );
    let closed_value = if cl.is_nan() { values[1].1 } else { cl };
    let closed = make(format!("GearUpper_closed[{tag}]"), false, closed_value, closed_value, closed_value);
    Ok((
        exact,
        closed,
        GearObservation {
            bound_id: format!("GearUpper_exact[{tag}]"),
            theta,
            delta,
            endpoints,
        },
    ))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BoundAggregate {
    pub checks: usize,
    pub pass: usize,
    pub indeterminate: usize,
    pub violation: usize,
    pub inapplicable: usize,
    /// Largest conservative `observed / bound` (`required / observed` for
    /// lower bounds) over applicable checks; at most 1 when all pass.
    pub max_ratio: Option<f64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct EStats {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Aggregates {
    pub bounds: BTreeMap<String, BoundAggregate>,
    /// Keyed `family/degree`; midpoints of the `|E|` enclosures.
    pub e_measure: BTreeMap<String, EStats>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub schema: &'static str,
    pub config: SweepConfig,
    pub instances: Vec<BoundReport>,
    pub aggregates: Aggregates,
    pub hard_violations: usize,
    pub failures: Vec<String>,
}

/// A pool sized by `POLYZERO_THREADS` when set.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("{THREADS_ENV} must be a thread count, got `{v}`")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Io(e.to_string()))
}

pub fn sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    if cfg.trials == 0 {
        return Err(Error::Range("a sweep needs at least one trial".into()));
    }
    let mut specs = Vec::new();
    for family in &cfg.families {
        for &degree in &cfg.degrees {
            for trial in 0..cfg.trials {
                specs.push((family.clone(), degree, instance_seed(cfg.seed, degree, trial)));
            }
        }
    }
    let pool = thread_pool()?;
    let results: Vec<std::result::Result<BoundReport, String>> = pool.install(|| {
        specs
            .par_iter()
            .map(|(family, degree, seed)| {
                let spec = FamilySpec::new(family.clone(), *degree, *seed);
                let label = format!("{family} n={degree} seed={seed}");
                let p = make_family(&spec).map_err(|e| format!("{label}: {e}"))?;
                let mut ccfg = cfg.certify.clone();
                ccfg.center_seed = splitmix(*seed);
                let mut rep = certify(&p, &ccfg).map_err(|e| format!("{label}: {e}"))?;
                rep.polynomial.family = family.name().to_string();
                rep.polynomial.seed = family.is_random().then_some(*seed);
                Ok(rep)
            })
            .collect()
    });

    let mut instances = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(rep) => {
                if let Some(e) = &rep.error {
                    failures.push(format!("{} n={}: {e}", rep.polynomial.family, rep.polynomial.degree));
                }
                instances.push(rep);
            }
            Err(e) => failures.push(e),
        }
    }
    let aggregates = aggregate(&instances);
    let hard_violations = instances.iter().map(|r| r.hard_violations()).sum();
    Ok(SweepReport {
        schema: REPORT_SCHEMA,
        config: cfg.clone(),
        instances,
        aggregates,
        hard_violations,
        failures,
    })
}

pub fn aggregate(instances: &[BoundReport]) -> Aggregates {
    let mut agg = Aggregates::default();
    for rep in instances {
        for c in &rep.checks {
            let a = agg.bounds.entry(c.bound_id.clone()).or_default();
            a.checks += 1;
            match c.verdict {
                Verdict::Pass => a.pass += 1,
                Verdict::Indeterminate => a.indeterminate += 1,
                Verdict::Violation => a.violation += 1,
                Verdict::Inapplicable => a.inapplicable += 1,
            }
            if c.verdict != Verdict::Inapplicable {
                let ratio = match c.sense {
                    Sense::Upper if c.bound > 0.0 => Some(c.observed / c.bound),
                    Sense::Lower if c.observed > 0.0 => Some(c.bound / c.observed),
                    _ => None,
                };
                if let Some(r) = ratio.filter(|r| r.is_finite()) {
                    a.max_ratio = Some(a.max_ratio.map_or(r, |m: f64| m.max(r)));
                }
            }
        }
        if let Some(prof) = rep.profiles.first() {
            let key = format!("{}/{}", rep.polynomial.family, rep.polynomial.degree);
            let e = prof.e_measure.mid();
            let s = agg.e_measure.entry(key).or_insert(EStats {
                count: 0,
                mean: 0.0,
                min: f64::INFINITY,
                max: f64::NEG_INFINITY,
            });
            s.count += 1;
            s.mean += (e - s.mean) / s.count as f64;
            s.min = s.min.min(e);
            s.max = s.max.max(e);
        }
    }
    agg
}

pub const CSV_HEADER: &str = "family,degree,seed,bound_id,observed,bound,margin_conservative,margin_favorable,verdict";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One row per (instance, check), in instance order.
pub fn csv_rows(instances: &[BoundReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for rep in instances {
        let seed = rep.polynomial.seed.map(|s| s.to_string()).unwrap_or_default();
        for c in &rep.checks {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                csv_field(&rep.polynomial.family),
                rep.polynomial.degree,
                seed,
                csv_field(&c.bound_id),
                c.observed,
                c.bound,
                c.margin_conservative,
                c.margin_favorable,
                c.verdict
            ));
        }
    }
    out
}
