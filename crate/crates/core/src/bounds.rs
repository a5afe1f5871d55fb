//! Explicit bounds on the discrepancy and zero counts, evaluated from norm
//! enclosures.
//!
//! Every entry carries a point value and the two values obtained from the
//! ends of the enclosures: `conservative` is the one that makes the
//! inequality hardest to satisfy, `favorable` the easiest.

use std::f64::consts::{E, PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::norms::{Direction, Exponent, Interval, NormProfile};
use crate::poly::Polynomial;

/// `|c_0 c_n| >= 1` is accepted down to this.
const END_PRODUCT_TOL: f64 = 1e-12;

/// Catalan's constant `1 - 1/3² + 1/5² - ...`, summed with the
/// Cohen–Rodriguez Villegas–Zagier acceleration.
pub fn catalan() -> f64 {
    let terms = 40;
    let mut d = (3.0 + 8f64.sqrt()).powi(terms);
    d = 0.5 * (d + 1.0 / d);
    let (mut b, mut c, mut s) = (-1.0, -d, 0.0);
    let nf = terms as f64;
    for k in 0..terms {
        let kf = k as f64;
        c = b - c;
        s += c / ((2.0 * kf + 1.0) * (2.0 * kf + 1.0));
        b *= (kf + nf) * (kf - nf) / ((kf + 0.5) * (kf + 1.0));
    }
    s / d
}

pub fn erf(x: f64) -> f64 {
    statrs::function::erf::erf(x)
}

/// `√(2π/k)`.
pub fn ganelius_constant() -> f64 {
    (TAU / catalan()).sqrt()
}

pub fn soundararajan_constant() -> f64 {
    8.0 / PI
}

/// `4/√π`.
pub fn carneiro_constant() -> f64 {
    4.0 / PI.sqrt()
}

/// Upper bound `πx / (2 + (π - 2)√(1 - x²))` for `arcsin x` on `[0, 1]`.
pub fn shafer_fink(x: f64) -> f64 {
    PI * x / (2.0 + (PI - 2.0) * (1.0 - x * x).sqrt())
}

/// `(1 - ((π - 2)/(2π))γ²) (1 - γ²/4)^{-1/4}`, the factor the teeth count is
/// at least `π/(γ(1+δ))` times. It stays above [`GEAR_CONSTANT`] for
/// `γ <= 1/2`.
pub fn gear_factor(gamma: f64) -> f64 {
    (1.0 - (PI - 2.0) / TAU * gamma * gamma) * (1.0 - 0.25 * gamma * gamma).sqrt().powf(-0.5)
}

pub const GEAR_CONSTANT: f64 = 0.97;

/// The annular constant `min{√((8/π)(1 - |E| + 1/(e log(n+1)))), √2}`.
pub fn annular_constant(n: usize, e_measure: f64) -> f64 {
    let a = 1.0 - e_measure + 1.0 / (E * ((n + 1) as f64).ln());
    (8.0 / PI * a).sqrt().min(2f64.sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    /// `observed <= bound`.
    Upper,
    /// `observed >= bound`, a required count.
    Lower,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundEntry {
    pub id: String,
    pub sense: Sense,
    /// Report-only entries never produce a violation.
    pub hard: bool,
    pub applicable: bool,
    pub value: f64,
    pub conservative: f64,
    pub favorable: f64,
    /// Enclosure endpoint behind `conservative`.
    pub side: Direction,
    /// Radii `[γ(B_lo), γ(B_hi)]` for disk entries.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<Interval>,
    pub notes: Vec<String>,
}

impl BoundEntry {
    /// Upper bound `f(x)` for `f` increasing in `x ∈ iv`.
    fn upper(id: String, iv: Interval, f: impl Fn(f64) -> f64) -> Self {
        BoundEntry {
            id,
            sense: Sense::Upper,
            hard: true,
            applicable: true,
            value: f(iv.mid()),
            conservative: f(iv.lo),
            favorable: f(iv.hi),
            side: Direction::CertifyLower,
            radius: None,
            notes: Vec::new(),
        }
    }

    fn report_only(mut self) -> Self {
        self.hard = false;
        self
    }

    fn require(&mut self, ok: bool, note: impl Into<String>) {
        if !ok {
            self.applicable = false;
            self.notes.push(note.into());
        }
    }

    fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BoundTable {
    pub n: usize,
    pub entries: Vec<BoundEntry>,
}

impl BoundTable {
    pub fn get(&self, id: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn extend(&mut self, other: BoundTable) {
        self.entries.extend(other.entries);
    }
}

fn b_interval(profile: &NormProfile) -> Interval {
    profile.b_interval
}

fn b_inf_interval(profile: &NormProfile) -> Interval {
    let s = 0.5 * profile.end_product.ln();
    Interval::new(profile.sup_norm.lo.ln() - s, profile.sup_norm.hi.ln() - s)
}

/// Tri-state hypothesis test `x >= 1` on an enclosure.
fn at_least_one(iv: Interval) -> std::result::Result<(), &'static str> {
    if iv.lo >= 1.0 {
        Ok(())
    } else if iv.hi < 1.0 {
        Err("fails")
    } else {
        Err("undecided by the enclosure")
    }
}

fn sqrt0(x: f64) -> f64 {
    x.max(0.0).sqrt()
}

fn fmt_p(p: Exponent) -> String {
    p.to_string()
}

/// Upper bounds on the angular discrepancy. `profiles` must be computed for
/// the same polynomial; the `B_p` entries use every finite exponent.
pub fn discrepancy_bounds(poly: &Polynomial, profiles: &[NormProfile]) -> BoundTable {
    let n = poly.degree();
    let mut table = BoundTable { n, entries: Vec::new() };
    let Some(first) = profiles.first() else {
        return table;
    };
    let nf = n.max(1) as f64;
    let degree_ok = n >= 1;
    let nonzero = first.end_product > 0.0;

    let b_inf = b_inf_interval(first);
    let mp = first.log_mahler_plus_normalized;
    let inf_entry = |id: &str, c: f64| {
        let mut e = BoundEntry::upper(id.to_string(), b_inf, |b| c * sqrt0(b / nf));
        e.require(degree_ok, "degree 0");
        e.require(nonzero, "P(0) = 0");
        e.require(b_inf.lo > 0.0, "B_inf <= 0");
        e
    };
    let mp_entry = |id: &str, c: f64| {
        let mut e = BoundEntry::upper(id.to_string(), mp, |m| c * sqrt0(m / nf));
        e.require(degree_ok, "degree 0");
        e.require(nonzero, "P(0) = 0");
        e
    };
    table.entries.push(inf_entry("ET16", 16.0));
    table.entries.push(inf_entry("Ganelius", ganelius_constant()));
    table.entries.push(mp_entry("Mignotte", ganelius_constant()));
    table.entries.push(mp_entry("Soundararajan", soundararajan_constant()));
    table.entries.push(mp_entry("Carneiro", carneiro_constant()));
    table.entries.push(inf_entry("ShuWang", 2f64.sqrt()));

    for prof in profiles.iter().filter(|p| !p.p.is_infinite()) {
        let b = b_interval(prof);
        let mut e = BoundEntry::upper(format!("PropThm0_p[p={}]", fmt_p(prof.p)), b, |b| {
            carneiro_constant() * sqrt0(b / nf)
        });
        e.require(degree_ok, "degree 0");
        e.require(nonzero, "P(0) = 0");
        if let Err(why) = at_least_one(prof.p_norm_interval) {
            e.require(false, format!("‖P‖_p >= 1 {why}"));
        }
        table.entries.push(e);
    }

    let unimodular = degree_ok && poly.is_unimodular();
    let log_n1 = ((n + 1) as f64).ln();
    let kn = |one_minus_e: f64| 2.0 * (2.0 / PI).sqrt() * sqrt0((one_minus_e * log_n1 + 1.0 / E) / nf);
    let e = first.e_measure;
    let mut entry = BoundEntry::upper("CorollaryKn".into(), Interval::new(1.0 - e.hi, 1.0 - e.lo), kn);
    entry.require(unimodular, "not in K_n");
    table.entries.push(entry);

    let q = 1.0 - 0.25 * erf((2.0 / (n + 1) as f64).sqrt()).powi(2);
    let mut entry = BoundEntry::upper("CorollaryKnErf".into(), Interval::point(q), kn).report_only();
    entry.require(unimodular, "not in K_n");
    entry.note("expected |E| replaced by its Gaussian-model value");
    table.entries.push(entry);
    table
}

/// Bounds on the zeros outside `A_ρ` and on the annular discrepancy, for one
/// finite-exponent profile.
pub fn annular_bounds(poly: &Polynomial, profile: &NormProfile, rho: f64) -> Result<BoundTable> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::Range(format!("annulus parameter {rho} must lie in (0, 1)")));
    }
    let n = poly.degree();
    let mut table = BoundTable { n, entries: Vec::new() };
    if profile.p.is_infinite() {
        return Ok(table);
    }
    let nf = n.max(1) as f64;
    let degree_ok = n >= 1;
    let ends_ok = profile.end_product >= 1.0 - END_PRODUCT_TOL;
    let p = profile.p.value();
    let tag = format!("p={},rho={}", fmt_p(profile.p), rho);
    let b = b_interval(profile);
    let b_inf = b_inf_interval(profile);
    let w = 2.0 / (nf * (1.0 - rho));
    let screen = |e: &mut BoundEntry| {
        e.require(degree_ok, "degree 0");
        e.require(ends_ok, "|c_0 c_n| < 1");
    };

    // m(P/√|c_0 c_n|) = ½Σ|log|α_j|| >= 0, padded for root or quadrature error
    let m_pad = 1e-9 * (1.0 + nf);
    let m_norm = profile.log_mahler - 0.5 * profile.end_product.ln();
    let mut e = BoundEntry::upper(
        format!("Lem2_tau_outside_m[rho={rho}]"),
        Interval::new((m_norm - m_pad).max(0.0), (m_norm + m_pad).max(0.0)),
        |m| w * m,
    );
    screen(&mut e);
    table.entries.push(e);

    let mut e = BoundEntry::upper(format!("Lem2_tau_outside[{tag}]"), b, |b| w * b);
    screen(&mut e);
    table.entries.push(e);

    // √((2/n) min{(8/π)B_p, B_∞}) + 2B_p/(n(1-ρ)), both terms increasing
    let norm_ok = at_least_one(profile.p_norm_interval).is_ok();
    let annular = |bp: f64, bi: f64| {
        let inner = if norm_ok { (8.0 / PI * bp).min(bi) } else { bi };
        sqrt0(2.0 / nf * inner) + w * bp
    };
    let mut e = BoundEntry::upper(format!("Lem2_annular[{tag}]"), b, |x| x);
    e.value = annular(b.mid(), b_inf.mid());
    e.conservative = annular(b.lo, b_inf.lo);
    e.favorable = annular(b.hi, b_inf.hi);
    screen(&mut e);
    if !norm_ok {
        e.note("‖P‖_p >= 1 not certified; B_inf term only");
    }
    table.entries.push(e);

    // the proof's choice ε = B_∞/n, ε' = (2/(1-ρ))√((1-|E|)ε + 1/(e p n))
    let eps_prime = |bi: f64, e: f64| 2.0 / (1.0 - rho) * sqrt0((1.0 - e) * bi / nf + 1.0 / (E * p * nf));
    let thm4 = |bp: f64, bi: f64, e: f64| (carneiro_constant() + eps_prime(bi, e)) * sqrt0(bp / nf);
    let em = profile.e_measure;
    let mut e = BoundEntry::upper(format!("Thm4_annular_p[{tag}]"), b, |x| x).report_only();
    e.value = thm4(b.mid(), b_inf.mid(), em.mid());
    e.conservative = thm4(b.lo, b_inf.lo, em.hi);
    e.favorable = thm4(b.hi, b_inf.hi, em.lo);
    screen(&mut e);
    e.note("holds for n beyond an unquantified threshold");
    table.entries.push(e);

    if p == 2.0 {
        let log_n1 = ((n + 1) as f64).ln();
        let gn = |bi: f64, e: f64| {
            let a = 1.0 - e + 1.0 / (E * log_n1);
            (log_n1 / nf).sqrt() * (annular_constant(n, e) + a * eps_prime(bi, e))
        };
        let mut e = BoundEntry::upper(format!("Thm4_annular_Gn[rho={rho}]"), b, |x| x).report_only();
        e.value = gn(b_inf.mid(), em.mid());
        e.conservative = gn(b_inf.lo, em.hi);
        e.favorable = gn(b_inf.hi, em.lo);
        e.require(degree_ok && poly.is_g_class(), "not in G_n");
        e.note("holds for n beyond an unquantified threshold");
        table.entries.push(e);
    }
    Ok(table)
}

/// Radius and count formula behind a disk lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiskVariant {
    /// `γ = 7(2B_∞)^θ/√n`.
    Sup7,
    /// `γ = 9(2B_p)^θ/√n`.
    P9,
    /// `γ = 9(log n)^θ/√n` for the class `G_n`.
    Gn9,
    /// `γ = 33π log n/√n` (or a supplied radius) with `31√n log n` zeros.
    CustomRadius,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiskBound {
    pub gamma: f64,
    pub min_zeros: f64,
    /// `γ <= 1` and, where `B` enters, `B > 0`. Class and norm hypotheses
    /// are left to the caller.
    pub applicable: bool,
}

fn check_theta(theta: f64) -> Result<()> {
    if (0.5..=1.0).contains(&theta) {
        Ok(())
    } else {
        Err(Error::Range(format!("exponent θ = {theta} must lie in [1/2, 1]")))
    }
}

pub fn disk_lower_bound(
    n: usize,
    b: f64,
    theta: f64,
    variant: DiskVariant,
    custom_gamma: Option<f64>,
) -> Result<DiskBound> {
    check_theta(theta)?;
    let nf = n as f64;
    let rt = nf.sqrt();
    let (gamma, min_zeros, b_ok) = match variant {
        DiskVariant::Sup7 | DiskVariant::P9 => {
            let c = if variant == DiskVariant::Sup7 { 7.0 } else { 9.0 };
            let t = (2.0 * b).max(0.0).powf(theta);
            (c * t / rt, rt * t, b > 0.0)
        }
        DiskVariant::Gn9 => {
            let t = nf.ln().max(0.0).powf(theta);
            (9.0 * t / rt, rt * t, true)
        }
        DiskVariant::CustomRadius => {
            let g = custom_gamma.unwrap_or(33.0 * PI * nf.ln() / rt);
            (g, 31.0 * rt * nf.ln(), true)
        }
    };
    Ok(DiskBound {
        gamma,
        min_zeros,
        applicable: n >= 1 && b_ok && gamma <= 1.0,
    })
}

/// Required zero counts in disks centred on the circle, one entry per
/// `θ`. `radius` holds the disk radii from both ends of the `B` enclosure;
/// the conservative requirement uses the larger `B`.
pub fn disk_bounds(poly: &Polynomial, profiles: &[NormProfile], thetas: &[f64]) -> Result<BoundTable> {
    let n = poly.degree();
    let mut table = BoundTable { n, entries: Vec::new() };
    let Some(first) = profiles.first() else {
        return Ok(table);
    };
    let nonzero = first.end_product > 0.0;
    let ends_ok = first.end_product >= 1.0 - END_PRODUCT_TOL;
    for &theta in thetas {
        check_theta(theta)?;
        let mut e = disk_entry(n, format!("Thm2_disk[theta={theta}]"), b_inf_interval(first), theta, DiskVariant::Sup7)?;
        e.require(nonzero, "P(0) = 0");
        table.entries.push(e);

        for prof in profiles.iter().filter(|p| !p.p.is_infinite()) {
            let id = format!("Thm2_disk_p[p={},theta={theta}]", fmt_p(prof.p));
            let mut e = disk_entry(n, id, b_interval(prof), theta, DiskVariant::P9)?;
            e.require(ends_ok, "|c_0 c_n| < 1");
            if let Err(why) = at_least_one(prof.p_norm_interval) {
                e.require(false, format!("‖P‖_p >= 1 {why}"));
            }
            table.entries.push(e);
        }

        let mut e = disk_entry(n, format!("Thm3_disk[theta={theta}]"), Interval::point(0.0), theta, DiskVariant::Gn9)?;
        e.require(n >= 1 && poly.is_g_class(), "not in G_n");
        e.note("open disks");
        table.entries.push(e);
    }
    Ok(table)
}

fn disk_entry(n: usize, id: String, b: Interval, theta: f64, variant: DiskVariant) -> Result<BoundEntry> {
    let lo = disk_lower_bound(n, b.lo, theta, variant, None)?;
    let hi = disk_lower_bound(n, b.hi, theta, variant, None)?;
    let mid = disk_lower_bound(n, b.mid(), theta, variant, None)?;
    let mut e = BoundEntry {
        id,
        sense: Sense::Lower,
        hard: true,
        applicable: true,
        value: mid.min_zeros,
        conservative: hi.min_zeros,
        favorable: lo.min_zeros,
        side: Direction::CertifyUpper,
        radius: Some(Interval::new(lo.gamma, hi.gamma)),
        notes: Vec::new(),
    };
    e.require(n >= 1, "degree 0");
    if !lo.applicable {
        e.require(false, if lo.gamma > 1.0 { "radius > 1" } else { "B <= 0" });
    } else if !hi.applicable {
        e.require(false, "radius <= 1 undecided by the enclosure");
    }
    Ok(e)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GearVariant {
    Sup7,
    P9,
}

impl GearVariant {
    fn factor(self) -> f64 {
        match self {
            GearVariant::Sup7 => 7.0,
            GearVariant::P9 => 9.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GearVariant::Sup7 => "sup7",
            GearVariant::P9 => "p9",
        }
    }
}

/// Radius `c(2B)^θ/√n` of the removed disks.
pub fn gear_radius(n: usize, b: f64, theta: f64, variant: GearVariant) -> Result<f64> {
    check_theta(theta)?;
    Ok(variant.factor() * (2.0 * b).max(0.0).powf(theta) / (n as f64).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GearBound {
    pub gamma: f64,
    /// `n - G√n(2B)^θ` with the actual teeth count.
    pub exact_form: f64,
    /// `n(1 - 0.97π/(c(1+δ)))`.
    pub closed_form: f64,
    /// `γ <= 1/2` and `B > 0`.
    pub applicable: bool,
}

pub fn gear_zero_upper_bound(
    n: usize,
    b: f64,
    theta: f64,
    delta: f64,
    variant: GearVariant,
    gear: &crate::geometry::Gear,
) -> Result<GearBound> {
    let gamma = gear_radius(n, b, theta, variant)?;
    if (gamma - gear.gamma).abs() > 1e-12 * gamma.max(1.0) || delta != gear.delta {
        return Err(Error::Range(format!(
            "gear was built for γ = {}, δ = {} but the bound needs γ = {gamma}, δ = {delta}",
            gear.gamma, gear.delta
        )));
    }
    let nf = n as f64;
    let req = nf.sqrt() * (2.0 * b).max(0.0).powf(theta);
    Ok(GearBound {
        gamma,
        exact_form: nf - gear.teeth as f64 * req,
        closed_form: nf * (1.0 - GEAR_CONSTANT * PI / (variant.factor() * (1.0 + delta))),
        applicable: b > 0.0 && gamma <= 0.5,
    })
}

/// Smallest `n >= 2` with `coefficient · log n / √n <= bound`.
pub fn min_degree_for_radius(coefficient: f64, bound: f64) -> Result<u64> {
    if !(coefficient > 0.0 && coefficient.is_finite() && bound > 0.0 && bound.is_finite()) {
        return Err(Error::Range("coefficient and bound must be positive".into()));
    }
    let f = |n: u64| coefficient * (n as f64).ln() / (n as f64).sqrt();
    // increasing up to e² ≈ 7.39, decreasing after
    for n in 2..=7 {
        if f(n) <= bound {
            return Ok(n);
        }
    }
    let (mut lo, mut hi) = (7u64, 8u64);
    while f(hi) > bound {
        lo = hi;
        hi = hi.checked_mul(2).ok_or_else(|| Error::Range("threshold exceeds u64".into()))?;
    }
    // f(lo) > bound >= f(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if f(mid) <= bound {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Threshold {
    pub label: &'static str,
    pub coefficient: f64,
    pub bound: f64,
    pub min_degree: u64,
}

/// The disk radius at most 1 for `G_n`, the comparison radius `33π log n/√n`,
/// and the gear radius at most 1/2 for `G_n`.
pub fn default_thresholds() -> Vec<Threshold> {
    [("Gn_disk", 9.0, 1.0), ("custom_radius", 33.0 * PI, 1.0), ("Gn_gear", 9.0, 0.5)]
        .iter()
        .map(|&(label, coefficient, bound)| Threshold {
            label,
            coefficient,
            bound,
            min_degree: min_degree_for_radius(coefficient, bound).expect("valid constants"),
        })
        .collect()
}
