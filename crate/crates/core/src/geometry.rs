//! Regions of the plane used by the zero-count bounds, and SVG output.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::turns_of;
use crate::zerostats::SectorSpec;

/// Which expression is used for the angle of a tooth.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcFormula {
    /// `2 arcsin((γ/2)√(4 - γ²))`, the arc of the unit circle inside the disk.
    #[default]
    Geometric,
    /// `2 arcsin((γ/2)√(4 - γ))`, as printed in the teeth-count formula.
    Statement,
}

impl FromStr for ArcFormula {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometric" => Ok(ArcFormula::Geometric),
            "statement" => Ok(ArcFormula::Statement),
            other => Err(Error::Parse(format!("unknown arc formula `{other}`"))),
        }
    }
}

/// Angle subtended by the arc of `|z| = 1` inside a disk of radius `gamma`
/// centred on the circle.
pub fn tooth_arc(gamma: f64) -> Result<f64> {
    tooth_arc_with(gamma, ArcFormula::Geometric)
}

pub fn tooth_arc_with(gamma: f64, formula: ArcFormula) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 2.0) {
        return Err(Error::Range(format!("disk radius {gamma} must lie in (0, 2)")));
    }
    match formula {
        // equal to 2 arcsin((γ/2)√(4 - γ²)) for γ ≤ √2, and the right branch beyond
        ArcFormula::Geometric => Ok(4.0 * (0.5 * gamma).asin()),
        ArcFormula::Statement => {
            let x = 0.5 * gamma * (4.0 - gamma).sqrt();
            if x > 1.0 {
                return Err(Error::Range(format!("arcsin argument {x} exceeds 1 for radius {gamma}")));
            }
            Ok(2.0 * x.asin())
        }
    }
}

/// The unit disk with `teeth` small disks of radius `gamma` removed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Gear {
    pub gamma: f64,
    pub delta: f64,
    pub teeth: usize,
    /// Γ.
    pub tooth_arc: f64,
    /// `δΓ`.
    pub tooth_width: f64,
    /// Radians.
    pub center_angles: Vec<f64>,
    pub formula: ArcFormula,
    /// Set when `gamma > 1/2`.
    pub outside_hypothesis: bool,
}

// Teeth counts are snapped this close to an integer: inputs such as a
// width parameter are usually quoted to four digits.
const TEETH_SNAP: f64 = 1e-3;

pub fn build_gear(gamma: f64, delta: f64) -> Result<Region> {
    build_gear_with(gamma, delta, ArcFormula::Geometric, 0.0)
}

pub fn build_gear_with(gamma: f64, delta: f64, formula: ArcFormula, phase: f64) -> Result<Region> {
    Ok(Region::GearWheel(Gear::new(gamma, delta, formula, phase)?))
}

impl Gear {
    pub fn new(gamma: f64, delta: f64, formula: ArcFormula, phase: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::Range(format!("tooth spacing {delta} must lie in [0, 1)")));
        }
        let arc = tooth_arc_with(gamma, formula)?;
        let teeth = (TAU / (arc * (1.0 + delta)) + TEETH_SNAP).floor() as usize;
        if teeth == 0 {
            return Err(Error::Range(format!("no tooth of radius {gamma} fits")));
        }
        let center_angles = (0..teeth).map(|k| phase + TAU * k as f64 / teeth as f64).collect();
        Ok(Gear {
            gamma,
            delta,
            teeth,
            tooth_arc: arc,
            tooth_width: delta * arc,
            center_angles,
            formula,
            outside_hypothesis: gamma > 0.5,
        })
    }

    /// Distance from `z` to the closest tooth centre. For `z != 0` the
    /// closest centre is the angularly nearest one.
    pub fn nearest_center_distance(&self, z: Complex64) -> f64 {
        let g = self.teeth as f64;
        let phase = self.center_angles[0];
        let k = ((z.arg() - phase) / TAU * g).round();
        [k - 1.0, k, k + 1.0]
            .iter()
            .map(|&j| (z - Complex64::from_polar(1.0, phase + TAU * j / g)).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Sector(SectorSpec),
    /// Disk of radius `radius` centred at `e^{i center_angle}`.
    DiskOnCircle {
        center_angle: f64,
        radius: f64,
        closed: bool,
    },
    /// `rho < |z| < 1/rho`.
    Annulus { rho: f64 },
    AnnularSector { rho: f64, sector: SectorSpec },
    GearWheel(Gear),
}

impl Region {
    pub fn disk(center_angle: f64, radius: f64, closed: bool) -> Result<Self> {
        if !(radius > 0.0) || !center_angle.is_finite() {
            return Err(Error::Range(format!("bad disk radius {radius}")));
        }
        Ok(Region::DiskOnCircle {
            center_angle,
            radius,
            closed,
        })
    }

    pub fn annulus(rho: f64) -> Result<Self> {
        if rho > 0.0 && rho < 1.0 {
            Ok(Region::Annulus { rho })
        } else {
            Err(Error::Range(format!("annulus parameter {rho} must lie in (0, 1)")))
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.contains_root_with_slack(z, turns_of(z), 0.0)
    }

    /// Membership of a point whose argument `theta` (turns) is already
    /// known, after moving it by up to `slack` towards the region
    /// (`slack > 0`) or away from it (`slack < 0`).
    pub fn contains_root_with_slack(&self, z: Complex64, theta: f64, slack: f64) -> bool {
        let r = z.norm();
        match self {
            Region::Sector(s) => s.contains_turns_with_slack(theta, angular_slack(slack, r)),
            Region::DiskOnCircle {
                center_angle,
                radius,
                closed,
            } => {
                let d = (z - Complex64::from_polar(1.0, *center_angle)).norm();
                if *closed {
                    d <= radius + slack
                } else {
                    d < radius + slack
                }
            }
            Region::Annulus { rho } => rho - slack < r && r < 1.0 / rho + slack,
            Region::AnnularSector { rho, sector } => {
                rho - slack < r
                    && r < 1.0 / rho + slack
                    && sector.contains_turns_with_slack(theta, angular_slack(slack, r))
            }
            Region::GearWheel(g) => r <= 1.0 + slack && g.nearest_center_distance(z) > g.gamma - slack,
        }
    }
}

fn angular_slack(slack: f64, modulus: f64) -> f64 {
    if slack == 0.0 {
        0.0
    } else if modulus <= slack.abs() {
        // the disk of uncertainty contains the origin
        slack.signum()
    } else {
        slack.signum() * (slack.abs() / modulus).min(1.0).asin() / TAU
    }
}

/// The disk around `z = 1` used to cover `A_{1-α} ∩ S(-δ, δ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoveringDisk {
    pub alpha: f64,
    pub delta_n: f64,
    pub radius: f64,
}

pub fn covering_disk(alpha: f64, delta_n: f64) -> Result<CoveringDisk> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Range(format!("annulus width {alpha} must lie in (0, 1)")));
    }
    if !(delta_n > 0.0 && delta_n <= 1.0) {
        return Err(Error::Range(format!("half-angle {delta_n} must lie in (0, 1]")));
    }
    let s = (0.5 * delta_n).sin();
    let q = alpha / (1.0 - alpha);
    let radius = (4.0 * s * s / (1.0 - alpha) + q * q).sqrt();
    Ok(CoveringDisk {
        alpha,
        delta_n,
        radius,
    })
}

// ------------------------------------------------------------------- SVG

/// Pixels per unit length; the unit circle has radius 450 in a
/// 1000×1000 view box centred at (500, 500), with `y` pointing up.
pub const SVG_SCALE: f64 = 450.0;
const SVG_CENTER: f64 = 500.0;

fn px(z: Complex64) -> (f64, f64) {
    (SVG_CENTER + SVG_SCALE * z.re, SVG_CENTER - SVG_SCALE * z.im)
}

fn circle_path(c: Complex64, r: f64) -> String {
    let (x, y) = px(c);
    let rp = SVG_SCALE * r;
    format!(
        "M {:.3} {:.3} a {rp:.3} {rp:.3} 0 1 0 {:.3} 0 a {rp:.3} {rp:.3} 0 1 0 {:.3} 0 Z",
        x - rp,
        y,
        2.0 * rp,
        -2.0 * rp
    )
}

impl Region {
    /// Closed outline of the region as SVG path data. Unbounded parts are
    /// clipped at radius 1.1.
    pub fn svg_path(&self) -> String {
        let zero = Complex64::new(0.0, 0.0);
        match self {
            Region::DiskOnCircle {
                center_angle,
                radius,
                ..
            } => circle_path(Complex64::from_polar(1.0, *center_angle), *radius),
            Region::Annulus { rho } => {
                format!("{} {}", circle_path(zero, rho.min(1.1)), circle_path(zero, (1.0 / rho).min(1.1)))
            }
            Region::Sector(s) => wedge_path(s, 0.0, 1.1),
            Region::AnnularSector { rho, sector } => wedge_path(sector, *rho, (1.0 / rho).min(1.1)),
            Region::GearWheel(g) => {
                let mut d = circle_path(zero, 1.0);
                for &a in &g.center_angles {
                    d.push(' ');
                    d.push_str(&circle_path(Complex64::from_polar(1.0, a), g.gamma));
                }
                d
            }
        }
    }
}

fn wedge_path(s: &SectorSpec, r0: f64, r1: f64) -> String {
    let a = TAU * s.start_turns();
    let len = TAU * s.length_turns();
    if s.is_full() {
        let zero = Complex64::new(0.0, 0.0);
        return format!("{} {}", circle_path(zero, r1), if r0 > 0.0 { circle_path(zero, r0) } else { String::new() });
    }
    let b = a + len;
    let large = if len > PI { 1 } else { 0 };
    let p = |r: f64, t: f64| px(Complex64::from_polar(r, t));
    let (x0, y0) = p(r0, a);
    let (x1, y1) = p(r1, a);
    let (x2, y2) = p(r1, b);
    let (x3, y3) = p(r0, b);
    let (o, i) = (SVG_SCALE * r1, SVG_SCALE * r0);
    let mut d = format!("M {x0:.3} {y0:.3} L {x1:.3} {y1:.3} A {o:.3} {o:.3} 0 {large} 0 {x2:.3} {y2:.3} L {x3:.3} {y3:.3}");
    if r0 > 0.0 {
        let _ = write!(d, " A {i:.3} {i:.3} 0 {large} 1 {x0:.3} {y0:.3}");
    }
    d.push_str(" Z");
    d
}

/// A standalone SVG document showing the unit circle, the regions and the
/// roots.
pub fn render_svg(regions: &[Region], roots: &[Complex64]) -> String {
    let marks: Vec<(Complex64, &str)> = roots.iter().map(|&z| (z, "#b00020")).collect();
    render_svg_colored(regions, &marks)
}

/// Like [`render_svg`], with roots inside `region` drawn in green and the
/// rest in red.
pub fn render_svg_membership(regions: &[Region], region: &Region, roots: &[Complex64]) -> String {
    let marks: Vec<(Complex64, &str)> = roots
        .iter()
        .map(|&z| (z, if region.contains(z) { "#1b7f3b" } else { "#b00020" }))
        .collect();
    render_svg_colored(regions, &marks)
}

fn render_svg_colored(regions: &[Region], roots: &[(Complex64, &str)]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1000 1000" width="1000" height="1000">"#
    );
    let _ = writeln!(s, r##"<rect width="1000" height="1000" fill="#ffffff"/>"##);
    for r in regions {
        let (fill, rule) = match r {
            Region::GearWheel(_) => ("#c9d6ea", "evenodd"),
            Region::Annulus { .. } => ("#e6eecf", "evenodd"),
            _ => ("#f3dcc4", "nonzero"),
        };
        let _ = writeln!(
            s,
            r##"<path d="{}" fill="{fill}" fill-opacity="0.7" fill-rule="{rule}" stroke="#33415c" stroke-width="1"/>"##,
            r.svg_path()
        );
    }
    let _ = writeln!(
        s,
        r##"<circle cx="500" cy="500" r="450" fill="none" stroke="#000000" stroke-width="1.5"/>"##
    );
    for &(z, color) in roots {
        let (x, y) = px(z);
        if (-50.0..1050.0).contains(&x) && (-50.0..1050.0).contains(&y) {
            let _ = writeln!(s, r##"<circle cx="{x:.3}" cy="{y:.3}" r="2.5" fill="{color}"/>"##);
        }
    }
    s.push_str("</svg>\n");
    s
}
