//! The `polyzero` command line.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use crate::bounds::{default_thresholds, min_degree_for_radius};
use crate::error::{Error, Result};
use crate::geometry::{render_svg, render_svg_membership, ArcFormula, Gear, Region};
use crate::harness::{certify, certify_with_roots, csv_rows, sweep, CertifyConfig, SweepConfig};
use crate::norms::Exponent;
use crate::poly::{make_family, read_polynomial, FamilyKind, FamilySpec, PolyFormat, Polynomial};
use crate::roots::{find_roots, RootSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "polyzero", version, about = "Zero statistics of polynomials and certified bound checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certify every bound for one polynomial.
    Analyze(AnalyzeArgs),
    /// Certify bounds over random families.
    Sweep(SweepArgs),
    /// Build a gear wheel and optionally count roots inside it.
    Gear(GearArgs),
    /// Minimal degrees at which `C log n/√n` drops to a bound.
    Thresholds(ThresholdArgs),
}

#[derive(Args, Debug, Clone)]
pub struct BoundParams {
    /// Finite norm exponents.
    #[arg(long = "p", value_delimiter = ',', default_values_t = vec![1.0, 2.0])]
    pub p: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![1.0])]
    pub theta: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 0.9])]
    pub rho: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 0.25])]
    pub delta: Vec<f64>,
    /// Number of disk centres on the unit circle.
    #[arg(long, default_value_t = 720)]
    pub centers: usize,
    /// Distance a computed root may sit from the true zero.
    #[arg(long)]
    pub root_slack: Option<f64>,
    #[arg(long)]
    pub root_tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long, default_value = "geometric")]
    pub arc_formula: ArcFormula,
}

impl BoundParams {
    fn config(&self) -> Result<CertifyConfig> {
        let mut cfg = CertifyConfig {
            exponents: self.p.iter().map(|&p| Exponent::finite(p)).collect::<Result<_>>()?,
            thetas: self.theta.clone(),
            rhos: self.rho.clone(),
            deltas: self.delta.clone(),
            disk_centers: self.centers,
            arc_formula: self.arc_formula,
            ..CertifyConfig::default()
        };
        if let Some(s) = self.root_slack {
            cfg.root_slack = s;
        }
        if let Some(t) = self.root_tol {
            cfg.root_tol = t;
        }
        if let Some(m) = self.max_iter {
            cfg.max_iter = m;
        }
        Ok(cfg)
    }
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Polynomial file (`.json` or whitespace-separated real coefficients).
    #[arg(long, conflicts_with = "family")]
    pub poly: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<FamilyKind>,
    /// Degree, or the recursion depth for the Rudin–Shapiro families.
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub params: BoundParams,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![FamilyKind::Littlewood, FamilyKind::Unimodular, FamilyKind::GClass])]
    pub families: Vec<FamilyKind>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![16, 32, 64, 128, 256])]
    pub degrees: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub params: BoundParams,
    /// Full JSON report.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// One row per check.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GearArgs {
    #[arg(long)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    #[arg(long)]
    pub poly: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long, default_value = "geometric")]
    pub arc_formula: ArcFormula,
    /// Allow radii above 1/2, where the zero bound says nothing.
    #[arg(long)]
    pub explore: bool,
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    #[arg(long, requires = "bound")]
    pub coefficient: Option<f64>,
    #[arg(long, requires = "coefficient")]
    pub bound: Option<f64>,
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match cli.command {
        Command::Analyze(a) => run_analyze(&a),
        Command::Sweep(a) => run_sweep(&a),
        Command::Gear(a) => run_gear(&a),
        Command::Thresholds(a) => run_thresholds(&a),
    };
    match outcome {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Failed(e)) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failed(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Failed(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Failed(e.into())
    }
}

type CliResult = std::result::Result<i32, CliError>;

fn load_polynomial(path: &Path) -> Result<Polynomial> {
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let p = read_polynomial(file, PolyFormat::from_path(path))?;
    Ok(match p.label() {
        Some(_) => p,
        None => {
            let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("input").to_string();
            p.with_label(name)
        }
    })
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?);
            w.write_all(bytes)?;
            w.flush()?;
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn run_analyze(args: &AnalyzeArgs) -> CliResult {
    let cfg = args.params.config()?;
    let (p, roots, seed) = match (&args.poly, &args.family) {
        (Some(path), None) => (load_polynomial(path)?, None, None),
        (None, Some(kind)) => {
            let degree = match (kind, args.degree) {
                (FamilyKind::Lehmer, d) => d.unwrap_or(10),
                (_, Some(d)) => d,
                (_, None) => return Err(CliError::Usage(format!("--family {kind} needs --degree"))),
            };
            let p = make_family(&FamilySpec::new(kind.clone(), degree, args.seed))?;
            let roots = (*kind == FamilyKind::PowerMinusOne).then(|| RootSet::roots_of_unity(degree));
            (p, roots, kind.is_random().then_some(args.seed))
        }
        _ => return Err(CliError::Usage("give exactly one of --poly or --family".into())),
    };
    let mut report = match roots {
        Some(r) => certify_with_roots(&p, Some(r), &cfg)?,
        None => certify(&p, &cfg)?,
    };
    report.polynomial.seed = seed;
    write_output(args.out.as_deref(), &to_json(&report)?)?;
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
        return Ok(EXIT_FAILURE);
    }
    Ok(if report.hard_violations() > 0 { EXIT_VIOLATION } else { EXIT_OK })
}

fn run_sweep(args: &SweepArgs) -> CliResult {
    let cfg = SweepConfig {
        families: args.families.clone(),
        degrees: args.degrees.clone(),
        trials: args.trials,
        seed: args.seed,
        certify: CertifyConfig {
            record_centers: false,
            ..args.params.config()?
        },
    };
    let report = sweep(&cfg)?;
    if let Some(path) = &args.json {
        write_output(Some(path), &to_json(&report)?)?;
    }
    let csv = csv_rows(&report.instances);
    match &args.csv {
        Some(path) => write_output(Some(path), csv.as_bytes())?,
        None if args.json.is_none() => write_output(None, csv.as_bytes())?,
        None => {}
    }
    let mut err = io::stderr().lock();
    for (id, a) in &report.aggregates.bounds {
        let ratio = a.max_ratio.map_or("-".to_string(), |r| r.to_string());
        let _ = writeln!(
            err,
            "{id}: pass {} indeterminate {} violation {} inapplicable {} max_ratio {ratio}",
            a.pass, a.indeterminate, a.violation, a.inapplicable
        );
    }
    for f in &report.failures {
        let _ = writeln!(err, "failed: {f}");
    }
    Ok(if report.hard_violations > 0 {
        EXIT_VIOLATION
    } else if !report.failures.is_empty() {
        EXIT_FAILURE
    } else {
        EXIT_OK
    })
}

#[derive(Serialize)]
struct GearSummary {
    gamma: f64,
    delta: f64,
    arc_formula: ArcFormula,
    teeth: usize,
    tooth_arc: f64,
    tooth_width: f64,
    outside_hypothesis: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    counts: Option<GearCounts>,
}

#[derive(Serialize)]
struct GearCounts {
    roots: usize,
    inside: usize,
    outside: usize,
}

fn run_gear(args: &GearArgs) -> CliResult {
    if args.gamma > 0.5 && !args.explore {
        eprintln!(
            "error: gamma = {} exceeds 1/2, where the gear bound does not apply (pass --explore to draw it anyway)",
            args.gamma
        );
        return Ok(EXIT_FAILURE);
    }
    if args.svg.is_none() && args.json.is_none() {
        return Err(CliError::Usage("give --svg and/or --json".into()));
    }
    let gear = Gear::new(args.gamma, args.delta, args.arc_formula, 0.0)?;
    let region = Region::GearWheel(gear.clone());
    let roots: Option<Vec<Complex64>> = match &args.poly {
        Some(path) => {
            let p = load_polynomial(path)?;
            Some(if p.degree() == 0 {
                Vec::new()
            } else {
                find_roots(&p, crate::roots::DEFAULT_ROOT_TOL, crate::roots::DEFAULT_MAX_ITER)?
                    .roots()
                    .to_vec()
            })
        }
        None => None,
    };
    if let Some(path) = &args.svg {
        let svg = match &roots {
            Some(r) => render_svg_membership(std::slice::from_ref(&region), &region, r),
            None => render_svg(std::slice::from_ref(&region), &[]),
        };
        write_output(Some(path), svg.as_bytes())?;
    }
    let counts = roots.as_ref().map(|r| {
        let inside = r.iter().filter(|&&z| region.contains(z)).count();
        GearCounts {
            roots: r.len(),
            inside,
            outside: r.len() - inside,
        }
    });
    let summary = GearSummary {
        gamma: gear.gamma,
        delta: gear.delta,
        arc_formula: gear.formula,
        teeth: gear.teeth,
        tooth_arc: gear.tooth_arc,
        tooth_width: gear.tooth_width,
        outside_hypothesis: gear.outside_hypothesis,
        counts,
    };
    if let Some(path) = &args.json {
        write_output(Some(path), &to_json(&summary)?)?;
    }
    Ok(EXIT_OK)
}

fn run_thresholds(args: &ThresholdArgs) -> CliResult {
    let mut out = String::from("coefficient bound min_degree strict_limit label\n");
    match (args.coefficient, args.bound) {
        (Some(c), Some(b)) => {
            let n = min_degree_for_radius(c, b).map_err(|e| CliError::Usage(e.to_string()))?;
            out.push_str(&format!("{c} {b} {n} {} custom\n", n - 1));
        }
        _ => {
            for t in default_thresholds() {
                out.push_str(&format!(
                    "{} {} {} {} {}\n",
                    t.coefficient,
                    t.bound,
                    t.min_degree,
                    t.min_degree - 1,
                    t.label
                ));
            }
        }
    }
    write_output(None, out.as_bytes())?;
    Ok(EXIT_OK)
}
