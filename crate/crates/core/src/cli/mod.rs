//! Command-line front end. JSON goes to standard output (or `--out FILE`);
//! human-readable summaries go to standard error.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 malformed input,
//! 3 sample on a wall, 4 oracle bound exceeded, 5 degenerate signature.

pub mod json;
pub mod suites;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::charactereval::{hurwitz_connected_simple, hurwitz_disconnected};
use crate::oracle::{count_factorizations_with, Convention, FactorizationSpec, OracleError, DEFAULT_DEGREE_BOUND};
use crate::partitions::{Composition, PartitionError};
use crate::wallcross::{wallcrossing_polynomial, WallCrossError, WallCrossingProblem};
use crate::wedge::{chamber_of, chamber_polynomial, evaluate, Wall, WedgeError};
use crate::{branch_points, genus_of, HurwitzType, Rational};

use suites::{SuiteError, SuiteReport};

#[derive(Debug, Parser)]
#[command(name = "hurwitz", version, about = "Exact double Hurwitz numbers, chamber polynomials and wall-crossing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute one Hurwitz number.
    Compute(ComputeArgs),
    /// Emit the chamber polynomial of the chamber containing a sample point.
    ChamberPoly(ChamberArgs),
    /// Emit the wall-crossing polynomial across a wall.
    WallCrossing(WallArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Budget {
    #[arg(long = "type", value_enum)]
    pub kind: HurwitzType,
    /// Genus (pure types).
    #[arg(long)]
    pub g: Option<u32>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub r: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Oracle,
    Character,
    Chamber,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub budget: Budget,
    #[arg(long)]
    pub mu: String,
    #[arg(long)]
    pub nu: String,
    #[arg(long, value_enum, default_value = "character")]
    pub method: Method,
    /// Count connected covers only.
    #[arg(long)]
    pub connected: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ChamberArgs {
    #[command(flatten)]
    pub budget: Budget,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    /// Interior point `M1,..,Mm:N1,..,Nn`.
    #[arg(long)]
    pub sample: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WallArgs {
    #[command(flatten)]
    pub budget: Budget,
    /// Point of the chamber on the positive side, `M1,..:N1,..`.
    #[arg(long)]
    pub sample: String,
    /// The wall `μ_I = ν_J` as `I:J`, 1-based, e.g. `1:1` or `1,2:3`.
    #[arg(long)]
    pub wall: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Equality,
    Degree,
    ConstantTerm,
    Wallcross,
    Tau,
    Conventions,
    OnePart,
    Connected,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long)]
    pub dmax: Option<u32>,
    #[arg(long)]
    pub bmax: Option<u32>,
    /// Restrict genus-indexed suites to one genus.
    #[arg(long)]
    pub g: Option<u32>,
    /// Sample points per wall.
    #[arg(long, default_value_t = 5)]
    pub samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A failure carrying its exit code.
#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn malformed(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl From<PartitionError> for CliError {
    fn from(e: PartitionError) -> Self {
        CliError::malformed(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        let code = match e {
            OracleError::BoundExceeded(..) => 4,
            OracleError::Partition(_) => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<WedgeError> for CliError {
    fn from(e: WedgeError) -> Self {
        let code = match e {
            WedgeError::OnWall(_) => 3,
            WedgeError::DegenerateSignature => 5,
            WedgeError::NotDivisible | WedgeError::ZeroEnergyIntermediate => 1,
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<WallCrossError> for CliError {
    fn from(e: WallCrossError) -> Self {
        match e {
            WallCrossError::Wedge(w) => w.into(),
            other => CliError::malformed(other.to_string()),
        }
    }
}

impl From<SuiteError> for CliError {
    fn from(e: SuiteError) -> Self {
        match e {
            SuiteError::Oracle(o) => o.into(),
            SuiteError::Partition(p) => p.into(),
            SuiteError::Wedge(w) => w.into(),
            SuiteError::WallCross(w) => w.into(),
        }
    }
}

pub fn parse_parts(s: &str) -> Result<Vec<u32>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| CliError::malformed(format!("bad entry {t:?} in {s:?}"))))
        .collect()
}

fn parse_composition(s: &str) -> Result<Composition, CliError> {
    Ok(Composition::new(parse_parts(s)?)?)
}

/// `M1,..:N1,..` into its two tuples.
pub fn parse_sample(s: &str) -> Result<(Vec<u32>, Vec<u32>), CliError> {
    let (a, b) = s.split_once(':').ok_or_else(|| CliError::malformed(format!("sample {s:?} needs the form M:N")))?;
    Ok((parse_parts(a)?, parse_parts(b)?))
}

fn mask(indices: &[u32], len: usize) -> Result<u32, CliError> {
    let mut m = 0;
    for &i in indices {
        if i == 0 || i as usize > len {
            return Err(CliError::malformed(format!("index {i} out of range 1..={len}")));
        }
        m |= 1 << (i - 1);
    }
    Ok(m)
}

/// `(p, q, r)` from `--g` (pure types) or explicit budgets.
fn resolve_split(budget: &Budget, m: usize, n: usize) -> Result<(u32, u32, u32), CliError> {
    let explicit = budget.p.is_some() || budget.q.is_some() || budget.r.is_some();
    let split = (budget.p.unwrap_or(0), budget.q.unwrap_or(0), budget.r.unwrap_or(0));
    match (budget.kind, budget.g, explicit) {
        (HurwitzType::Mixed, None, true) => Ok(split),
        (HurwitzType::Mixed, _, _) => Err(CliError::malformed("--type mixed needs --p, --q, --r and no --g")),
        (kind, Some(g), false) => {
            let b = branch_points(g, m, n).ok_or_else(|| CliError::malformed(format!("no branch points for g={g}")))?;
            Ok(kind.pure_split(b).unwrap())
        }
        (kind, None, true) => {
            let b = split.0 + split.1 + split.2;
            if kind.pure_split(b) != Some(split) {
                return Err(CliError::malformed(format!("--type {kind:?} takes only its own budget")));
            }
            Ok(split)
        }
        _ => Err(CliError::malformed("give either --g or the budgets --p/--q/--r")),
    }
}

fn emit<T: Serialize>(value: &T, out: Option<&PathBuf>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError { code: 1, message: e.to_string() })?;
    match out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| CliError::malformed(e.to_string())),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}").map_err(|e| CliError { code: 1, message: e.to_string() })
        }
    }
}

#[derive(Debug, Serialize)]
struct ComputeInput {
    #[serde(rename = "type")]
    kind: HurwitzType,
    mu: Vec<u32>,
    nu: Vec<u32>,
    p: u32,
    q: u32,
    r: u32,
    g: Option<u32>,
    connected: bool,
}

#[derive(Debug, Serialize)]
struct ComputeRecord {
    input: ComputeInput,
    method: Method,
    value: String,
}

pub fn compute(args: &ComputeArgs) -> Result<Rational, CliError> {
    let mu = parse_composition(&args.mu)?;
    let nu = parse_composition(&args.nu)?;
    if mu.size() != nu.size() {
        return Err(PartitionError::SizeMismatch(mu.size(), nu.size()).into());
    }
    let (p, q, r) = resolve_split(&args.budget, mu.len(), nu.len())?;
    let g = genus_of(p + q + r, mu.len(), nu.len());
    let value = match args.method {
        Method::Oracle => {
            let spec = FactorizationSpec::new(mu.clone(), nu.clone(), p, q, r, args.connected);
            count_factorizations_with(&spec, Convention::Smaller, DEFAULT_DEGREE_BOUND)?
        }
        Method::Character if args.connected => {
            if args.budget.kind != HurwitzType::Simple {
                return Err(CliError::malformed("--connected with --method character needs --type simple"));
            }
            match g {
                Some(g) => hurwitz_connected_simple(&mu, &nu, g)?,
                None => Rational::from_integer(0.into()),
            }
        }
        Method::Character => hurwitz_disconnected(&mu, &nu, p, q, r)?,
        Method::Chamber => {
            if args.connected {
                return Err(CliError::malformed("--connected is not available for --method chamber"));
            }
            let chamber = chamber_of(mu.parts(), nu.parts())?;
            let poly = chamber_polynomial((p, q, r), &chamber)?;
            evaluate(&poly, chamber.universe(), &mu, &nu)?
        }
    };
    let record = ComputeRecord {
        input: ComputeInput {
            kind: args.budget.kind,
            mu: mu.parts().to_vec(),
            nu: nu.parts().to_vec(),
            p,
            q,
            r,
            g,
            connected: args.connected,
        },
        method: args.method,
        value: json::rational(&value),
    };
    emit(&record, args.out.as_ref())?;
    Ok(value)
}

pub fn chamber_poly(args: &ChamberArgs) -> Result<json::PolynomialRecord, CliError> {
    let (mu, nu) = parse_sample(&args.sample)?;
    if mu.len() != args.m || nu.len() != args.n {
        return Err(CliError::malformed(format!(
            "sample has {}:{} entries, expected {}:{}",
            mu.len(),
            nu.len(),
            args.m,
            args.n
        )));
    }
    let split = resolve_split(&args.budget, args.m, args.n)?;
    let chamber = chamber_of(&mu, &nu)?;
    let poly = chamber_polynomial(split, &chamber)?;
    let names = chamber.universe().names();
    let record = json::PolynomialRecord {
        chamber: json::chamber_record(&chamber),
        polynomial: json::poly_terms(&poly, &names),
        degree: poly.degree(),
    };
    emit(&record, args.out.as_ref())?;
    Ok(record)
}

pub fn wall_crossing(args: &WallArgs) -> Result<json::WallCrossingRecord, CliError> {
    let (mu, nu) = parse_sample(&args.sample)?;
    let (i, j) = parse_sample(&args.wall).or_else(|_| {
        let (a, b) = args.wall.split_once(':').ok_or_else(|| CliError::malformed("wall needs the form I:J"))?;
        Ok::<_, CliError>((parse_parts(a)?, if b.trim().is_empty() { Vec::new() } else { parse_parts(b)? }))
    })?;
    let wall = Wall { i_mask: mask(&i, mu.len())?, j_mask: mask(&j, nu.len())? };
    let split = resolve_split(&args.budget, mu.len(), nu.len())?;
    if args.budget.kind == HurwitzType::Simple {
        return Err(CliError::malformed("wall-crossing is implemented for monotone, strict and mixed types"));
    }
    let problem = WallCrossingProblem::new(split, wall, (&mu, &nu), 4 * (mu.iter().sum::<u32>() + 4))?;
    let poly = wallcrossing_polynomial(&problem)?;
    let names = problem.universe().names();
    let record = json::WallCrossingRecord {
        wall: json::wall_record(&problem.wall),
        c1: json::chamber_record(&problem.c1),
        c2: json::chamber_record(&problem.c2),
        polynomial: json::poly_terms(&poly, &names),
        degree: poly.degree(),
    };
    emit(&record, args.out.as_ref())?;
    Ok(record)
}

/// Run a suite with the acceptance defaults unless overridden.
pub fn run_suite(args: &VerifyArgs) -> Result<SuiteReport, CliError> {
    let gs = |default: &[u32]| args.g.map(|g| vec![g]).unwrap_or_else(|| default.to_vec());
    let report = match args.suite {
        Suite::Equality => suites::equality(args.dmax.unwrap_or(5), args.bmax.unwrap_or(4))?,
        Suite::Degree => {
            let cases: Vec<(u32, usize, usize)> = [(0, 1, 2), (0, 1, 3), (0, 2, 2), (1, 1, 1), (1, 1, 2), (1, 2, 1)]
                .into_iter()
                .filter(|c| args.g.is_none_or(|g| g == c.0))
                .collect();
            suites::degree(&cases, args.dmax.unwrap_or(8))?
        }
        Suite::ConstantTerm => SuiteReport::combine(
            "constant-term",
            vec![
                suites::bernoulli_identity(&gs(&[1, 2, 3])),
                suites::constant_term(&gs(&[0, 1, 2]), &[(1, 1), (1, 2), (2, 1)])?,
            ],
        ),
        Suite::Wallcross => {
            let mut splits = suites::wallcross_pure_splits(&gs(&[0, 1]));
            if args.g.is_none_or(|g| g == 0) {
                splits.push((1, 1, 0));
            }
            suites::wallcross(&splits, args.samples)?
        }
        Suite::Tau => suites::tau(args.dmax.unwrap_or(4), args.bmax.unwrap_or(3))?,
        Suite::Conventions => suites::conventions(
            args.dmax.unwrap_or(5),
            args.bmax.unwrap_or(4),
            &[HurwitzType::Monotone, HurwitzType::Strict],
        )?,
        Suite::OnePart => suites::one_part(args.dmax.unwrap_or(6))?,
        Suite::Connected => suites::connected(args.dmax.unwrap_or(5), args.bmax.unwrap_or(4))?,
    };
    Ok(report)
}

pub fn verify(args: &VerifyArgs) -> Result<SuiteReport, CliError> {
    let report = run_suite(args)?;
    for inst in report.failures() {
        eprintln!("FAIL {}: expected {}, got {}", inst.label, inst.expected, inst.actual);
    }
    eprintln!("{} {}: {} instances", if report.passed { "PASS" } else { "FAIL" }, report.suite, report.count);
    emit(&report, args.out.as_ref())?;
    if !report.passed {
        return Err(CliError { code: 1, message: format!("suite {} has mismatches", report.suite) });
    }
    Ok(report)
}

/// Parse arguments, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Compute(a) => compute(a).map(|_| ()),
        Command::ChamberPoly(a) => chamber_poly(a).map(|_| ()),
        Command::WallCrossing(a) => wall_crossing(a).map(|_| ()),
        Command::Verify(a) => verify(a).map(|_| ()),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
