//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a check ran and failed (any report is still
//! written), 2 usage error. Errors are one line on standard error of the
//! form `error[usage]: ...` or `error[runtime]: ...`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog::{self, Params, Resolved};
use crate::error::Error;
use crate::factorable::generator::RandomInstance;
use crate::factorable::FactorableKind;
use crate::geometry::{Interval, Orientation, Rect};
use crate::rng::SplitMix64;
use crate::verify::{self, OdeKind, ProbeKind, Surface};

#[derive(Parser, Debug)]
#[command(name = "isoafs", version, about = "Curvature checks for surfaces in simply isotropic 3-space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print every catalog family.
    List {
        #[arg(long, value_enum, default_value_t = ListFormat::Text)]
        format: ListFormat,
    },
    /// Sample a family and check its claimed constant.
    Verify(VerifyArgs),
    /// Export sampled points with their curvatures.
    Grid(GridArgs),
    /// Compare the specialised formulas with the generic chart route.
    CrossValidate(CrossArgs),
    /// Random search for type-2 minimal or constant-nonzero-K instances.
    Probe(ProbeArgs),
    /// Runge–Kutta integration against a closed-form ODE profile.
    OdeCheck(OdeArgs),
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long)]
    family: String,
    /// `name=value`; repeatable. `shape=quadratic|exp|sin` selects a profile.
    #[arg(long = "param")]
    params: Vec<String>,
    /// `x:lo..hi,y:lo..hi` using the chart's axis names.
    #[arg(long)]
    domain: Option<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, default_value_t = 41)]
    grid: usize,
    #[arg(long, default_value_t = verify::TOL_CONST)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, default_value_t = 21)]
    grid: usize,
    #[arg(long, value_enum, default_value_t = GridFormat::Csv)]
    format: GridFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CrossArgs {
    #[arg(long, conflicts_with = "random")]
    family: Option<String>,
    #[arg(long = "param")]
    params: Vec<String>,
    /// Draw a random instance of this type instead of a catalog family.
    #[arg(long, value_enum)]
    random: Option<KindArg>,
    #[arg(long, default_value_t = 100)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = verify::TOL_CROSS)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ProbeArgs {
    #[arg(long, value_enum)]
    kind: ProbeArg,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OdeArgs {
    #[arg(long, value_enum)]
    ode: OdeArg,
    #[arg(long = "param")]
    params: Vec<String>,
    /// `lo..hi`.
    #[arg(long)]
    range: Option<String>,
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ListFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GridFormat {
    Csv,
    Obj,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    #[value(name = "type1")]
    Type1,
    #[value(name = "type2")]
    Type2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ProbeArg {
    #[value(name = "afs2-minimal")]
    Afs2Minimal,
    #[value(name = "afs2-constant-k", alias = "afs2-constant-K")]
    Afs2ConstantK,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OdeArg {
    #[value(name = "afs1-minimal")]
    Afs1Minimal,
    #[value(name = "afs2-cmc")]
    Afs2Cmc,
}

const AFS1_MINIMAL_SCHEMA: &[(&str, f64)] = &[("c1", 1.0), ("a", 1.0), ("c2", 1.0), ("c3", 0.0)];
const AFS2_CMC_SCHEMA: &[(&str, f64)] = &[("H0", 1.0), ("c1", 1.0), ("c2", 1.0), ("c3", 0.0)];

enum Failure {
    Usage(String),
    Runtime(String),
    /// The check ran; its output has been written.
    CheckFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownFamily(_)
            | Error::UnknownParameter { .. }
            | Error::InvalidParameter { .. }
            | Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(format!("i/o: {e}"))
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs one command line; `args[0]` is the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let msg = e.to_string();
            let line = msg.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(err, "error[usage]: {}", line.trim_start_matches("error: "));
            return 2;
        }
    };
    let outcome = match cli.command {
        Command::List { format } => list(format, out),
        Command::Verify(a) => verify_cmd(a, out),
        Command::Grid(a) => grid_cmd(a, out),
        Command::CrossValidate(a) => cross_cmd(a, out),
        Command::Probe(a) => probe_cmd(a, out),
        Command::OdeCheck(a) => ode_cmd(a, out),
    };
    match outcome {
        Ok(()) => 0,
        Err(Failure::CheckFailed) => 1,
        Err(Failure::Runtime(m)) => {
            let _ = writeln!(err, "error[runtime]: {}", one_line(&m));
            1
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error[usage]: {}", one_line(&m));
            2
        }
    }
}

fn one_line(s: &str) -> String {
    s.replace('\n', " ")
}

fn parse_params(bindings: &[String]) -> Result<Params, Failure> {
    let mut p = Params::new();
    for b in bindings {
        p.bind(b)?;
    }
    Ok(p)
}

fn parse_range(s: &str) -> Result<Interval, Failure> {
    let bad = || Failure::Usage(format!("expected lo..hi, got '{s}'"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Failure::Usage(format!("range '{s}' must be finite with lo < hi")));
    }
    Ok(Interval::new(lo, hi))
}

/// Parses `x:lo..hi,y:lo..hi` against the axis names of `orientation`.
pub fn parse_domain(s: &str, orientation: Orientation) -> crate::error::Result<Rect> {
    let axes = orientation.axes();
    let mut found: [Option<Interval>; 2] = [None, None];
    for part in s.split(',') {
        let (name, range) = part
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("domain part '{part}' is not name:lo..hi")))?;
        let i = axes.iter().position(|a| *a == name.trim()).ok_or_else(|| {
            Error::InvalidArgument(format!("domain axis '{name}' is not one of {}, {}", axes[0], axes[1]))
        })?;
        let iv = parse_range(range).map_err(|f| match f {
            Failure::Usage(m) | Failure::Runtime(m) => Error::InvalidArgument(m),
            Failure::CheckFailed => Error::InvalidArgument(range.into()),
        })?;
        if found[i].replace(iv).is_some() {
            return Err(Error::InvalidArgument(format!("domain axis '{name}' given twice")));
        }
    }
    match found {
        [Some(u), Some(v)] => Ok(Rect { u, v }),
        _ => Err(Error::InvalidArgument(format!(
            "domain must give both {} and {}",
            axes[0], axes[1]
        ))),
    }
}

fn emit(text: &str, path: &Option<PathBuf>, out: &mut dyn Write) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ListRow {
    id: &'static str,
    formula: &'static str,
    parameters: Vec<String>,
    claim: &'static str,
    claimed_value: Option<f64>,
    derived_value: Option<f64>,
    as_printed: bool,
    anchor: &'static str,
}

fn list(format: ListFormat, out: &mut dyn Write) -> Outcome {
    let mut rows = Vec::new();
    for def in catalog::registry() {
        let mut parameters: Vec<String> = def.params.iter().map(|(n, d)| format!("{n}={d}")).collect();
        if def.takes_profile {
            parameters.push("shape=quadratic|exp|sin".into());
        }
        let profile = catalog::expected_profile(def.id, &Params::new())?;
        rows.push(ListRow {
            id: def.id,
            formula: def.formula,
            parameters,
            claim: def.claim.name(),
            claimed_value: profile.claimed_value,
            derived_value: profile.derived_value,
            as_printed: def.as_printed,
            anchor: def.anchor,
        });
    }
    let text = match format {
        ListFormat::Json => serde_json::to_string_pretty(&rows).expect("rows are serialisable"),
        ListFormat::Text => {
            let mut t = String::from("id\tformula\tparameters\tclaim\tderived\tanchor\n");
            for r in &rows {
                let derived = r.derived_value.map_or("-".to_string(), |d| format!("{d}"));
                let flag = if r.as_printed { " [as printed]" } else { "" };
                let _ = writeln!(
                    t,
                    "{}\t{}\t{}\t{}\t{}\t{}{}",
                    r.id,
                    r.formula,
                    r.parameters.join(" "),
                    r.claim,
                    derived,
                    r.anchor,
                    flag
                );
            }
            t
        }
    };
    emit(&text, &None, out)
}

fn family_domain(args: &FamilyArgs, s: &crate::factorable::AffineFactorable) -> Result<Rect, Failure> {
    match &args.domain {
        Some(d) => Ok(parse_domain(d, s.kind.orientation())?),
        None => Ok(s.domain),
    }
}

fn verify_cmd(a: VerifyArgs, out: &mut dyn Write) -> Outcome {
    let params = parse_params(&a.family.params)?;
    let family = catalog::instantiate(&a.family.family, &params)?;
    let domain = family_domain(&a.family, &family.surface)?;
    let report = verify::verify_family(&a.family.family, &params, Some(domain), a.grid, a.tol)?;
    emit(&report.to_json(), &a.out, out)?;
    if a.out.is_some() {
        let status = if report.pass { "PASS" } else { "FAIL" };
        writeln!(
            out,
            "{status} {} max_abs_deviation={:e} tolerance={:e}",
            report.subject, report.max_abs_deviation, report.tolerance
        )?;
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::CheckFailed)
    }
}

/// One CSV row per included sample: `x,y,z,K,H` in space coordinates with
/// 17 significant digits.
pub fn grid_csv<S: Surface + ?Sized>(s: &S, grid: &verify::Grid) -> crate::error::Result<String> {
    let mut t = String::from("x,y,z,K,H\n");
    for sample in &grid.samples {
        let [x, y, z] = s.position(sample.point)?;
        let c = sample.curvatures;
        let _ = writeln!(t, "{x:.16e},{y:.16e},{z:.16e},{:.16e},{:.16e}", c.k, c.h);
    }
    Ok(t)
}

/// Triangulated grid: `n^2` vertices in row-major order, then two faces per cell.
pub fn grid_obj<S: Surface + ?Sized>(s: &S, domain: Rect, n: usize) -> crate::error::Result<String> {
    let mut t = String::new();
    for p in verify::grid_points(domain, n) {
        let [x, y, z] = s.position(p)?;
        let _ = writeln!(t, "v {x:.16e} {y:.16e} {z:.16e}");
    }
    let idx = |i: usize, j: usize| i * n + j + 1;
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i, j + 1), idx(i + 1, j + 1));
            let _ = writeln!(t, "f {a} {b} {d}");
            let _ = writeln!(t, "f {a} {d} {c}");
        }
    }
    Ok(t)
}

fn grid_cmd(a: GridArgs, out: &mut dyn Write) -> Outcome {
    let params = parse_params(&a.family.params)?;
    let family = catalog::instantiate(&a.family.family, &params)?;
    let s = &family.surface;
    let domain = family_domain(&a.family, s)?;
    if a.grid < 2 {
        return Err(Failure::Usage(format!("grid size must be at least 2, got {}", a.grid)));
    }
    let text = match a.format {
        GridFormat::Obj => grid_obj(s, domain, a.grid)?,
        GridFormat::Csv => grid_csv(s, &verify::sample_grid(s, domain, a.grid)?)?,
        GridFormat::Json => {
            let grid = verify::sample_grid(s, domain, a.grid)?;
            let rows = grid
                .samples
                .iter()
                .map(|smp| {
                    let [x, y, z] = s.position(smp.point)?;
                    Ok([x, y, z, smp.curvatures.k, smp.curvatures.h])
                })
                .collect::<crate::error::Result<Vec<_>>>()?;
            serde_json::to_string_pretty(&serde_json::json!({
                "subject": family.subject(),
                "columns": ["x", "y", "z", "K", "H"],
                "excluded_points": grid.excluded.len(),
                "rows": rows,
            }))
            .expect("grid is serialisable")
        }
    };
    emit(&text, &a.out, out)
}

fn cross_cmd(a: CrossArgs, out: &mut dyn Write) -> Outcome {
    let report = match (&a.family, a.random) {
        (Some(id), None) => {
            let params = parse_params(&a.params)?;
            let family = catalog::instantiate(id, &params)?;
            let subject = format!("cross-validate({}, seed={})", family.subject(), a.seed);
            verify::cross_validate_as(&subject, &family.surface, a.points, a.seed, a.tol)?
        }
        (None, Some(kind)) => {
            if !a.params.is_empty() {
                return Err(Failure::Usage("--param applies only with --family".into()));
            }
            let kind = match kind {
                KindArg::Type1 => FactorableKind::Type1,
                KindArg::Type2 => FactorableKind::Type2,
            };
            let inst = RandomInstance::draw(kind, &mut SplitMix64::new(a.seed));
            let mut r = verify::cross_validate(&inst.surface, a.points, a.seed, a.tol)?;
            r.notes.push(format!("instance: {}", inst.describe()));
            r
        }
        _ => return Err(Failure::Usage("give exactly one of --family or --random".into())),
    };
    emit(&report.to_json(), &a.out, out)?;
    if report.pass {
        Ok(())
    } else {
        Err(Failure::CheckFailed)
    }
}

fn probe_cmd(a: ProbeArgs, out: &mut dyn Write) -> Outcome {
    if a.count == 0 {
        return Err(Failure::Usage("--count must be at least 1".into()));
    }
    let kind = match a.kind {
        ProbeArg::Afs2Minimal => ProbeKind::Afs2Minimal,
        ProbeArg::Afs2ConstantK => ProbeKind::Afs2ConstantK,
    };
    let report = verify::probe_nonexistence(kind, a.count, a.seed)?;
    emit(&report.to_json(), &a.out, out)?;
    if report.counterexamples == 0 && report.count == a.count {
        Ok(())
    } else {
        Err(Failure::CheckFailed)
    }
}

#[derive(Serialize)]
struct OdeReport {
    ode: &'static str,
    subject: String,
    range: Interval,
    steps: usize,
    max_error: f64,
    tolerance: f64,
    pass: bool,
}

fn ode_cmd(a: OdeArgs, out: &mut dyn Write) -> Outcome {
    let params = parse_params(&a.params)?;
    let (name, schema, default_range) = match a.ode {
        OdeArg::Afs1Minimal => ("afs1-minimal", AFS1_MINIMAL_SCHEMA, Interval::new(0.0, 1.0)),
        OdeArg::Afs2Cmc => ("afs2-cmc", AFS2_CMC_SCHEMA, Interval::new(-1.0, 0.0)),
    };
    let r = Resolved::new(name, schema, false, &params)?;
    let ode = match a.ode {
        OdeArg::Afs1Minimal => OdeKind::Type1Minimal {
            c1: r.get("c1"),
            a: r.get("a"),
            c2: r.get("c2"),
            c3: r.get("c3"),
        },
        OdeArg::Afs2Cmc => OdeKind::Type2Cmc {
            h0: r.get("H0"),
            c1: r.get("c1"),
            c2: r.get("c2"),
            c3: r.get("c3"),
        },
    };
    let range = match &a.range {
        Some(s) => parse_range(s)?,
        None => default_range,
    };
    if a.steps == 0 {
        return Err(Failure::Usage("--steps must be at least 1".into()));
    }
    let max_error = verify::ode_crosscheck(ode, range, a.steps)?;
    let report = OdeReport {
        ode: ode.name(),
        subject: r.subject(),
        range,
        steps: a.steps,
        max_error,
        tolerance: a.tol,
        pass: max_error <= a.tol,
    };
    let pass = report.pass;
    emit(
        &serde_json::to_string_pretty(&report).expect("report is serialisable"),
        &a.out,
        out,
    )?;
    if pass {
        Ok(())
    } else {
        Err(Failure::CheckFailed)
    }
}
