//! Command-line front end: argument parsing, input resolution, report
//! assembly and rendering.
//!
//! [`run`] never touches the process; it returns the text for stdout/stderr
//! and the exit code so the binary stays a thin wrapper.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bounds::{sections_bound, BoundReport, Form};
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::stability::{check_stability_with_rank, ConditionStatus, StabilityReport};
use crate::twist::{minimal_stable_twist, HilbertPoly, TwistCertificate};
use crate::varieties::{catalog, catalog_lookup, InputFile, SheafSpec, Variety};
use crate::verify::{run_verify, Grid, VerifySummary};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_VERIFY_FAILED: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "syzygy",
    version,
    about = "Exact section bounds, syzygy-sheaf stability certificates and effective twists"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Upper bound on h^0 of a globally generated torsion-free sheaf.
    Bound(BoundArgs),
    /// Stability criterion for the syzygy sheaf of a rank-one sheaf.
    Check(CheckArgs),
    /// Least twist from which the syzygy sheaf is certified stable.
    Twist(TwistArgs),
    /// Built-in varieties.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table, global = true)]
        format: OutputFormat,
    },
    /// Run the invariant suite.
    Verify {
        #[arg(long, default_value = "small")]
        grid: Grid,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List,
    Show { name: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Lemma,
    Simplified,
}

impl From<FormArg> for Form {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Lemma => Form::LemmaSumForm,
            FormArg::Simplified => Form::SimplifiedForm,
        }
    }
}

#[derive(Debug, Args)]
pub struct VarietyArgs {
    /// JSON input file with a variety and optionally a sheaf.
    #[arg(long, conflicts_with_all = ["catalog", "dim"])]
    pub input: Option<PathBuf>,
    /// Catalog entry name (see `catalog list`).
    #[arg(long, conflicts_with = "dim")]
    pub catalog: Option<String>,
    #[arg(long, requires_all = ["h_top", "c1_h"])]
    pub dim: Option<u32>,
    /// Top self-intersection H^n.
    #[arg(long, requires = "dim")]
    pub h_top: Option<i64>,
    /// c1(X).H^(n-1)
    #[arg(long = "c1-h", requires = "dim", allow_hyphen_values = true)]
    pub c1_h: Option<i64>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    /// Also print decimal approximations with this many digits.
    #[arg(long, value_name = "DIGITS")]
    pub approx: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub variety: VarietyArgs,
    #[arg(long)]
    pub rank: Option<i64>,
    /// Integer or inclusive range `a..b`.
    #[arg(long)]
    pub degree: Option<String>,
    #[arg(long, value_enum, default_value_t = FormArg::Simplified)]
    pub form: FormArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub variety: VarietyArgs,
    #[arg(long)]
    pub rank: Option<i64>,
    /// Degree of the sheaf (before any `--twist`).
    #[arg(long)]
    pub degree: Option<i64>,
    #[arg(long, conflicts_with_all = ["hilbert", "regularity", "twist"])]
    pub h0: Option<i64>,
    /// Hilbert polynomial coefficients, constant term first: "c0,c1,...".
    #[arg(long, allow_hyphen_values = true)]
    pub hilbert: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub regularity: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub twist: Option<i64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TwistArgs {
    #[command(flatten)]
    pub variety: VarietyArgs,
    #[arg(long)]
    pub degree: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hilbert: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub regularity: Option<i64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Variety as echoed in reports, with the derived genus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyEcho {
    pub name: String,
    pub dim: u32,
    pub h_top: i64,
    pub c1_dot_h: i64,
    pub genus: i64,
}

impl From<&Variety> for VarietyEcho {
    fn from(v: &Variety) -> Self {
        VarietyEcho {
            name: v.name().to_string(),
            dim: v.dim(),
            h_top: v.h_top(),
            c1_dot_h: v.c1_dot_h(),
            genus: v.genus(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variety: Option<VarietyEcho>,
    /// Effective parameters after merging flags and input file.
    pub parameters: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntries {
    pub entries: Vec<VarietyEcho>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Bound(BoundReport),
    Stability(StabilityReport),
    Twist(TwistCertificate),
    Catalog(CatalogEntries),
    Verify(VerifySummary),
}

/// Decimal rendering of one exact value, requested with `--approx`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Approximation {
    pub field: String,
    pub exact: Rational,
    pub decimal: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub input: InputEcho,
    pub results: Vec<Payload>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approximations: Option<Vec<Approximation>>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("report: {e}")))
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok((report, format)) => {
            let code = match report.results.first() {
                Some(Payload::Verify(s)) if !s.is_ok() => EXIT_VERIFY_FAILED,
                _ => EXIT_OK,
            };
            match render(&report, format) {
                Ok(stdout) => Outcome {
                    stdout,
                    stderr: String::new(),
                    code,
                },
                Err(e) => error_outcome(&e),
            }
        }
        Err(e) => error_outcome(&e),
    }
}

fn error_outcome(e: &Error) -> Outcome {
    Outcome {
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
        code: e.exit_code(),
    }
}

pub fn execute(command: &Command) -> Result<(Report, OutputFormat)> {
    match command {
        Command::Bound(args) => Ok((cmd_bound(args)?, args.output.format)),
        Command::Check(args) => Ok((cmd_check(args)?, args.output.format)),
        Command::Twist(args) => Ok((cmd_twist(args)?, args.output.format)),
        Command::Catalog { action, format } => Ok((cmd_catalog(action)?, *format)),
        Command::Verify { grid, seed, format } => Ok((cmd_verify(*grid, *seed), *format)),
    }
}

/// Variety plus whatever sheaf data came from an input file.
fn resolve_variety(args: &VarietyArgs) -> Result<(Variety, Option<SheafSpec>)> {
    if let Some(path) = &args.input {
        let file = InputFile::load(path)?;
        return Ok((file.variety, file.sheaf));
    }
    if let Some(name) = &args.catalog {
        return Ok((catalog_lookup(name)?, None));
    }
    match (args.dim, args.h_top, args.c1_h) {
        (Some(dim), Some(h), Some(c1)) => Ok((Variety::new("", dim, h, c1)?, None)),
        _ => Err(Error::InvalidInput(
            "give a variety with --input FILE, --catalog NAME or --dim/--h-top/--c1-h".into(),
        )),
    }
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidInput(format!("missing {flag}")))
}

/// `"7"` or the inclusive range `"2..9"`.
pub fn parse_degrees(text: &str) -> Result<Vec<i64>> {
    let parse = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| Error::Parse(format!("degree {s:?} is not an integer")))
    };
    match text.split_once("..") {
        None => Ok(vec![parse(text)?]),
        Some((a, b)) => {
            let (a, b) = (parse(a)?, parse(b)?);
            if a > b {
                return Err(Error::InvalidInput(format!("empty degree range {text}")));
            }
            if b - a > 100_000 {
                return Err(Error::InvalidInput(format!(
                    "degree range {text} is too long"
                )));
            }
            Ok((a..=b).collect())
        }
    }
}

pub fn parse_hilbert(text: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .map(|c| c.trim().parse::<Rational>())
        .collect()
}

fn hilbert_text(coefficients: &[Rational]) -> String {
    coefficients
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn echo(variety: &Variety, parameters: BTreeMap<String, String>) -> InputEcho {
    InputEcho {
        variety: Some(variety.into()),
        parameters,
    }
}

fn approximations(
    digits: Option<usize>,
    fields: impl IntoIterator<Item = (String, Rational)>,
) -> Option<Vec<Approximation>> {
    digits.map(|digits| {
        fields
            .into_iter()
            .map(|(field, exact)| Approximation {
                decimal: exact.to_decimal(digits),
                field,
                exact,
            })
            .collect()
    })
}

pub fn cmd_bound(args: &BoundArgs) -> Result<Report> {
    let (variety, sheaf) = resolve_variety(&args.variety)?;
    let rank = required(args.rank.or(sheaf.as_ref().map(|s| s.rank)), "--rank")?;
    let degrees = match &args.degree {
        Some(text) => parse_degrees(text)?,
        None => vec![required(sheaf.as_ref().map(|s| s.degree), "--degree")?],
    };
    let form = Form::from(args.form);
    let results = degrees
        .iter()
        .map(|&d| sections_bound(&variety, rank, d, form))
        .collect::<Result<Vec<_>>>()?;

    let approx = approximations(
        args.output.approx,
        results
            .iter()
            .enumerate()
            .map(|(i, r)| (format!("results[{i}].value"), r.value.clone())),
    );
    let mut parameters = BTreeMap::new();
    parameters.insert("rank".into(), rank.to_string());
    parameters.insert(
        "degree".into(),
        match &args.degree {
            Some(text) => text.trim().to_string(),
            None => degrees[0].to_string(),
        },
    );
    parameters.insert("form".into(), form.as_str().into());
    Ok(Report {
        command: "bound".into(),
        input: echo(&variety, parameters),
        results: results.into_iter().map(Payload::Bound).collect(),
        approximations: approx,
    })
}

fn condition_fields(prefix: &str, c: &ConditionStatus) -> Vec<(String, Rational)> {
    let mut out = vec![(format!("{prefix}.lhs"), c.lhs.clone())];
    if let Some(rhs) = &c.rhs {
        out.push((format!("{prefix}.rhs"), rhs.clone()));
    }
    out
}

pub fn cmd_check(args: &CheckArgs) -> Result<Report> {
    let (variety, sheaf) = resolve_variety(&args.variety)?;
    let sheaf = sheaf.unwrap_or_default();
    let rank = args
        .rank
        .unwrap_or(if sheaf.rank == 0 { 1 } else { sheaf.rank });
    let d0 = match args.degree {
        Some(d) => d,
        None if args.variety.input.is_some() => sheaf.degree,
        None => return Err(Error::InvalidInput("missing --degree".into())),
    };
    let mut parameters = BTreeMap::new();
    parameters.insert("rank".into(), rank.to_string());

    let hilbert_flag = args.hilbert.as_deref().map(parse_hilbert).transpose()?;
    let hilbert = hilbert_flag.or(if args.h0.is_none() {
        sheaf.hilbert.clone()
    } else {
        None
    });
    let regularity = args.regularity.or(sheaf.regularity);
    let h0_given = args.h0.or(if hilbert.is_none() { sheaf.h0 } else { None });

    let (degree, h0) = match (h0_given, hilbert) {
        (Some(h0), None) => {
            parameters.insert("degree".into(), d0.to_string());
            parameters.insert("h0".into(), h0.to_string());
            (d0, h0)
        }
        (None, Some(coefficients)) => {
            let regularity = required(regularity, "--regularity")?;
            let k = required(args.twist, "--twist")?;
            if k < regularity {
                return Err(Error::NotApplicable(format!(
                    "twist {k} is below the regularity bound {regularity}; h0 is not known there"
                )));
            }
            let poly = HilbertPoly::new(coefficients, regularity);
            poly.validate(&variety, d0)?;
            let h0 = poly.sections_at(k)?;
            let degree = d0 + k * variety.h_top();
            parameters.insert("degree".into(), d0.to_string());
            parameters.insert("hilbert".into(), hilbert_text(poly.poly.coefficients()));
            parameters.insert("regularity".into(), regularity.to_string());
            parameters.insert("twist".into(), k.to_string());
            parameters.insert("twisted_degree".into(), degree.to_string());
            parameters.insert("h0".into(), h0.to_string());
            (degree, h0)
        }
        (None, None) => {
            return Err(Error::InvalidInput(
                "check needs --h0, or --hilbert with --regularity and --twist".into(),
            ))
        }
        (Some(_), Some(_)) => {
            return Err(Error::InvalidInput(
                "give either --h0 or --hilbert, not both".into(),
            ))
        }
    };

    let report = check_stability_with_rank(&variety, rank, degree, h0)?;
    let approx = approximations(
        args.output.approx,
        condition_fields("condition1", &report.condition1)
            .into_iter()
            .chain(condition_fields("condition2", &report.condition2)),
    );
    Ok(Report {
        command: "check".into(),
        input: echo(&variety, parameters),
        results: vec![Payload::Stability(report)],
        approximations: approx,
    })
}

pub fn cmd_twist(args: &TwistArgs) -> Result<Report> {
    let (variety, sheaf) = resolve_variety(&args.variety)?;
    let sheaf = sheaf.unwrap_or_default();
    if sheaf.rank > 1 {
        return Err(Error::NotApplicable(format!(
            "twist certificates are for rank-one sheaves, input has rank {}",
            sheaf.rank
        )));
    }
    let d0 = match args.degree {
        Some(d) => d,
        None if args.variety.input.is_some() => sheaf.degree,
        None => return Err(Error::InvalidInput("missing --degree".into())),
    };
    let coefficients = match &args.hilbert {
        Some(text) => parse_hilbert(text)?,
        None => required(sheaf.hilbert.clone(), "--hilbert")?,
    };
    let regularity = required(args.regularity.or(sheaf.regularity), "--regularity")?;
    let hilbert = HilbertPoly::new(coefficients, regularity);
    let cert = minimal_stable_twist(&variety, d0, &hilbert)?;

    let mut parameters = BTreeMap::new();
    parameters.insert("degree".into(), d0.to_string());
    parameters.insert("hilbert".into(), hilbert_text(hilbert.poly.coefficients()));
    parameters.insert("regularity".into(), regularity.to_string());
    let approx = approximations(
        args.output.approx,
        [("cauchy_bound".to_string(), cert.cauchy_bound.clone())],
    );
    Ok(Report {
        command: "twist".into(),
        input: echo(&variety, parameters),
        results: vec![Payload::Twist(cert)],
        approximations: approx,
    })
}

pub fn cmd_catalog(action: &CatalogAction) -> Result<Report> {
    let (entries, parameters) = match action {
        CatalogAction::List => (
            catalog().iter().map(VarietyEcho::from).collect(),
            BTreeMap::new(),
        ),
        CatalogAction::Show { name } => {
            let v = catalog_lookup(name)?;
            let mut p = BTreeMap::new();
            p.insert("name".to_string(), name.clone());
            (vec![VarietyEcho::from(&v)], p)
        }
    };
    Ok(Report {
        command: match action {
            CatalogAction::List => "catalog list".into(),
            CatalogAction::Show { .. } => "catalog show".into(),
        },
        input: InputEcho {
            variety: None,
            parameters,
        },
        results: vec![Payload::Catalog(CatalogEntries { entries })],
        approximations: None,
    })
}

pub fn cmd_verify(grid: Grid, seed: u64) -> Report {
    let mut parameters = BTreeMap::new();
    parameters.insert("grid".into(), grid.to_string());
    parameters.insert("seed".into(), seed.to_string());
    Report {
        command: "verify".into(),
        input: InputEcho {
            variety: None,
            parameters,
        },
        results: vec![Payload::Verify(run_verify(grid, seed))],
        approximations: None,
    }
}

pub fn render(report: &Report, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => Ok(report.to_json() + "\n"),
        OutputFormat::Table => Ok(render_table(report)),
        OutputFormat::Csv => render_csv(report),
    }
}

fn opt(r: &Option<Rational>) -> String {
    r.as_ref()
        .map_or_else(|| "-".to_string(), ToString::to_string)
}

fn render_table(report: &Report) -> String {
    let mut out = String::new();
    if let Some(v) = &report.input.variety {
        let name = if v.name.is_empty() {
            "(unnamed)"
        } else {
            &v.name
        };
        let _ = writeln!(
            out,
            "variety {name}: dim {} H^n {} c1.H^(n-1) {} genus {}",
            v.dim, v.h_top, v.c1_dot_h, v.genus
        );
    }
    for result in &report.results {
        match result {
            Payload::Bound(b) => {
                let _ = writeln!(
                    out,
                    "rank {} degree {:>4}  {:<11}  h0 <= {}{}",
                    b.inputs.rank,
                    b.inputs.degree,
                    b.branch.as_str(),
                    b.value,
                    if b.floored { "  (raised to rank)" } else { "" }
                );
            }
            Payload::Stability(s) => {
                let _ = writeln!(out, "degree {} h0 {}: {}", s.degree, s.h0, s.verdict);
                for (name, c) in [
                    ("condition 1", &s.condition1),
                    ("condition 2", &s.condition2),
                ] {
                    let _ = writeln!(
                        out,
                        "  {name}: {:?}  {} vs {}",
                        c.status,
                        c.lhs,
                        opt(&c.rhs)
                    );
                }
                let _ = writeln!(
                    out,
                    "  syzygy sheaf: rank {} degree {} slope {}",
                    s.lm.rank_m, s.lm.degree_m, s.lm.slope_m
                );
            }
            Payload::Twist(t) => {
                let _ = writeln!(out, "k_min = {}", t.k_min);
                let _ = writeln!(
                    out,
                    "scanned {}..={} (k_pos {}, regularity {}), Cauchy bound {}",
                    t.scanned_range[0], t.scanned_range[1], t.k_pos, t.regularity, t.cauchy_bound
                );
                let _ = writeln!(out, "F(k) = {}", t.condition_polys.f);
                if let Some(g) = &t.condition_polys.g {
                    let _ = writeln!(out, "G(k) = {g}");
                }
                for note in &t.notes {
                    let _ = writeln!(out, "note: {note}");
                }
            }
            Payload::Catalog(c) => {
                let _ = writeln!(
                    out,
                    "{:<16} {:>3} {:>5} {:>10} {:>5}",
                    "name", "dim", "H^n", "c1.H^n-1", "genus"
                );
                for v in &c.entries {
                    let _ = writeln!(
                        out,
                        "{:<16} {:>3} {:>5} {:>10} {:>5}",
                        v.name, v.dim, v.h_top, v.c1_dot_h, v.genus
                    );
                }
            }
            Payload::Verify(s) => {
                let _ = writeln!(out, "verify grid={} seed={}", s.grid, s.seed);
                for c in &s.checks {
                    let status = if c.failed == 0 { "PASS" } else { "FAIL" };
                    let _ = writeln!(
                        out,
                        "{status} {:<30} passed {:>6} failed {:>6}",
                        c.name, c.passed, c.failed
                    );
                    for f in &c.failures {
                        let _ = writeln!(out, "    {f}");
                    }
                }
                let _ = writeln!(out, "total: passed {} failed {}", s.passed, s.failed);
            }
        }
    }
    if let Some(approx) = &report.approximations {
        for a in approx {
            let _ = writeln!(out, "{} = {} ~ {}", a.field, a.exact, a.decimal);
        }
    }
    out
}

fn render_csv(report: &Report) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let variety = report
        .input
        .variety
        .as_ref()
        .map_or("", |v| v.name.as_str());
    let io = |e: csv::Error| Error::Internal(format!("csv: {e}"));
    let mut header_written = false;
    for result in &report.results {
        let (header, row): (Vec<&str>, Vec<String>) = match result {
            Payload::Bound(b) => (
                vec![
                    "variety",
                    "rank",
                    "degree",
                    "branch",
                    "form",
                    "value",
                    "rank_one_term",
                    "floored",
                ],
                vec![
                    variety.to_string(),
                    b.inputs.rank.to_string(),
                    b.inputs.degree.to_string(),
                    b.branch.as_str().into(),
                    b.form.as_str().into(),
                    b.value.to_string(),
                    b.rank_one_term.to_string(),
                    b.floored.to_string(),
                ],
            ),
            Payload::Stability(s) => (
                vec![
                    "variety",
                    "degree",
                    "h0",
                    "verdict",
                    "condition1",
                    "condition1_rhs",
                    "condition2",
                    "condition2_rhs",
                ],
                vec![
                    variety.to_string(),
                    s.degree.to_string(),
                    s.h0.to_string(),
                    s.verdict.as_str().into(),
                    format!("{:?}", s.condition1.status),
                    opt(&s.condition1.rhs),
                    format!("{:?}", s.condition2.status),
                    opt(&s.condition2.rhs),
                ],
            ),
            Payload::Twist(t) => (
                vec![
                    "variety",
                    "k_min",
                    "k_pos",
                    "regularity",
                    "cauchy_bound",
                    "scan_start",
                    "scan_end",
                ],
                vec![
                    variety.to_string(),
                    t.k_min.to_string(),
                    t.k_pos.to_string(),
                    t.regularity.to_string(),
                    t.cauchy_bound.to_string(),
                    t.scanned_range[0].to_string(),
                    t.scanned_range[1].to_string(),
                ],
            ),
            Payload::Catalog(c) => {
                w.write_record(["name", "dim", "h_top", "c1_dot_h", "genus"])
                    .map_err(io)?;
                for v in &c.entries {
                    w.write_record([
                        v.name.clone(),
                        v.dim.to_string(),
                        v.h_top.to_string(),
                        v.c1_dot_h.to_string(),
                        v.genus.to_string(),
                    ])
                    .map_err(io)?;
                }
                continue;
            }
            Payload::Verify(s) => {
                w.write_record(["check", "passed", "failed"]).map_err(io)?;
                for c in &s.checks {
                    w.write_record([c.name.clone(), c.passed.to_string(), c.failed.to_string()])
                        .map_err(io)?;
                }
                continue;
            }
        };
        if !header_written {
            w.write_record(&header).map_err(io)?;
            header_written = true;
        }
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Internal(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(format!("csv: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(args: &[&str]) -> Report {
        let mut full = vec!["syzygy"];
        full.extend_from_slice(args);
        full.extend_from_slice(&["--format", "json"]);
        let out = run(full);
        assert_eq!(out.code, 0, "{}", out.stderr);
        Report::from_json(&out.stdout).unwrap()
    }

    #[test]
    fn degree_ranges() {
        assert_eq!(parse_degrees("3").unwrap(), vec![3]);
        assert_eq!(parse_degrees("2..4").unwrap(), vec![2, 3, 4]);
        assert!(parse_degrees("4..2").is_err());
        assert!(parse_degrees("x").is_err());
    }

    #[test]
    fn bound_example() {
        let r = run_ok(&["bound", "--catalog", "P3", "--rank", "2", "--degree", "3"]);
        match &r.results[0] {
            Payload::Bound(b) => assert_eq!(b.value.to_string(), "21"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn check_example() {
        let r = run_ok(&["check", "--catalog", "P2", "--degree", "2", "--h0", "6"]);
        match &r.results[0] {
            Payload::Stability(s) => assert_eq!(s.verdict.as_str(), "Stable"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn check_with_hilbert_matches_h0() {
        let via_poly = run_ok(&[
            "check",
            "--catalog",
            "quartic-K3",
            "--degree",
            "0",
            "--hilbert",
            "2,0,2",
            "--regularity",
            "0",
            "--twist",
            "4",
        ]);
        let direct = run_ok(&[
            "check",
            "--catalog",
            "quartic-K3",
            "--degree",
            "16",
            "--h0",
            "34",
        ]);
        assert_eq!(via_poly.results, direct.results);
    }

    #[test]
    fn twist_example() {
        let r = run_ok(&[
            "twist",
            "--catalog",
            "quartic-K3",
            "--degree",
            "0",
            "--hilbert",
            "2,0,2",
            "--regularity",
            "0",
        ]);
        match &r.results[0] {
            Payload::Twist(t) => assert_eq!(t.k_min, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            run([
                "syzygy",
                "bound",
                "--catalog",
                "nope",
                "--rank",
                "1",
                "--degree",
                "1"
            ])
            .code,
            1
        );
        assert_eq!(run(["syzygy", "bound", "--bogus"]).code, 1);
        assert_eq!(
            run([
                "syzygy",
                "check",
                "--catalog",
                "P2",
                "--degree",
                "-1",
                "--h0",
                "3"
            ])
            .code,
            1
        );
        assert_eq!(
            run([
                "syzygy",
                "check",
                "--catalog",
                "P2",
                "--degree",
                "2",
                "--h0",
                "1"
            ])
            .code,
            3
        );
        assert_eq!(run(["syzygy", "--help"]).code, 0);
    }

    #[test]
    fn approx_keeps_exact() {
        let r = run_ok(&[
            "bound",
            "--catalog",
            "quadric-surface",
            "--rank",
            "1",
            "--degree",
            "2",
            "--approx",
            "4",
        ]);
        let a = &r.approximations.as_ref().unwrap()[0];
        assert_eq!(a.exact.to_string(), "15/4");
        assert_eq!(a.decimal, "3.7500");
    }

    #[test]
    fn csv_rows() {
        let out = run([
            "syzygy",
            "bound",
            "--catalog",
            "P2",
            "--rank",
            "1",
            "--degree",
            "0..2",
            "--format",
            "csv",
        ]);
        assert_eq!(out.code, 0);
        let lines: Vec<&str> = out.stdout.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("variety,rank,degree"));
        assert!(lines[3].ends_with(",6,5,false"), "{}", lines[3]);
    }
}
