//! Command-line front end. The binary only parses arguments and calls [`run`];
//! every command returns its exit code and report so it can be driven from
//! tests and scripts.
//!
//! Exit codes: `certify` 0 CERTIFIED, 1 REFUTED, 2 INDETERMINATE;
//! `localize` 0 with a PROVEN enclosure, 1 without, 3 when the budget ran
//! out; `index` 0 verified, 2 unverified; `trace` 0 complete, 1 incomplete.
//! Errors exit with 4.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::catalog::{lookup, CATALOG};
use crate::certify::{
    certify_cone_shell, certify_cylinder, certify_holes_cross_checked, certify_miranda,
    Certificate, Directions, Form, Outcome, DEFAULT_MAX_DEPTH,
};
use crate::continuation::{start_index, trace_continuum, ContinuumWitness};
use crate::degree::{degree_1d, holed_ball_index, winding_degree_2d, DegreeResult};
use crate::error::{Error, Result};
use crate::geometry::DomainSpec;
use crate::interval::Interval;
use crate::localize::{
    localize_fixed_points, localize_in_shell, EnclosureStatus, LocalizeReport, ShellReport,
};
use crate::problem::{parse_problem, FormChoice, Problem};

pub const EXIT_ERROR: i32 = 4;

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_BUDGET: usize = 1_000_000;
pub const DEFAULT_GRID: usize = 16;
pub const DEFAULT_TRACE_TOL: f64 = 1e-3;

#[derive(Debug, Parser)]
#[command(name = "fixcert", version, about = "Rigorous fixed point certificates, enclosures, indices and continua")]
pub struct Cli {
    /// Maximum number of worker threads.
    #[arg(long, global = true, env = "FIXCERT_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Expansive,
    Compressive,
    Auto,
}

impl From<FormArg> for FormChoice {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Expansive => FormChoice::Expansive,
            FormArg::Compressive => FormChoice::Compressive,
            FormArg::Auto => FormChoice::Auto,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Input {
    /// Problem file.
    #[arg(required_unless_present = "catalog", conflicts_with = "catalog")]
    pub file: Option<PathBuf>,
    /// Run a built-in problem instead of a file.
    #[arg(long)]
    pub catalog: Option<String>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Zero the timing fields so that repeated runs are byte-identical.
    #[arg(long)]
    pub stable: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Certify the existence of a fixed point on the problem's domain.
    Certify {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        form: Option<FormArg>,
        #[arg(long)]
        max_depth: Option<usize>,
    },
    /// Enclose all fixed points in the domain.
    Localize {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Fixed point index on the domain interior.
    Index {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        max_depth: Option<usize>,
    },
    /// Chain of enclosures across the parameter range of a family.
    Trace {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        budget: Option<usize>,
        /// Also verify the fixed point index at the start of the range.
        #[arg(long)]
        check_index: bool,
    },
    /// List the built-in problems, or print one of them.
    Catalog { id: Option<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Report {
    fn ok(code: i32, stdout: String) -> Self {
        Report { code, stdout, stderr: String::new() }
    }

    fn error(e: &Error) -> Self {
        Report { code: EXIT_ERROR, stdout: String::new(), stderr: format!("error: {e}\n") }
    }
}

pub fn run(cli: Cli) -> Report {
    let Cli { threads, command } = cli;
    match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(command)),
            Err(e) => Report::error(&Error::InvalidArgument(e.to_string())),
        },
        None => dispatch(command),
    }
}

fn dispatch(command: Command) -> Report {
    let result = match command {
        Command::Certify { input, form, max_depth } => {
            load(&input).and_then(|p| cmd_certify(&p, form.map(Into::into), max_depth, &input))
        }
        Command::Localize { input, tol, budget } => {
            load(&input).and_then(|p| cmd_localize(&p, tol, budget, &input))
        }
        Command::Index { input, max_depth } => {
            load(&input).and_then(|p| cmd_index(&p, max_depth, &input))
        }
        Command::Trace { input, grid, tol, budget, check_index } => {
            load(&input).and_then(|p| cmd_trace(&p, grid, tol, budget, check_index, &input))
        }
        Command::Catalog { id } => cmd_catalog(id.as_deref()),
    };
    result.unwrap_or_else(|e| Report::error(&e))
}

fn load(input: &Input) -> Result<Problem> {
    match (&input.catalog, &input.file) {
        (Some(id), _) => lookup(id)?.problem(),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
            parse_problem(&text)
        }
        (None, None) => Err(Error::InvalidArgument("no problem file given".into())),
    }
}

pub fn cmd_catalog(id: Option<&str>) -> Result<Report> {
    let out = match id {
        Some(id) => lookup(id)?.source.to_string(),
        None => CATALOG.iter().fold(String::new(), |mut s, e| {
            let task = format!("{:?}", e.task).to_lowercase();
            let _ = writeln!(s, "{:<24} {:<9} {}", e.id, task, e.expect);
            s
        }),
    };
    Ok(Report::ok(0, out))
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

/// Certifies with each requested form in turn. A certified form wins; both
/// forms refuted gives a refutation carrying the witnesses of both.
fn certify_forms(
    forms: &[Form],
    mut attempt: impl FnMut(Form) -> Result<Certificate>,
) -> Result<Certificate> {
    let mut tried: Vec<Certificate> = Vec::new();
    for &form in forms {
        let cert = attempt(form)?;
        if cert.is_certified() {
            return Ok(cert);
        }
        tried.push(cert);
    }
    let mut certs = tried.into_iter();
    let mut best = certs.next().expect("at least one form");
    for c in certs {
        best.stats.boxes += c.stats.boxes;
        best.stats.depth = best.stats.depth.max(c.stats.depth);
        best.stats.seconds += c.stats.seconds;
        match (best.outcome, c.outcome) {
            (Outcome::Refuted, Outcome::Refuted) => best.witness.extend(c.witness),
            (Outcome::Refuted, Outcome::Indeterminate) => {
                let stats = best.stats;
                best = c;
                best.stats = stats;
            }
            _ => {}
        }
    }
    Ok(best)
}

pub fn certify_problem(p: &Problem, form: Option<FormChoice>, max_depth: Option<usize>) -> Result<Certificate> {
    let depth = max_depth.or(p.settings.max_depth).unwrap_or(DEFAULT_MAX_DEPTH);
    let forms = form.or(p.settings.form).unwrap_or_default().forms();
    match &p.domain {
        DomainSpec::Rect(r) => {
            let dirs = p.settings.directions.clone().unwrap_or(Directions::Auto);
            certify_miranda(&p.map, r, &dirs, depth)
        }
        DomainSpec::Cylinder(c) => certify_forms(forms, |f| certify_cylinder(&p.map, c, f, depth)),
        DomainSpec::ConeShell(s) => certify_forms(forms, |f| certify_cone_shell(&p.map, s, f, depth)),
        DomainSpec::HoledBall(h) => certify_holes_cross_checked(&p.map, h, depth),
    }
}

pub fn cmd_certify(p: &Problem, form: Option<FormChoice>, max_depth: Option<usize>, input: &Input) -> Result<Report> {
    let mut cert = certify_problem(p, form, max_depth)?;
    if input.stable {
        cert.stabilize();
    }
    let code = match cert.outcome {
        Outcome::Certified => 0,
        Outcome::Refuted => 1,
        Outcome::Indeterminate => 2,
    };
    let out = match input.format {
        OutputFormat::Json => cert.to_json() + "\n",
        OutputFormat::Text => certificate_text(&cert),
    };
    Ok(Report::ok(code, out))
}

fn certificate_text(c: &Certificate) -> String {
    let mut s = String::new();
    let kind = serde_json::to_value(c.kind).expect("kind serializes");
    let outcome = serde_json::to_value(c.outcome).expect("outcome serializes");
    let _ = writeln!(s, "{} {}", outcome.as_str().unwrap_or(""), kind.as_str().unwrap_or(""));
    if let Some(dirs) = &c.directions {
        let d: Vec<&str> = dirs
            .iter()
            .map(|d| match d {
                Some(crate::certify::Direction::E) => "e",
                Some(crate::certify::Direction::C) => "c",
                None => "-",
            })
            .collect();
        let _ = writeln!(s, "directions: {}", d.join(" "));
    }
    let _ = writeln!(s, "evidence: {} boxes", c.evidence.len());
    for w in &c.witness {
        let _ = writeln!(s, "witness: {} at {:?}, value {}", w.condition, w.point, w.value);
    }
    if let Some(i) = c.index {
        match c.index_check {
            Some(k) => {
                let _ = writeln!(s, "index: {i} (boundary winding: {k})");
            }
            None => {
                let _ = writeln!(s, "index: {i}");
            }
        }
    }
    let _ = writeln!(s, "boxes examined: {}, max depth: {}", c.stats.boxes, c.stats.depth);
    s
}

pub enum Localized {
    Rect(LocalizeReport),
    Shell(ShellReport),
}

pub fn localize_problem(p: &Problem, tol: Option<f64>, budget: Option<usize>) -> Result<Localized> {
    let tol = tol.or(p.settings.tol).unwrap_or(DEFAULT_TOL);
    let budget = budget.or(p.settings.budget).unwrap_or(DEFAULT_BUDGET);
    match &p.domain {
        DomainSpec::Rect(r) => Ok(Localized::Rect(localize_fixed_points(&p.map, r, tol, budget)?)),
        DomainSpec::ConeShell(s) => Ok(Localized::Shell(localize_in_shell(&p.map, s, tol, budget)?)),
        other => Err(Error::UnsupportedDomain(format!(
            "localization works on rect and coneshell domains, not {}",
            domain_kind(other)
        ))),
    }
}

fn status_name(s: EnclosureStatus) -> &'static str {
    match s {
        EnclosureStatus::Proven => "PROVEN",
        EnclosureStatus::Candidate => "CANDIDATE",
    }
}

fn domain_kind(d: &DomainSpec) -> &'static str {
    match d {
        DomainSpec::Rect(_) => "rect",
        DomainSpec::Cylinder(_) => "cylinder",
        DomainSpec::ConeShell(_) => "coneshell",
        DomainSpec::HoledBall(_) => "holedball",
    }
}

pub fn cmd_localize(p: &Problem, tol: Option<f64>, budget: Option<usize>, input: &Input) -> Result<Report> {
    let (exhausted, proven, out) = match localize_problem(p, tol, budget)? {
        Localized::Rect(r) => {
            let out = match input.format {
                OutputFormat::Json => r.to_json() + "\n",
                OutputFormat::Text => {
                    let mut s = String::new();
                    for e in &r.enclosures {
                        let _ = writeln!(s, "{} {}", status_name(e.status), e.region);
                    }
                    let _ = writeln!(
                        s,
                        "{} enclosures, {} boxes examined, discarded volume {:.6e} of {:.6e}{}",
                        r.enclosures.len(),
                        r.coverage.boxes_examined,
                        r.coverage.discarded_volume,
                        r.coverage.total_volume,
                        if r.budget_exhausted { ", budget exhausted" } else { "" }
                    );
                    s
                }
            };
            (r.budget_exhausted, r.proven().count(), out)
        }
        Localized::Shell(r) => {
            let out = match input.format {
                OutputFormat::Json => r.to_json() + "\n",
                OutputFormat::Text => {
                    let mut s = String::new();
                    for e in &r.enclosures {
                        let _ = writeln!(s, "{} level {}", status_name(e.status), e.level);
                    }
                    let _ = writeln!(
                        s,
                        "{} level bands, {} bands and {} pieces examined{}",
                        r.enclosures.len(),
                        r.bands_examined,
                        r.pieces_examined,
                        if r.budget_exhausted { ", budget exhausted" } else { "" }
                    );
                    s
                }
            };
            let proven = r.enclosures.iter().filter(|e| e.status == EnclosureStatus::Proven).count();
            (r.budget_exhausted, proven, out)
        }
    };
    let code = if exhausted {
        3
    } else if proven > 0 {
        0
    } else {
        1
    };
    Ok(Report::ok(code, out))
}

pub fn index_problem(p: &Problem, max_depth: Option<usize>) -> Result<DegreeResult> {
    let depth = max_depth.or(p.settings.max_depth).unwrap_or(DEFAULT_MAX_DEPTH);
    match &p.domain {
        DomainSpec::Rect(r) => match r.dim() {
            1 => degree_1d(&p.map, r),
            2 => winding_degree_2d(&p.map, r, depth),
            n => Err(Error::UnsupportedDimension(n)),
        },
        DomainSpec::HoledBall(h) => holed_ball_index(&p.map, h, depth),
        other => Err(Error::UnsupportedDomain(format!(
            "the index is computed on rect and holedball domains, not {}",
            domain_kind(other)
        ))),
    }
}

pub fn cmd_index(p: &Problem, max_depth: Option<usize>, input: &Input) -> Result<Report> {
    let d = index_problem(p, max_depth)?;
    let out = match input.format {
        OutputFormat::Json => json(&d),
        OutputFormat::Text => format!(
            "index {} ({}), {} boundary segments, depth {}\n",
            d.value,
            if d.verified { "verified" } else { "unverified" },
            d.segments,
            d.depth
        ),
    };
    Ok(Report::ok(if d.verified { 0 } else { 2 }, out))
}

pub fn trace_problem(
    p: &Problem,
    grid: Option<usize>,
    tol: Option<f64>,
    budget: Option<usize>,
    check_index: bool,
) -> Result<ContinuumWitness> {
    let DomainSpec::Rect(r) = &p.domain else {
        return Err(Error::UnsupportedDomain(format!(
            "tracing needs a rect domain, not {}",
            domain_kind(&p.domain)
        )));
    };
    let t_range = match p.settings.t_range {
        Some(t) => t,
        None => Interval::new(0.0, 1.0)?,
    };
    let mut w = trace_continuum(
        &p.map,
        t_range,
        r,
        grid.or(p.settings.grid).unwrap_or(DEFAULT_GRID),
        tol.or(p.settings.tol).unwrap_or(DEFAULT_TRACE_TOL),
        budget.or(p.settings.budget).unwrap_or(DEFAULT_BUDGET),
    )?;
    if check_index {
        w.start_index = Some(start_index(&p.map, t_range, r)?);
    }
    Ok(w)
}

pub fn cmd_trace(
    p: &Problem,
    grid: Option<usize>,
    tol: Option<f64>,
    budget: Option<usize>,
    check_index: bool,
    input: &Input,
) -> Result<Report> {
    let w = trace_problem(p, grid, tol, budget, check_index)?;
    let out = match input.format {
        OutputFormat::Json => w.to_json() + "\n",
        OutputFormat::Text => {
            let mut s = String::new();
            for link in &w.chain {
                let _ = writeln!(s, "cell {:>3} t {} x {}", link.cell, link.t, link.region);
            }
            let _ = writeln!(
                s,
                "{}: {} links over {} cells, reached t = {}, {} empty cells",
                if w.complete { "complete" } else { "incomplete" },
                w.chain.len(),
                w.cells,
                w.max_t_reached,
                w.empty_cells.len()
            );
            if let Some(i) = w.start_index {
                let _ = writeln!(s, "start index {i}");
            }
            s
        }
    };
    Ok(Report::ok(if w.complete { 0 } else { 1 }, out))
}
