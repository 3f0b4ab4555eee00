//! Command-line front end for the flatness and openness tests.
//!
//! Every subcommand reads a problem file (see `docs/problem-format.md`),
//! prints a human summary or a JSON report (`--json`), and encodes the
//! verdict in its exit status:
//!
//! * 0  — Flat / Open, or a utility subcommand that succeeded
//! * 10 — NotFlat / NotOpen
//! * 11 — ZeroDivisorFound / Inconclusive
//! * 12 — the requested chart (or every candidate chart) misses the origin
//! * 2  — unreadable input, syntax error, or ill-posed problem
//! * 1  — timeout or internal failure

use clap::{Parser, Subcommand, ValueEnum};
use flatcheck::blowup::ChartSearchOptions;
use flatcheck::flatness::{flat_test, FlatnessStatus, FlatnessVerdict};
use flatcheck::groebner::{FreeModuleElement, Submodule};
use flatcheck::input::{parse_poly, parse_problem, Problem};
use flatcheck::openness::{openness_verdict, OpennessStatus, OpennessVerdict};
use flatcheck::poly::{ModuleOrder, MonomialOrder, Polynomial, VarUniverse};
use flatcheck::Error;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::exit;
use std::sync::mpsc;
use std::sync::Arc;
use std::time::Duration;

#[derive(Parser)]
#[command(name = "flatcheck", version, about = "Flatness and openness tests at the origin")]
struct Cli {
    /// Print a JSON report on stdout (the one-line summary moves to stderr).
    #[arg(long, global = true)]
    json: bool,
    /// Abort with exit status 1 if the computation runs longer than this.
    #[arg(long, global = true, value_name = "SECONDS")]
    timeout: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the module is flat over the base at the origin.
    Flat(FlatArgs),
    /// Decide whether the map is open at the origin.
    Open(OpenArgs),
    /// Print a reduced standard basis of the module (or of the ideal).
    Gb(GbArgs),
    /// Divide the module by a polynomial: all elements it multiplies in.
    Colon(ByArgs),
    /// Divide the module by all powers of a polynomial.
    Saturate(ByArgs),
    /// Transform the ideal under a blow-up chart through the origin.
    StrictTransform(ChartArgs),
    /// Intersect the modules of two problem files over the same ring.
    Intersect(IntersectArgs),
}

#[derive(clap::Args)]
struct FlatArgs {
    file: PathBuf,
    /// Treat the base ring as an integral domain.
    #[arg(long)]
    assume_domain: bool,
    /// Treat the base equations as a true embedding of the base.
    #[arg(long)]
    assume_embedding: bool,
    /// Use only the chart of this base variable (1-based), without shears.
    #[arg(long, value_name = "N")]
    chart: Option<usize>,
    /// Number of randomized shears to try after the deterministic ones.
    #[arg(long, value_name = "K")]
    random_charts: Option<usize>,
}

#[derive(clap::Args)]
struct OpenArgs {
    file: PathBuf,
    /// Treat the source as pure-dimensional.
    #[arg(long)]
    pure_dimensional: bool,
    /// Treat the target as normal.
    #[arg(long)]
    normal_target: bool,
    /// Use only the chart of this target variable (1-based), without shears.
    #[arg(long, value_name = "N")]
    chart: Option<usize>,
    /// Number of randomized shears to try after the deterministic ones.
    #[arg(long, value_name = "K")]
    random_charts: Option<usize>,
}

#[derive(clap::Args)]
struct GbArgs {
    file: PathBuf,
    /// Monomial order for the basis.
    #[arg(long, value_enum, default_value_t = OrderChoice::Grevlex)]
    order: OrderChoice,
}

#[derive(clap::Args)]
struct ByArgs {
    file: PathBuf,
    /// The dividing polynomial, in the variables of the file's ring.
    #[arg(long, value_name = "POLY")]
    by: String,
}

#[derive(clap::Args)]
struct ChartArgs {
    file: PathBuf,
    /// Use only the chart of this base variable (1-based), without shears.
    #[arg(long, value_name = "N")]
    chart: Option<usize>,
    /// Number of randomized shears to try after the deterministic ones.
    #[arg(long, value_name = "K")]
    random_charts: Option<usize>,
}

#[derive(clap::Args)]
struct IntersectArgs {
    file_a: PathBuf,
    file_b: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderChoice {
    Lex,
    Grlex,
    Grevlex,
}

impl From<OrderChoice> for MonomialOrder {
    fn from(c: OrderChoice) -> Self {
        match c {
            OrderChoice::Lex => MonomialOrder::Lex,
            OrderChoice::Grlex => MonomialOrder::GrLex,
            OrderChoice::Grevlex => MonomialOrder::GrevLex,
        }
    }
}

/// Everything a subcommand reports, JSON-ready. Fields are omitted when
/// they do not apply to the subcommand that ran.
#[derive(Serialize)]
struct Report {
    command: String,
    files: Vec<String>,
    exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    multiplier: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    chart: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coordinate_change: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    saturation_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertical_found: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<String>>,
}

impl Report {
    fn bare(command: &str, files: Vec<String>) -> Self {
        Report {
            command: command.to_string(),
            files,
            exit_code: 0,
            verdict: None,
            certificate: None,
            witness: None,
            multiplier: None,
            chart: None,
            coordinate_change: None,
            saturation_steps: None,
            vertical_found: None,
            generators: None,
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let json = cli.json;
    let label = cli.command.label().to_string();
    let files = cli.command.files();
    let command = cli.command;
    let outcome = match cli.timeout {
        Some(secs) => {
            let (tx, rx) = mpsc::channel();
            std::thread::spawn(move || {
                let _ = tx.send(run(command));
            });
            match rx.recv_timeout(Duration::from_secs(secs)) {
                Ok(outcome) => outcome,
                Err(mpsc::RecvTimeoutError::Timeout) => {
                    eprintln!("flatcheck: timed out after {secs}s");
                    exit(1);
                }
                Err(mpsc::RecvTimeoutError::Disconnected) => {
                    eprintln!("flatcheck: the worker thread failed");
                    exit(1);
                }
            }
        }
        None => run(command),
    };
    match outcome {
        Ok(report) => emit(json, report),
        Err(err @ (Error::NoChartFound | Error::ImproperChart { .. })) => {
            let mut report = Report::bare(&label, files);
            report.exit_code = 12;
            report.verdict = Some("Improper".to_string());
            report.certificate = Some(err.to_string());
            emit(json, report)
        }
        Err(err) => {
            eprintln!("flatcheck: {err}");
            exit(2);
        }
    }
}

impl Command {
    fn label(&self) -> &'static str {
        match self {
            Command::Flat(_) => "flat",
            Command::Open(_) => "open",
            Command::Gb(_) => "gb",
            Command::Colon(_) => "colon",
            Command::Saturate(_) => "saturate",
            Command::StrictTransform(_) => "strict-transform",
            Command::Intersect(_) => "intersect",
        }
    }

    fn files(&self) -> Vec<String> {
        let show = |p: &Path| p.display().to_string();
        match self {
            Command::Flat(a) => vec![show(&a.file)],
            Command::Open(a) => vec![show(&a.file)],
            Command::Gb(a) => vec![show(&a.file)],
            Command::Colon(a) | Command::Saturate(a) => vec![show(&a.file)],
            Command::StrictTransform(a) => vec![show(&a.file)],
            Command::Intersect(a) => vec![show(&a.file_a), show(&a.file_b)],
        }
    }
}

fn run(command: Command) -> Result<Report, Error> {
    let label = command.label().to_string();
    let files = command.files();
    match command {
        Command::Flat(args) => {
            let problem = load(&args.file)?;
            let presentation = problem.flatness_presentation()?;
            let mut assumptions = problem.flags.flatness_assumptions();
            assumptions.domain |= args.assume_domain;
            assumptions.embedding |= args.assume_embedding;
            let options = chart_options(&problem, args.chart, args.random_charts)?;
            let verdict = flat_test(&presentation, assumptions, &options)?;
            Ok(flat_report(label, files, &verdict))
        }
        Command::Open(args) => {
            let problem = load(&args.file)?;
            let map = problem.map_presentation()?;
            let mut options = problem.flags.openness_options();
            options.pure_dimensional_source |= args.pure_dimensional;
            options.normal_target |= args.normal_target;
            options.chart = chart_options(&problem, args.chart, args.random_charts)?;
            let verdict = openness_verdict(&map, &options)?;
            Ok(open_report(label, files, &verdict))
        }
        Command::Gb(args) => {
            let problem = load(&args.file)?;
            let module = effective_module(&problem)?;
            let order = ModuleOrder::with_mono(args.order.into());
            let basis = module.gb(&order);
            let mut report = Report::bare(&label, files);
            report.generators = Some(element_strings(basis.elements()));
            Ok(report)
        }
        Command::Colon(args) => {
            let problem = load(&args.file)?;
            let module = effective_module(&problem)?;
            let divisor = parse_poly(&args.by, &problem.universe)?;
            let quotient = module.colon(&divisor)?;
            let mut report = Report::bare(&label, files);
            report.generators = Some(element_strings(quotient.gens()));
            Ok(report)
        }
        Command::Saturate(args) => {
            let problem = load(&args.file)?;
            let module = effective_module(&problem)?;
            let divisor = parse_poly(&args.by, &problem.universe)?;
            let (saturated, steps) = module.saturate(&divisor)?;
            let mut report = Report::bare(&label, files);
            report.generators = Some(element_strings(saturated.gens()));
            report.saturation_steps = Some(steps);
            Ok(report)
        }
        Command::StrictTransform(args) => {
            let problem = load(&args.file)?;
            if problem.base_gens.is_empty() {
                return Err(Error::Input(
                    "strict-transform needs a nonempty ideal statement".into(),
                ));
            }
            let ideal = Submodule::ideal(&problem.universe, problem.base_gens.clone())?;
            let options = chart_options(&problem, args.chart, args.random_charts)?;
            let selected = flatcheck::blowup::select_chart(&ideal, &options)?;
            let mut report = Report::bare(&label, files);
            report.chart = Some(selected.chart.position());
            report.coordinate_change = selected
                .change
                .as_ref()
                .map(|c| c.constants().iter().map(|c| c.to_string()).collect());
            report.saturation_steps = Some(selected.saturation_steps);
            report.generators = Some(element_strings(selected.transform.gens()));
            Ok(report)
        }
        Command::Intersect(args) => {
            let a = load(&args.file_a)?;
            let b = load(&args.file_b)?;
            let ma = effective_module(&a)?;
            let mb = effective_module(&b)?;
            if !a.universe.same_as(&b.universe) {
                return Err(Error::Input(
                    "the two files declare different rings".into(),
                ));
            }
            if ma.rank() != mb.rank() {
                return Err(Error::RankMismatch { expected: ma.rank(), found: mb.rank() });
            }
            // Rebuild the second module over the first file's universe value
            // so the result is a single-universe object.
            let gens_b = mb
                .gens()
                .iter()
                .map(|g| g.map_components(|p| transplant(p, &a.universe)))
                .collect();
            let mb = Submodule::new(&a.universe, mb.rank(), gens_b)?;
            let both = ma.intersect(&mb)?;
            let mut report = Report::bare(&label, files);
            report.generators = Some(element_strings(both.gens()));
            Ok(report)
        }
    }
}

fn load(path: &Path) -> Result<Problem, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_problem(&text)
}

/// The module a utility subcommand operates on: the `module` statement if
/// it has generators, otherwise the `ideal` statement as a rank-one module.
fn effective_module(problem: &Problem) -> Result<Submodule, Error> {
    if !problem.module_gens.is_empty() {
        Submodule::new(&problem.universe, problem.rank, problem.module_gens.clone())
    } else {
        Submodule::ideal(&problem.universe, problem.base_gens.clone())
    }
}

fn chart_options(
    problem: &Problem,
    chart: Option<usize>,
    random: Option<usize>,
) -> Result<ChartSearchOptions, Error> {
    let mut options = ChartSearchOptions::default();
    if let Some(k) = random {
        options.random_attempts = k;
    }
    if let Some(n) = chart {
        let base = problem.universe.base_indices();
        if n == 0 || n > base.len() {
            return Err(Error::Input(format!(
                "--chart {n} is out of range; the ring has {} base variables",
                base.len()
            )));
        }
        options.forced_chart = Some(base[n - 1]);
    }
    Ok(options)
}

fn transplant(p: &Polynomial, universe: &Arc<VarUniverse>) -> Polynomial {
    let mut out = Polynomial::zero(universe);
    for (mono, coeff) in p.terms() {
        out = &out + &Polynomial::monomial(universe, mono.clone(), coeff.clone());
    }
    out
}

fn element_strings(elements: &[FreeModuleElement]) -> Vec<String> {
    elements
        .iter()
        .map(|e| {
            if e.rank() == 1 {
                e.component(0).to_string()
            } else {
                let parts: Vec<String> =
                    e.components().iter().map(|p| p.to_string()).collect();
                format!("[{}]", parts.join(", "))
            }
        })
        .collect()
}

fn flat_report(command: String, files: Vec<String>, verdict: &FlatnessVerdict) -> Report {
    let (name, code) = match verdict.status {
        FlatnessStatus::Flat => ("Flat", 0),
        FlatnessStatus::NotFlat => ("NotFlat", 10),
        FlatnessStatus::ZeroDivisorFound => ("ZeroDivisorFound", 11),
    };
    let mut report = Report::bare(&command, files);
    report.exit_code = code;
    report.verdict = Some(name.to_string());
    report.certificate = Some(verdict.certificate.clone());
    report.witness = verdict.witness.as_ref().map(|w| w.to_string());
    report.multiplier = verdict.multiplier.as_ref().map(|m| m.to_string());
    if let Some(selected) = &verdict.chart {
        report.chart = Some(selected.chart.position());
        report.coordinate_change = selected
            .change
            .as_ref()
            .map(|c| c.constants().iter().map(|c| c.to_string()).collect());
        report.saturation_steps = Some(selected.saturation_steps);
    }
    report
}

fn open_report(command: String, files: Vec<String>, verdict: &OpennessVerdict) -> Report {
    let (name, code) = match verdict.status {
        OpennessStatus::Open => ("Open", 0),
        OpennessStatus::NotOpen => ("NotOpen", 10),
        OpennessStatus::Inconclusive => ("Inconclusive", 11),
    };
    let mut report = Report::bare(&command, files);
    report.exit_code = code;
    report.verdict = Some(name.to_string());
    report.certificate = Some(verdict.certificate.clone());
    report.witness = verdict.witness.as_ref().map(|w| w.to_string());
    report.vertical_found = Some(verdict.vertical_found);
    report.saturation_steps = Some(verdict.saturation_steps);
    if let Some(selected) = &verdict.chart {
        report.chart = Some(selected.chart.position());
        report.coordinate_change = selected
            .change
            .as_ref()
            .map(|c| c.constants().iter().map(|c| c.to_string()).collect());
    }
    report
}

fn emit(json: bool, report: Report) -> ! {
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        eprintln!("{}", summary_line(&report));
    } else {
        print!("{}", human_text(&report));
    }
    exit(report.exit_code)
}

fn summary_line(report: &Report) -> String {
    match (&report.verdict, &report.generators) {
        (Some(v), _) => format!("verdict: {v}"),
        (None, Some(gens)) => format!("{}: {} generators", report.command, gens.len()),
        (None, None) => report.command.clone(),
    }
}

fn human_text(report: &Report) -> String {
    let mut out = String::new();
    if let Some(v) = &report.verdict {
        out.push_str(&format!("verdict: {v}\n"));
        if let Some(c) = &report.certificate {
            out.push_str(&format!("certificate: {c}\n"));
        }
        if let Some(w) = &report.witness {
            out.push_str(&format!("witness: {w}\n"));
        }
        if let Some(m) = &report.multiplier {
            out.push_str(&format!("multiplier: {m}\n"));
        }
        if let Some(v) = report.vertical_found {
            out.push_str(&format!("vertical component found: {v}\n"));
        }
    }
    // Chart data as comment lines so the output stays pasteable.
    if let Some(n) = report.chart {
        out.push_str(&format!("# chart: {n}\n"));
    }
    if let Some(c) = &report.coordinate_change {
        out.push_str(&format!("# coordinate change: [{}]\n", c.join(", ")));
    }
    if let Some(k) = report.saturation_steps {
        out.push_str(&format!("# saturation steps: {k}\n"));
    }
    if let Some(gens) = &report.generators {
        if gens.is_empty() {
            out.push_str("# no generators\n");
        }
        for g in gens {
            out.push_str(g);
            out.push('\n');
        }
    }
    out
}
