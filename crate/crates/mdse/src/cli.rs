//! The `mdse` command-line interface.
//!
//! Subcommands: `validate`, `infer`, `posterior`, `update`, `generate`,
//! `oracle-check`, `bench`. Exit codes: 0 success, 1 usage or I/O error,
//! 2 validation failure (including structural or model errors in a
//! document), 3 oracle disagreement, 4 numeric error (zero evidence or an
//! out-of-range additive value in checked mode).
//!
//! All probability output uses 9 fixed decimal places with `.` as the
//! decimal separator, independent of locale. Errors go to standard error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{self, BenchOp, SizeAxis};
use crate::document::{self, DocumentError};
use crate::generator::{self, GeneratorConfig, GeneratorError};
use crate::graph::{GroupId, MdseGraph, NodeId, ValidationMode};
use crate::inference::{self, CombinationMode, InferenceError, Normalization, ProbQuery};
use crate::oracle::{self, OracleError};
use crate::priors;
use crate::IDENTITY_TOLERANCE;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Parser)]
#[command(
    name = "mdse",
    version,
    about = "Pseudo-bipartite event/hypothesis graphs: validation, inference, generation, benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph file against the structural contract.
    Validate {
        file: PathBuf,
        /// Also enforce the definitional minimum sizes and degree intervals.
        #[arg(long)]
        strict: bool,
    },
    /// Compute an event probability.
    Infer {
        file: PathBuf,
        /// Target event vertex id.
        #[arg(long)]
        event: usize,
        /// Parent-term combination rule.
        #[arg(long, value_enum, default_value_t = ModeArg::Or)]
        mode: ModeArg,
        /// Fail (exit 4) when the additive value exceeds 1.
        #[arg(long)]
        checked: bool,
    },
    /// Posterior of one group's hypotheses given an observed event.
    Posterior {
        file: PathBuf,
        #[arg(long)]
        group: usize,
        #[arg(long)]
        event: usize,
    },
    /// Replace a group's priors with their posterior and write the graph.
    Update {
        file: PathBuf,
        #[arg(long)]
        group: usize,
        #[arg(long)]
        event: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a random graph, fully determined by the seed.
    Generate(GenerateArgs),
    /// Cross-check inference against the brute-force oracle.
    #[command(name = "oracle-check")]
    OracleCheck {
        file: PathBuf,
        /// Also check group posteriors for every (group, event) pair.
        #[arg(long)]
        all: bool,
    },
    /// Measure query scaling over generated graphs.
    Bench {
        /// Size ladder: comma-separated `NxM@DENSITY` items,
        /// e.g. `200x100@0.5,400x200@0.5`. Density defaults to 0.5.
        #[arg(long)]
        sizes: String,
        /// Operation to drive over all applicable targets.
        #[arg(long, value_enum, default_value_t = OpArg::Mixture)]
        op: OpArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    star_events: usize,
    #[arg(long, default_value_t = 2)]
    prime_events: usize,
    #[arg(long, default_value_t = 1)]
    star_groups: usize,
    #[arg(long, default_value_t = 1)]
    prime_groups: usize,
    #[arg(long, default_value_t = 3)]
    max_group_size: usize,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    /// Generate only strict-valid graphs.
    #[arg(long)]
    strict: bool,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Or,
    And,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    FullProbabilityAllEvents,
    Posterior,
    Mixture,
}

impl From<OpArg> for BenchOp {
    fn from(op: OpArg) -> Self {
        match op {
            OpArg::FullProbabilityAllEvents => BenchOp::FullProbabilityAllEvents,
            OpArg::Posterior => BenchOp::Posterior,
            OpArg::Mixture => BenchOp::Mixture,
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::new(EXIT_USAGE, err.to_string())
    }
}

impl From<DocumentError> for Failure {
    fn from(err: DocumentError) -> Self {
        let code = match err {
            DocumentError::Syntax(_) | DocumentError::Schema(_) => EXIT_USAGE,
            DocumentError::Build { .. } => EXIT_VALIDATION,
        };
        Failure::new(code, err.to_string())
    }
}

impl From<InferenceError> for Failure {
    fn from(err: InferenceError) -> Self {
        let code = match err {
            InferenceError::ZeroEvidence | InferenceError::ValueExceedsOne { .. } => EXIT_NUMERIC,
            InferenceError::NotValid | InferenceError::NotFrozen => EXIT_VALIDATION,
            _ => EXIT_USAGE,
        };
        Failure::new(code, err.to_string())
    }
}

impl From<GeneratorError> for Failure {
    fn from(err: GeneratorError) -> Self {
        Failure::new(EXIT_USAGE, err.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(err: OracleError) -> Self {
        match err {
            OracleError::Inference(inner) => inner.into(),
            OracleError::NotValid => Failure::new(EXIT_VALIDATION, err.to_string()),
            other => Failure::new(EXIT_USAGE, other.to_string()),
        }
    }
}

/// Runs the CLI against explicit argument and output streams; returns the
/// exit code. The first argument is the program name, as in `std::env::args`.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(err) => {
            let rendered = err.render().to_string();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message);
            failure.code
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Validate { file, strict } => cmd_validate(&file, strict, stdout),
        Command::Infer {
            file,
            event,
            mode,
            checked,
        } => cmd_infer(&file, event, mode, checked, stdout),
        Command::Posterior { file, group, event } => cmd_posterior(&file, group, event, stdout),
        Command::Update {
            file,
            group,
            event,
            out,
        } => cmd_update(&file, group, event, &out, stdout),
        Command::Generate(args) => cmd_generate(&args, stdout),
        Command::OracleCheck { file, all } => cmd_oracle_check(&file, all, stdout),
        Command::Bench {
            sizes,
            op,
            seed,
            csv,
        } => cmd_bench(&sizes, op.into(), seed, csv.as_deref(), stdout),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<MdseGraph, Failure> {
    Ok(document::parse_graph(&read_file(path)?)?)
}

fn cmd_validate(file: &Path, strict: bool, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let doc = document::parse_document(&read_file(file)?)?;
    let mode = if strict {
        ValidationMode::Strict
    } else {
        ValidationMode::Relaxed
    };
    // The raw route lets the validator report every structural problem
    // instead of the builder stopping at the first.
    let graph = document::raw_graph(&doc);
    let report = graph.validate(mode).expect("raw graphs are frozen");
    write!(stdout, "{report}")?;
    if !report.passed {
        return Ok(EXIT_VALIDATION);
    }
    // Structure is clean; surface model-value problems (priors, weights).
    if let Err(err) = document::build_graph(&doc) {
        writeln!(stdout, "FAIL (model): {err}")?;
        return Ok(EXIT_VALIDATION);
    }
    Ok(EXIT_OK)
}

fn cmd_infer(
    file: &Path,
    event: usize,
    mode: ModeArg,
    checked: bool,
    stdout: &mut dyn Write,
) -> Result<i32, Failure> {
    let graph = load_graph(file)?;
    let query = ProbQuery::new(
        NodeId::new(event),
        match mode {
            ModeArg::Or => CombinationMode::OrMixture,
            ModeArg::And => CombinationMode::AndProduct,
        },
        if checked {
            Normalization::Checked
        } else {
            Normalization::Literal
        },
    );
    let result = inference::prob_event(&graph, &query)?;
    writeln!(stdout, "{:.9}", result.value)?;
    writeln!(stdout, "formula: {}", result.formula)?;
    for (src, contribution) in &result.terms {
        let class = if graph.is_hypothesis(*src) {
            "hypothesis"
        } else {
            "event"
        };
        writeln!(stdout, "  term {class} {src}: {contribution:.9}")?;
    }
    if !result.in_range {
        writeln!(
            stdout,
            "warning: value exceeds 1; the additive formula is not normalized"
        )?;
    }
    Ok(EXIT_OK)
}

fn cmd_posterior(
    file: &Path,
    group: usize,
    event: usize,
    stdout: &mut dyn Write,
) -> Result<i32, Failure> {
    let graph = load_graph(file)?;
    let post = inference::group_posterior(&graph, GroupId::new(group), NodeId::new(event))?;
    writeln!(stdout, "posterior of group {} given event {event}:", group)?;
    for (id, p) in &post.entries {
        writeln!(stdout, "  hypothesis {id}: {p:.9}")?;
    }
    Ok(EXIT_OK)
}

fn cmd_update(
    file: &Path,
    group: usize,
    event: usize,
    out: &Path,
    stdout: &mut dyn Write,
) -> Result<i32, Failure> {
    let graph = load_graph(file)?;
    let updated = priors::update_group(&graph, GroupId::new(group), NodeId::new(event))?;
    std::fs::write(out, document::serialize_graph(&updated))
        .map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", out.display())))?;
    writeln!(stdout, "updated priors for group {group}:")?;
    for &(id, p) in &updated.group(GroupId::new(group)).expect("checked above").members {
        writeln!(stdout, "  hypothesis {id}: {p:.9}")?;
    }
    Ok(EXIT_OK)
}

fn cmd_generate(args: &GenerateArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let config = GeneratorConfig {
        seed: args.seed,
        n_star_events: args.star_events,
        n_prime_events: args.prime_events,
        groups_star: args.star_groups,
        groups_prime: args.prime_groups,
        max_group_size: args.max_group_size,
        edge_density: args.density,
        strict: args.strict,
    };
    let graph = generator::generate_graph(&config)?;
    let text = document::serialize_graph(&graph);
    match &args.out {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())))?;
            let shape = graph.shape();
            writeln!(
                stdout,
                "wrote graph (n={}, m={}, e={}) to {}",
                shape.n,
                shape.m,
                shape.e,
                path.display()
            )?;
        }
        None => write!(stdout, "{text}")?,
    }
    Ok(EXIT_OK)
}

fn cmd_oracle_check(file: &Path, all: bool, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let graph = load_graph(file)?;
    let mut checks = 0usize;
    let mut max_delta: f64 = 0.0;

    for event in graph.events() {
        if event.kind != crate::graph::EventKind::Prime {
            continue;
        }
        let check = oracle::check_mixture_expansion(&graph, event.id)?;
        checks += 1;
        max_delta = max_delta.max(check.delta);
    }
    writeln!(stdout, "mixture checks: {checks}, max delta {max_delta:.3e}")?;

    if all {
        let mut posterior_checks = 0usize;
        let mut posterior_delta: f64 = 0.0;
        for group in graph.groups() {
            let priors: Vec<f64> = group.members.iter().map(|&(_, p)| p).collect();
            for event in graph.events() {
                let likelihoods: Vec<f64> = group
                    .members
                    .iter()
                    .map(|&(id, _)| graph.weight(id, event.id).unwrap_or(0.0))
                    .collect();
                let direct = match inference::group_posterior(&graph, group.group_id, event.id) {
                    Ok(post) => post,
                    Err(InferenceError::ZeroEvidence) => continue,
                    Err(err) => return Err(err.into()),
                };
                let enumerated = oracle::enumerate_posterior(&priors, &likelihoods)?;
                posterior_checks += 1;
                for (&(_, a), b) in direct.entries.iter().zip(&enumerated) {
                    posterior_delta = posterior_delta.max((a - b).abs());
                }
            }
        }
        writeln!(
            stdout,
            "posterior checks: {posterior_checks}, max delta {posterior_delta:.3e}"
        )?;
        max_delta = max_delta.max(posterior_delta);
    }

    if max_delta > IDENTITY_TOLERANCE {
        writeln!(stdout, "DISAGREEMENT: max delta {max_delta:.3e} exceeds {IDENTITY_TOLERANCE:.0e}")?;
        return Ok(EXIT_ORACLE);
    }
    writeln!(stdout, "oracle agreement within {IDENTITY_TOLERANCE:.0e}")?;
    Ok(EXIT_OK)
}

fn parse_sizes(spec: &str) -> Result<Vec<(usize, usize, f64)>, Failure> {
    let mut out = Vec::new();
    for item in spec.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (dims, density) = match item.split_once('@') {
            Some((dims, d)) => (
                dims,
                d.parse::<f64>().map_err(|_| {
                    Failure::new(EXIT_USAGE, format!("bad density in size item '{item}'"))
                })?,
            ),
            None => (item, 0.5),
        };
        let (n, m) = dims.split_once('x').ok_or_else(|| {
            Failure::new(
                EXIT_USAGE,
                format!("bad size item '{item}', expected NxM or NxM@D"),
            )
        })?;
        let n = n.parse::<usize>().map_err(|_| {
            Failure::new(EXIT_USAGE, format!("bad event count in size item '{item}'"))
        })?;
        let m = m.parse::<usize>().map_err(|_| {
            Failure::new(
                EXIT_USAGE,
                format!("bad hypothesis count in size item '{item}'"),
            )
        })?;
        out.push((n, m, density));
    }
    if out.is_empty() {
        return Err(Failure::new(EXIT_USAGE, "empty --sizes specification"));
    }
    Ok(out)
}

fn cmd_bench(
    sizes: &str,
    op: BenchOp,
    seed: u64,
    csv: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<i32, Failure> {
    let sizes = parse_sizes(sizes)?;
    let points = bench::run_scaling_bench(&sizes, seed, op)?;
    let csv_text = bench::to_csv(&points);
    match csv {
        Some(path) => {
            std::fs::write(path, &csv_text)
                .map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())))?;
            writeln!(stdout, "wrote {} points to {}", points.len(), path.display())?;
            if points.len() >= 5 {
                if let Ok(fit) = bench::fit_scaling_exponent(&points, SizeAxis::Edges) {
                    let mut line = String::new();
                    let _ = write!(
                        line,
                        "fitted exponent vs edges: {:.3} (r2 {:.3})",
                        fit.exponent, fit.r_squared
                    );
                    writeln!(stdout, "{line}")?;
                }
            }
        }
        None => write!(stdout, "{csv_text}")?,
    }
    Ok(EXIT_OK)
}
