//! Wall-clock scaling measurements for the graph queries.
//!
//! Each query touches every edge at most once per target (the star values
//! are memoized within a query), so evaluation time against edge count
//! should fit a near-linear exponent on a log-log plot. The harness
//! measures that directly: generate graphs of increasing size from a
//! deterministic seed, run one operation over all applicable targets,
//! record the median of repeated passes, and fit the exponent by least
//! squares.
//!
//! Runs are strictly sequential; medians with a discarded warmup pass keep
//! allocator and cache noise out of the fit.

use std::fmt;
use std::hint::black_box;
use std::time::Instant;

use thiserror::Error;

use crate::generator::{GeneratorConfig, GeneratorError};
use crate::graph::{EventKind, GroupId, MdseGraph};
use crate::inference::{self, CombinationMode, Normalization, ProbQuery};

/// Which query the harness drives over all applicable targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchOp {
    /// OR-mixture on every event.
    FullProbabilityAllEvents,
    /// Group posterior for every (group, event) pair with positive evidence.
    Posterior,
    /// OR-mixture on every prime event.
    Mixture,
}

impl BenchOp {
    pub fn as_str(self) -> &'static str {
        match self {
            BenchOp::FullProbabilityAllEvents => "full-probability-all-events",
            BenchOp::Posterior => "posterior",
            BenchOp::Mixture => "mixture",
        }
    }

    pub fn parse(tag: &str) -> Option<BenchOp> {
        match tag {
            "full-probability-all-events" => Some(BenchOp::FullProbabilityAllEvents),
            "posterior" => Some(BenchOp::Posterior),
            "mixture" => Some(BenchOp::Mixture),
            _ => None,
        }
    }
}

impl fmt::Display for BenchOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One measured size point: actual generated shape and the median wall time
/// of `repetitions` full passes.
#[derive(Debug, Clone, Copy)]
pub struct BenchPoint {
    pub n: usize,
    pub m: usize,
    pub e: usize,
    pub median_ns: u128,
    pub repetitions: usize,
    pub op: BenchOp,
}

/// Axis for the size variable of a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeAxis {
    Edges,
    NTimesM,
}

impl SizeAxis {
    fn of(self, point: &BenchPoint) -> f64 {
        match self {
            SizeAxis::Edges => point.e as f64,
            SizeAxis::NTimesM => (point.n * point.m) as f64,
        }
    }
}

/// Least-squares slope of log time against log size.
#[derive(Debug, Clone, Copy)]
pub struct ScalingFit {
    pub exponent: f64,
    pub r_squared: f64,
    pub axis: SizeAxis,
}

#[derive(Debug, Error, PartialEq)]
pub enum BenchError {
    #[error("a fit needs at least 5 points, got {0}")]
    TooFewPoints(usize),
    #[error("sizes must be strictly increasing along the fit axis")]
    NonMonotoneSizes,
}

/// Passes per point; the median of these is recorded. One extra warmup pass
/// runs first and is discarded.
pub const REPETITIONS: usize = 9;

/// Maps a requested `(n, m)` size onto a generator config. The star layer
/// is kept small and bounded so edge count, not recursion depth, grows
/// along a ladder; the hypothesis count is spread over many medium groups
/// so the drawn total concentrates near `m`.
fn config_for(n: usize, m: usize, density: f64, seed: u64) -> GeneratorConfig {
    let n_star = (n / 8).clamp(1, 16).min(n.saturating_sub(1).max(1));
    GeneratorConfig {
        seed,
        n_star_events: n_star,
        n_prime_events: n - n_star,
        groups_star: 1,
        groups_prime: (m / 6).max(1),
        max_group_size: 11,
        edge_density: density,
        strict: false,
    }
}

fn run_pass(graph: &MdseGraph, op: BenchOp) -> f64 {
    let mut acc = 0.0;
    match op {
        BenchOp::FullProbabilityAllEvents => {
            for event in graph.events() {
                let query =
                    ProbQuery::new(event.id, CombinationMode::OrMixture, Normalization::Literal);
                acc += inference::prob_event(graph, &query)
                    .expect("generated graphs are relaxed-valid")
                    .value;
            }
        }
        BenchOp::Mixture => {
            for event in graph.events() {
                if event.kind != EventKind::Prime {
                    continue;
                }
                let query =
                    ProbQuery::new(event.id, CombinationMode::OrMixture, Normalization::Literal);
                acc += inference::prob_event(graph, &query)
                    .expect("generated graphs are relaxed-valid")
                    .value;
            }
        }
        BenchOp::Posterior => {
            for group_idx in 0..graph.groups().len() {
                for event in graph.events() {
                    match inference::group_posterior(graph, GroupId::new(group_idx), event.id) {
                        Ok(post) => acc += post.entries[0].1,
                        Err(_) => continue, // no causal route; zero evidence
                    }
                }
            }
        }
    }
    acc
}

/// Generates one graph per size (deterministically from `seed` plus the size
/// index), runs `op` over all applicable targets, and records the median
/// wall time. Output order matches input order.
pub fn run_scaling_bench(
    sizes: &[(usize, usize, f64)],
    seed: u64,
    op: BenchOp,
) -> Result<Vec<BenchPoint>, GeneratorError> {
    let mut points = Vec::with_capacity(sizes.len());
    for (idx, &(n, m, density)) in sizes.iter().enumerate() {
        let config = config_for(n, m, density, seed.wrapping_add(idx as u64));
        let graph = crate::generator::generate_graph(&config)?;
        black_box(run_pass(&graph, op)); // warmup, discarded
        let mut times: Vec<u128> = (0..REPETITIONS)
            .map(|_| {
                let start = Instant::now();
                black_box(run_pass(&graph, op));
                start.elapsed().as_nanos().max(1)
            })
            .collect();
        times.sort_unstable();
        let shape = graph.shape();
        points.push(BenchPoint {
            n: shape.n,
            m: shape.m,
            e: shape.e,
            median_ns: times[REPETITIONS / 2],
            repetitions: REPETITIONS,
            op,
        });
    }
    Ok(points)
}

/// Fits `log(median_ns) = exponent * log(size) + c` by least squares and
/// reports the exponent with its r².
pub fn fit_scaling_exponent(
    points: &[BenchPoint],
    axis: SizeAxis,
) -> Result<ScalingFit, BenchError> {
    if points.len() < 5 {
        return Err(BenchError::TooFewPoints(points.len()));
    }
    let sizes: Vec<f64> = points.iter().map(|p| axis.of(p)).collect();
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BenchError::NonMonotoneSizes);
    }
    let xs: Vec<f64> = sizes.iter().map(|s| s.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| (p.median_ns as f64).ln()).collect();
    let count = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / count;
    let mean_y = ys.iter().sum::<f64>() / count;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mean_x) * (y - mean_y);
        sxx += (x - mean_x) * (x - mean_x);
        syy += (y - mean_y) * (y - mean_y);
    }
    let exponent = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(ScalingFit {
        exponent,
        r_squared,
        axis,
    })
}

/// CSV rendering with the fixed column set `n,m,e,median_ns,repetitions`.
pub fn to_csv(points: &[BenchPoint]) -> String {
    let mut out = String::from("n,m,e,median_ns,repetitions\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            p.n, p.m, p.e, p.median_ns, p.repetitions
        ));
    }
    out
}
