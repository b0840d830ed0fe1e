//! Multidimensional space of events (MDSE): pseudo-bipartite directed graphs
//! over complete hypothesis groups and the events that depend on them, with
//! exact probability computation.
//!
//! The model has two vertex families. Hypotheses live in complete groups
//! (mutually exclusive, priors summing to 1) and never receive edges. Events
//! come in two kinds: *star* events depend only on hypotheses, *prime* events
//! depend on hypotheses and/or star events and form the sink layer. Every
//! edge carries a conditional probability of the target given the source.
//!
//! The crate is organized around that model:
//!
//! - [`graph`] — construction, freezing, structural validation, degree
//!   bounds, and the handshake diagnostic.
//! - [`inference`] — total probability, Bayes posteriors, the additive
//!   (OR-mixture) and multiplicative (AND-product) event formulas, joint
//!   probability, and MAP hypothesis selection.
//! - [`priors`] — prior estimation (explicit, frequentist, uniform) and
//!   Bayesian updating of group priors from an observed event.
//! - [`oracle`] — independent brute-force recomputation of every closed-form
//!   result, used to cross-check `inference`.
//! - [`document`] — the `.mdse` text format and canonical serialization.
//! - [`generator`] — deterministic seeded random graph generation.
//! - [`bench`] — wall-clock scaling measurements and log-log exponent fits.
//! - [`cli`] — the `mdse` command-line interface.
//!
//! # Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --example financial_risk      # build a graph, query an event
//! cargo run --example build_and_validate  # structural validation modes
//! cargo run --example posterior_update    # priors, posteriors, updating
//! cargo run --example extended_events     # OR-mixture vs AND-product
//! cargo run --example generate_roundtrip  # seeded generation + round-trip
//! cargo run --example oracle_check        # brute-force cross-checks
//! cargo run --example scaling_fit         # benchmark + exponent fit
//! ```
//!
//! ```
//! use mdse::graph::{EventKind, GroupRole, MdseGraph};
//! use mdse::inference::{self, CombinationMode, Normalization, ProbQuery};
//!
//! let mut builder = MdseGraph::new();
//! let hyps = builder
//!     .add_hypothesis_group(&[0.4, 0.25, 0.35], GroupRole::StarGroup)
//!     .unwrap();
//! let event = builder.add_event(EventKind::Star).unwrap();
//! builder.add_edge(hyps[0], event, 0.7).unwrap();
//! builder.add_edge(hyps[1], event, 0.6).unwrap();
//! builder.add_edge(hyps[2], event, 0.4).unwrap();
//! let graph = builder.freeze();
//!
//! let query = ProbQuery::new(event, CombinationMode::OrMixture, Normalization::Checked);
//! let result = inference::prob_event(&graph, &query).unwrap();
//! assert!((result.value - 0.57).abs() < 1e-12);
//! ```

pub mod bench;
pub mod cli;
pub mod document;
pub mod generator;
pub mod graph;
pub mod inference;
pub mod oracle;
pub mod priors;

/// Absolute tolerance for "these probabilities form a complete group" checks.
///
/// Far above accumulated f64 rounding for group sizes this crate handles,
/// far below the precision of any sensible input.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Absolute tolerance for algebraic identities between two computation
/// routes of the same quantity (recursive vs expanded, oracle vs inference).
pub const IDENTITY_TOLERANCE: f64 = 1e-12;
