//! Exact probability computation on lists and on frozen graphs.
//!
//! List-level operations implement the classical machinery for one complete
//! group: total probability, the Bayes posterior, the incompatible-events
//! product, joint probability, and MAP selection. Graph-level operations
//! extend the event probability across the pseudo-bipartite structure: a
//! star event is the total probability over its hypothesis parents, and a
//! prime event combines hypothesis-parent terms with star-parent terms
//! either additively (OR-mixture) or multiplicatively (AND-product).
//!
//! The OR-mixture value is computed literally and can exceed 1; the model
//! supplies no normalization for it. [`Normalization::Literal`] reports the
//! raw value with an `in_range` flag, [`Normalization::Checked`] turns a
//! breach into [`InferenceError::ValueExceedsOne`].
//!
//! Determinism: all sums and products run in a fixed order — index order for
//! lists, hypothesis parents then event parents (ascending id within each
//! block) for graphs — so identical inputs produce bitwise-identical
//! outputs.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::graph::{EventKind, GroupId, MdseGraph, NodeId};
use crate::NORMALIZATION_TOLERANCE;

#[derive(Debug, Error, PartialEq)]
pub enum InferenceError {
    #[error("lists have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("priors sum to {sum}, expected 1 within {NORMALIZATION_TOLERANCE}")]
    NotNormalized { sum: f64 },
    #[error("probability {0} outside [0, 1]")]
    OutOfRange(f64),
    #[error("evidence probability is 0; the conditioning event is impossible under the model")]
    ZeroEvidence,
    #[error("graph is not frozen")]
    NotFrozen,
    #[error("graph fails relaxed validation")]
    NotValid,
    #[error("unknown vertex id {0}")]
    UnknownId(NodeId),
    #[error("unknown group id {0}")]
    UnknownGroup(GroupId),
    #[error("vertex {0} is not an event")]
    TargetNotEvent(NodeId),
    #[error("event {0} is not a prime event")]
    TargetNotPrime(NodeId),
    #[error("computed value {value} exceeds 1; the additive event formula is not normalized")]
    ValueExceedsOne { value: f64 },
}

/// Which combination rule a graph query applies to parent terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombinationMode {
    /// Additive: hypothesis-parent terms plus star-parent terms.
    OrMixture,
    /// Multiplicative: the same terms, multiplied.
    AndProduct,
}

/// What to do when the additive formula produces a value above 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Return the raw value; `in_range` records a breach.
    Literal,
    /// Fail with [`InferenceError::ValueExceedsOne`].
    Checked,
}

/// A probability query against a frozen graph.
#[derive(Debug, Clone, Copy)]
pub struct ProbQuery {
    pub target: NodeId,
    pub mode: CombinationMode,
    pub normalization: Normalization,
}

impl ProbQuery {
    pub fn new(target: NodeId, mode: CombinationMode, normalization: Normalization) -> Self {
        Self {
            target,
            mode,
            normalization,
        }
    }
}

/// Which formula produced a [`QueryResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaTag {
    /// Total probability over hypothesis parents (star events).
    FullProbability,
    /// Additive hypothesis + star-parent combination (prime events).
    OrMixture,
    /// The same mixture with every star-parent probability expanded inline.
    OrMixtureExpanded,
    /// Multiplicative parent-term combination.
    AndProduct,
}

impl FormulaTag {
    pub fn as_str(self) -> &'static str {
        match self {
            FormulaTag::FullProbability => "full-probability",
            FormulaTag::OrMixture => "or-mixture",
            FormulaTag::OrMixtureExpanded => "or-mixture-expanded",
            FormulaTag::AndProduct => "and-product",
        }
    }
}

impl fmt::Display for FormulaTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A probability value with provenance: the formula applied and the
/// per-parent contributions, in evaluation order. For the additive formulas
/// the value is the sum of the terms; for the product formula it is their
/// product (both within 1e-12). `in_range` records whether the value is a
/// probability (`<= 1 + 1e-9`).
#[derive(Debug, Clone)]
pub struct QueryResult {
    pub value: f64,
    pub formula: FormulaTag,
    pub terms: Vec<(NodeId, f64)>,
    pub in_range: bool,
}

/// Posterior probabilities of one group's hypotheses given an observed
/// event. Entries sum to 1 whenever the evidence probability is positive.
#[derive(Debug, Clone)]
pub struct PosteriorVector {
    pub group_id: GroupId,
    pub entries: Vec<(NodeId, f64)>,
}

const IN_RANGE_TOLERANCE: f64 = 1e-9;

fn check_lists(priors: &[f64], likelihoods: &[f64]) -> Result<(), InferenceError> {
    if priors.len() != likelihoods.len() {
        return Err(InferenceError::LengthMismatch {
            left: priors.len(),
            right: likelihoods.len(),
        });
    }
    for &p in priors.iter().chain(likelihoods) {
        if !(0.0..=1.0).contains(&p) {
            return Err(InferenceError::OutOfRange(p));
        }
    }
    let sum: f64 = priors.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(InferenceError::NotNormalized { sum });
    }
    Ok(())
}

/// Total probability of an event over a complete group:
/// `sum_i likelihoods[i] * priors[i]`, summed in index order.
pub fn full_probability(priors: &[f64], likelihoods: &[f64]) -> Result<f64, InferenceError> {
    check_lists(priors, likelihoods)?;
    Ok(priors
        .iter()
        .zip(likelihoods)
        .map(|(&p, &l)| p * l)
        .sum())
}

/// Bayes posterior over a complete group:
/// `priors[i] * likelihoods[i] / sum_j priors[j] * likelihoods[j]`.
///
/// Fails with [`InferenceError::ZeroEvidence`] when the denominator is 0;
/// a silent uniform fallback would mask a modeling error.
pub fn posterior(priors: &[f64], likelihoods: &[f64]) -> Result<Vec<f64>, InferenceError> {
    let evidence = full_probability(priors, likelihoods)?;
    if evidence == 0.0 {
        return Err(InferenceError::ZeroEvidence);
    }
    Ok(priors
        .iter()
        .zip(likelihoods)
        .map(|(&p, &l)| p * l / evidence)
        .collect())
}

/// Index and posterior probability of the maximum-a-posteriori hypothesis.
/// Ties break toward the lowest index.
pub fn map_hypothesis(
    priors: &[f64],
    likelihoods: &[f64],
) -> Result<(usize, f64), InferenceError> {
    let post = posterior(priors, likelihoods)?;
    let mut best = 0;
    for (idx, &p) in post.iter().enumerate() {
        if p > post[best] {
            best = idx;
        }
    }
    Ok((best, post[best]))
}

/// Incompatible-events product form: `prod_i priors[i] * likelihoods[i]`,
/// multiplied in index order. The literal multiplicative counterpart of
/// [`full_probability`]; never exceeds it on identical inputs.
pub fn prob_and_case(priors: &[f64], likelihoods: &[f64]) -> Result<f64, InferenceError> {
    check_lists(priors, likelihoods)?;
    Ok(priors
        .iter()
        .zip(likelihoods)
        .map(|(&p, &l)| p * l)
        .product())
}

/// Joint occurrence probability: `(prod conditionals) * base`.
/// An empty conditional list leaves the base probability unchanged.
pub fn joint_probability(conditionals: &[f64], base: f64) -> Result<f64, InferenceError> {
    for &c in conditionals.iter().chain(std::iter::once(&base)) {
        if !(0.0..=1.0).contains(&c) {
            return Err(InferenceError::OutOfRange(c));
        }
    }
    Ok(conditionals.iter().product::<f64>() * base)
}

fn check_graph_target(graph: &MdseGraph, target: NodeId) -> Result<EventKind, InferenceError> {
    if !graph.is_frozen() {
        return Err(InferenceError::NotFrozen);
    }
    if !graph.relaxed_valid() {
        return Err(InferenceError::NotValid);
    }
    if !graph.contains(target) {
        return Err(InferenceError::UnknownId(target));
    }
    graph
        .event_kind(target)
        .ok_or(InferenceError::TargetNotEvent(target))
}

/// Probability that an event occurred, recursively over the graph.
///
/// A star event gets the total probability over its hypothesis parents. A
/// prime event combines hypothesis-parent terms `prior * weight` with
/// star-parent terms `P(star) * weight`, where `P(star)` is evaluated
/// recursively and memoized for the duration of the query; additively in
/// [`CombinationMode::OrMixture`], multiplicatively in
/// [`CombinationMode::AndProduct`].
pub fn prob_event(graph: &MdseGraph, query: &ProbQuery) -> Result<QueryResult, InferenceError> {
    let kind = check_graph_target(graph, query.target)?;
    let mut memo = HashMap::new();
    let terms = parent_terms(graph, query.target, &mut memo);
    let (value, formula) = match (kind, query.mode) {
        (EventKind::Star, CombinationMode::OrMixture) => (
            terms.iter().map(|&(_, t)| t).sum(),
            FormulaTag::FullProbability,
        ),
        (EventKind::Prime, CombinationMode::OrMixture) => {
            (terms.iter().map(|&(_, t)| t).sum(), FormulaTag::OrMixture)
        }
        (_, CombinationMode::AndProduct) => (
            terms.iter().map(|&(_, t)| t).product(),
            FormulaTag::AndProduct,
        ),
    };
    let in_range = value <= 1.0 + IN_RANGE_TOLERANCE;
    if query.normalization == Normalization::Checked && !in_range {
        return Err(InferenceError::ValueExceedsOne { value });
    }
    Ok(QueryResult {
        value,
        formula,
        terms,
        in_range,
    })
}

/// One term per parent of `target`: hypothesis parents first, then event
/// parents, ascending id within each block.
fn parent_terms(
    graph: &MdseGraph,
    target: NodeId,
    memo: &mut HashMap<NodeId, f64>,
) -> Vec<(NodeId, f64)> {
    graph
        .parents(target)
        .iter()
        .map(|&idx| {
            let edge = graph.edge(idx);
            let source_prob = match graph.prior(edge.src) {
                Some(prior) => prior,
                None => event_value(graph, edge.src, memo),
            };
            (edge.src, source_prob * edge.weight)
        })
        .collect()
}

/// Additive event probability, memoized per query. Terminates because
/// validated graphs are acyclic.
fn event_value(graph: &MdseGraph, id: NodeId, memo: &mut HashMap<NodeId, f64>) -> f64 {
    if let Some(&v) = memo.get(&id) {
        return v;
    }
    let value = parent_terms(graph, id, memo)
        .iter()
        .map(|&(_, t)| t)
        .sum();
    memo.insert(id, value);
    value
}

/// The OR-mixture of a prime event with every star-parent probability
/// expanded inline as its hypothesis-parent sum — no intermediate star value
/// is cached or reused. Agrees with [`prob_event`] in
/// [`CombinationMode::OrMixture`] to within 1e-12; the two routes exist so
/// the identity can be checked.
pub fn prob_event_expanded(
    graph: &MdseGraph,
    target: NodeId,
) -> Result<QueryResult, InferenceError> {
    let kind = check_graph_target(graph, target)?;
    if kind != EventKind::Prime {
        return Err(InferenceError::TargetNotPrime(target));
    }
    let terms: Vec<(NodeId, f64)> = graph
        .parents(target)
        .iter()
        .map(|&idx| {
            let edge = graph.edge(idx);
            let contribution = match graph.prior(edge.src) {
                Some(prior) => prior * edge.weight,
                None => graph
                    .parents(edge.src)
                    .iter()
                    .map(|&inner_idx| {
                        let inner = graph.edge(inner_idx);
                        graph.prior(inner.src).unwrap_or(0.0) * inner.weight * edge.weight
                    })
                    .sum(),
            };
            (edge.src, contribution)
        })
        .collect();
    let value: f64 = terms.iter().map(|&(_, t)| t).sum();
    Ok(QueryResult {
        value,
        formula: FormulaTag::OrMixtureExpanded,
        terms,
        in_range: value <= 1.0 + IN_RANGE_TOLERANCE,
    })
}

/// Multiplicative parent-term combination for a prime event. Equivalent to
/// [`prob_event`] with [`CombinationMode::AndProduct`], with the target's
/// kind checked.
pub fn prob_event_and(graph: &MdseGraph, target: NodeId) -> Result<QueryResult, InferenceError> {
    let kind = check_graph_target(graph, target)?;
    if kind != EventKind::Prime {
        return Err(InferenceError::TargetNotPrime(target));
    }
    prob_event(
        graph,
        &ProbQuery::new(target, CombinationMode::AndProduct, Normalization::Literal),
    )
}

/// Posterior over one group's hypotheses given that `event` occurred.
///
/// The likelihood of each member is the weight of its edge to `event`; a
/// member without such an edge has likelihood 0 (the graph encodes all
/// stated dependencies, so an absent edge means no causal route).
pub fn group_posterior(
    graph: &MdseGraph,
    group: GroupId,
    event: NodeId,
) -> Result<PosteriorVector, InferenceError> {
    check_graph_target(graph, event)?;
    let members = &graph
        .group(group)
        .ok_or(InferenceError::UnknownGroup(group))?
        .members;
    let evidence: f64 = members
        .iter()
        .map(|&(id, prior)| prior * graph.weight(id, event).unwrap_or(0.0))
        .sum();
    if evidence == 0.0 {
        return Err(InferenceError::ZeroEvidence);
    }
    let entries = members
        .iter()
        .map(|&(id, prior)| {
            let likelihood = graph.weight(id, event).unwrap_or(0.0);
            (id, prior * likelihood / evidence)
        })
        .collect();
    Ok(PosteriorVector {
        group_id: group,
        entries,
    })
}
