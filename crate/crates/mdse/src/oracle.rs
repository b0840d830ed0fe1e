//! Brute-force verification of the closed-form results.
//!
//! Everything here is written independently of the `inference` module: world
//! enumeration over complete groups, reversed accumulation order, and inline
//! re-expansion of event-parent contributions. Where a function compares two
//! routes (as in [`check_mixture_expansion`]), the inference module supplies
//! one side as the system under test and this module computes the other.
//!
//! Enumeration is capped at desk scale: 20 hypotheses for list inputs, 12
//! vertices for graph inputs.

use thiserror::Error;

use crate::graph::{EventKind, MdseGraph, NodeId};
use crate::inference::{self, CombinationMode, InferenceError, Normalization, ProbQuery};
use crate::NORMALIZATION_TOLERANCE;

/// Largest hypothesis list the enumeration accepts.
pub const MAX_HYPOTHESES: usize = 20;

/// Largest graph (vertices, `n + m`) the enumeration accepts.
pub const MAX_GRAPH_VERTICES: usize = 12;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("input size {size} exceeds the enumeration cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("lists have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("probability {0} outside [0, 1]")]
    OutOfRange(f64),
    #[error("priors sum to {0}, expected 1")]
    NotNormalized(f64),
    #[error("evidence probability is 0; conditioning is undefined")]
    ZeroEvidence,
    #[error("graph fails relaxed validation")]
    NotValid,
    #[error("unknown vertex id {0}")]
    UnknownId(NodeId),
    #[error("event {0} is not a prime event")]
    NotPrime(NodeId),
    #[error(transparent)]
    Inference(#[from] InferenceError),
}

/// One joint outcome of all hypothesis groups: exactly one member of each
/// complete group holds, with weight equal to the product of the selected
/// priors. Over all worlds the weights sum to 1.
#[derive(Debug, Clone)]
pub struct World {
    /// Selected hypothesis per group, in group order.
    pub selection: Vec<NodeId>,
    pub weight: f64,
}

/// Two evaluation routes of the same prime-event mixture and their gap.
#[derive(Debug, Clone, Copy)]
pub struct MixtureCheck {
    /// Recursive evaluation (the inference module).
    pub lhs: f64,
    /// Independent inline expansion (this module).
    pub rhs: f64,
    pub delta: f64,
}

fn check_lists(priors: &[f64], likelihoods: &[f64]) -> Result<(), OracleError> {
    if priors.len() != likelihoods.len() {
        return Err(OracleError::LengthMismatch {
            left: priors.len(),
            right: likelihoods.len(),
        });
    }
    if priors.len() > MAX_HYPOTHESES {
        return Err(OracleError::TooLarge {
            size: priors.len(),
            cap: MAX_HYPOTHESES,
        });
    }
    for &p in priors.iter().chain(likelihoods) {
        if !(0.0..=1.0).contains(&p) {
            return Err(OracleError::OutOfRange(p));
        }
    }
    let sum: f64 = priors.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(OracleError::NotNormalized(sum));
    }
    Ok(())
}

/// Total probability by enumeration: each hypothesis in turn is the sole
/// true member of its group and contributes `prior * likelihood`.
/// Accumulated in reverse index order, the opposite of the inference module.
pub fn enumerate_full_probability(
    priors: &[f64],
    likelihoods: &[f64],
) -> Result<f64, OracleError> {
    check_lists(priors, likelihoods)?;
    let mut total = 0.0;
    for world in (0..priors.len()).rev() {
        total += priors[world] * likelihoods[world];
    }
    Ok(total)
}

/// Posterior by enumeration: each world's joint weight, conditioned by
/// division with the total.
pub fn enumerate_posterior(
    priors: &[f64],
    likelihoods: &[f64],
) -> Result<Vec<f64>, OracleError> {
    check_lists(priors, likelihoods)?;
    let mut joints = vec![0.0; priors.len()];
    let mut evidence = 0.0;
    for world in (0..priors.len()).rev() {
        joints[world] = priors[world] * likelihoods[world];
        evidence += joints[world];
    }
    if evidence == 0.0 {
        return Err(OracleError::ZeroEvidence);
    }
    for joint in &mut joints {
        *joint /= evidence;
    }
    Ok(joints)
}

/// All joint outcomes of the graph's hypothesis groups (cartesian product of
/// group members) with their product-measure weights.
pub fn worlds(graph: &MdseGraph) -> Result<Vec<World>, OracleError> {
    let shape = graph.shape();
    if shape.v > MAX_GRAPH_VERTICES {
        return Err(OracleError::TooLarge {
            size: shape.v,
            cap: MAX_GRAPH_VERTICES,
        });
    }
    let mut out = vec![World {
        selection: Vec::new(),
        weight: 1.0,
    }];
    for group in graph.groups() {
        let mut next = Vec::with_capacity(out.len() * group.members.len());
        for world in &out {
            for &(id, prior) in &group.members {
                let mut selection = world.selection.clone();
                selection.push(id);
                next.push(World {
                    selection,
                    weight: world.weight * prior,
                });
            }
        }
        out = next;
    }
    Ok(out)
}

/// Recomputes a prime event's OR-mixture by fully inline expansion and
/// compares it with the inference module's recursive evaluation.
///
/// The expansion walks the target's parents in descending id order and
/// multiplies each star parent's hypothesis terms through before summing, so
/// neither the iteration order nor the association matches the recursive
/// route.
pub fn check_mixture_expansion(
    graph: &MdseGraph,
    target: NodeId,
) -> Result<MixtureCheck, OracleError> {
    let shape = graph.shape();
    if shape.v > MAX_GRAPH_VERTICES {
        return Err(OracleError::TooLarge {
            size: shape.v,
            cap: MAX_GRAPH_VERTICES,
        });
    }
    if !graph.relaxed_valid() {
        return Err(OracleError::NotValid);
    }
    if !graph.contains(target) {
        return Err(OracleError::UnknownId(target));
    }
    if graph.event_kind(target) != Some(EventKind::Prime) {
        return Err(OracleError::NotPrime(target));
    }

    let lhs = inference::prob_event(
        graph,
        &ProbQuery::new(target, CombinationMode::OrMixture, Normalization::Literal),
    )?
    .value;

    let mut rhs = 0.0;
    for &idx in graph.parents(target).iter().rev() {
        let edge = graph.edge(idx);
        match graph.prior(edge.src) {
            Some(prior) => rhs += prior * edge.weight,
            None => {
                for &inner_idx in graph.parents(edge.src).iter().rev() {
                    let inner = graph.edge(inner_idx);
                    rhs += graph.prior(inner.src).unwrap_or(0.0) * inner.weight * edge.weight;
                }
            }
        }
    }

    Ok(MixtureCheck {
        lhs,
        rhs,
        delta: (lhs - rhs).abs(),
    })
}
