//! Prior estimation and Bayesian updating of group priors.
//!
//! Three estimation strategies are supported: explicit probabilities (taken
//! as given, never silently renormalized), frequentist counting, and the
//! non-informative uniform prior. [`update_group`] replaces a group's priors
//! with their posterior given an observed event, returning a new frozen
//! graph so readers of the old one are never invalidated.

use thiserror::Error;

use crate::graph::{GroupId, MdseGraph, NodeId};
use crate::inference::{self, InferenceError};
use crate::NORMALIZATION_TOLERANCE;

/// How a group's priors were specified.
#[derive(Debug, Clone, PartialEq)]
pub enum PriorSpec {
    /// Probabilities taken as given; must already sum to 1.
    Explicit(Vec<f64>),
    /// Non-negative occurrence counts with positive total.
    Frequentist(Vec<u64>),
    /// Equal probability over `m` hypotheses.
    Uniform(usize),
}

impl PriorSpec {
    /// Resolves the specification into a prior vector.
    pub fn resolve(&self) -> Result<Vec<f64>, PriorError> {
        match self {
            PriorSpec::Explicit(values) => priors_explicit(values),
            PriorSpec::Frequentist(counts) => priors_from_counts(counts),
            PriorSpec::Uniform(m) => priors_uniform(*m),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum PriorError {
    #[error("count list is empty")]
    EmptyInput,
    #[error("counts sum to zero")]
    ZeroTotal,
    #[error("hypothesis count must be at least 1")]
    ZeroHypotheses,
    #[error("probability {0} outside [0, 1]")]
    OutOfRange(f64),
    #[error("values sum to {sum}, expected 1 within {NORMALIZATION_TOLERANCE}")]
    NotNormalized { sum: f64 },
}

/// Priors from occurrence counts: `counts[i] / total`.
pub fn priors_from_counts(counts: &[u64]) -> Result<Vec<f64>, PriorError> {
    if counts.is_empty() {
        return Err(PriorError::EmptyInput);
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(PriorError::ZeroTotal);
    }
    Ok(counts
        .iter()
        .map(|&c| c as f64 / total as f64)
        .collect())
}

/// The non-informative prior: `m` entries of exactly `1/m`.
pub fn priors_uniform(m: usize) -> Result<Vec<f64>, PriorError> {
    if m == 0 {
        return Err(PriorError::ZeroHypotheses);
    }
    Ok(vec![1.0 / m as f64; m])
}

/// Validates an explicit prior vector. Malformed input is an error, not
/// silently fixed.
pub fn priors_explicit(values: &[f64]) -> Result<Vec<f64>, PriorError> {
    for &v in values {
        if !(0.0..=1.0).contains(&v) {
            return Err(PriorError::OutOfRange(v));
        }
    }
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(PriorError::NotNormalized { sum });
    }
    Ok(values.to_vec())
}

/// Returns a new frozen graph in which `group`'s priors are replaced by
/// their posterior given that `observed_event` occurred.
///
/// Each member's likelihood is the weight of its edge to the event; members
/// without such an edge get likelihood 0. Structure, edges, and weights are
/// untouched — only the one group's priors differ.
pub fn update_group(
    graph: &MdseGraph,
    group: GroupId,
    observed_event: NodeId,
) -> Result<MdseGraph, InferenceError> {
    let post = inference::group_posterior(graph, group, observed_event)?;
    let new_priors: Vec<f64> = post.entries.iter().map(|&(_, p)| p).collect();
    Ok(graph.with_group_priors(group, &new_priors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{EventKind, GroupRole};

    const TOL: f64 = 1e-12;

    #[test]
    fn counts_give_relative_frequencies() {
        assert_eq!(priors_from_counts(&[60, 40]).unwrap(), vec![0.6, 0.4]);
        assert_eq!(priors_from_counts(&[5]).unwrap(), vec![1.0]);
        assert_eq!(
            priors_from_counts(&[1, 1, 2]).unwrap(),
            vec![0.25, 0.25, 0.5]
        );
    }

    #[test]
    fn counts_reject_degenerate_input() {
        assert_eq!(priors_from_counts(&[]).unwrap_err(), PriorError::EmptyInput);
        assert_eq!(
            priors_from_counts(&[0, 0]).unwrap_err(),
            PriorError::ZeroTotal
        );
    }

    #[test]
    fn uniform_splits_mass_equally() {
        let p = priors_uniform(3).unwrap();
        assert_eq!(p, vec![1.0 / 3.0; 3]);
        assert_eq!(priors_uniform(1).unwrap(), vec![1.0]);
        assert_eq!(priors_uniform(4).unwrap(), vec![0.25; 4]);
        assert_eq!(priors_uniform(0).unwrap_err(), PriorError::ZeroHypotheses);
    }

    #[test]
    fn explicit_priors_must_be_normalized() {
        assert!(priors_explicit(&[0.4, 0.2, 0.4]).is_ok());
        assert!(priors_explicit(&[1.0]).is_ok());
        assert!(matches!(
            priors_explicit(&[0.3]).unwrap_err(),
            PriorError::NotNormalized { .. }
        ));
    }

    #[test]
    fn prior_spec_resolves_each_strategy() {
        assert_eq!(
            PriorSpec::Frequentist(vec![60, 40]).resolve().unwrap(),
            vec![0.6, 0.4]
        );
        assert_eq!(
            PriorSpec::Uniform(4).resolve().unwrap(),
            vec![0.25; 4]
        );
        assert_eq!(
            PriorSpec::Explicit(vec![0.4, 0.2, 0.4]).resolve().unwrap(),
            vec![0.4, 0.2, 0.4]
        );
    }

    fn two_hypothesis_graph(weights: (f64, f64)) -> (MdseGraph, GroupId, NodeId) {
        let mut g = MdseGraph::new();
        let h = g
            .add_hypothesis_group(&[0.6, 0.4], GroupRole::PrimeGroup)
            .unwrap();
        let prime = g.add_event(EventKind::Prime).unwrap();
        g.add_edge(h[0], prime, weights.0).unwrap();
        g.add_edge(h[1], prime, weights.1).unwrap();
        (g.freeze(), GroupId(0), prime)
    }

    #[test]
    fn update_replaces_priors_with_posterior() {
        let (g, group, event) = two_hypothesis_graph((0.8, 0.2));
        let updated = update_group(&g, group, event).unwrap();
        let members = &updated.group(group).unwrap().members;
        assert!((members[0].1 - 6.0 / 7.0).abs() < TOL);
        assert!((members[1].1 - 1.0 / 7.0).abs() < TOL);
        // The original graph is untouched.
        assert_eq!(g.group(group).unwrap().members[0].1, 0.6);
    }

    #[test]
    fn update_with_single_causal_route_concentrates_mass() {
        let (g, group, event) = two_hypothesis_graph((0.8, 0.0));
        let updated = update_group(&g, group, event).unwrap();
        let members = &updated.group(group).unwrap().members;
        assert_eq!(members[0].1, 1.0);
        assert_eq!(members[1].1, 0.0);
    }

    #[test]
    fn sequential_updates_square_the_likelihoods() {
        let (g, group, event) = two_hypothesis_graph((0.8, 0.2));
        let twice = update_group(&update_group(&g, group, event).unwrap(), group, event).unwrap();

        let squared: Vec<f64> = [0.8f64, 0.2].iter().map(|l| l * l).collect();
        let direct = inference::posterior(&[0.6, 0.4], &squared).unwrap();
        for (&(_, got), want) in twice.group(group).unwrap().members.iter().zip(direct) {
            assert!((got - want).abs() < TOL);
        }
    }

    #[test]
    fn update_with_equal_likelihoods_is_identity() {
        let (g, group, event) = two_hypothesis_graph((0.5, 0.5));
        let updated = update_group(&g, group, event).unwrap();
        for (a, b) in updated
            .group(group)
            .unwrap()
            .members
            .iter()
            .zip(&g.group(group).unwrap().members)
        {
            assert!((a.1 - b.1).abs() < TOL);
        }
    }

    #[test]
    fn update_structure_is_preserved() {
        let (g, group, event) = two_hypothesis_graph((0.8, 0.2));
        let updated = update_group(&g, group, event).unwrap();
        assert_eq!(updated.shape(), g.shape());
        assert_eq!(updated.edges().len(), g.edges().len());
        for (a, b) in updated.edges().iter().zip(g.edges()) {
            assert_eq!(a.src, b.src);
            assert_eq!(a.dst, b.dst);
            assert_eq!(a.weight, b.weight);
        }
    }

    #[test]
    fn update_with_no_causal_route_is_zero_evidence() {
        // The first group has no edge to the observed event.
        let mut builder = MdseGraph::new();
        let h = builder
            .add_hypothesis_group(&[0.6, 0.4], GroupRole::PrimeGroup)
            .unwrap();
        let other = builder
            .add_hypothesis_group(&[1.0], GroupRole::PrimeGroup)
            .unwrap();
        let covered = builder.add_event(EventKind::Prime).unwrap();
        let uncovered = builder.add_event(EventKind::Prime).unwrap();
        builder.add_edge(h[0], covered, 0.8).unwrap();
        builder.add_edge(h[1], covered, 0.2).unwrap();
        builder.add_edge(other[0], uncovered, 0.9).unwrap();
        let g = builder.freeze();
        assert_eq!(
            update_group(&g, GroupId(0), uncovered).unwrap_err(),
            InferenceError::ZeroEvidence
        );
    }
}
