//! Cross-module invariants: normalization, convexity, algebraic identities,
//! structural counters, and round-trip stability, over both random lists
//! (proptest) and deterministic generator sweeps.

use mdse::document;
use mdse::generator::{generate_graph, GeneratorConfig};
use mdse::graph::{EventKind, GroupId, MdseGraph, ValidationMode};
use mdse::inference::{self, CombinationMode, Normalization, ProbQuery};
use mdse::priors;
use proptest::prelude::*;

const TOL: f64 = 1e-12;

fn sweep_config(seed: u64, strict: bool) -> GeneratorConfig {
    GeneratorConfig {
        seed,
        n_star_events: 2 + (seed % 3) as usize,
        n_prime_events: 2 + (seed % 4) as usize,
        groups_star: 2,
        groups_prime: 1 + (seed % 2) as usize,
        max_group_size: 3,
        edge_density: 0.4 + 0.5 * ((seed % 5) as f64 / 5.0),
        strict,
    }
}

/// Normalized priors with matching likelihoods, lengths 1..=12.
fn prior_likelihood_lists() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..=12).prop_flat_map(|len| {
        (
            proptest::collection::vec(1e-3..1.0f64, len),
            proptest::collection::vec(0.0..1.0f64, len),
        )
            .prop_map(|(raw, likelihoods)| {
                let total: f64 = raw.iter().sum();
                (raw.iter().map(|r| r / total).collect(), likelihoods)
            })
    })
}

proptest! {
    #[test]
    fn posterior_entries_sum_to_one((priors, likelihoods) in prior_likelihood_lists()) {
        prop_assume!(likelihoods.iter().any(|&l| l > 0.0));
        let post = inference::posterior(&priors, &likelihoods).unwrap();
        let sum: f64 = post.iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-9, "sum {sum}");
        prop_assert!(post.iter().all(|&p| (0.0..=1.0 + 1e-9).contains(&p)));
    }

    #[test]
    fn full_probability_is_a_convex_combination((priors, likelihoods) in prior_likelihood_lists()) {
        let p = inference::full_probability(&priors, &likelihoods).unwrap();
        let lo = likelihoods.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = likelihoods.iter().cloned().fold(0.0, f64::max);
        prop_assert!(p >= lo - 1e-9 && p <= hi + 1e-9, "{p} outside [{lo}, {hi}]");
    }

    #[test]
    fn product_form_never_exceeds_mixture((priors, likelihoods) in prior_likelihood_lists()) {
        let and = inference::prob_and_case(&priors, &likelihoods).unwrap();
        let or = inference::full_probability(&priors, &likelihoods).unwrap();
        prop_assert!(and <= or + TOL, "product {and} > mixture {or}");
    }

    #[test]
    fn map_index_invariant_under_likelihood_scaling(
        (priors, likelihoods) in prior_likelihood_lists(),
        scale in 0.05..1.0f64,
    ) {
        prop_assume!(likelihoods.iter().any(|&l| l > 0.0));
        let scaled: Vec<f64> = likelihoods.iter().map(|l| l * scale).collect();
        let (idx, _) = inference::map_hypothesis(&priors, &likelihoods).unwrap();
        let (idx_scaled, _) = inference::map_hypothesis(&priors, &scaled).unwrap();
        prop_assert_eq!(idx, idx_scaled);
    }

    #[test]
    fn estimated_priors_are_normalized(counts in proptest::collection::vec(0u64..1000, 1..20)) {
        prop_assume!(counts.iter().sum::<u64>() > 0);
        let p = priors::priors_from_counts(&counts).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < TOL);
    }

    #[test]
    fn uniform_priors_are_normalized(m in 1usize..200) {
        let p = priors::priors_uniform(m).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < TOL);
    }

    #[test]
    fn determinism_is_bitwise((priors, likelihoods) in prior_likelihood_lists()) {
        prop_assume!(likelihoods.iter().any(|&l| l > 0.0));
        let a = inference::posterior(&priors, &likelihoods).unwrap();
        let b = inference::posterior(&priors, &likelihoods).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn handshake_identity_over_generated_graphs() {
    for seed in 0..200 {
        let strict = seed % 2 == 0;
        let graph = generate_graph(&sweep_config(seed, strict)).unwrap();
        let h = graph.handshake_report().unwrap();
        assert_eq!(h.sum_indegree, h.edge_count, "seed {seed}");
        assert_eq!(h.sum_outdegree, h.edge_count, "seed {seed}");
    }
}

#[test]
fn strict_valid_implies_relaxed_valid() {
    for seed in 0..100 {
        let graph = generate_graph(&sweep_config(seed, true)).unwrap();
        let strict = graph.validate(ValidationMode::Strict).unwrap();
        let relaxed = graph.validate(ValidationMode::Relaxed).unwrap();
        assert!(strict.passed, "seed {seed}: {strict}");
        assert!(relaxed.passed, "seed {seed}: strict passed but relaxed failed");
    }
}

#[test]
fn shape_counters_are_consistent() {
    for seed in 0..100 {
        let graph = generate_graph(&sweep_config(seed, false)).unwrap();
        let shape = graph.shape();
        assert_eq!(shape.n, shape.i + shape.k, "seed {seed}");
        assert_eq!(shape.v, shape.n + shape.m, "seed {seed}");
        assert_eq!(shape.e, graph.edges().len(), "seed {seed}");
    }
}

#[test]
fn round_trip_preserves_reports_and_bytes() {
    for seed in 0..100 {
        let graph = generate_graph(&sweep_config(seed, seed % 2 == 0)).unwrap();
        let text = document::serialize_graph(&graph);
        let parsed = document::parse_graph(&text).unwrap();
        assert_eq!(graph.shape(), parsed.shape(), "seed {seed}");
        assert_eq!(
            graph.handshake_report().unwrap(),
            parsed.handshake_report().unwrap(),
            "seed {seed}"
        );
        for mode in [ValidationMode::Relaxed, ValidationMode::Strict] {
            let a = graph.validate(mode).unwrap();
            let b = parsed.validate(mode).unwrap();
            assert_eq!(a.passed, b.passed, "seed {seed}");
            assert_eq!(a.rules(), b.rules(), "seed {seed}");
        }
        assert_eq!(text, document::serialize_graph(&parsed), "seed {seed}");
    }
}

#[test]
fn mixture_recursive_equals_expanded_on_generated_graphs() {
    for seed in 0..100 {
        let graph = generate_graph(&sweep_config(seed, true)).unwrap();
        for event in graph.events() {
            if event.kind != EventKind::Prime {
                continue;
            }
            let recursive = inference::prob_event(
                &graph,
                &ProbQuery::new(event.id, CombinationMode::OrMixture, Normalization::Literal),
            )
            .unwrap();
            let expanded = inference::prob_event_expanded(&graph, event.id).unwrap();
            assert!(
                (recursive.value - expanded.value).abs() <= TOL,
                "seed {seed}, event {}: {} vs {}",
                event.id,
                recursive.value,
                expanded.value
            );
        }
    }
}

#[test]
fn query_terms_recompose_to_the_value() {
    for seed in 0..50 {
        let graph = generate_graph(&sweep_config(seed, true)).unwrap();
        for event in graph.events() {
            let or = inference::prob_event(
                &graph,
                &ProbQuery::new(event.id, CombinationMode::OrMixture, Normalization::Literal),
            )
            .unwrap();
            let sum: f64 = or.terms.iter().map(|&(_, t)| t).sum();
            assert!((or.value - sum).abs() <= TOL);
            let and = inference::prob_event(
                &graph,
                &ProbQuery::new(event.id, CombinationMode::AndProduct, Normalization::Literal),
            )
            .unwrap();
            let product: f64 = and.terms.iter().map(|&(_, t)| t).product();
            assert!((and.value - product).abs() <= TOL);
        }
    }
}

#[test]
fn updates_keep_priors_in_range_and_normalized() {
    for seed in 0..50 {
        let graph = generate_graph(&sweep_config(seed, true)).unwrap();
        let group = GroupId::new(0);
        let Some(event) = graph.events().iter().find(|e| {
            graph
                .group(group)
                .unwrap()
                .members
                .iter()
                .any(|&(id, p)| p > 0.0 && graph.weight(id, e.id).unwrap_or(0.0) > 0.0)
        }) else {
            continue;
        };
        let updated = priors::update_group(&graph, group, event.id).unwrap();
        let members = &updated.group(group).unwrap().members;
        let sum: f64 = members.iter().map(|&(_, p)| p).sum();
        assert!((sum - 1.0).abs() < 1e-9, "seed {seed}");
        assert!(members.iter().all(|&(_, p)| (0.0..=1.0 + 1e-9).contains(&p)));
    }
}

/// The two degree-sum accounting formulas disagree everywhere on the
/// enumerated range; the diagnostic reports exactly what direct arithmetic
/// gives.
#[test]
fn degree_sum_formulas_disagree_on_the_whole_range() {
    let mut equality_points = Vec::new();
    for n in 1usize..=20 {
        for m in 1usize..=20 {
            if n + 2 * m == (n + m) * (n + m - 1) {
                equality_points.push((n, m));
            }
        }
    }
    assert!(
        equality_points.is_empty(),
        "unexpected equality points {equality_points:?}"
    );

    // The report mirrors the same arithmetic on an actual graph.
    let mut builder = MdseGraph::new();
    let h = builder
        .add_hypothesis_group(&[0.5, 0.5], mdse::graph::GroupRole::StarGroup)
        .unwrap();
    let e = builder.add_event(EventKind::Star).unwrap();
    builder.add_edge(h[0], e, 0.5).unwrap();
    let graph = builder.freeze();
    let report = graph.handshake_report().unwrap();
    assert_eq!(report.classwise_max_degree_sum, 1 + 2 * 2);
    assert_eq!(report.dense_degree_sum, 3 * 2);
    assert_ne!(report.classwise_max_degree_sum, report.dense_degree_sum);
}
