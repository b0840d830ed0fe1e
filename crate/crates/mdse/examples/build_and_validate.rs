//! Structural validation in both modes, degree bounds, and the handshake
//! diagnostic.
//!
//! The minimal strict-valid graph has four vertices and three edges: a
//! star-group hypothesis feeding a star event, which feeds a prime event
//! that also has a prime-group hypothesis parent.

use mdse::graph::{EventKind, GroupRole, MdseGraph, ValidationMode};

fn main() {
    let mut builder = MdseGraph::new();
    let star_hyp = builder
        .add_hypothesis_group(&[1.0], GroupRole::StarGroup)
        .unwrap();
    let prime_hyp = builder
        .add_hypothesis_group(&[1.0], GroupRole::PrimeGroup)
        .unwrap();
    let star = builder.add_event(EventKind::Star).unwrap();
    let prime = builder.add_event(EventKind::Prime).unwrap();
    builder.add_edge(star_hyp[0], star, 0.8).unwrap();
    builder.add_edge(star, prime, 0.5).unwrap();
    builder.add_edge(prime_hyp[0], prime, 0.3).unwrap();
    let graph = builder.freeze();

    let shape = graph.shape();
    println!(
        "shape: n={} (i={} star + k={} prime), m={}, v={}, e={}",
        shape.n, shape.i, shape.k, shape.m, shape.v, shape.e
    );

    for mode in [ValidationMode::Relaxed, ValidationMode::Strict] {
        print!("{}", graph.validate(mode).unwrap());
    }

    for id in [star_hyp[0], star, prime] {
        let b = graph.degree_bounds(id).unwrap();
        println!(
            "vertex {id}: indegree {}, outdegree {}, strict degree interval [{}, {}]",
            b.indegree, b.outdegree, b.min_degree, b.max_degree
        );
    }

    let handshake = graph.handshake_report().unwrap();
    println!(
        "handshake: sum indegree {} = sum outdegree {} = edges {}",
        handshake.sum_indegree, handshake.sum_outdegree, handshake.edge_count
    );
    println!(
        "degree-sum accounting disagrees with itself: n + 2m = {} vs (n+m)(n+m-1) = {}",
        handshake.classwise_max_degree_sum, handshake.dense_degree_sum
    );

    // A structurally broken graph, assembled raw so the validator can report
    // it: a star event feeding a hypothesis.
    let broken = MdseGraph::from_raw_parts(
        vec![
            (GroupRole::StarGroup, vec![1.0]),
            (GroupRole::StarGroup, vec![1.0]),
        ],
        vec![(EventKind::Star, None)],
        vec![(0, 2, 0.5), (2, 1, 0.4)],
    );
    println!("\nbroken graph:");
    print!("{}", broken.validate(ValidationMode::Relaxed).unwrap());
}
