//! Prior estimation, posterior computation, MAP selection, and sequential
//! Bayesian updating of a group's priors.
//!
//! The running numbers: a classifier favors "dog" at 0.8 over "cat" at 0.2,
//! but dogs have prior 0.6 and cats 0.4. Conditioning reweights the classes
//! to 0.857 / 0.143.

use mdse::graph::{EventKind, GroupId, GroupRole, MdseGraph};
use mdse::inference;
use mdse::priors::{self, PriorSpec};

fn main() {
    // Three ways to estimate priors.
    let from_counts = priors::priors_from_counts(&[60, 40]).unwrap();
    println!("frequentist   (60, 40 observations) -> {from_counts:?}");
    let uniform = priors::priors_uniform(3).unwrap();
    println!("uniform       (3 hypotheses)        -> {uniform:?}");
    let explicit = PriorSpec::Explicit(vec![0.4, 0.2, 0.4]).resolve().unwrap();
    println!("explicit      (as given)            -> {explicit:?}");

    // Posterior and MAP on plain lists.
    let priors_list = [0.6, 0.4];
    let likelihoods = [0.8, 0.2];
    let post = inference::posterior(&priors_list, &likelihoods).unwrap();
    println!("\nposterior of (0.6, 0.4) under likelihoods (0.8, 0.2):");
    for (idx, p) in post.iter().enumerate() {
        println!("  hypothesis {idx}: {p:.9}");
    }
    let (map_idx, map_p) = inference::map_hypothesis(&priors_list, &likelihoods).unwrap();
    println!("MAP hypothesis: {map_idx} at {map_p:.9}");

    // The same conditioning as a graph update: observing the event replaces
    // the group's priors with the posterior, in a fresh frozen graph.
    let mut builder = MdseGraph::new();
    let classes = builder
        .add_hypothesis_group(&priors_list, GroupRole::PrimeGroup)
        .unwrap();
    let observed = builder
        .add_event_with_label(EventKind::Prime, "classifier says dog")
        .unwrap();
    builder.add_edge(classes[0], observed, 0.8).unwrap();
    builder.add_edge(classes[1], observed, 0.2).unwrap();
    let graph = builder.freeze();

    let mut current = graph;
    for round in 1..=3 {
        current = priors::update_group(&current, GroupId::new(0), observed).unwrap();
        let members = &current.group(GroupId::new(0)).unwrap().members;
        println!(
            "after update {round}: dog {:.9}, cat {:.9}",
            members[0].1, members[1].1
        );
    }
}
