//! Brute-force cross-checks of the closed-form results.
//!
//! The oracle recomputes total probability and posteriors by world
//! enumeration (reversed accumulation order) and re-derives prime-event
//! mixtures by full inline expansion, never sharing code with the inference
//! module.

use mdse::generator::{self, GeneratorConfig};
use mdse::graph::EventKind;
use mdse::inference;
use mdse::oracle;

fn main() {
    let priors = [0.4, 0.25, 0.35];
    let likelihoods = [0.7, 0.6, 0.4];
    let direct = inference::full_probability(&priors, &likelihoods).unwrap();
    let enumerated = oracle::enumerate_full_probability(&priors, &likelihoods).unwrap();
    println!("total probability: inference {direct:.12}, oracle {enumerated:.12}");

    let direct = inference::posterior(&[0.6, 0.4], &[0.8, 0.2]).unwrap();
    let enumerated = oracle::enumerate_posterior(&[0.6, 0.4], &[0.8, 0.2]).unwrap();
    println!("posterior head: inference {:.12}, oracle {:.12}", direct[0], enumerated[0]);

    // Mixture identity across a seed sweep of small strict graphs.
    let mut checks = 0usize;
    let mut max_delta: f64 = 0.0;
    for seed in 0..100 {
        let config = GeneratorConfig {
            seed,
            n_star_events: 2,
            n_prime_events: 2,
            groups_star: 2,
            groups_prime: 1,
            max_group_size: 2,
            edge_density: 0.7,
            strict: true,
        };
        let graph = generator::generate_graph(&config).unwrap();
        for event in graph.events() {
            if event.kind != EventKind::Prime {
                continue;
            }
            let check = oracle::check_mixture_expansion(&graph, event.id).unwrap();
            checks += 1;
            max_delta = max_delta.max(check.delta);
        }
    }
    println!("mixture expansion checks over 100 seeds: {checks}, max delta {max_delta:.3e}");

    // World enumeration: the product measure over complete groups.
    let config = GeneratorConfig {
        seed: 42,
        n_star_events: 1,
        n_prime_events: 1,
        groups_star: 1,
        groups_prime: 1,
        max_group_size: 3,
        edge_density: 0.5,
        strict: true,
    };
    let graph = generator::generate_graph(&config).unwrap();
    let worlds = oracle::worlds(&graph).unwrap();
    let total: f64 = worlds.iter().map(|w| w.weight).sum();
    println!(
        "worlds of seed-42 graph: {} with total weight {total:.12}",
        worlds.len()
    );
}
