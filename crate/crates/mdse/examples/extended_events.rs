//! Prime-event probability beyond one group: the additive OR-mixture, its
//! fully expanded form, and the multiplicative AND-product.
//!
//! A prime event with a certain hypothesis parent (weight 0.5) and a star
//! parent of probability 0.57 (weight 0.2) mixes to 0.5 + 0.114 = 0.614.
//! The additive formula carries no normalization, so a second demo shows a
//! value above 1 being reported (literal) and rejected (checked).

use mdse::graph::{EventKind, GroupRole, MdseGraph};
use mdse::inference::{self, CombinationMode, Normalization, ProbQuery};

fn main() {
    let mut builder = MdseGraph::new();
    let star_hyps = builder
        .add_hypothesis_group(&[0.4, 0.25, 0.35], GroupRole::StarGroup)
        .unwrap();
    let prime_hyps = builder
        .add_hypothesis_group(&[1.0], GroupRole::PrimeGroup)
        .unwrap();
    let star = builder.add_event(EventKind::Star).unwrap();
    let prime = builder.add_event(EventKind::Prime).unwrap();
    builder.add_edge(star_hyps[0], star, 0.7).unwrap();
    builder.add_edge(star_hyps[1], star, 0.6).unwrap();
    builder.add_edge(star_hyps[2], star, 0.4).unwrap();
    builder.add_edge(prime_hyps[0], prime, 0.5).unwrap();
    builder.add_edge(star, prime, 0.2).unwrap();
    let graph = builder.freeze();

    let mixture = inference::prob_event(
        &graph,
        &ProbQuery::new(prime, CombinationMode::OrMixture, Normalization::Literal),
    )
    .unwrap();
    println!("OR-mixture  : {:.9}  [{}]", mixture.value, mixture.formula);

    let expanded = inference::prob_event_expanded(&graph, prime).unwrap();
    println!(
        "expanded    : {:.9}  [{}], gap {:.3e}",
        expanded.value,
        expanded.formula,
        (mixture.value - expanded.value).abs()
    );

    let product = inference::prob_event_and(&graph, prime).unwrap();
    println!("AND-product : {:.9}  [{}]", product.value, product.formula);

    let joint = inference::joint_probability(&[0.5, 0.7], 0.24).unwrap();
    println!("joint of two conditionals (0.5, 0.7) on base 0.24: {joint:.9}");

    // The additive formula can leave [0, 1]; both behaviors are explicit.
    let mut builder = MdseGraph::new();
    let a = builder
        .add_hypothesis_group(&[1.0], GroupRole::PrimeGroup)
        .unwrap();
    let b = builder
        .add_hypothesis_group(&[1.0], GroupRole::PrimeGroup)
        .unwrap();
    let overloaded = builder.add_event(EventKind::Prime).unwrap();
    builder.add_edge(a[0], overloaded, 0.9).unwrap();
    builder.add_edge(b[0], overloaded, 0.9).unwrap();
    let graph = builder.freeze();

    let literal = inference::prob_event(
        &graph,
        &ProbQuery::new(overloaded, CombinationMode::OrMixture, Normalization::Literal),
    )
    .unwrap();
    println!(
        "\nliteral mixture of two 0.9 terms: {:.9} (in range: {})",
        literal.value, literal.in_range
    );
    let checked = inference::prob_event(
        &graph,
        &ProbQuery::new(overloaded, CombinationMode::OrMixture, Normalization::Checked),
    );
    println!("checked mode says: {}", checked.unwrap_err());
}
