//! Corporate default risk from three economic scenarios.
//!
//! One complete hypothesis group (priors 0.4, 0.25, 0.35) feeds a single
//! star event with conditional weights 0.7, 0.6, 0.4. The event probability
//! is the total probability over the group: 0.57.

use mdse::document;
use mdse::graph::{EventKind, GroupRole, MdseGraph};
use mdse::inference::{self, CombinationMode, Normalization, ProbQuery};

fn main() {
    let mut builder = MdseGraph::new();
    let scenarios = builder
        .add_hypothesis_group(&[0.4, 0.25, 0.35], GroupRole::StarGroup)
        .expect("complete group");
    let default_event = builder
        .add_event_with_label(EventKind::Star, "company default")
        .expect("builder accepts events");
    builder.add_edge(scenarios[0], default_event, 0.7).unwrap();
    builder.add_edge(scenarios[1], default_event, 0.6).unwrap();
    builder.add_edge(scenarios[2], default_event, 0.4).unwrap();
    let graph = builder.freeze();

    let query = ProbQuery::new(
        default_event,
        CombinationMode::OrMixture,
        Normalization::Checked,
    );
    let result = inference::prob_event(&graph, &query).expect("valid graph");

    println!("P(default) = {:.9}  [{}]", result.value, result.formula);
    for (src, contribution) in &result.terms {
        println!("  scenario {src} contributes {contribution:.9}");
    }

    println!("\ncanonical document:");
    print!("{}", document::serialize_graph(&graph));
}
