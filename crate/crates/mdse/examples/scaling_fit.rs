//! Scaling measurement: mixture-query time against edge count, with a
//! log-log exponent fit.
//!
//! Star probabilities are memoized within a query, so each query touches
//! each edge at most once and the fitted exponent should sit near 1. This
//! example uses a reduced ladder to stay quick; the acceptance suite runs
//! the full 10^3..10^5-edge range.

use mdse::bench::{self, BenchOp, SizeAxis};

fn main() {
    let sizes = [
        (64, 32, 0.5),
        (96, 48, 0.5),
        (144, 72, 0.5),
        (216, 108, 0.5),
        (324, 162, 0.5),
    ];
    let points = bench::run_scaling_bench(&sizes, 1, BenchOp::Mixture).unwrap();
    print!("{}", bench::to_csv(&points));

    let fit = bench::fit_scaling_exponent(&points, SizeAxis::Edges).unwrap();
    println!(
        "fitted exponent vs edges: {:.3} (r2 {:.3})",
        fit.exponent, fit.r_squared
    );

    // Sanity: the fitter recovers a known exponent from synthetic data.
    let synthetic: Vec<_> = [100u128, 200, 400, 800, 1600]
        .iter()
        .map(|&e| bench::BenchPoint {
            n: e as usize,
            m: 1,
            e: e as usize,
            median_ns: 5 * e * e,
            repetitions: bench::REPETITIONS,
            op: BenchOp::Mixture,
        })
        .collect();
    let check = bench::fit_scaling_exponent(&synthetic, SizeAxis::Edges).unwrap();
    println!(
        "synthetic quadratic input recovers exponent {:.4}",
        check.exponent
    );
}
