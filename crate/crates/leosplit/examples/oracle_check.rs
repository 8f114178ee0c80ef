//! Verify a solve against the brute-force grid oracle: the solver must never
//! be worse than any feasible grid point, and the polished scan pins the
//! optimum tightly enough to bound the solver error from both sides.
//!
//! Run with: `cargo run --example oracle_check`

use leosplit::optimizer::{minimize_energy, oracle_grid_search, oracle_grid_search_refined};
use leosplit::scenario::{workload_preset, Scenario};

fn main() -> leosplit::Result<()> {
    let mut scenario = Scenario::builtin_default();
    scenario.split = workload_preset("resnet18_l2").expect("builtin preset");

    let solve = minimize_energy(&scenario)?;
    println!(
        "solver:          {:.9} J (lambda {:.4e}, {} iterations)",
        solve.breakdown.e_total_j,
        solve.lambda.unwrap(),
        solve.iterations
    );

    for points in [20, 50, 120] {
        let oracle = oracle_grid_search(&scenario, points)?;
        let gap =
            (solve.breakdown.e_total_j - oracle.breakdown.e_total_j) / oracle.breakdown.e_total_j;
        println!(
            "grid {points:>3}/axis:  {:.9} J ({} candidates, solver gap {:+.3e})",
            oracle.breakdown.e_total_j, oracle.iterations, gap
        );
    }

    let refined = oracle_grid_search_refined(&scenario, 50, 5)?;
    let gap =
        (solve.breakdown.e_total_j - refined.breakdown.e_total_j) / refined.breakdown.e_total_j;
    println!(
        "polished scan:   {:.9} J (two-sided solver gap {:+.3e})",
        refined.breakdown.e_total_j, gap
    );
    Ok(())
}
