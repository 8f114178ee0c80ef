//! Solve one pass: minimize total energy over both clocks and both transmit
//! powers subject to the pass deadline, and inspect the result.
//!
//! Run with: `cargo run --example optimize_pass`

use leosplit::optimizer::minimize_energy;
use leosplit::scenario::Scenario;

fn main() -> leosplit::Result<()> {
    let scenario = Scenario::builtin_default();
    println!(
        "scenario {}: {} x {} over a {:.1} s pass",
        scenario.fingerprint(),
        scenario.batch.num_items,
        scenario.split.split_label,
        scenario.pass_budget_s()
    );

    let report = minimize_energy(&scenario)?;
    let b = &report.breakdown;
    println!(
        "\noptimal energy {:.3} J, latency {:.3} s",
        b.e_total_j, b.t_total_s
    );
    println!("  {:<18} {:>12} {:>12}", "stage", "energy", "time");
    for (name, e, t) in [
        ("sat processing", b.e_proc_sat_j, b.t_proc_sat_s),
        ("downlink", b.e_comm_down_j, b.t_comm_down_s),
        ("ground processing", b.e_proc_ground_j, b.t_proc_ground_s),
        ("uplink", b.e_comm_up_j, b.t_comm_up_s),
        ("ISL handoff", b.e_isl_j, b.t_isl_s),
    ] {
        println!("  {name:<18} {e:>10.4} J {t:>10.4} s");
    }
    println!("  (plus 2 x {:.3} ms propagation)", b.t_prop_s * 1e3);

    let a = &report.allocation;
    println!("\nallocation:");
    println!("  satellite clock  {:.1} MHz", a.freq_sat_hz.unwrap() / 1e6);
    println!(
        "  ground clock     {:.1} MHz",
        a.freq_ground_hz.unwrap() / 1e6
    );
    println!("  downlink power   {:.4} W", a.power_down_w.unwrap());
    println!("  uplink power     {:.4} W", a.power_up_w.unwrap());
    println!(
        "\nmarginal price of pass time: {:.4} J/s (lambda), {} bisection iterations",
        report.lambda.unwrap(),
        report.iterations
    );
    println!(
        "active constraints: {:?}",
        report
            .active_constraints
            .iter()
            .map(|c| c.as_str())
            .collect::<Vec<_>>()
    );
    Ok(())
}
