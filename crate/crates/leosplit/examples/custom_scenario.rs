//! Build a scenario from a TOML config with unit suffixes, then optimize it.
//!
//! Run with: `cargo run --example custom_scenario`

use leosplit::optimizer::minimize_energy;
use leosplit::scenario::load_scenario;

const CONFIG: &str = r#"
# A sparser, lower ring with a stronger ground station.
[constellation]
num_satellites = 12
altitude = "420 km"
min_elevation = "25 deg"

[communication]
max_tx_power = "5 W"
bandwidth = "250 MHz"
carrier = "26 GHz"
noise_power = "-118 dBW"
antenna_gain = "60 dBi"

[communication.uplink]
max_tx_power = "8 W"

[computing.ground]
num_cores = 4096
max_freq = "1.2 GHz"
power = "45 W"

[dataset]
num_items = 256
item_size = "2.4 Mbit"

[workload]
split_label = "demo_cnn"
flops_sat = "12 GFLOP"
flops_ground = "3 GFLOP"
activation_size = "96 kbit"
model_size = "40 Mbit"
"#;

fn main() -> leosplit::Result<()> {
    let scenario = load_scenario(CONFIG)?;
    println!(
        "loaded `{}`: {} satellites at {:.0} km, pass budget {:.1} s, fingerprint {}",
        scenario.split.split_label,
        scenario.shell.num_satellites,
        scenario.shell.altitude_m / 1e3,
        scenario.pass_budget_s(),
        scenario.fingerprint()
    );
    println!(
        "gradients default to the activation size: {:.0} kbit each way",
        scenario.split.gradient_bits_per_item / 1e3
    );

    let report = minimize_energy(&scenario)?;
    println!(
        "\noptimal energy {:.4} J in {:.2} s (of {:.2} s)",
        report.breakdown.e_total_j,
        report.breakdown.t_total_s,
        scenario.pass_budget_s()
    );
    println!(
        "clocks {:.0} / {:.0} MHz, powers {:.3} / {:.3} W",
        report.allocation.freq_sat_hz.unwrap() / 1e6,
        report.allocation.freq_ground_hz.unwrap() / 1e6,
        report.allocation.power_down_w.unwrap(),
        report.allocation.power_up_w.unwrap()
    );

    // The canonical form round-trips: rendering and reloading is identity.
    let canonical = scenario.to_config_toml();
    assert_eq!(load_scenario(&canonical)?, scenario);
    println!("\ncanonical config round-trips ({} bytes)", canonical.len());
    Ok(())
}
