//! The DVFS compute model: cubic power law, quadratic energy in the clock,
//! and the inverse-square energy-vs-time curve the optimizer allocates on.
//!
//! Run with: `cargo run --example dvfs_energy`

use leosplit::compute::{energy_vs_time, min_proc_time, proc_energy, proc_time, ProcessorSpec};

fn main() -> leosplit::Result<()> {
    // 1024 cores, 2 FLOPs/cycle, 625 MHz, 15 W: a 1.28 TFLOPS onboard unit.
    let spec = ProcessorSpec::new(1024, 2, 625e6, 15.0)?;
    println!("peak throughput: {:.2} TFLOPS", spec.peak_flops() / 1e12);

    // A 400-image batch through a 302 GFLOP-per-image encoder.
    let work = 400.0 * 302e9;
    println!("\nclock sweep for {:.1} TFLOP of work:", work / 1e12);
    println!(
        "  {:>10} {:>12} {:>12} {:>10}",
        "clock", "time", "energy", "power"
    );
    for frac in [1.0, 0.75, 0.5, 0.25] {
        let f = spec.max_freq_hz * frac;
        let t = proc_time(work, f, &spec)?;
        let e = proc_energy(work, f, &spec)?;
        println!(
            "  {:>7.0} MHz {:>10.1} s {:>10.1} J {:>8.2} W",
            f / 1e6,
            t,
            e,
            spec.power_at(f)
        );
    }

    // Same work as a function of allotted time: E(t) = E_min (t_min / t)^2.
    let t_min = min_proc_time(work, &spec);
    println!("\nenergy when stretched to fill an allotted time:");
    for stretch in [1.0, 1.5, 2.0, 2.4] {
        let t = t_min * stretch;
        let e = energy_vs_time(work, t, &spec)?;
        println!("  t = {:6.1} s ({:>4.1}x floor) -> {:7.1} J", t, stretch, e);
    }
    println!("(the floor {t_min:.1} s is the f_max clock; slower is impossible)");
    Ok(())
}
