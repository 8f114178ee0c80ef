//! Ground-satellite link budget: free-space path loss, Shannon rate vs
//! transmit power, and the convex energy-vs-time transfer curve.
//!
//! Run with: `cargo run --example link_budget`

use leosplit::link::{
    comm_energy_vs_time, comm_time, fspl, isl_transfer, max_rate, min_comm_time, shannon_rate,
    IslLink, RadioLink,
};
use leosplit::orbit::PhysicalConstants;
use leosplit::units::{db_to_linear, linear_to_db};

fn main() -> leosplit::Result<()> {
    let consts = PhysicalConstants::default();

    // Path loss across typical pass distances at 20 GHz.
    println!("free-space path loss at 20 GHz:");
    for d_km in [550.0, 715.0, 993.0] {
        let pl = fspl(d_km * 1e3, 20e9, &consts);
        println!("  {d_km:6.0} km -> {:.2} dB", linear_to_db(pl));
    }

    // 500 MHz, 66.33 dBi combined gain, -119 dBW noise, 10 W cap, evaluated
    // at the pass-mean range of the default ring.
    let link = RadioLink {
        bandwidth_hz: 500e6,
        carrier_hz: 20e9,
        antenna_gain_linear: db_to_linear(66.33),
        noise_power_w: db_to_linear(-119.0),
        max_tx_power_w: 10.0,
        path_loss_linear: fspl(715_386.7, 20e9, &consts),
    };
    println!("\nShannon rate vs transmit power:");
    for p in [0.1, 1.0, 5.0, 10.0] {
        let r = shannon_rate(p, &link)?;
        println!("  {p:5.1} W -> {:6.3} Gbit/s", r / 1e9);
    }

    // Moving a 642 Mbit raw batch: faster costs disproportionately more.
    let bits = 400.0 * 1.605e6;
    let floor = min_comm_time(bits, &link);
    println!(
        "\n{:.0} Mbit transfer, energy vs allotted time:",
        bits / 1e6
    );
    for stretch in [1.0, 2.0, 10.0, 100.0, 1000.0] {
        let t = floor * stretch;
        let e = comm_energy_vs_time(bits, t, &link)?;
        println!("  t = {:9.3} s -> {:12.6} J", t, e);
    }
    println!(
        "(floor {floor:.3} s at the 10 W cap; rate there {:.2} Gbit/s, \
         full-power transfer takes {:.3} s)",
        max_rate(&link) / 1e9,
        comm_time(bits, 10.0, &link)?
    );

    // Fixed-rate ISL handoff of a 168.8 kbit encoder to the next satellite.
    let isl = IslLink {
        data_rate_bps: 5e9,
        tx_power_w: 0.5,
        distance_m: 1_734_863.0,
    };
    let (t, e) = isl_transfer(168.8e3, &isl, &consts);
    println!(
        "\nISL handoff: {:.1} us transfer + propagation = {:.3} ms total, {:.2} uJ",
        168.8e3 / 5e9 * 1e6,
        t * 1e3,
        e * 1e6
    );
    Ok(())
}
