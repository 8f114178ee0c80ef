//! Derive the pass geometry of an orbital ring and show how it reacts to
//! altitude and elevation mask.
//!
//! Run with: `cargo run --example pass_geometry`

use leosplit::orbit::{OrbitShell, PassGeometry, PhysicalConstants};

fn main() -> leosplit::Result<()> {
    let consts = PhysicalConstants::default();

    let shell = OrbitShell::new(25, 550e3, 30f64.to_radians())?;
    let g = PassGeometry::derive(&shell, &consts, 1000)?;
    println!("25 satellites at 550 km, 30 deg mask:");
    println!(
        "  orbital period     {:10.1} s  ({:.1} min)",
        g.period_s,
        g.period_s / 60.0
    );
    println!(
        "  pass duration      {:10.1} s  ({:.2} min)",
        g.pass_duration_s,
        g.pass_duration_s / 60.0
    );
    println!(
        "  slant at mask      {:10.1} km",
        g.slant_at_min_elev_m / 1e3
    );
    println!("  mean slant range   {:10.1} km", g.mean_slant_m / 1e3);
    println!("  ISL distance       {:10.1} km", g.isl_distance_m / 1e3);
    println!("  propagation delay  {:10.3} ms", g.prop_delay_s * 1e3);

    println!("\npass duration vs altitude (30 deg mask):");
    for h_km in [340.0, 550.0, 800.0, 1200.0] {
        let shell = OrbitShell::new(25, h_km * 1e3, 30f64.to_radians())?;
        let g = PassGeometry::derive(&shell, &consts, 1000)?;
        println!(
            "  h = {h_km:6.0} km -> T_pass = {:6.1} s",
            g.pass_duration_s
        );
    }

    println!("\npass duration vs elevation mask (550 km):");
    for eps_deg in [10.0f64, 20.0, 30.0, 45.0, 60.0] {
        let shell = OrbitShell::new(25, 550e3, eps_deg.to_radians())?;
        let g = PassGeometry::derive(&shell, &consts, 1000)?;
        println!(
            "  eps = {eps_deg:4.0} deg -> T_pass = {:6.1} s",
            g.pass_duration_s
        );
    }
    Ok(())
}
