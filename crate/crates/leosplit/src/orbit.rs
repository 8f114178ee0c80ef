//! Pass geometry of a circular LEO orbital ring.
//!
//! A ring of `N` evenly spaced satellites at altitude `h` flies over a ground
//! terminal that tracks anything above a minimum elevation angle. The
//! terminal is assumed to lie in the orbital plane, so every pass is the
//! maximal zenith pass and Earth rotation over the few minutes of a pass is
//! neglected. All quantities are SI: meters, seconds, radians.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used to absorb round-off when clamping arccos arguments near
/// grazing geometries.
const ARCCOS_CLAMP_TOL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Domain types
//---------------------------------------------------------------------------

/// Physical constants of the Earth model.
///
/// Note: `gravitational_constant` is the universal constant G in
/// m^3 kg^-1 s^-2. Antenna gain (also written G in link budgets) lives in
/// [`crate::link::RadioLink`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Mean Earth radius in meters.
    pub earth_radius_m: f64,
    /// Earth mass in kg.
    pub earth_mass_kg: f64,
    /// Universal gravitational constant in m^3 kg^-1 s^-2.
    pub gravitational_constant: f64,
    /// Speed of light in m/s.
    pub light_speed_m_s: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            earth_radius_m: 6_371_000.0,
            earth_mass_kg: 5.972e24,
            gravitational_constant: 6.674e-11,
            light_speed_m_s: 2.998e8,
        }
    }
}

impl PhysicalConstants {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("earth_radius_m", self.earth_radius_m),
            ("earth_mass_kg", self.earth_mass_kg),
            ("gravitational_constant", self.gravitational_constant),
            ("light_speed_m_s", self.light_speed_m_s),
        ] {
            if v <= 0.0 || !v.is_finite() {
                return Err(Error::Validation(format!(
                    "physical constant {name} must be strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Standard gravitational parameter GM in m^3/s^2.
    pub fn mu(&self) -> f64 {
        self.gravitational_constant * self.earth_mass_kg
    }
}

/// One circular orbital ring and the visibility cone of the ground terminal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitShell {
    /// Number of evenly spaced satellites in the ring.
    pub num_satellites: u32,
    /// Deployment altitude above the mean Earth surface, meters.
    pub altitude_m: f64,
    /// Minimum elevation angle for visibility, radians, in (0, pi/2).
    pub min_elevation_rad: f64,
}

impl OrbitShell {
    pub fn new(num_satellites: u32, altitude_m: f64, min_elevation_rad: f64) -> Result<Self> {
        let shell = Self {
            num_satellites,
            altitude_m,
            min_elevation_rad,
        };
        shell.validate()?;
        Ok(shell)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_satellites < 2 {
            return Err(Error::Validation(format!(
                "num_satellites must be >= 2, got {}",
                self.num_satellites
            )));
        }
        if self.altitude_m <= 0.0 || !self.altitude_m.is_finite() {
            return Err(Error::Validation(format!(
                "altitude_m must be strictly positive, got {}",
                self.altitude_m
            )));
        }
        if !self.min_elevation_rad.is_finite()
            || self.min_elevation_rad <= 0.0
            || self.min_elevation_rad >= std::f64::consts::FRAC_PI_2
        {
            return Err(Error::Validation(format!(
                "min_elevation_rad must lie in (0, pi/2), got {}",
                self.min_elevation_rad
            )));
        }
        Ok(())
    }
}

/// All derived geometry of one zenith pass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PassGeometry {
    /// Orbital period T_o, seconds.
    pub period_s: f64,
    /// Slant range at the minimum elevation angle (start/end of pass), meters.
    pub slant_at_min_elev_m: f64,
    /// Earth central angle subtended by the visible arc, radians.
    pub central_angle_rad: f64,
    /// Time the satellite spends inside the visibility cone, seconds.
    pub pass_duration_s: f64,
    /// Distance between consecutive satellites in the ring, meters.
    pub isl_distance_m: f64,
    /// Time-averaged slant range over the pass, meters.
    pub mean_slant_m: f64,
    /// One-way propagation delay at the mean slant range, seconds.
    pub prop_delay_s: f64,
}

impl PassGeometry {
    /// Derives the full pass geometry for a shell. `samples` controls the
    /// trapezoid rule used for the mean slant range (default elsewhere: 1000).
    pub fn derive(shell: &OrbitShell, consts: &PhysicalConstants, samples: u32) -> Result<Self> {
        shell.validate()?;
        consts.validate()?;
        let period_s = orbital_period(shell, consts);
        let slant_at_min_elev_m = slant_range(shell.min_elevation_rad, shell, consts)?;
        let central_angle_rad = pass_central_angle(shell, consts)?;
        let pass_duration_s = pass_duration(shell, consts)?;
        let isl_distance_m = isl_distance(shell, consts);
        let mean_slant_m = mean_slant_range(shell, consts, samples)?;
        let prop_delay_s = mean_slant_m / consts.light_speed_m_s;

        let geom = Self {
            period_s,
            slant_at_min_elev_m,
            central_angle_rad,
            pass_duration_s,
            isl_distance_m,
            mean_slant_m,
            prop_delay_s,
        };
        geom.validate(shell)?;
        Ok(geom)
    }

    fn validate(&self, shell: &OrbitShell) -> Result<()> {
        // Mean range sits between the zenith range (= h) and the edge range.
        let tol = 1e-9 * self.slant_at_min_elev_m;
        if self.mean_slant_m < shell.altitude_m - tol
            || self.mean_slant_m > self.slant_at_min_elev_m + tol
        {
            return Err(Error::InvalidGeometry(format!(
                "mean slant {} outside [h, d(eps_min)] = [{}, {}]",
                self.mean_slant_m, shell.altitude_m, self.slant_at_min_elev_m
            )));
        }
        if !(self.central_angle_rad > 0.0 && self.central_angle_rad < std::f64::consts::PI) {
            return Err(Error::InvalidGeometry(format!(
                "central angle {} outside (0, pi)",
                self.central_angle_rad
            )));
        }
        if !(self.pass_duration_s > 0.0 && self.pass_duration_s < self.period_s) {
            return Err(Error::InvalidGeometry(format!(
                "pass duration {} outside (0, T_o = {})",
                self.pass_duration_s, self.period_s
            )));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Orbital period of a circular orbit at the shell altitude:
/// `T_o = sqrt(4 pi^2 (R_E + h)^3 / (G M))`.
pub fn orbital_period(shell: &OrbitShell, consts: &PhysicalConstants) -> f64 {
    let r = consts.earth_radius_m + shell.altitude_m;
    (4.0 * std::f64::consts::PI.powi(2) * r.powi(3) / consts.mu()).sqrt()
}

/// Slant range from the ground terminal to the satellite at elevation `eps`:
/// `d(eps) = sqrt(R_E^2 sin^2 eps + 2 R_E h + h^2) - R_E sin eps`.
///
/// Strictly decreasing in elevation; `d(pi/2) = h` exactly.
pub fn slant_range(
    elevation_rad: f64,
    shell: &OrbitShell,
    consts: &PhysicalConstants,
) -> Result<f64> {
    if !elevation_rad.is_finite()
        || elevation_rad <= 0.0
        || elevation_rad > std::f64::consts::FRAC_PI_2
    {
        return Err(Error::Domain(format!(
            "elevation must lie in (0, pi/2], got {elevation_rad}"
        )));
    }
    let r = consts.earth_radius_m;
    let h = shell.altitude_m;
    let s = elevation_rad.sin();
    Ok((r * r * s * s + 2.0 * r * h + h * h).sqrt() - r * s)
}

/// Earth central angle of the visible arc:
/// `alpha = 2 arccos(((R_E+h)^2 + R_E^2 - d(eps_min)^2) / (2 (R_E^2 + R_E h)))`.
///
/// The arccos argument is clamped to `[-1, 1]` within 1e-12 to absorb
/// round-off near grazing geometries; anything further out is rejected.
pub fn pass_central_angle(shell: &OrbitShell, consts: &PhysicalConstants) -> Result<f64> {
    let d = slant_range(shell.min_elevation_rad, shell, consts)?;
    let r = consts.earth_radius_m;
    let h = shell.altitude_m;
    let arg = ((r + h) * (r + h) + r * r - d * d) / (2.0 * (r * r + r * h));
    let clamped = if arg.abs() <= 1.0 {
        arg
    } else if arg.abs() <= 1.0 + ARCCOS_CLAMP_TOL {
        arg.clamp(-1.0, 1.0)
    } else {
        return Err(Error::InvalidGeometry(format!(
            "arccos argument {arg} outside [-1, 1] beyond tolerance"
        )));
    };
    Ok(2.0 * clamped.acos())
}

/// Duration of the pass: the fraction of the orbit spent inside the cone,
/// `T_pass = T_o * alpha / (2 pi)`.
pub fn pass_duration(shell: &OrbitShell, consts: &PhysicalConstants) -> Result<f64> {
    let period = orbital_period(shell, consts);
    let alpha = pass_central_angle(shell, consts)?;
    Ok(period * alpha / (2.0 * std::f64::consts::PI))
}

/// Distance between consecutive satellites of the ring:
/// `d_ISL = 2 (R_E + h) sin(pi / N)`.
pub fn isl_distance(shell: &OrbitShell, consts: &PhysicalConstants) -> f64 {
    let r = consts.earth_radius_m + shell.altitude_m;
    2.0 * r * (std::f64::consts::PI / shell.num_satellites as f64).sin()
}

/// Time-averaged slant range over one zenith pass.
///
/// The satellite position is parametrized by the central angle
/// `phi in [-alpha/2, +alpha/2]`, traversed at uniform rate, with
/// `slant(phi) = sqrt(R_E^2 + (R_E+h)^2 - 2 R_E (R_E+h) cos phi)`.
/// Integrated by the trapezoid rule over `samples` points.
pub fn mean_slant_range(
    shell: &OrbitShell,
    consts: &PhysicalConstants,
    samples: u32,
) -> Result<f64> {
    if samples < 2 {
        return Err(Error::Domain(format!(
            "mean_slant_range needs at least 2 samples, got {samples}"
        )));
    }
    let alpha = pass_central_angle(shell, consts)?;
    let r = consts.earth_radius_m;
    let ra = r + shell.altitude_m;
    let half = alpha / 2.0;
    let n = samples as usize;
    let step = alpha / (n - 1) as f64;
    let slant_at = |phi: f64| (r * r + ra * ra - 2.0 * r * ra * phi.cos()).sqrt();

    let mut acc = 0.5 * (slant_at(-half) + slant_at(half));
    for i in 1..n - 1 {
        acc += slant_at(-half + step * i as f64);
    }
    Ok(acc / (n - 1) as f64)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn default_shell() -> OrbitShell {
        OrbitShell::new(25, 550e3, 30f64.to_radians()).unwrap()
    }

    fn consts() -> PhysicalConstants {
        PhysicalConstants::default()
    }

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn orbital_period_at_550km() {
        // Direct evaluation of the Kepler formula with default constants.
        let t = orbital_period(&default_shell(), &consts());
        assert!(rel_err(t, 5730.336710) < 1e-9, "T_o = {t}");
    }

    #[test]
    fn orbital_period_surface_grazing_lower_bound() {
        // h = 0 evaluates to ~5061 s with the default constants; every
        // physical shell (h > 0) must give a longer period.
        let zero = OrbitShell {
            num_satellites: 25,
            altitude_m: 0.0,
            min_elevation_rad: 0.5,
        };
        let t0 = orbital_period(&zero, &consts());
        assert!(rel_err(t0, 5061.022584) < 1e-9, "T_o(0) = {t0}");
        let t = orbital_period(&default_shell(), &consts());
        assert!(t > t0);
    }

    #[test]
    fn orbital_period_monotone_in_altitude() {
        let lo = OrbitShell::new(25, 550e3, 0.5).unwrap();
        let hi = OrbitShell::new(25, 1200e3, 0.5).unwrap();
        assert!(orbital_period(&hi, &consts()) > orbital_period(&lo, &consts()));
    }

    #[test]
    fn slant_range_at_zenith_equals_altitude() {
        let d = slant_range(std::f64::consts::FRAC_PI_2, &default_shell(), &consts()).unwrap();
        assert!(rel_err(d, 550e3) < 1e-12, "d(pi/2) = {d}");
    }

    #[test]
    fn slant_range_at_30deg() {
        let d = slant_range(30f64.to_radians(), &default_shell(), &consts()).unwrap();
        assert!(rel_err(d, 992_778.383497) < 1e-9, "d(30deg) = {d}");
    }

    #[test]
    fn slant_range_strictly_decreasing_in_elevation() {
        let shell = default_shell();
        let c = consts();
        let mut prev = f64::INFINITY;
        for i in 1..=90 {
            let eps = f64::from(i).to_radians();
            let d = slant_range(eps, &shell, &c).unwrap();
            assert!(d < prev, "d({}deg) = {d} not below {prev}", i);
            prev = d;
        }
    }

    #[test]
    fn slant_range_rejects_out_of_domain_elevation() {
        let shell = default_shell();
        let c = consts();
        assert!(matches!(
            slant_range(0.0, &shell, &c),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            slant_range(-0.1, &shell, &c),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            slant_range(std::f64::consts::FRAC_PI_2 + 0.01, &shell, &c),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn central_angle_default_scenario() {
        let a = pass_central_angle(&default_shell(), &consts()).unwrap();
        assert!(rel_err(a, 0.2490964202) < 1e-8, "alpha = {a}");
    }

    #[test]
    fn central_angle_vanishes_at_overhead_only_visibility() {
        // eps_min -> pi/2 collapses the cone to the zenith point.
        let shell = OrbitShell {
            num_satellites: 25,
            altitude_m: 550e3,
            min_elevation_rad: std::f64::consts::FRAC_PI_2 - 1e-9,
        };
        let a = pass_central_angle(&shell, &consts()).unwrap();
        assert!((0.0..1e-6).contains(&a), "alpha = {a}");
    }

    #[test]
    fn central_angle_grows_as_min_elevation_drops() {
        let c = consts();
        let mut prev = 0.0;
        for deg in [80.0f64, 60.0, 45.0, 30.0, 10.0, 2.0] {
            let shell = OrbitShell::new(25, 550e3, deg.to_radians()).unwrap();
            let a = pass_central_angle(&shell, &c).unwrap();
            assert!(a > prev, "alpha({deg}) = {a} not above {prev}");
            prev = a;
        }
    }

    #[test]
    fn pass_duration_default_ring_anchor() {
        // ~3.8 minutes for the default constellation.
        let t = pass_duration(&default_shell(), &consts()).unwrap();
        assert!(rel_err(t, 227.178778) < 1e-8, "T_pass = {t}");
        let minutes = t / 60.0;
        assert!(
            (3.7..=3.9).contains(&minutes),
            "T_pass = {minutes} min outside [3.7, 3.9]"
        );
    }

    #[test]
    fn pass_duration_is_orbit_fraction() {
        // A hypothetical full-circle cone gives T_pass = T_o, and the ratio
        // scales linearly with the central angle.
        let shell = default_shell();
        let c = consts();
        let period = orbital_period(&shell, &c);
        let alpha = pass_central_angle(&shell, &c).unwrap();
        let t = pass_duration(&shell, &c).unwrap();
        let full_circle = period * (2.0 * std::f64::consts::PI) / (2.0 * std::f64::consts::PI);
        assert!(rel_err(full_circle, period) < 1e-15);
        let doubled = period * (2.0 * alpha) / (2.0 * std::f64::consts::PI);
        assert!(rel_err(doubled, 2.0 * t) < 1e-12);
    }

    #[test]
    fn pass_duration_below_half_orbit_for_steep_cones() {
        let c = consts();
        for (h, eps) in [
            (550e3, 30.0f64),
            (1200e3, 45.0),
            (2000e3, 30.0),
            (340e3, 60.0),
        ] {
            let shell = OrbitShell::new(25, h, eps.to_radians()).unwrap();
            let t = pass_duration(&shell, &c).unwrap();
            let period = orbital_period(&shell, &c);
            assert!(t < period / 2.0, "T_pass {t} >= T_o/2 at h={h} eps={eps}");
        }
    }

    #[test]
    fn isl_distance_default_scenario() {
        let d = isl_distance(&default_shell(), &consts());
        assert!(rel_err(d, 1_734_862.618997) < 1e-9, "d_ISL = {d}");
    }

    #[test]
    fn isl_distance_antipodal_for_two_satellites() {
        let shell = OrbitShell::new(2, 550e3, 0.5).unwrap();
        let c = consts();
        let d = isl_distance(&shell, &c);
        assert!(rel_err(d, 2.0 * (c.earth_radius_m + 550e3)) < 1e-15);
    }

    #[test]
    fn isl_distance_decreasing_in_ring_size() {
        let c = consts();
        let mut prev = f64::INFINITY;
        for n in [2u32, 3, 5, 10, 25, 60, 500] {
            let shell = OrbitShell::new(n, 550e3, 0.5).unwrap();
            let d = isl_distance(&shell, &c);
            assert!(d < prev, "d_ISL({n}) = {d} not below {prev}");
            prev = d;
        }
    }

    #[test]
    fn mean_slant_matches_dense_oracle() {
        // 1000-sample trapezoid vs a 10x denser oracle evaluation.
        let shell = default_shell();
        let c = consts();
        let d1k = mean_slant_range(&shell, &c, 1000).unwrap();
        let d10k = mean_slant_range(&shell, &c, 10_000).unwrap();
        assert!(rel_err(d1k, 715_386.684980) < 1e-9, "dbar(1k) = {d1k}");
        assert!(rel_err(d10k, 715_386.457750) < 1e-9, "dbar(10k) = {d10k}");
        assert!(rel_err(d1k, d10k) < 1e-6);
    }

    #[test]
    fn mean_slant_self_convergence() {
        let shell = default_shell();
        let c = consts();
        for k in [1000u32, 2000, 4000] {
            let a = mean_slant_range(&shell, &c, k).unwrap();
            let b = mean_slant_range(&shell, &c, 2 * k).unwrap();
            assert!(rel_err(a, b) < 1e-6, "k = {k}: {a} vs {b}");
        }
    }

    #[test]
    fn mean_slant_degenerate_pass_tends_to_altitude() {
        let shell = OrbitShell {
            num_satellites: 25,
            altitude_m: 550e3,
            min_elevation_rad: std::f64::consts::FRAC_PI_2 - 1e-7,
        };
        let d = mean_slant_range(&shell, &consts(), 100).unwrap();
        assert!(rel_err(d, 550e3) < 1e-6, "dbar = {d}");
    }

    #[test]
    fn mean_slant_bounded_by_altitude_and_edge_range() {
        let c = consts();
        for (n, h, eps) in [
            (25u32, 550e3, 30.0f64),
            (40, 1200e3, 10.0),
            (12, 800e3, 45.0),
            (3, 2000e3, 5.0),
        ] {
            let shell = OrbitShell::new(n, h, eps.to_radians()).unwrap();
            let dbar = mean_slant_range(&shell, &c, 1000).unwrap();
            let edge = slant_range(shell.min_elevation_rad, &shell, &c).unwrap();
            assert!(
                dbar >= h && dbar <= edge,
                "h={h} eps={eps}: {dbar} vs {edge}"
            );
            // Any elevation above the minimum gives a shorter range than the edge.
            let mid = slant_range(
                (shell.min_elevation_rad + std::f64::consts::FRAC_PI_2) / 2.0,
                &shell,
                &c,
            )
            .unwrap();
            assert!(mid <= edge);
        }
    }

    #[test]
    fn derive_is_deterministic() {
        let shell = default_shell();
        let c = consts();
        let a = PassGeometry::derive(&shell, &c, 1000).unwrap();
        let b = PassGeometry::derive(&shell, &c, 1000).unwrap();
        assert_eq!(a, b);
        assert!(rel_err(a.prop_delay_s, a.mean_slant_m / c.light_speed_m_s) < 1e-15);
    }

    #[test]
    fn shell_validation_rejects_bad_inputs() {
        assert!(OrbitShell::new(1, 550e3, 0.5).is_err());
        assert!(OrbitShell::new(25, 0.0, 0.5).is_err());
        assert!(OrbitShell::new(25, -1.0, 0.5).is_err());
        assert!(OrbitShell::new(25, 550e3, 0.0).is_err());
        assert!(OrbitShell::new(25, 550e3, std::f64::consts::FRAC_PI_2).is_err());
    }
}
