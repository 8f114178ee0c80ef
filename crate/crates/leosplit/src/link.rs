//! Radio-link communication model.
//!
//! Ground-satellite transfers run at the Shannon rate
//! `R(p) = B log2(1 + p G / (FSPL sigma^2))` over a free-space channel, so
//! moving `D` bits takes `D / R(p)` seconds and costs `p D / R(p)` joules.
//! The time-domain form [`comm_energy_vs_time`] inverts the rate: delivering
//! the bits in exactly `t` seconds costs
//! `E(t) = t (FSPL sigma^2 / G) (2^(D/(B t)) - 1)`,
//! strictly convex and strictly decreasing in `t`, finite at the power-cap
//! floor and approaching the Shannon minimum-energy limit `a D ln2 / B` as
//! `t` grows.
//!
//! The inter-satellite handoff is a fixed-rate transfer: no decision
//! variable, just `D_ISL / R_ISL` seconds (plus propagation) at the ISL
//! transmit power.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbit::PhysicalConstants;

const LN2: f64 = std::f64::consts::LN_2;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Link-budget parameters of one ground-satellite channel.
///
/// `antenna_gain_linear` is the combined (tx + rx) gain of the link as a
/// linear factor; `path_loss_linear` is the free-space path loss already
/// evaluated at the pass-level distance chosen by the scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioLink {
    /// Allocated bandwidth, Hz.
    pub bandwidth_hz: f64,
    /// Carrier frequency, Hz.
    pub carrier_hz: f64,
    /// Combined antenna gain, linear.
    pub antenna_gain_linear: f64,
    /// Noise power in the allocated band, watts.
    pub noise_power_w: f64,
    /// Transmit power cap, watts.
    pub max_tx_power_w: f64,
    /// Free-space path loss, linear (>= 1).
    pub path_loss_linear: f64,
}

impl RadioLink {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("bandwidth_hz", self.bandwidth_hz),
            ("carrier_hz", self.carrier_hz),
            ("antenna_gain_linear", self.antenna_gain_linear),
            ("noise_power_w", self.noise_power_w),
            ("max_tx_power_w", self.max_tx_power_w),
            ("path_loss_linear", self.path_loss_linear),
        ] {
            if v <= 0.0 || !v.is_finite() {
                return Err(Error::Validation(format!(
                    "link field {name} must be strictly positive, got {v}"
                )));
            }
        }
        if self.path_loss_linear < 1.0 {
            return Err(Error::Validation(format!(
                "path_loss_linear must be >= 1, got {}",
                self.path_loss_linear
            )));
        }
        Ok(())
    }

    /// SNR per watt of transmit power: `G / (FSPL sigma^2)`, in 1/W.
    pub fn snr_per_watt(&self) -> f64 {
        self.antenna_gain_linear / (self.path_loss_linear * self.noise_power_w)
    }

    /// Energy-per-time scale `a = FSPL sigma^2 / G`, in watts.
    pub fn energy_scale_w(&self) -> f64 {
        1.0 / self.snr_per_watt()
    }

    /// Spectral efficiency at the power cap, bit/s/Hz.
    pub fn max_spectral_efficiency(&self) -> f64 {
        (1.0 + self.max_tx_power_w * self.snr_per_watt()).log2()
    }
}

/// Fixed-rate inter-satellite link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IslLink {
    /// Link data rate, bit/s.
    pub data_rate_bps: f64,
    /// Transmit power, watts.
    pub tx_power_w: f64,
    /// Distance to the successor satellite, meters.
    pub distance_m: f64,
}

impl IslLink {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("data_rate_bps", self.data_rate_bps),
            ("tx_power_w", self.tx_power_w),
            ("distance_m", self.distance_m),
        ] {
            if v <= 0.0 || !v.is_finite() {
                return Err(Error::Validation(format!(
                    "ISL field {name} must be strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Free-space path loss as a linear factor: `(4 pi d f / c)^2`.
pub fn fspl(distance_m: f64, carrier_hz: f64, consts: &PhysicalConstants) -> f64 {
    let x = 4.0 * std::f64::consts::PI * distance_m * carrier_hz / consts.light_speed_m_s;
    x * x
}

fn check_power(tx_power_w: f64, link: &RadioLink) -> Result<()> {
    if !tx_power_w.is_finite() || tx_power_w <= 0.0 || tx_power_w > link.max_tx_power_w {
        return Err(Error::ConstraintViolation(format!(
            "transmit power {tx_power_w} W outside (0, {}] W",
            link.max_tx_power_w
        )));
    }
    Ok(())
}

fn check_bits(bits: f64) -> Result<()> {
    if bits < 0.0 || !bits.is_finite() {
        return Err(Error::Domain(format!(
            "bits must be finite and >= 0, got {bits}"
        )));
    }
    Ok(())
}

/// Shannon rate at transmit power `p`: `B log2(1 + p G / (FSPL sigma^2))`.
///
/// Strictly increasing and strictly concave in `p`.
pub fn shannon_rate(tx_power_w: f64, link: &RadioLink) -> Result<f64> {
    check_power(tx_power_w, link)?;
    Ok(link.bandwidth_hz * (1.0 + tx_power_w * link.snr_per_watt()).log2())
}

/// Highest achievable rate (power pinned at the cap), bit/s.
pub fn max_rate(link: &RadioLink) -> f64 {
    link.bandwidth_hz * (1.0 + link.max_tx_power_w * link.snr_per_watt()).log2()
}

/// Transfer time for `bits` at power `p`: `bits / R(p)`.
pub fn comm_time(bits: f64, tx_power_w: f64, link: &RadioLink) -> Result<f64> {
    check_bits(bits)?;
    let rate = shannon_rate(tx_power_w, link)?;
    Ok(bits / rate)
}

/// Transfer energy for `bits` at power `p`: `p * bits / R(p)`.
pub fn comm_energy(bits: f64, tx_power_w: f64, link: &RadioLink) -> Result<f64> {
    Ok(tx_power_w * comm_time(bits, tx_power_w, link)?)
}

/// Shortest transfer time for `bits` (power pinned at the cap).
pub fn min_comm_time(bits: f64, link: &RadioLink) -> f64 {
    if bits == 0.0 {
        return 0.0;
    }
    bits / max_rate(link)
}

/// Energy when the transfer is stretched to exactly `alloc_time_s`:
/// `E(t) = t a (2^(D/(B t)) - 1)` with `a = FSPL sigma^2 / G`.
///
/// Strictly convex, strictly decreasing; equals `P_max * t` at the power-cap
/// floor. Errors when `t` is below that floor.
pub fn comm_energy_vs_time(bits: f64, alloc_time_s: f64, link: &RadioLink) -> Result<f64> {
    check_bits(bits)?;
    if bits == 0.0 {
        return Ok(0.0);
    }
    let t_min = min_comm_time(bits, link);
    if alloc_time_s < t_min {
        return Err(Error::InfeasibleStage(format!(
            "allotted {alloc_time_s} s below the {t_min} s floor at P_max"
        )));
    }
    let x = bits * LN2 / (link.bandwidth_hz * alloc_time_s);
    Ok(alloc_time_s * link.energy_scale_w() * x.exp_m1())
}

/// Derivative `dE/dt` of [`comm_energy_vs_time`] at `alloc_time_s` (negative).
///
/// With `x = D ln2 / (B t)`: `dE/dt = -a (x e^x - expm1(x))`.
pub fn comm_energy_vs_time_deriv(bits: f64, alloc_time_s: f64, link: &RadioLink) -> Result<f64> {
    check_bits(bits)?;
    if bits == 0.0 {
        return Ok(0.0);
    }
    let t_min = min_comm_time(bits, link);
    if alloc_time_s < t_min {
        return Err(Error::InfeasibleStage(format!(
            "allotted {alloc_time_s} s below the {t_min} s floor at P_max"
        )));
    }
    let x = bits * LN2 / (link.bandwidth_hz * alloc_time_s);
    Ok(-link.energy_scale_w() * (x * x.exp() - x.exp_m1()))
}

/// Transmit power that delivers `bits` in exactly `alloc_time_s` (inverse of
/// [`comm_time`] in the power argument), clamped to the cap within round-off.
pub fn power_for_time(bits: f64, alloc_time_s: f64, link: &RadioLink) -> Result<f64> {
    check_bits(bits)?;
    if bits == 0.0 {
        return Err(Error::Domain(
            "zero bits do not define a transmit power".into(),
        ));
    }
    if !alloc_time_s.is_finite() || alloc_time_s <= 0.0 {
        return Err(Error::Domain(format!(
            "alloc_time_s must be strictly positive, got {alloc_time_s}"
        )));
    }
    let x = bits * LN2 / (link.bandwidth_hz * alloc_time_s);
    let p = x.exp_m1() * link.energy_scale_w();
    if p > link.max_tx_power_w * (1.0 + 1e-9) {
        return Err(Error::InfeasibleStage(format!(
            "required power {p} W above P_max {}",
            link.max_tx_power_w
        )));
    }
    Ok(p.min(link.max_tx_power_w))
}

/// ISL handoff of the satellite-side model half: returns
/// `(time_s, energy_j)` where time covers transmission plus propagation and
/// energy covers transmission only.
pub fn isl_transfer(model_bits: f64, isl: &IslLink, consts: &PhysicalConstants) -> (f64, f64) {
    let tx_time = model_bits / isl.data_rate_bps;
    let prop = isl.distance_m / consts.light_speed_m_s;
    (tx_time + prop, isl.tx_power_w * tx_time)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
