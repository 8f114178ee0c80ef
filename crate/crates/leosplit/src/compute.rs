//! DVFS processing-time and energy model.
//!
//! A processor with `N_c` cores retiring `N_FLOPS` floating-point operations
//! per cycle at clock `f` sustains `N_c * N_FLOPS * f` FLOPS, so a batch of
//! `W` FLOPs takes `T = W / (N_c * N_FLOPS * f)`. Power follows the cubic
//! DVFS law `P(f) = P_p (f / f_max)^3`, which makes the energy of a fixed
//! amount of work quadratic in the clock:
//! `E = W * P_p * f^2 / (N_c * N_FLOPS * f_max^3)`.
//!
//! The time-domain form [`energy_vs_time`] eliminates the frequency: run the
//! work in exactly `t` seconds and the energy is `c / t^2` (strictly convex,
//! strictly decreasing), which is what the pass optimizer allocates against.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// DVFS parameters of one processing segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProcessorSpec {
    /// Number of cores.
    pub num_cores: u32,
    /// FLOPs retired per core per cycle.
    pub flops_per_cycle: u32,
    /// Maximum clock frequency, Hz.
    pub max_freq_hz: f64,
    /// Power draw at the maximum clock, watts.
    pub power_at_max_w: f64,
}

impl ProcessorSpec {
    pub fn new(
        num_cores: u32,
        flops_per_cycle: u32,
        max_freq_hz: f64,
        power_at_max_w: f64,
    ) -> Result<Self> {
        let spec = Self {
            num_cores,
            flops_per_cycle,
            max_freq_hz,
            power_at_max_w,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_cores == 0 {
            return Err(Error::Validation("num_cores must be >= 1".into()));
        }
        if self.flops_per_cycle == 0 {
            return Err(Error::Validation("flops_per_cycle must be >= 1".into()));
        }
        if self.max_freq_hz <= 0.0 || !self.max_freq_hz.is_finite() {
            return Err(Error::Validation(format!(
                "max_freq_hz must be strictly positive and finite, got {}",
                self.max_freq_hz
            )));
        }
        if self.power_at_max_w <= 0.0 || !self.power_at_max_w.is_finite() {
            return Err(Error::Validation(format!(
                "power_at_max_w must be strictly positive, got {}",
                self.power_at_max_w
            )));
        }
        Ok(())
    }

    /// FLOPs per cycle across all cores.
    pub fn flops_per_clock(&self) -> f64 {
        self.num_cores as f64 * self.flops_per_cycle as f64
    }

    /// Peak throughput in FLOPS at the maximum clock.
    pub fn peak_flops(&self) -> f64 {
        self.flops_per_clock() * self.max_freq_hz
    }

    /// Instantaneous power at clock `f`: `P_p (f / f_max)^3`.
    pub fn power_at(&self, freq_hz: f64) -> f64 {
        let ratio = freq_hz / self.max_freq_hz;
        self.power_at_max_w * ratio * ratio * ratio
    }
}

/// FLOP and transfer footprints of one split point of a sequential model.
///
/// All per-item fields scale with the batch; `model_bits` is the size of the
/// satellite-side model half handed over the ISL once per pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkloadSplit {
    /// Identifier of the split point.
    pub split_label: String,
    /// FLOPs per item on the satellite side (front of the model).
    pub flops_sat_per_item: f64,
    /// FLOPs per item on the ground side (back of the model).
    pub flops_ground_per_item: f64,
    /// Activation bits transferred per item on the downlink.
    pub activation_bits_per_item: f64,
    /// Gradient bits transferred per item on the uplink.
    pub gradient_bits_per_item: f64,
    /// Bits of the satellite-side model half (ISL handoff).
    pub model_bits: f64,
}

impl WorkloadSplit {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("flops_sat_per_item", self.flops_sat_per_item),
            ("flops_ground_per_item", self.flops_ground_per_item),
            ("activation_bits_per_item", self.activation_bits_per_item),
            ("gradient_bits_per_item", self.gradient_bits_per_item),
            ("model_bits", self.model_bits),
        ] {
            if v < 0.0 || !v.is_finite() {
                return Err(Error::Validation(format!(
                    "workload field {name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Total per-item work `W = W1 + W2`.
    pub fn total_flops_per_item(&self) -> f64 {
        self.flops_sat_per_item + self.flops_ground_per_item
    }
}

/// One batch of data processed during a pass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Batch {
    /// Number of items (e.g. images) in the batch.
    pub num_items: u64,
    /// Raw size of one item in bits.
    pub bits_per_item: f64,
}

impl Batch {
    pub fn validate(&self) -> Result<()> {
        if self.num_items < 1 {
            return Err(Error::Validation("num_items must be >= 1".into()));
        }
        if self.bits_per_item <= 0.0 || !self.bits_per_item.is_finite() {
            return Err(Error::Validation(format!(
                "bits_per_item must be strictly positive, got {}",
                self.bits_per_item
            )));
        }
        Ok(())
    }

    /// Total raw bits of the batch.
    pub fn total_bits(&self) -> f64 {
        self.num_items as f64 * self.bits_per_item
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

fn check_freq(freq_hz: f64, spec: &ProcessorSpec) -> Result<()> {
    if !freq_hz.is_finite() || freq_hz <= 0.0 || freq_hz > spec.max_freq_hz {
        return Err(Error::ConstraintViolation(format!(
            "processor frequency {freq_hz} Hz outside (0, {}] Hz",
            spec.max_freq_hz
        )));
    }
    Ok(())
}

fn check_work(total_flops: f64) -> Result<()> {
    if total_flops < 0.0 || !total_flops.is_finite() {
        return Err(Error::Domain(format!(
            "total_flops must be finite and >= 0, got {total_flops}"
        )));
    }
    Ok(())
}

/// Time to retire `total_flops` at clock `freq_hz`:
/// `T = W / (N_c * N_FLOPS * f)`.
pub fn proc_time(total_flops: f64, freq_hz: f64, spec: &ProcessorSpec) -> Result<f64> {
    check_work(total_flops)?;
    check_freq(freq_hz, spec)?;
    Ok(total_flops / (spec.flops_per_clock() * freq_hz))
}

/// Energy to retire `total_flops` at clock `freq_hz`:
/// `E = W * P_p * f^2 / (N_c * N_FLOPS * f_max^3)`, i.e. `P(f) * T`.
pub fn proc_energy(total_flops: f64, freq_hz: f64, spec: &ProcessorSpec) -> Result<f64> {
    check_work(total_flops)?;
    check_freq(freq_hz, spec)?;
    Ok(total_flops * spec.power_at_max_w * freq_hz * freq_hz
        / (spec.flops_per_clock() * spec.max_freq_hz.powi(3)))
}

/// Shortest time the work can take (clock pinned at `f_max`).
pub fn min_proc_time(total_flops: f64, spec: &ProcessorSpec) -> f64 {
    total_flops / spec.peak_flops()
}

/// Energy when the work is stretched to exactly `alloc_time_s`:
/// `E(t) = (P_p / f_max^3) * (W / (N_c * N_FLOPS))^3 / t^2`.
///
/// Strictly convex and strictly decreasing in `t`. Errors when `t` is below
/// the `f_max` floor.
pub fn energy_vs_time(total_flops: f64, alloc_time_s: f64, spec: &ProcessorSpec) -> Result<f64> {
    check_work(total_flops)?;
    if total_flops == 0.0 {
        return Ok(0.0);
    }
    let t_min = min_proc_time(total_flops, spec);
    if alloc_time_s < t_min {
        return Err(Error::InfeasibleStage(format!(
            "allotted {alloc_time_s} s below the {t_min} s floor at f_max"
        )));
    }
    // E(t) = P_p * t_min^3 / t^2 with t_min = W / (N_c * N_FLOPS * f_max)
    Ok(spec.power_at_max_w * t_min.powi(3) / (alloc_time_s * alloc_time_s))
}

/// Derivative `dE/dt` of [`energy_vs_time`] at `alloc_time_s` (negative).
pub fn energy_vs_time_deriv(
    total_flops: f64,
    alloc_time_s: f64,
    spec: &ProcessorSpec,
) -> Result<f64> {
    let e = energy_vs_time(total_flops, alloc_time_s, spec)?;
    Ok(-2.0 * e / alloc_time_s)
}

/// Clock that retires the work in exactly `alloc_time_s` (inverse of
/// [`proc_time`] in the frequency argument).
pub fn freq_for_time(total_flops: f64, alloc_time_s: f64, spec: &ProcessorSpec) -> Result<f64> {
    check_work(total_flops)?;
    if total_flops == 0.0 {
        return Err(Error::Domain(
            "zero work does not define a frequency".into(),
        ));
    }
    if !alloc_time_s.is_finite() || alloc_time_s <= 0.0 {
        return Err(Error::Domain(format!(
            "alloc_time_s must be strictly positive, got {alloc_time_s}"
        )));
    }
    let f = total_flops / (spec.flops_per_clock() * alloc_time_s);
    if f > spec.max_freq_hz * (1.0 + 1e-12) {
        return Err(Error::InfeasibleStage(format!(
            "required clock {f} Hz above f_max {}",
            spec.max_freq_hz
        )));
    }
    Ok(f.min(spec.max_freq_hz))
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
