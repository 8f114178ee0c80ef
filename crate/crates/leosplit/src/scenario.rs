//! Scenario assembly: TOML configs, built-in defaults, and presets.
//!
//! A scenario bundles everything one pass optimization needs: the orbital
//! shell, physical constants, both radio links (with the free-space path
//! loss already evaluated at the configured pass-level distance), the ISL,
//! both processors, the workload split, and the data batch. An empty config
//! yields the built-in default setup: a 25-satellite ring at 550 km with a
//! 30-degree mask, a 500 MHz / 20 GHz / 10 W link with 66.33 dBi combined
//! gain and -119 dBW noise, 1024-core 625 MHz / 15 W processors on both
//! segments, and a 400-image batch with the autoencoder split.
//!
//! Config sections mirror those blocks:
//!
//! ```toml
//! fspl_distance = "mean"          # or "worst_case"
//! pass_scale = 1.0
//! mean_slant_samples = 1000
//!
//! [constellation]
//! num_satellites = 25
//! altitude = "550 km"
//! min_elevation = "30 deg"
//!
//! [communication]
//! max_tx_power = "10 W"
//! bandwidth = "500 MHz"
//! carrier = "20 GHz"
//! noise_power = "-119 dBW"
//! antenna_gain = "66.33 dBi"
//! isl_tx_power = "0.5 W"
//! isl_rate = "5 Gbps"
//!
//! [communication.uplink]          # optional per-direction overrides
//! max_tx_power = "10 W"
//!
//! [computing]                     # shared by both segments unless overridden
//! num_cores = 1024
//! flops_per_cycle = 2
//! max_freq = "625 MHz"
//! power = "15 W"
//!
//! [computing.satellite]           # optional per-segment overrides
//! [computing.ground]
//!
//! [dataset]
//! num_items = 400
//! item_size = "1.605 Mbit"
//!
//! [workload]
//! preset = "autoencoder"          # or explicit fields, see below
//! ```
//!
//! Unknown keys are rejected unless loading is told otherwise; dB-valued
//! inputs (noise power, antenna gain) are converted to linear exactly once
//! at load time.

use std::collections::BTreeSet;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use toml::Table;

use crate::compute::{Batch, ProcessorSpec, WorkloadSplit};
use crate::error::{Error, Result};
use crate::link::{fspl, IslLink, RadioLink};
use crate::optimizer;
use crate::orbit::{OrbitShell, PassGeometry, PhysicalConstants};
use crate::units::{parse_quantity_str, Kind};

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

/// Which pass-level distance the free-space path loss is evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FsplDistanceMode {
    /// Pass-mean slant range (also used for propagation delay).
    Mean,
    /// Slant range at the minimum elevation angle (edge of the pass).
    WorstCase,
}

impl FsplDistanceMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            FsplDistanceMode::Mean => "mean",
            FsplDistanceMode::WorstCase => "worst_case",
        }
    }
}

impl FromStr for FsplDistanceMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(FsplDistanceMode::Mean),
            "worst_case" => Ok(FsplDistanceMode::WorstCase),
            other => Err(Error::Validation(format!(
                "fspl_distance must be `mean` or `worst_case`, got `{other}`"
            ))),
        }
    }
}

/// A fully assembled, validated scenario with its derived pass geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub shell: OrbitShell,
    pub consts: PhysicalConstants,
    pub link_down: RadioLink,
    pub link_up: RadioLink,
    pub isl: IslLink,
    pub proc_sat: ProcessorSpec,
    pub proc_ground: ProcessorSpec,
    pub split: WorkloadSplit,
    pub batch: Batch,
    pub fspl_distance_mode: FsplDistanceMode,
    /// Multiplier applied to the derived pass duration when budgeting.
    pub pass_scale: f64,
    /// Trapezoid samples for the pass-mean slant range.
    pub mean_slant_samples: u32,
    pub geometry: PassGeometry,
}

impl Scenario {
    /// The built-in default setup (see module docs), autoencoder split.
    pub fn builtin_default() -> Scenario {
        load_scenario("").expect("builtin defaults are valid")
    }

    /// Pass-time budget available to the optimizer, seconds.
    pub fn pass_budget_s(&self) -> f64 {
        self.geometry.pass_duration_s * self.pass_scale
    }

    /// Distance the path loss is evaluated at under `mode`.
    pub fn fspl_distance_m(&self, mode: FsplDistanceMode) -> f64 {
        match mode {
            FsplDistanceMode::Mean => self.geometry.mean_slant_m,
            FsplDistanceMode::WorstCase => self.geometry.slant_at_min_elev_m,
        }
    }

    /// Re-evaluates both links' path loss under a new distance mode.
    pub fn set_fspl_mode(&mut self, mode: FsplDistanceMode) {
        self.fspl_distance_mode = mode;
        let d = self.fspl_distance_m(mode);
        self.link_down.path_loss_linear = fspl(d, self.link_down.carrier_hz, &self.consts);
        self.link_up.path_loss_linear = fspl(d, self.link_up.carrier_hz, &self.consts);
    }

    /// Canonical config text: every key explicit, SI base units, bare
    /// numbers at full precision. Loading it back reproduces this scenario
    /// bit for bit.
    pub fn to_config_toml(&self) -> String {
        let f = |x: f64| format!("{x:.17e}");
        let mut s = String::new();
        s.push_str(&format!(
            "fspl_distance = \"{}\"\npass_scale = {}\nmean_slant_samples = {}\n",
            self.fspl_distance_mode.as_str(),
            f(self.pass_scale),
            self.mean_slant_samples
        ));
        s.push_str(&format!(
            "\n[constants]\nearth_radius = {}\nearth_mass = {}\ngravitational_constant = {}\nlight_speed = {}\n",
            f(self.consts.earth_radius_m),
            f(self.consts.earth_mass_kg),
            f(self.consts.gravitational_constant),
            f(self.consts.light_speed_m_s)
        ));
        s.push_str(&format!(
            "\n[constellation]\nnum_satellites = {}\naltitude = {}\nmin_elevation = {}\n",
            self.shell.num_satellites,
            f(self.shell.altitude_m),
            f(self.shell.min_elevation_rad)
        ));
        s.push_str(&format!(
            "\n[communication]\nmax_tx_power = {}\nbandwidth = {}\ncarrier = {}\nnoise_power = {}\nantenna_gain = {}\nisl_tx_power = {}\nisl_rate = {}\n",
            f(self.link_down.max_tx_power_w),
            f(self.link_down.bandwidth_hz),
            f(self.link_down.carrier_hz),
            f(self.link_down.noise_power_w),
            f(self.link_down.antenna_gain_linear),
            f(self.isl.tx_power_w),
            f(self.isl.data_rate_bps)
        ));
        s.push_str(&format!(
            "\n[communication.uplink]\nmax_tx_power = {}\nbandwidth = {}\ncarrier = {}\nnoise_power = {}\nantenna_gain = {}\n",
            f(self.link_up.max_tx_power_w),
            f(self.link_up.bandwidth_hz),
            f(self.link_up.carrier_hz),
            f(self.link_up.noise_power_w),
            f(self.link_up.antenna_gain_linear)
        ));
        for (name, p) in [("satellite", &self.proc_sat), ("ground", &self.proc_ground)] {
            s.push_str(&format!(
                "\n[computing.{name}]\nnum_cores = {}\nflops_per_cycle = {}\nmax_freq = {}\npower = {}\n",
                p.num_cores,
                p.flops_per_cycle,
                f(p.max_freq_hz),
                f(p.power_at_max_w)
            ));
        }
        s.push_str(&format!(
            "\n[dataset]\nnum_items = {}\nitem_size = {}\n",
            self.batch.num_items,
            f(self.batch.bits_per_item)
        ));
        s.push_str(&format!(
            "\n[workload]\nsplit_label = \"{}\"\nflops_sat = {}\nflops_ground = {}\nactivation_size = {}\ngradient_size = {}\nmodel_size = {}\n",
            self.split.split_label,
            f(self.split.flops_sat_per_item),
            f(self.split.flops_ground_per_item),
            f(self.split.activation_bits_per_item),
            f(self.split.gradient_bits_per_item),
            f(self.split.model_bits)
        ));
        s
    }

    /// SHA-256 over the canonical config text, first 16 hex chars.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.to_config_toml().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Accept config keys outside the schema instead of erroring.
    pub allow_unknown_keys: bool,
}

/// Loads a scenario from TOML text with strict unknown-key checking.
pub fn load_scenario(text: &str) -> Result<Scenario> {
    load_scenario_with(text, &LoadOptions::default())
}

pub fn load_scenario_with(text: &str, opts: &LoadOptions) -> Result<Scenario> {
    let root: Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Parse(e.to_string()))?;
    if !opts.allow_unknown_keys {
        check_unknown_keys(&root)?;
    }
    build_scenario(&root)
}

/// Leaf keys of the config schema.
const KNOWN_LEAVES: &[&str] = &[
    "fspl_distance",
    "pass_scale",
    "mean_slant_samples",
    "constants.earth_radius",
    "constants.earth_mass",
    "constants.gravitational_constant",
    "constants.light_speed",
    "constellation.num_satellites",
    "constellation.altitude",
    "constellation.min_elevation",
    "communication.max_tx_power",
    "communication.bandwidth",
    "communication.carrier",
    "communication.noise_power",
    "communication.antenna_gain",
    "communication.isl_tx_power",
    "communication.isl_rate",
    "communication.uplink.max_tx_power",
    "communication.uplink.bandwidth",
    "communication.uplink.carrier",
    "communication.uplink.noise_power",
    "communication.uplink.antenna_gain",
    "computing.num_cores",
    "computing.flops_per_cycle",
    "computing.max_freq",
    "computing.power",
    "computing.satellite.num_cores",
    "computing.satellite.flops_per_cycle",
    "computing.satellite.max_freq",
    "computing.satellite.power",
    "computing.ground.num_cores",
    "computing.ground.flops_per_cycle",
    "computing.ground.max_freq",
    "computing.ground.power",
    "dataset.num_items",
    "dataset.item_size",
    "workload.preset",
    "workload.split_label",
    "workload.flops_sat",
    "workload.flops_ground",
    "workload.activation_size",
    "workload.gradient_size",
    "workload.model_size",
];

/// Section paths that may appear as (possibly empty) tables.
const KNOWN_SECTIONS: &[&str] = &[
    "constants",
    "constellation",
    "communication",
    "communication.uplink",
    "computing",
    "computing.satellite",
    "computing.ground",
    "dataset",
    "workload",
];

fn check_unknown_keys(root: &Table) -> Result<()> {
    let known: BTreeSet<&str> = KNOWN_LEAVES.iter().chain(KNOWN_SECTIONS).copied().collect();
    let mut stack: Vec<(String, &toml::Value)> = root.iter().map(|(k, v)| (k.clone(), v)).collect();
    while let Some((path, value)) = stack.pop() {
        match value {
            toml::Value::Table(t) => {
                if !known.contains(path.as_str()) {
                    return Err(Error::UnknownKey(path));
                }
                for (k, v) in t {
                    stack.push((format!("{path}.{k}"), v));
                }
            }
            _ => {
                if !known.contains(path.as_str()) {
                    return Err(Error::UnknownKey(path));
                }
            }
        }
    }
    Ok(())
}

fn sub_table<'a>(parent: Option<&'a Table>, key: &str, path: &str) -> Result<Option<&'a Table>> {
    match parent.and_then(|t| t.get(key)) {
        None => Ok(None),
        Some(toml::Value::Table(t)) => Ok(Some(t)),
        Some(_) => Err(Error::Parse(format!("{path}: expected a table"))),
    }
}

fn get_quantity(
    tbl: Option<&Table>,
    key: &str,
    path: &str,
    kind: Kind,
    default: f64,
) -> Result<f64> {
    let Some(value) = tbl.and_then(|t| t.get(key)) else {
        return Ok(default);
    };
    let full = format!("{path}{key}");
    match value {
        toml::Value::Integer(i) => Ok(*i as f64),
        toml::Value::Float(f) => Ok(*f),
        toml::Value::String(s) => parse_quantity_str(s, kind, &full),
        _ => Err(Error::Parse(format!(
            "{full}: expected a number or quantity string"
        ))),
    }
}

fn get_int(tbl: Option<&Table>, key: &str, path: &str, default: u64) -> Result<u64> {
    let Some(value) = tbl.and_then(|t| t.get(key)) else {
        return Ok(default);
    };
    let full = format!("{path}{key}");
    match value {
        toml::Value::Integer(i) if *i >= 0 => Ok(*i as u64),
        _ => Err(Error::Parse(format!(
            "{full}: expected a non-negative integer"
        ))),
    }
}

fn get_string(tbl: Option<&Table>, key: &str, path: &str) -> Result<Option<String>> {
    match tbl.and_then(|t| t.get(key)) {
        None => Ok(None),
        Some(toml::Value::String(s)) => Ok(Some(s.clone())),
        Some(_) => Err(Error::Parse(format!("{path}{key}: expected a string"))),
    }
}

fn has_key(tbl: Option<&Table>, key: &str) -> bool {
    tbl.is_some_and(|t| t.contains_key(key))
}

fn processor_from(base: &ProcessorSpec, tbl: Option<&Table>, path: &str) -> Result<ProcessorSpec> {
    Ok(ProcessorSpec {
        num_cores: get_int(tbl, "num_cores", path, base.num_cores as u64)? as u32,
        flops_per_cycle: get_int(tbl, "flops_per_cycle", path, base.flops_per_cycle as u64)? as u32,
        max_freq_hz: get_quantity(tbl, "max_freq", path, Kind::Frequency, base.max_freq_hz)?,
        power_at_max_w: get_quantity(tbl, "power", path, Kind::Power, base.power_at_max_w)?,
    })
}

fn build_scenario(root: &Table) -> Result<Scenario> {
    let top = Some(root);

    // constants
    let ct = sub_table(top, "constants", "constants")?;
    let defaults = PhysicalConstants::default();
    let consts = PhysicalConstants {
        earth_radius_m: get_quantity(
            ct,
            "earth_radius",
            "constants.",
            Kind::Length,
            defaults.earth_radius_m,
        )?,
        earth_mass_kg: get_quantity(
            ct,
            "earth_mass",
            "constants.",
            Kind::Scalar,
            defaults.earth_mass_kg,
        )?,
        gravitational_constant: get_quantity(
            ct,
            "gravitational_constant",
            "constants.",
            Kind::Scalar,
            defaults.gravitational_constant,
        )?,
        light_speed_m_s: get_quantity(
            ct,
            "light_speed",
            "constants.",
            Kind::Scalar,
            defaults.light_speed_m_s,
        )?,
    };
    consts.validate()?;

    // constellation
    let cs = sub_table(top, "constellation", "constellation")?;
    let shell = OrbitShell {
        num_satellites: get_int(cs, "num_satellites", "constellation.", 25)? as u32,
        altitude_m: get_quantity(cs, "altitude", "constellation.", Kind::Length, 550e3)?,
        min_elevation_rad: get_quantity(
            cs,
            "min_elevation",
            "constellation.",
            Kind::Angle,
            30f64.to_radians(),
        )?,
    };
    shell.validate()?;

    // communication (downlink base, optional uplink overrides)
    let cm = sub_table(top, "communication", "communication")?;
    let down = RadioLink {
        bandwidth_hz: get_quantity(cm, "bandwidth", "communication.", Kind::Frequency, 500e6)?,
        carrier_hz: get_quantity(cm, "carrier", "communication.", Kind::Frequency, 20e9)?,
        antenna_gain_linear: get_quantity(
            cm,
            "antenna_gain",
            "communication.",
            Kind::Gain,
            crate::units::db_to_linear(66.33),
        )?,
        noise_power_w: get_quantity(
            cm,
            "noise_power",
            "communication.",
            Kind::Power,
            crate::units::db_to_linear(-119.0),
        )?,
        max_tx_power_w: get_quantity(cm, "max_tx_power", "communication.", Kind::Power, 10.0)?,
        path_loss_linear: 1.0, // resolved from geometry below
    };
    let ul = sub_table(cm, "uplink", "communication.uplink")?;
    let up = RadioLink {
        bandwidth_hz: get_quantity(
            ul,
            "bandwidth",
            "communication.uplink.",
            Kind::Frequency,
            down.bandwidth_hz,
        )?,
        carrier_hz: get_quantity(
            ul,
            "carrier",
            "communication.uplink.",
            Kind::Frequency,
            down.carrier_hz,
        )?,
        antenna_gain_linear: get_quantity(
            ul,
            "antenna_gain",
            "communication.uplink.",
            Kind::Gain,
            down.antenna_gain_linear,
        )?,
        noise_power_w: get_quantity(
            ul,
            "noise_power",
            "communication.uplink.",
            Kind::Power,
            down.noise_power_w,
        )?,
        max_tx_power_w: get_quantity(
            ul,
            "max_tx_power",
            "communication.uplink.",
            Kind::Power,
            down.max_tx_power_w,
        )?,
        path_loss_linear: 1.0,
    };
    let isl_tx_power_w = get_quantity(cm, "isl_tx_power", "communication.", Kind::Power, 0.5)?;
    let isl_rate_bps = get_quantity(cm, "isl_rate", "communication.", Kind::DataRate, 5e9)?;

    // computing
    let cp = sub_table(top, "computing", "computing")?;
    let table_defaults = ProcessorSpec {
        num_cores: 1024,
        flops_per_cycle: 2,
        max_freq_hz: 625e6,
        power_at_max_w: 15.0,
    };
    let base = processor_from(&table_defaults, cp, "computing.")?;
    let proc_sat = processor_from(
        &base,
        sub_table(cp, "satellite", "computing.satellite")?,
        "computing.satellite.",
    )?;
    let proc_ground = processor_from(
        &base,
        sub_table(cp, "ground", "computing.ground")?,
        "computing.ground.",
    )?;
    proc_sat.validate()?;
    proc_ground.validate()?;

    // dataset
    let ds = sub_table(top, "dataset", "dataset")?;
    let batch = Batch {
        num_items: get_int(ds, "num_items", "dataset.", 400)?,
        bits_per_item: get_quantity(ds, "item_size", "dataset.", Kind::DataBits, 1.605e6)?,
    };
    batch.validate()?;

    // workload
    let wl = sub_table(top, "workload", "workload")?;
    let explicit_keys = [
        "split_label",
        "flops_sat",
        "flops_ground",
        "activation_size",
        "gradient_size",
        "model_size",
    ];
    let any_explicit = explicit_keys.iter().any(|k| has_key(wl, k));
    let preset_name = get_string(wl, "preset", "workload.")?;
    let split = match preset_name {
        Some(name) => {
            if any_explicit {
                return Err(Error::Validation(
                    "workload.preset cannot be combined with explicit workload fields".into(),
                ));
            }
            workload_preset(&name).ok_or_else(|| {
                Error::Validation(format!(
                    "unknown workload preset `{name}` (known: {})",
                    PRESET_NAMES.join(", ")
                ))
            })?
        }
        None => {
            let base = autoencoder_split();
            let activation = get_quantity(
                wl,
                "activation_size",
                "workload.",
                Kind::DataBits,
                base.activation_bits_per_item,
            )?;
            WorkloadSplit {
                split_label: get_string(wl, "split_label", "workload.")?.unwrap_or_else(|| {
                    if any_explicit {
                        "custom".into()
                    } else {
                        base.split_label.clone()
                    }
                }),
                flops_sat_per_item: get_quantity(
                    wl,
                    "flops_sat",
                    "workload.",
                    Kind::Flops,
                    base.flops_sat_per_item,
                )?,
                flops_ground_per_item: get_quantity(
                    wl,
                    "flops_ground",
                    "workload.",
                    Kind::Flops,
                    base.flops_ground_per_item,
                )?,
                activation_bits_per_item: activation,
                gradient_bits_per_item: get_quantity(
                    wl,
                    "gradient_size",
                    "workload.",
                    Kind::DataBits,
                    activation,
                )?,
                model_bits: get_quantity(
                    wl,
                    "model_size",
                    "workload.",
                    Kind::DataBits,
                    base.model_bits,
                )?,
            }
        }
    };
    split.validate()?;

    // top-level switches
    let fspl_distance_mode = match get_string(top, "fspl_distance", "")? {
        Some(s) => s.parse()?,
        None => FsplDistanceMode::Mean,
    };
    let pass_scale = get_quantity(top, "pass_scale", "", Kind::Scalar, 1.0)?;
    if pass_scale <= 0.0 || !pass_scale.is_finite() {
        return Err(Error::Validation(format!(
            "pass_scale must be strictly positive, got {pass_scale}"
        )));
    }
    let mean_slant_samples = get_int(top, "mean_slant_samples", "", 1000)? as u32;
    if mean_slant_samples < 2 {
        return Err(Error::Validation(
            "mean_slant_samples must be at least 2".into(),
        ));
    }

    // derived geometry and path losses
    let geometry = PassGeometry::derive(&shell, &consts, mean_slant_samples)?;
    let mut scenario = Scenario {
        shell,
        consts,
        link_down: down,
        link_up: up,
        isl: IslLink {
            data_rate_bps: isl_rate_bps,
            tx_power_w: isl_tx_power_w,
            distance_m: geometry.isl_distance_m,
        },
        proc_sat,
        proc_ground,
        split,
        batch,
        fspl_distance_mode,
        pass_scale,
        mean_slant_samples,
        geometry,
    };
    scenario.set_fspl_mode(fspl_distance_mode);
    scenario.link_down.validate()?;
    scenario.link_up.validate()?;
    scenario.isl.validate()?;
    Ok(scenario)
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

pub const PRESET_NAMES: [&str; 4] = ["autoencoder", "resnet18_l1", "resnet18_l2", "resnet18_l3"];

fn autoencoder_split() -> WorkloadSplit {
    WorkloadSplit {
        split_label: "autoencoder".into(),
        flops_sat_per_item: 302e9,
        flops_ground_per_item: 39e6,
        activation_bits_per_item: 4.7e3,
        gradient_bits_per_item: 4.7e3,
        model_bits: 168.8e3,
    }
}

fn resnet_split(label: &str, w1: f64, w2: f64, d_tx: f64, d_isl: f64) -> WorkloadSplit {
    WorkloadSplit {
        split_label: label.into(),
        flops_sat_per_item: w1,
        flops_ground_per_item: w2,
        activation_bits_per_item: d_tx,
        gradient_bits_per_item: d_tx,
        model_bits: d_isl,
    }
}

/// Workload footprint of a built-in preset, if `name` is one.
pub fn workload_preset(name: &str) -> Option<WorkloadSplit> {
    match name {
        "autoencoder" => Some(autoencoder_split()),
        "resnet18_l1" => Some(resnet_split(
            "resnet18_l1",
            1.765e9,
            3.714e9,
            6.423e6,
            369.056e6,
        )),
        "resnet18_l2" => Some(resnet_split(
            "resnet18_l2",
            3.006e9,
            2.474e9,
            3.211e6,
            352.224e6,
        )),
        "resnet18_l3" => Some(resnet_split(
            "resnet18_l3",
            4.243e9,
            1.237e9,
            1.605e6,
            285.024e6,
        )),
        _ => None,
    }
}

/// A named quantity with the range regression tests hold it to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Anchor {
    pub name: String,
    pub min: f64,
    pub max: f64,
}

/// A ready-to-run scenario with its regression anchors.
#[derive(Debug, Clone, Serialize)]
pub struct Preset {
    pub name: String,
    pub scenario: Scenario,
    pub expected_anchors: Vec<Anchor>,
}

fn anchor(name: &str, min: f64, max: f64) -> Anchor {
    Anchor {
        name: name.into(),
        min,
        max,
    }
}

/// The four built-in presets under the default setup.
pub fn builtin_presets() -> Vec<Preset> {
    let base = Scenario::builtin_default();
    PRESET_NAMES
        .iter()
        .map(|&name| {
            let mut scenario = base.clone();
            scenario.split = workload_preset(name).expect("known preset");
            let mut anchors = vec![anchor("pass_duration_s", 3.7 * 60.0, 3.9 * 60.0)];
            if name == "autoencoder" {
                let w = 302.039e9;
                anchors.push(anchor(
                    "per_item_flops_total",
                    w * (1.0 - 1e-9),
                    w * (1.0 + 1e-9),
                ));
                anchors.push(anchor("direct_download_savings_frac", 1e-9, 1.0));
            } else {
                let w = 5.48e9;
                anchors.push(anchor("per_item_flops_total", w * 0.99, w * 1.01));
            }
            anchors.push(anchor("optimal_total_energy_j", 0.0, 1e6));
            Preset {
                name: name.to_string(),
                scenario,
                expected_anchors: anchors,
            }
        })
        .collect()
}

/// Computes the quantity an anchor names for a scenario.
pub fn evaluate_anchor(name: &str, scenario: &Scenario) -> Result<f64> {
    match name {
        "pass_duration_s" => Ok(scenario.geometry.pass_duration_s),
        "per_item_flops_total" => Ok(scenario.split.total_flops_per_item()),
        "optimal_total_energy_j" => Ok(optimizer::minimize_energy(scenario)?.breakdown.e_total_j),
        "direct_download_savings_frac" => {
            let sl = optimizer::minimize_energy(scenario)?.breakdown.e_total_j;
            let dd = optimizer::minimize_energy_direct_download(scenario)?
                .breakdown
                .e_total_j;
            Ok(1.0 - sl / dd)
        }
        other => Err(Error::Validation(format!("unknown anchor `{other}`"))),
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
