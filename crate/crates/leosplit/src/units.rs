//! Unit-suffixed quantity parsing for scenario configs.
//!
//! Config values are either bare numbers in the SI base unit of the field or
//! strings like `"550 km"`, `"-119 dBW"`, `"66.33 dBi"`, `"302 GFLOP"`.
//! dB-valued inputs are converted to linear once, here, so all internal math
//! stays linear.

use crate::error::{Error, Result};

/// What a config field measures; selects the accepted unit suffixes and the
/// SI base unit a bare number is taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// meters; accepts `m`, `km`
    Length,
    /// hertz; accepts `Hz`, `kHz`, `MHz`, `GHz`
    Frequency,
    /// watts; accepts `W`, `mW`, `kW`, `dBW`, `dBm`
    Power,
    /// bits; accepts `bit`, `kbit`, `Mbit`, `Gbit` (plural forms too)
    DataBits,
    /// bits per second; accepts `bps`, `kbps`, `Mbps`, `Gbps`
    DataRate,
    /// radians; accepts `rad`, `deg`
    Angle,
    /// linear factor; accepts bare (linear), `dB`, `dBi`
    Gain,
    /// floating-point operations; accepts `FLOP`, `kFLOP`, `MFLOP`, `GFLOP`,
    /// `TFLOP` (plural and `...S` forms too)
    Flops,
    /// bare number, no unit accepted
    Scalar,
}

impl Kind {
    fn base_name(&self) -> &'static str {
        match self {
            Kind::Length => "m",
            Kind::Frequency => "Hz",
            Kind::Power => "W",
            Kind::DataBits => "bit",
            Kind::DataRate => "bps",
            Kind::Angle => "rad",
            Kind::Gain => "linear",
            Kind::Flops => "FLOP",
            Kind::Scalar => "",
        }
    }
}

/// `10^(db/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// `10 log10(x)`.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

fn strip_flops(unit: &str) -> Option<&str> {
    // FLOP / FLOPs / FLOPS with an optional k/M/G/T prefix.
    let rest = unit
        .strip_suffix("FLOPS")
        .or_else(|| unit.strip_suffix("FLOPs"))
        .or_else(|| unit.strip_suffix("FLOP"))?;
    Some(rest)
}

fn unit_factor(unit: &str, kind: Kind) -> Option<f64> {
    match kind {
        Kind::Length => match unit {
            "m" => Some(1.0),
            "km" => Some(1e3),
            _ => None,
        },
        Kind::Frequency => match unit {
            "Hz" => Some(1.0),
            "kHz" => Some(1e3),
            "MHz" => Some(1e6),
            "GHz" => Some(1e9),
            _ => None,
        },
        Kind::Power => match unit {
            "W" => Some(1.0),
            "mW" => Some(1e-3),
            "kW" => Some(1e3),
            _ => None, // dBW/dBm handled separately
        },
        Kind::DataBits => match unit.strip_suffix('s').unwrap_or(unit) {
            "bit" => Some(1.0),
            "kbit" => Some(1e3),
            "Mbit" => Some(1e6),
            "Gbit" => Some(1e9),
            _ => None,
        },
        Kind::DataRate => match unit {
            "bps" => Some(1.0),
            "kbps" => Some(1e3),
            "Mbps" => Some(1e6),
            "Gbps" => Some(1e9),
            _ => None,
        },
        Kind::Angle => match unit {
            "rad" => Some(1.0),
            "deg" => Some(std::f64::consts::PI / 180.0),
            _ => None,
        },
        Kind::Flops => match strip_flops(unit)? {
            "" => Some(1.0),
            "k" => Some(1e3),
            "M" => Some(1e6),
            "G" => Some(1e9),
            "T" => Some(1e12),
            _ => None,
        },
        Kind::Gain | Kind::Scalar => None,
    }
}

/// Parses a quantity string (`"550 km"`, `"550km"`, `"-119 dBW"`, `"0.5"`)
/// into the SI base unit of `kind`. `key` names the config field in errors.
pub fn parse_quantity_str(raw: &str, kind: Kind, key: &str) -> Result<f64> {
    let s = raw.trim();
    if s.is_empty() {
        return Err(Error::Parse(format!("{key}: empty quantity")));
    }
    // Longest numeric prefix; no unit starts with a digit, sign, dot or 'e'.
    let split = s
        .char_indices()
        .find(|&(i, c)| {
            !(c.is_ascii_digit() || c == '.' || c == '+' || c == '-' || c == 'e' || c == 'E')
                || (c == 'e' || c == 'E')
                    && !s[i + 1..]
                        .chars()
                        .next()
                        .is_some_and(|n| n.is_ascii_digit() || n == '+' || n == '-')
        })
        .map(|(i, _)| i)
        .unwrap_or(s.len());
    let (num_part, unit_part) = s.split_at(split);
    let unit = unit_part.trim();
    let value: f64 = num_part
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{key}: cannot parse number from `{raw}`")))?;

    if unit.is_empty() {
        return Ok(value);
    }
    // dB-valued forms convert to linear here.
    match (kind, unit) {
        (Kind::Power, "dBW") => return Ok(db_to_linear(value)),
        (Kind::Power, "dBm") => return Ok(db_to_linear(value - 30.0)),
        (Kind::Gain, "dB") | (Kind::Gain, "dBi") => return Ok(db_to_linear(value)),
        _ => {}
    }
    match unit_factor(unit, kind) {
        Some(factor) => Ok(value * factor),
        None => Err(Error::Parse(format!(
            "{key}: unknown unit `{unit}` for a {} quantity (base unit {})",
            kind_name(kind),
            kind.base_name()
        ))),
    }
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::Length => "length",
        Kind::Frequency => "frequency",
        Kind::Power => "power",
        Kind::DataBits => "data-size",
        Kind::DataRate => "data-rate",
        Kind::Angle => "angle",
        Kind::Gain => "gain",
        Kind::Flops => "work",
        Kind::Scalar => "scalar",
    }
}
