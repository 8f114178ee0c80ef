//! Deterministic machine reports.
//!
//! Machine output carries 9 significant digits in SI units; rerunning a
//! command on the same config yields byte-identical bytes (reports carry no
//! timestamps). CSV schemas are versioned by [`CSV_SCHEMA_VERSION`] and JSON
//! carries the same numerics.

use serde::Serialize;

use crate::optimizer::{SolveReport, SolverOptions, SweepOutcome};
use crate::scenario::Scenario;

/// Bumped whenever a CSV column set changes.
pub const CSV_SCHEMA_VERSION: u32 = 1;

/// Columns of one solve row (optimize and sweep commands).
pub const SOLVE_CSV_HEADER: &str = "split,status,argmin,e_proc_sat,e_comm_down,e_proc_ground,e_comm_up,e_isl,e_total,t_proc_sat,t_comm_down,t_prop,t_proc_ground,t_comm_up,t_isl,t_total,freq_sat_hz,freq_ground_hz,power_down_w,power_up_w,lambda,active_constraints";

/// Columns of one compare row.
pub const COMPARE_CSV_HEADER: &str =
    "variant,e_proc_sat,e_comm_down,e_proc_ground,e_comm_up,e_isl,e_total,t_total";

/// Rounds to 9 significant digits (the value every machine format carries).
pub fn sig9(x: f64) -> f64 {
    format!("{x:.8e}")
        .parse()
        .expect("formatted float reparses")
}

/// 9-significant-digit cell text for CSV.
pub fn cell(x: f64) -> String {
    format!("{x:.8e}")
}

fn opt_cell(x: Option<f64>) -> String {
    x.map(cell).unwrap_or_default()
}

/// Run metadata attached to every report.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub artifact_version: &'static str,
    pub csv_schema_version: u32,
    pub fspl_distance_mode: String,
    pub solver: SolverOptions,
}

impl Provenance {
    pub fn for_scenario(scenario: &Scenario) -> Self {
        Self {
            artifact_version: env!("CARGO_PKG_VERSION"),
            csv_schema_version: CSV_SCHEMA_VERSION,
            fspl_distance_mode: scenario.fspl_distance_mode.as_str().to_string(),
            solver: SolverOptions::default(),
        }
    }
}

/// Envelope of one command's machine output.
#[derive(Debug, Clone, Serialize)]
pub struct Report<T: Serialize> {
    /// Hash of the normalized scenario config.
    pub fingerprint: String,
    pub command: String,
    pub provenance: Provenance,
    pub results: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &str, scenario: &Scenario, results: T) -> Self {
        Self {
            fingerprint: scenario.fingerprint(),
            command: command.to_string(),
            provenance: Provenance::for_scenario(scenario),
            results,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Rounds every numeric field of a solve report to the machine precision so
/// JSON and CSV agree bit for bit.
pub fn round_solve_report(r: &SolveReport) -> SolveReport {
    let mut out = r.clone();
    let b = &mut out.breakdown;
    for v in [
        &mut b.e_proc_sat_j,
        &mut b.e_comm_down_j,
        &mut b.e_proc_ground_j,
        &mut b.e_comm_up_j,
        &mut b.e_isl_j,
        &mut b.e_total_j,
        &mut b.t_proc_sat_s,
        &mut b.t_comm_down_s,
        &mut b.t_prop_s,
        &mut b.t_proc_ground_s,
        &mut b.t_comm_up_s,
        &mut b.t_isl_s,
        &mut b.t_total_s,
    ] {
        *v = sig9(*v);
    }
    out.allocation.freq_sat_hz = out.allocation.freq_sat_hz.map(sig9);
    out.allocation.freq_ground_hz = out.allocation.freq_ground_hz.map(sig9);
    out.allocation.power_down_w = out.allocation.power_down_w.map(sig9);
    out.allocation.power_up_w = out.allocation.power_up_w.map(sig9);
    out.lambda = out.lambda.map(sig9);
    out
}

fn constraints_cell(r: &SolveReport) -> String {
    r.active_constraints
        .iter()
        .map(|c| c.as_str())
        .collect::<Vec<_>>()
        .join(";")
}

/// One row of the solve CSV schema.
pub fn solve_csv_row(split: &str, status: &str, argmin: bool, r: Option<&SolveReport>) -> String {
    match r {
        Some(r) => {
            let b = &r.breakdown;
            format!(
                "{split},{status},{argmin},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                cell(b.e_proc_sat_j),
                cell(b.e_comm_down_j),
                cell(b.e_proc_ground_j),
                cell(b.e_comm_up_j),
                cell(b.e_isl_j),
                cell(b.e_total_j),
                cell(b.t_proc_sat_s),
                cell(b.t_comm_down_s),
                cell(b.t_prop_s),
                cell(b.t_proc_ground_s),
                cell(b.t_comm_up_s),
                cell(b.t_isl_s),
                cell(b.t_total_s),
                opt_cell(r.allocation.freq_sat_hz),
                opt_cell(r.allocation.freq_ground_hz),
                opt_cell(r.allocation.power_down_w),
                opt_cell(r.allocation.power_up_w),
                opt_cell(r.lambda),
                constraints_cell(r)
            )
        }
        None => format!("{split},{status},{argmin},,,,,,,,,,,,,,,,,,,"),
    }
}

/// Full solve CSV for a sweep (or a single optimize row).
pub fn sweep_csv(outcome: &SweepOutcome) -> String {
    let mut s = String::from(SOLVE_CSV_HEADER);
    s.push('\n');
    for entry in &outcome.entries {
        let argmin = outcome.argmin_label.as_deref() == Some(entry.label.as_str());
        let row = match &entry.outcome {
            Ok(r) => {
                let rounded = round_solve_report(r);
                solve_csv_row(&entry.label, "solved", argmin, Some(&rounded))
            }
            Err(_) => solve_csv_row(&entry.label, "infeasible", false, None),
        };
        s.push_str(&row);
        s.push('\n');
    }
    s
}

/// One row of the compare CSV schema.
pub fn compare_csv_row(variant: &str, r: Option<&SolveReport>) -> String {
    match r {
        Some(r) => {
            let b = &r.breakdown;
            format!(
                "{variant},{},{},{},{},{},{},{}",
                cell(b.e_proc_sat_j),
                cell(b.e_comm_down_j),
                cell(b.e_proc_ground_j),
                cell(b.e_comm_up_j),
                cell(b.e_isl_j),
                cell(b.e_total_j),
                cell(b.t_total_s)
            )
        }
        None => format!("{variant},,,,,,,"),
    }
}
