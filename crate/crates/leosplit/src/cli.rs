//! Command layer behind the `leosplit` binary.
//!
//! Each command loads a scenario (file or built-in defaults), applies the
//! shared flag overrides, runs the library, and renders pretty text, JSON,
//! or CSV. Machine formats are deterministic: the same config yields
//! byte-identical bytes.

use std::path::PathBuf;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimizer::{
    self, minimize_energy, minimize_energy_direct_download, oracle_grid_search, sweep_splits,
    SolveReport, SweepOutcome,
};
use crate::report::{
    compare_csv_row, round_solve_report, sig9, sweep_csv, Report, COMPARE_CSV_HEADER,
};
use crate::scenario::{
    builtin_presets, load_scenario_with, workload_preset, FsplDistanceMode, LoadOptions, Scenario,
    PRESET_NAMES,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Pretty,
    Json,
    Csv,
}

/// Flags shared by every scenario-consuming command.
#[derive(Debug, Clone, Default)]
pub struct CommonOpts {
    pub config: Option<PathBuf>,
    pub fspl_distance: Option<FsplDistanceMode>,
    pub pass_scale: Option<f64>,
    pub allow_unknown_keys: bool,
}

/// Loads the scenario a command operates on: the config file when given,
/// the built-in defaults otherwise, plus flag overrides.
pub fn load_from_opts(opts: &CommonOpts) -> Result<Scenario> {
    let text = match &opts.config {
        Some(path) => std::fs::read_to_string(path)?,
        None => String::new(),
    };
    let mut scenario = load_scenario_with(
        &text,
        &LoadOptions {
            allow_unknown_keys: opts.allow_unknown_keys,
        },
    )?;
    if let Some(mode) = opts.fspl_distance {
        scenario.set_fspl_mode(mode);
    }
    if let Some(scale) = opts.pass_scale {
        if scale <= 0.0 || !scale.is_finite() {
            return Err(Error::Validation(format!(
                "--pass-scale must be strictly positive, got {scale}"
            )));
        }
        scenario.pass_scale = scale;
    }
    Ok(scenario)
}

fn apply_preset(scenario: &mut Scenario, preset: &str) -> Result<()> {
    scenario.split = workload_preset(preset).ok_or_else(|| {
        Error::Validation(format!(
            "unknown preset `{preset}` (known: {})",
            PRESET_NAMES.join(", ")
        ))
    })?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Human-unit helpers (pretty output only)
// ---------------------------------------------------------------------------

fn human_seconds(s: f64) -> String {
    if s >= 60.0 {
        format!("{:.3} min", s / 60.0)
    } else if s >= 1.0 {
        format!("{s:.3} s")
    } else if s >= 1e-3 {
        format!("{:.3} ms", s * 1e3)
    } else {
        format!("{:.3} us", s * 1e6)
    }
}

fn human_meters(m: f64) -> String {
    format!("{:.3} km", m / 1e3)
}

fn human_joules(j: f64) -> String {
    if j >= 1.0 {
        format!("{j:.4} J")
    } else if j >= 1e-3 {
        format!("{:.4} mJ", j * 1e3)
    } else {
        format!("{:.4} uJ", j * 1e6)
    }
}

// ---------------------------------------------------------------------------
// geometry
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct GeometryResults {
    pub period_s: f64,
    pub slant_at_min_elev_m: f64,
    pub central_angle_rad: f64,
    pub pass_duration_s: f64,
    pub isl_distance_m: f64,
    pub mean_slant_m: f64,
    pub prop_delay_s: f64,
}

pub fn cmd_geometry(opts: &CommonOpts, format: OutputFormat) -> Result<String> {
    let scenario = load_from_opts(opts)?;
    let g = &scenario.geometry;
    let results = GeometryResults {
        period_s: sig9(g.period_s),
        slant_at_min_elev_m: sig9(g.slant_at_min_elev_m),
        central_angle_rad: sig9(g.central_angle_rad),
        pass_duration_s: sig9(g.pass_duration_s),
        isl_distance_m: sig9(g.isl_distance_m),
        mean_slant_m: sig9(g.mean_slant_m),
        prop_delay_s: sig9(g.prop_delay_s),
    };
    match format {
        OutputFormat::Json => Ok(Report::new("geometry", &scenario, results).to_json()),
        OutputFormat::Csv => {
            let mut s = String::from("field,value\n");
            for (k, v) in [
                ("period_s", results.period_s),
                ("slant_at_min_elev_m", results.slant_at_min_elev_m),
                ("central_angle_rad", results.central_angle_rad),
                ("pass_duration_s", results.pass_duration_s),
                ("isl_distance_m", results.isl_distance_m),
                ("mean_slant_m", results.mean_slant_m),
                ("prop_delay_s", results.prop_delay_s),
            ] {
                s.push_str(&format!("{k},{v:.8e}\n"));
            }
            Ok(s)
        }
        OutputFormat::Pretty => {
            let mut s = String::new();
            s.push_str(&format!(
                "pass geometry (config {})\n",
                scenario.fingerprint()
            ));
            s.push_str(&format!(
                "  orbital period     T_o     {:.8e} s    ({})\n",
                results.period_s,
                human_seconds(results.period_s)
            ));
            s.push_str(&format!(
                "  slant @ min elev   d(eps)  {:.8e} m    ({})\n",
                results.slant_at_min_elev_m,
                human_meters(results.slant_at_min_elev_m)
            ));
            s.push_str(&format!(
                "  central angle      alpha   {:.8e} rad  ({:.3} deg)\n",
                results.central_angle_rad,
                results.central_angle_rad.to_degrees()
            ));
            s.push_str(&format!(
                "  pass duration      T_pass  {:.8e} s    ({})\n",
                results.pass_duration_s,
                human_seconds(results.pass_duration_s)
            ));
            s.push_str(&format!(
                "  ISL distance       d_ISL   {:.8e} m    ({})\n",
                results.isl_distance_m,
                human_meters(results.isl_distance_m)
            ));
            s.push_str(&format!(
                "  mean slant range   dbar    {:.8e} m    ({})\n",
                results.mean_slant_m,
                human_meters(results.mean_slant_m)
            ));
            s.push_str(&format!(
                "  propagation delay  T_prop  {:.8e} s    ({})\n",
                results.prop_delay_s,
                human_seconds(results.prop_delay_s)
            ));
            Ok(s)
        }
    }
}

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct OracleComparison {
    pub points_per_axis: usize,
    pub oracle_e_total_j: f64,
    /// `(solver - oracle) / oracle`; negative when the solver is better.
    pub rel_gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimizeResults {
    pub split_label: String,
    pub solve: SolveReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleComparison>,
}

fn pretty_solve(s: &mut String, r: &SolveReport, scenario: &Scenario) {
    let b = &r.breakdown;
    s.push_str(&format!("  variant            {}\n", r.variant.as_str()));
    s.push_str(&format!(
        "  energy total       {:.8e} J  ({})\n",
        b.e_total_j,
        human_joules(b.e_total_j)
    ));
    for (label, e, t) in [
        ("sat processing ", b.e_proc_sat_j, b.t_proc_sat_s),
        ("downlink       ", b.e_comm_down_j, b.t_comm_down_s),
        ("ground proc    ", b.e_proc_ground_j, b.t_proc_ground_s),
        ("uplink         ", b.e_comm_up_j, b.t_comm_up_s),
        ("ISL handoff    ", b.e_isl_j, b.t_isl_s),
    ] {
        s.push_str(&format!("    {label}  {:.8e} J   {:.8e} s\n", e, t));
    }
    s.push_str(&format!(
        "  latency            {:.8e} s of {:.8e} s budget (prop {:.8e} s one-way)\n",
        b.t_total_s,
        scenario.pass_budget_s(),
        b.t_prop_s
    ));
    let a = &r.allocation;
    let fmt_opt = |v: Option<f64>, unit: &str| match v {
        Some(x) => format!("{x:.8e} {unit}"),
        None => "-".to_string(),
    };
    s.push_str(&format!(
        "  allocation         f_sat {}, f_ground {}, p_down {}, p_up {}\n",
        fmt_opt(a.freq_sat_hz, "Hz"),
        fmt_opt(a.freq_ground_hz, "Hz"),
        fmt_opt(a.power_down_w, "W"),
        fmt_opt(a.power_up_w, "W")
    ));
    s.push_str(&format!(
        "  active constraints {}\n",
        if r.active_constraints.is_empty() {
            "none".to_string()
        } else {
            r.active_constraints
                .iter()
                .map(|c| c.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        }
    ));
    if let Some(l) = r.lambda {
        s.push_str(&format!(
            "  lambda             {l:.8e} J/s ({} iterations, converged {})\n",
            r.iterations, r.converged
        ));
    }
}

pub fn cmd_optimize(
    opts: &CommonOpts,
    preset: Option<&str>,
    oracle_points: Option<usize>,
    format: OutputFormat,
) -> Result<String> {
    let mut scenario = load_from_opts(opts)?;
    if let Some(p) = preset {
        apply_preset(&mut scenario, p)?;
    }
    let solve = round_solve_report(&minimize_energy(&scenario)?);
    let oracle = match oracle_points {
        Some(points) => {
            let o = oracle_grid_search(&scenario, points)?;
            let gap = (solve.breakdown.e_total_j - o.breakdown.e_total_j) / o.breakdown.e_total_j;
            Some(OracleComparison {
                points_per_axis: points,
                oracle_e_total_j: sig9(o.breakdown.e_total_j),
                rel_gap: sig9(gap),
            })
        }
        None => None,
    };
    let results = OptimizeResults {
        split_label: scenario.split.split_label.clone(),
        solve,
        oracle,
    };
    match format {
        OutputFormat::Json => Ok(Report::new("optimize", &scenario, results).to_json()),
        OutputFormat::Csv => {
            let outcome = SweepOutcome {
                argmin_label: Some(results.split_label.clone()),
                entries: vec![optimizer::SweepEntry {
                    label: results.split_label.clone(),
                    outcome: Ok(results.solve),
                }],
            };
            Ok(sweep_csv(&outcome))
        }
        OutputFormat::Pretty => {
            let mut s = format!(
                "optimize `{}` (config {}, fspl {})\n",
                results.split_label,
                scenario.fingerprint(),
                scenario.fspl_distance_mode.as_str()
            );
            pretty_solve(&mut s, &results.solve, &scenario);
            if let Some(o) = &results.oracle {
                s.push_str(&format!(
                    "  oracle check       {:.8e} J at {} pts/axis, rel gap {:+.3e}\n",
                    o.oracle_e_total_j, o.points_per_axis, o.rel_gap
                ));
            }
            Ok(s)
        }
    }
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct CompareResults {
    pub split_label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split_learning: Option<SolveReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split_learning_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direct_download: Option<SolveReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direct_download_error: Option<String>,
    /// `100 (1 - E_SL / E_direct)`, present when both sides solved.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub savings_percent: Option<f64>,
}

pub fn cmd_compare(
    opts: &CommonOpts,
    preset: Option<&str>,
    format: OutputFormat,
) -> Result<String> {
    let mut scenario = load_from_opts(opts)?;
    if let Some(p) = preset {
        apply_preset(&mut scenario, p)?;
    }
    let sl = minimize_energy(&scenario);
    let dd = minimize_energy_direct_download(&scenario);
    // Both failing is a command failure; one side solving still reports.
    if sl.is_err() && dd.is_err() {
        return sl.map(|_| String::new());
    }
    let (sl, sl_err) = match sl {
        Ok(r) => (Some(round_solve_report(&r)), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let (dd, dd_err) = match dd {
        Ok(r) => (Some(round_solve_report(&r)), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let savings = match (&sl, &dd) {
        (Some(a), Some(b)) => Some(sig9(
            100.0 * (1.0 - a.breakdown.e_total_j / b.breakdown.e_total_j),
        )),
        _ => None,
    };
    let results = CompareResults {
        split_label: scenario.split.split_label.clone(),
        split_learning: sl,
        split_learning_error: sl_err,
        direct_download: dd,
        direct_download_error: dd_err,
        savings_percent: savings,
    };
    match format {
        OutputFormat::Json => Ok(Report::new("compare", &scenario, results).to_json()),
        OutputFormat::Csv => {
            let mut s = String::from(COMPARE_CSV_HEADER);
            s.push('\n');
            s.push_str(&compare_csv_row(
                "split_learning",
                results.split_learning.as_ref(),
            ));
            s.push('\n');
            s.push_str(&compare_csv_row(
                "direct_download",
                results.direct_download.as_ref(),
            ));
            s.push('\n');
            Ok(s)
        }
        OutputFormat::Pretty => {
            let mut s = format!(
                "compare `{}` (config {}, fspl {})\n",
                results.split_label,
                scenario.fingerprint(),
                scenario.fspl_distance_mode.as_str()
            );
            match (&results.split_learning, &results.split_learning_error) {
                (Some(r), _) => {
                    s.push_str("split learning:\n");
                    pretty_solve(&mut s, r, &scenario);
                }
                (None, Some(e)) => s.push_str(&format!("split learning: INFEASIBLE ({e})\n")),
                _ => {}
            }
            match (&results.direct_download, &results.direct_download_error) {
                (Some(r), _) => {
                    s.push_str("direct download:\n");
                    pretty_solve(&mut s, r, &scenario);
                }
                (None, Some(e)) => s.push_str(&format!("direct download: INFEASIBLE ({e})\n")),
                _ => {}
            }
            if let Some(p) = results.savings_percent {
                s.push_str(&format!("savings: {p:.6}% of direct-download energy\n"));
            }
            Ok(s)
        }
    }
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct SweepResults {
    pub outcome: SweepOutcome,
}

pub fn cmd_sweep(opts: &CommonOpts, presets: &[String], format: OutputFormat) -> Result<String> {
    let scenario = load_from_opts(opts)?;
    let catalog = if presets.is_empty() {
        vec![scenario.split.clone()]
    } else {
        presets
            .iter()
            .map(|name| {
                workload_preset(name).ok_or_else(|| {
                    Error::Validation(format!(
                        "unknown preset `{name}` (known: {})",
                        PRESET_NAMES.join(", ")
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?
    };
    let mut outcome = sweep_splits(&scenario, &catalog)?;
    if outcome.entries.iter().all(|e| e.outcome.is_err()) {
        let first = outcome.entries[0]
            .outcome
            .as_ref()
            .err()
            .cloned()
            .unwrap_or_default();
        return Err(Error::InfeasibleStage(format!(
            "all {} sweep entries are infeasible; first: {first}",
            outcome.entries.len()
        )));
    }
    for entry in &mut outcome.entries {
        if let Ok(r) = &mut entry.outcome {
            *r = round_solve_report(r);
        }
    }
    match format {
        OutputFormat::Json => {
            Ok(Report::new("sweep", &scenario, SweepResults { outcome }).to_json())
        }
        OutputFormat::Csv => Ok(sweep_csv(&outcome)),
        OutputFormat::Pretty => {
            let mut s = format!(
                "sweep over {} split point(s) (config {}, fspl {})\n",
                outcome.entries.len(),
                scenario.fingerprint(),
                scenario.fspl_distance_mode.as_str()
            );
            for entry in &outcome.entries {
                match &entry.outcome {
                    Ok(r) => {
                        let mark = if outcome.argmin_label.as_deref() == Some(&entry.label) {
                            "  <-- argmin"
                        } else {
                            ""
                        };
                        s.push_str(&format!(
                            "  {:14}  E = {:.8e} J  ({}), T = {:.8e} s{}\n",
                            entry.label,
                            r.breakdown.e_total_j,
                            human_joules(r.breakdown.e_total_j),
                            r.breakdown.t_total_s,
                            mark
                        ));
                    }
                    Err(e) => {
                        s.push_str(&format!("  {:14}  INFEASIBLE ({e})\n", entry.label));
                    }
                }
            }
            if let Some(l) = &outcome.argmin_label {
                s.push_str(&format!("minimum-energy split: {l}\n"));
            }
            Ok(s)
        }
    }
}

// ---------------------------------------------------------------------------
// presets
// ---------------------------------------------------------------------------

pub fn cmd_presets(format: OutputFormat) -> Result<String> {
    let presets = builtin_presets();
    match format {
        OutputFormat::Json => {
            let base = Scenario::builtin_default();
            #[derive(Serialize)]
            struct PresetRow {
                name: String,
                flops_sat_per_item: f64,
                flops_ground_per_item: f64,
                activation_bits_per_item: f64,
                gradient_bits_per_item: f64,
                model_bits: f64,
            }
            let rows: Vec<PresetRow> = presets
                .iter()
                .map(|p| PresetRow {
                    name: p.name.clone(),
                    flops_sat_per_item: p.scenario.split.flops_sat_per_item,
                    flops_ground_per_item: p.scenario.split.flops_ground_per_item,
                    activation_bits_per_item: p.scenario.split.activation_bits_per_item,
                    gradient_bits_per_item: p.scenario.split.gradient_bits_per_item,
                    model_bits: p.scenario.split.model_bits,
                })
                .collect();
            Ok(Report::new("presets", &base, rows).to_json())
        }
        _ => {
            let mut s = String::from(
                "built-in presets (per item: W1, W2 FLOPs; activations, gradients bits; model bits over ISL)\n",
            );
            for p in &presets {
                let w = &p.scenario.split;
                s.push_str(&format!(
                    "  {:14} W1 {:.6e}  W2 {:.6e}  act {:.6e}  grad {:.6e}  model {:.6e}\n",
                    p.name,
                    w.flops_sat_per_item,
                    w.flops_ground_per_item,
                    w.activation_bits_per_item,
                    w.gradient_bits_per_item,
                    w.model_bits
                ));
            }
            Ok(s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_pretty_contains_pass_anchor() {
        let out = cmd_geometry(&CommonOpts::default(), OutputFormat::Pretty).unwrap();
        assert!(out.contains("T_pass"), "{out}");
        assert!(out.contains("2.27178778e2"), "{out}");
        assert!(out.contains("3.786 min"), "{out}");
    }

    #[test]
    fn geometry_json_has_seven_fields() {
        let out = cmd_geometry(&CommonOpts::default(), OutputFormat::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let results = &v["results"];
        for key in [
            "period_s",
            "slant_at_min_elev_m",
            "central_angle_rad",
            "pass_duration_s",
            "isl_distance_m",
            "mean_slant_m",
            "prop_delay_s",
        ] {
            assert!(results.get(key).is_some(), "missing {key}");
        }
        assert_eq!(results.as_object().unwrap().len(), 7);
    }

    #[test]
    fn optimize_csv_is_one_row_with_schema_header() {
        let out = cmd_optimize(
            &CommonOpts::default(),
            Some("autoencoder"),
            None,
            OutputFormat::Csv,
        )
        .unwrap();
        let lines: Vec<&str> = out.trim_end().lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], crate::report::SOLVE_CSV_HEADER);
        assert!(lines[1].starts_with("autoencoder,solved,true,"));
    }

    #[test]
    fn compare_emits_both_variants_and_positive_savings() {
        let out = cmd_compare(&CommonOpts::default(), None, OutputFormat::Csv).unwrap();
        let lines: Vec<&str> = out.trim_end().lines().collect();
        assert_eq!(lines[0], COMPARE_CSV_HEADER);
        assert!(lines[1].starts_with("split_learning,"));
        assert!(lines[2].starts_with("direct_download,"));
        let json = cmd_compare(&CommonOpts::default(), None, OutputFormat::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let savings = v["results"]["savings_percent"].as_f64().unwrap();
        assert!(savings > 0.0, "savings {savings}");
    }

    #[test]
    fn sweep_flags_l3_argmin() {
        let presets: Vec<String> = ["resnet18_l1", "resnet18_l2", "resnet18_l3"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let out = cmd_sweep(&CommonOpts::default(), &presets, OutputFormat::Csv).unwrap();
        let argmin_rows: Vec<&str> = out
            .lines()
            .filter(|l| l.split(',').nth(2) == Some("true"))
            .collect();
        assert_eq!(argmin_rows.len(), 1);
        assert!(argmin_rows[0].starts_with("resnet18_l3,solved,true,"));
    }

    #[test]
    fn presets_lists_all_four() {
        let out = cmd_presets(OutputFormat::Pretty).unwrap();
        for name in PRESET_NAMES {
            assert!(out.contains(name), "missing {name} in {out}");
        }
    }

    #[test]
    fn identical_self_compare_has_zero_savings() {
        // Degenerate check of the savings formula: same energies -> 0%.
        let sl = minimize_energy(&Scenario::builtin_default()).unwrap();
        let savings = 100.0 * (1.0 - sl.breakdown.e_total_j / sl.breakdown.e_total_j);
        assert_eq!(savings, 0.0);
    }
}
