//! Per-pass energy minimization.
//!
//! The decision variables are the two processor clocks and the two transmit
//! powers. A change of variables turns each of the four stages into a
//! strictly convex, strictly decreasing energy-vs-duration curve with a box
//! floor (the clock/power cap), so the problem becomes a separable convex
//! allocation of the pass budget
//!
//! `min sum_i E_i(t_i)  s.t.  sum_i t_i <= T_budget, t_i >= t_i_min`
//!
//! solved by bisection on the Lagrange multiplier `lambda` (the marginal
//! energy price of one second of pass time): for a given price each stage
//! answers `-E_i'(t_i) = lambda` on its own — in closed form for compute
//! stages, by a safeguarded Newton iteration for comm stages — and the
//! bisection drives the total duration onto the budget. Durations map back
//! to clocks and powers through the inverse time models.
//!
//! [`oracle_grid_search`] is the verification path: a brute-force scan of a
//! log-spaced grid over the same decision boxes, evaluating the same
//! frequency/power-domain models with no knowledge of the solver internals.

use serde::{Deserialize, Serialize};

use crate::compute::{self, ProcessorSpec};
use crate::error::{Error, Result, StageMin};
use crate::link::{self, RadioLink};
use crate::scenario::Scenario;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Which problem structure a report came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Satellite runs the front split, ground the back split.
    SplitLearning,
    /// Raw batch downlinked, whole model runs on the ground.
    DirectDownload,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::SplitLearning => "split_learning",
            Variant::DirectDownload => "direct_download",
        }
    }
}

/// Decision variables of the Eq.-style allocation. Fields not present in a
/// variant (e.g. the satellite clock in the direct-download baseline, or a
/// degenerate zero-work stage) are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Allocation {
    /// Satellite processor clock, Hz.
    pub freq_sat_hz: Option<f64>,
    /// Ground processor clock, Hz.
    pub freq_ground_hz: Option<f64>,
    /// Downlink transmit power, W.
    pub power_down_w: Option<f64>,
    /// Uplink transmit power, W.
    pub power_up_w: Option<f64>,
}

/// Per-term energy and latency of one pass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub e_proc_sat_j: f64,
    pub e_comm_down_j: f64,
    pub e_proc_ground_j: f64,
    pub e_comm_up_j: f64,
    pub e_isl_j: f64,
    pub e_total_j: f64,
    pub t_proc_sat_s: f64,
    pub t_comm_down_s: f64,
    /// One-way ground-satellite propagation delay (counted twice in the
    /// split-learning latency, once in the direct-download baseline).
    pub t_prop_s: f64,
    pub t_proc_ground_s: f64,
    pub t_comm_up_s: f64,
    pub t_isl_s: f64,
    pub t_total_s: f64,
}

/// Constraints that are tight at the reported solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActiveConstraint {
    Latency,
    FreqSatMax,
    FreqGroundMax,
    PowerDownMax,
    PowerUpMax,
}

impl ActiveConstraint {
    pub fn as_str(&self) -> &'static str {
        match self {
            ActiveConstraint::Latency => "latency",
            ActiveConstraint::FreqSatMax => "f_sat_max",
            ActiveConstraint::FreqGroundMax => "f_gs_max",
            ActiveConstraint::PowerDownMax => "p_down_max",
            ActiveConstraint::PowerUpMax => "p_up_max",
        }
    }
}

/// Outcome of one optimization (or one oracle scan).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub variant: Variant,
    pub allocation: Allocation,
    pub breakdown: EnergyBreakdown,
    /// Sorted set of tight constraints.
    pub active_constraints: Vec<ActiveConstraint>,
    /// Marginal energy per second of pass budget, J/s. `None` for grid-oracle
    /// reports, which carry no multiplier.
    pub lambda: Option<f64>,
    /// Outer bisection iterations, or points evaluated for the oracle.
    pub iterations: u32,
    pub converged: bool,
}

/// Solver tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Relative tolerance on the budget residual `|sum t_i - T_b|`.
    pub budget_rel_tol: f64,
    /// Relative width at which the lambda bracket is considered collapsed.
    pub lambda_rel_tol: f64,
    /// Relative tolerance of the inner scalar solves.
    pub inner_rel_tol: f64,
    /// Cap on outer bisection iterations.
    pub max_iterations: u32,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            budget_rel_tol: 1e-6,
            lambda_rel_tol: 1e-8,
            inner_rel_tol: 1e-10,
            max_iterations: 200,
        }
    }
}

/// One entry of a split-point sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepEntry {
    pub label: String,
    /// `Err` carries the infeasibility message; any other solver failure
    /// aborts the sweep instead of being recorded here.
    pub outcome: std::result::Result<SolveReport, String>,
}

/// All entries of a sweep plus the minimum-energy label.
#[derive(Debug, Clone, Serialize)]
pub struct SweepOutcome {
    pub entries: Vec<SweepEntry>,
    pub argmin_label: Option<String>,
}

// ---------------------------------------------------------------------------
// Stage machinery
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum StageRole {
    SatCompute,
    Downlink,
    GroundCompute,
    Uplink,
}

impl StageRole {
    fn label(&self) -> &'static str {
        match self {
            StageRole::SatCompute => "satellite processing",
            StageRole::Downlink => "downlink",
            StageRole::GroundCompute => "ground processing",
            StageRole::Uplink => "uplink",
        }
    }

    fn box_constraint(&self) -> ActiveConstraint {
        match self {
            StageRole::SatCompute => ActiveConstraint::FreqSatMax,
            StageRole::Downlink => ActiveConstraint::PowerDownMax,
            StageRole::GroundCompute => ActiveConstraint::FreqGroundMax,
            StageRole::Uplink => ActiveConstraint::PowerUpMax,
        }
    }
}

#[derive(Debug, Clone)]
enum StageModel {
    Compute { flops: f64, spec: ProcessorSpec },
    Comm { bits: f64, link: RadioLink },
}

#[derive(Debug, Clone)]
struct Stage {
    role: StageRole,
    model: StageModel,
}

impl Stage {
    fn t_min(&self) -> f64 {
        match &self.model {
            StageModel::Compute { flops, spec } => compute::min_proc_time(*flops, spec),
            StageModel::Comm { bits, link } => link::min_comm_time(*bits, link),
        }
    }

    /// Marginal saving `-E'(t)` per extra second, > 0.
    fn marginal_at(&self, t: f64) -> Result<f64> {
        let t = t.max(self.t_min());
        let d = match &self.model {
            StageModel::Compute { flops, spec } => compute::energy_vs_time_deriv(*flops, t, spec)?,
            StageModel::Comm { bits, link } => link::comm_energy_vs_time_deriv(*bits, t, link)?,
        };
        Ok(-d)
    }

    /// Duration this stage picks at price `lambda`: the unique `t` with
    /// `-E'(t) = lambda`, clamped at the box floor.
    fn duration_for_price(&self, lambda: f64, opts: &SolverOptions) -> f64 {
        match &self.model {
            StageModel::Compute { flops, spec } => {
                // E(t) = c / t^2  =>  t = (2c / lambda)^(1/3)
                let t_min = compute::min_proc_time(*flops, spec);
                let c = spec.power_at_max_w * t_min.powi(3);
                (2.0 * c / lambda).cbrt().max(t_min)
            }
            StageModel::Comm { bits, link } => comm_duration_for_price(*bits, link, lambda, opts),
        }
    }
}

/// Inner scalar solve for a comm stage: find `t` with `-E'(t) = lambda`.
///
/// In `x = D ln2 / (B t)` the condition reads
/// `a (x e^x - expm1(x)) = lambda` with the left side strictly increasing
/// from 0, so a safeguarded Newton iteration on the bracket
/// `(0, x_at_power_cap]` always converges.
fn comm_duration_for_price(bits: f64, link: &RadioLink, lambda: f64, opts: &SolverOptions) -> f64 {
    let a = link.energy_scale_w();
    let t_min = link::min_comm_time(bits, link);
    let b2 = bits * std::f64::consts::LN_2 / link.bandwidth_hz;
    let x_max = (1.0 + link.max_tx_power_w * link.snr_per_watt()).ln();

    let phi = |x: f64| a * (x * x.exp() - x.exp_m1()) - lambda;
    if phi(x_max) <= 0.0 {
        // Even at the power cap the marginal saving is below the price.
        return t_min;
    }

    let (mut lo, mut hi) = (0.0_f64, x_max);
    // Small-x expansion of the marginal gives a good starting point.
    let mut x = (2.0 * lambda / a).sqrt().clamp(x_max * 1e-12, x_max);
    for _ in 0..200 {
        let f = phi(x);
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let df = a * x * x.exp();
        let newton = x - f / df;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let done = (next - x).abs() <= opts.inner_rel_tol * x.abs();
        x = next;
        if done || hi - lo <= opts.inner_rel_tol * hi {
            break;
        }
    }
    (b2 / x).max(t_min)
}

// ---------------------------------------------------------------------------
// Problem assembly
// ---------------------------------------------------------------------------

struct StageProblem {
    variant: Variant,
    /// Non-degenerate stages only; zero-work / zero-bit stages are dropped.
    stages: Vec<Stage>,
    /// Time outside the decision variables: propagation and ISL handoff.
    t_fixed: f64,
    /// Total pass budget (already scaled).
    t_budget_total: f64,
}

impl StageProblem {
    fn stage_budget(&self) -> f64 {
        self.t_budget_total - self.t_fixed
    }
}

fn push_compute(stages: &mut Vec<Stage>, role: StageRole, flops: f64, spec: &ProcessorSpec) {
    if flops > 0.0 {
        stages.push(Stage {
            role,
            model: StageModel::Compute { flops, spec: *spec },
        });
    }
}

fn push_comm(stages: &mut Vec<Stage>, role: StageRole, bits: f64, link: &RadioLink) {
    if bits > 0.0 {
        stages.push(Stage {
            role,
            model: StageModel::Comm { bits, link: *link },
        });
    }
}

fn build_split_problem(scenario: &Scenario) -> StageProblem {
    let n = scenario.batch.num_items as f64;
    let (t_isl, _) = link::isl_transfer(scenario.split.model_bits, &scenario.isl, &scenario.consts);
    let mut stages = Vec::with_capacity(4);
    push_compute(
        &mut stages,
        StageRole::SatCompute,
        n * scenario.split.flops_sat_per_item,
        &scenario.proc_sat,
    );
    push_comm(
        &mut stages,
        StageRole::Downlink,
        n * scenario.split.activation_bits_per_item,
        &scenario.link_down,
    );
    push_compute(
        &mut stages,
        StageRole::GroundCompute,
        n * scenario.split.flops_ground_per_item,
        &scenario.proc_ground,
    );
    push_comm(
        &mut stages,
        StageRole::Uplink,
        n * scenario.split.gradient_bits_per_item,
        &scenario.link_up,
    );
    StageProblem {
        variant: Variant::SplitLearning,
        stages,
        t_fixed: 2.0 * scenario.geometry.prop_delay_s + t_isl,
        t_budget_total: scenario.pass_budget_s(),
    }
}

fn build_direct_problem(scenario: &Scenario) -> StageProblem {
    let n = scenario.batch.num_items as f64;
    let mut stages = Vec::with_capacity(2);
    push_comm(
        &mut stages,
        StageRole::Downlink,
        n * scenario.batch.bits_per_item,
        &scenario.link_down,
    );
    push_compute(
        &mut stages,
        StageRole::GroundCompute,
        n * scenario.split.total_flops_per_item(),
        &scenario.proc_ground,
    );
    StageProblem {
        variant: Variant::DirectDownload,
        stages,
        t_fixed: scenario.geometry.prop_delay_s,
        t_budget_total: scenario.pass_budget_s(),
    }
}

fn infeasible_error(problem: &StageProblem) -> Error {
    let stage_mins: Vec<StageMin> = problem
        .stages
        .iter()
        .map(|s| StageMin {
            stage: s.role.label().to_string(),
            min_time_s: s.t_min(),
        })
        .collect();
    let required: f64 = stage_mins.iter().map(|s| s.min_time_s).sum::<f64>() + problem.t_fixed;
    Error::Infeasible {
        stage_mins,
        fixed_s: problem.t_fixed,
        required_budget_s: required,
        budget_s: problem.t_budget_total,
    }
}

// ---------------------------------------------------------------------------
// Core solver
// ---------------------------------------------------------------------------

struct StageSolution {
    durations: Vec<f64>,
    lambda: f64,
    iterations: u32,
    converged: bool,
}

fn solve_stages(problem: &StageProblem, opts: &SolverOptions) -> Result<StageSolution> {
    let budget = problem.stage_budget();
    if problem.stages.is_empty() {
        if budget < 0.0 {
            return Err(infeasible_error(problem));
        }
        return Ok(StageSolution {
            durations: vec![],
            lambda: 0.0,
            iterations: 0,
            converged: true,
        });
    }

    let t_mins: Vec<f64> = problem.stages.iter().map(|s| s.t_min()).collect();
    let min_total: f64 = t_mins.iter().sum();
    if min_total > budget {
        return Err(infeasible_error(problem));
    }

    // Boundary: the budget is (numerically) exactly the floor sum. Every
    // stage is clamped; the price is set by the steepest marginal.
    if min_total >= budget * (1.0 - opts.budget_rel_tol) {
        let mut lambda: f64 = 0.0;
        for (s, &t) in problem.stages.iter().zip(&t_mins) {
            lambda = lambda.max(s.marginal_at(t)?);
        }
        return Ok(StageSolution {
            durations: t_mins,
            lambda,
            iterations: 0,
            converged: true,
        });
    }

    let total_at = |lambda: f64| -> f64 {
        problem
            .stages
            .iter()
            .map(|s| s.duration_for_price(lambda, opts))
            .sum()
    };

    // Bracket the price: lambda_lo undershoots the budget (durations too
    // long), lambda_hi overshoots (durations fit).
    let mut lambda_hi = 1.0_f64;
    let mut doublings = 0u32;
    while total_at(lambda_hi) > budget {
        lambda_hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::NoConvergence {
                iterations: doublings,
                lambda_lo: 0.0,
                lambda_hi,
                residual: total_at(lambda_hi) - budget,
            });
        }
    }
    let mut lambda_lo = 0.0_f64;

    let mut lambda = lambda_hi;
    let mut residual = total_at(lambda) - budget;
    let mut iterations = 0u32;
    let mut converged = residual.abs() <= opts.budget_rel_tol * budget;
    while !converged {
        if iterations >= opts.max_iterations {
            return Err(Error::NoConvergence {
                iterations,
                lambda_lo,
                lambda_hi,
                residual,
            });
        }
        iterations += 1;
        let mid = 0.5 * (lambda_lo + lambda_hi);
        let total = total_at(mid);
        residual = total - budget;
        lambda = mid;
        if residual.abs() <= opts.budget_rel_tol * budget {
            converged = true;
            break;
        }
        if total > budget {
            lambda_lo = mid;
        } else {
            lambda_hi = mid;
        }
        if lambda_hi - lambda_lo <= opts.lambda_rel_tol * lambda_hi {
            // Bracket collapsed; take the feasible side.
            lambda = lambda_hi;
            residual = total_at(lambda) - budget;
            converged = residual.abs() <= 10.0 * opts.budget_rel_tol * budget;
            break;
        }
    }

    // Land on the feasible side of the budget.
    if total_at(lambda) > budget * (1.0 + opts.budget_rel_tol) {
        lambda = lambda_hi;
    }
    let durations: Vec<f64> = problem
        .stages
        .iter()
        .map(|s| s.duration_for_price(lambda, opts))
        .collect();

    Ok(StageSolution {
        durations,
        lambda,
        iterations,
        converged,
    })
}

// ---------------------------------------------------------------------------
// Evaluation (frequency/power domain)
// ---------------------------------------------------------------------------

/// Per-stage durations keyed by role, `None` when the stage is degenerate.
#[derive(Debug, Clone, Copy, Default)]
struct StageTimes {
    sat: Option<f64>,
    down: Option<f64>,
    ground: Option<f64>,
    up: Option<f64>,
}

fn allocation_from_durations(problem: &StageProblem, durations: &[f64]) -> Result<Allocation> {
    let mut alloc = Allocation::default();
    for (stage, &t) in problem.stages.iter().zip(durations) {
        match (&stage.model, stage.role) {
            (StageModel::Compute { flops, spec }, StageRole::SatCompute) => {
                alloc.freq_sat_hz = Some(compute::freq_for_time(*flops, t, spec)?);
            }
            (StageModel::Compute { flops, spec }, StageRole::GroundCompute) => {
                alloc.freq_ground_hz = Some(compute::freq_for_time(*flops, t, spec)?);
            }
            (StageModel::Comm { bits, link }, StageRole::Downlink) => {
                alloc.power_down_w = Some(link::power_for_time(*bits, t, link)?);
            }
            (StageModel::Comm { bits, link }, StageRole::Uplink) => {
                alloc.power_up_w = Some(link::power_for_time(*bits, t, link)?);
            }
            _ => unreachable!("stage role/model mismatch"),
        }
    }
    Ok(alloc)
}

/// Evaluates the split-learning energy and latency terms at a full
/// allocation. Purely evaluative: the latency total is reported but not
/// checked against the pass budget.
pub fn total_energy(alloc: &Allocation, scenario: &Scenario) -> Result<EnergyBreakdown> {
    let f_sat = alloc
        .freq_sat_hz
        .ok_or_else(|| Error::Validation("allocation missing freq_sat_hz".into()))?;
    let f_ground = alloc
        .freq_ground_hz
        .ok_or_else(|| Error::Validation("allocation missing freq_ground_hz".into()))?;
    let p_down = alloc
        .power_down_w
        .ok_or_else(|| Error::Validation("allocation missing power_down_w".into()))?;
    let p_up = alloc
        .power_up_w
        .ok_or_else(|| Error::Validation("allocation missing power_up_w".into()))?;

    let n = scenario.batch.num_items as f64;
    let w_sat = n * scenario.split.flops_sat_per_item;
    let w_ground = n * scenario.split.flops_ground_per_item;
    let bits_down = n * scenario.split.activation_bits_per_item;
    let bits_up = n * scenario.split.gradient_bits_per_item;

    let t_proc_sat = compute::proc_time(w_sat, f_sat, &scenario.proc_sat)?;
    let e_proc_sat = compute::proc_energy(w_sat, f_sat, &scenario.proc_sat)?;
    let t_comm_down = link::comm_time(bits_down, p_down, &scenario.link_down)?;
    let e_comm_down = link::comm_energy(bits_down, p_down, &scenario.link_down)?;
    let t_proc_ground = compute::proc_time(w_ground, f_ground, &scenario.proc_ground)?;
    let e_proc_ground = compute::proc_energy(w_ground, f_ground, &scenario.proc_ground)?;
    let t_comm_up = link::comm_time(bits_up, p_up, &scenario.link_up)?;
    let e_comm_up = link::comm_energy(bits_up, p_up, &scenario.link_up)?;
    let (t_isl, e_isl) =
        link::isl_transfer(scenario.split.model_bits, &scenario.isl, &scenario.consts);
    let t_prop = scenario.geometry.prop_delay_s;

    Ok(EnergyBreakdown {
        e_proc_sat_j: e_proc_sat,
        e_comm_down_j: e_comm_down,
        e_proc_ground_j: e_proc_ground,
        e_comm_up_j: e_comm_up,
        e_isl_j: e_isl,
        e_total_j: e_proc_sat + e_comm_down + e_proc_ground + e_comm_up + e_isl,
        t_proc_sat_s: t_proc_sat,
        t_comm_down_s: t_comm_down,
        t_prop_s: t_prop,
        t_proc_ground_s: t_proc_ground,
        t_comm_up_s: t_comm_up,
        t_isl_s: t_isl,
        t_total_s: t_proc_sat + t_comm_down + 2.0 * t_prop + t_proc_ground + t_comm_up + t_isl,
    })
}

/// Evaluates the direct-download baseline at `(p_down, f_ground)`: the raw
/// batch crosses the downlink once and the whole model runs on the ground.
pub fn total_energy_direct_download(
    power_down_w: f64,
    freq_ground_hz: f64,
    scenario: &Scenario,
) -> Result<EnergyBreakdown> {
    let bits = scenario.batch.total_bits();
    let work = scenario.batch.num_items as f64 * scenario.split.total_flops_per_item();
    let t_comm_down = link::comm_time(bits, power_down_w, &scenario.link_down)?;
    let e_comm_down = link::comm_energy(bits, power_down_w, &scenario.link_down)?;
    let t_proc_ground = compute::proc_time(work, freq_ground_hz, &scenario.proc_ground)?;
    let e_proc_ground = compute::proc_energy(work, freq_ground_hz, &scenario.proc_ground)?;
    let t_prop = scenario.geometry.prop_delay_s;

    Ok(EnergyBreakdown {
        e_proc_sat_j: 0.0,
        e_comm_down_j: e_comm_down,
        e_proc_ground_j: e_proc_ground,
        e_comm_up_j: 0.0,
        e_isl_j: 0.0,
        e_total_j: e_comm_down + e_proc_ground,
        t_proc_sat_s: 0.0,
        t_comm_down_s: t_comm_down,
        t_prop_s: t_prop,
        t_proc_ground_s: t_proc_ground,
        t_comm_up_s: 0.0,
        t_isl_s: 0.0,
        t_total_s: t_comm_down + t_prop + t_proc_ground,
    })
}

fn breakdown_from_times(
    problem: &StageProblem,
    scenario: &Scenario,
    times: &StageTimes,
) -> Result<EnergyBreakdown> {
    let n = scenario.batch.num_items as f64;
    let mut bd = EnergyBreakdown {
        e_proc_sat_j: 0.0,
        e_comm_down_j: 0.0,
        e_proc_ground_j: 0.0,
        e_comm_up_j: 0.0,
        e_isl_j: 0.0,
        e_total_j: 0.0,
        t_proc_sat_s: 0.0,
        t_comm_down_s: 0.0,
        t_prop_s: scenario.geometry.prop_delay_s,
        t_proc_ground_s: 0.0,
        t_comm_up_s: 0.0,
        t_isl_s: 0.0,
        t_total_s: 0.0,
    };
    match problem.variant {
        Variant::SplitLearning => {
            if let Some(t) = times.sat {
                let w = n * scenario.split.flops_sat_per_item;
                bd.t_proc_sat_s = t;
                bd.e_proc_sat_j = compute::energy_vs_time(w, t, &scenario.proc_sat)?;
            }
            if let Some(t) = times.down {
                let bits = n * scenario.split.activation_bits_per_item;
                bd.t_comm_down_s = t;
                bd.e_comm_down_j = link::comm_energy_vs_time(bits, t, &scenario.link_down)?;
            }
            if let Some(t) = times.ground {
                let w = n * scenario.split.flops_ground_per_item;
                bd.t_proc_ground_s = t;
                bd.e_proc_ground_j = compute::energy_vs_time(w, t, &scenario.proc_ground)?;
            }
            if let Some(t) = times.up {
                let bits = n * scenario.split.gradient_bits_per_item;
                bd.t_comm_up_s = t;
                bd.e_comm_up_j = link::comm_energy_vs_time(bits, t, &scenario.link_up)?;
            }
            let (t_isl, e_isl) =
                link::isl_transfer(scenario.split.model_bits, &scenario.isl, &scenario.consts);
            bd.t_isl_s = t_isl;
            bd.e_isl_j = e_isl;
            bd.t_total_s = bd.t_proc_sat_s
                + bd.t_comm_down_s
                + 2.0 * bd.t_prop_s
                + bd.t_proc_ground_s
                + bd.t_comm_up_s
                + bd.t_isl_s;
        }
        Variant::DirectDownload => {
            if let Some(t) = times.down {
                let bits = scenario.batch.total_bits();
                bd.t_comm_down_s = t;
                bd.e_comm_down_j = link::comm_energy_vs_time(bits, t, &scenario.link_down)?;
            }
            if let Some(t) = times.ground {
                let w = n * scenario.split.total_flops_per_item();
                bd.t_proc_ground_s = t;
                bd.e_proc_ground_j = compute::energy_vs_time(w, t, &scenario.proc_ground)?;
            }
            bd.t_total_s = bd.t_comm_down_s + bd.t_prop_s + bd.t_proc_ground_s;
        }
    }
    bd.e_total_j =
        bd.e_proc_sat_j + bd.e_comm_down_j + bd.e_proc_ground_j + bd.e_comm_up_j + bd.e_isl_j;
    Ok(bd)
}

fn stage_times(problem: &StageProblem, durations: &[f64]) -> StageTimes {
    let mut times = StageTimes::default();
    for (stage, &t) in problem.stages.iter().zip(durations) {
        match stage.role {
            StageRole::SatCompute => times.sat = Some(t),
            StageRole::Downlink => times.down = Some(t),
            StageRole::GroundCompute => times.ground = Some(t),
            StageRole::Uplink => times.up = Some(t),
        }
    }
    times
}

fn active_constraints(problem: &StageProblem, durations: &[f64]) -> Vec<ActiveConstraint> {
    let mut active = Vec::new();
    let total: f64 = durations.iter().sum();
    let budget = problem.stage_budget();
    if !problem.stages.is_empty() && budget - total <= 1e-5 * budget.abs().max(1e-300) {
        active.push(ActiveConstraint::Latency);
    }
    for (stage, &t) in problem.stages.iter().zip(durations) {
        if t <= stage.t_min() * (1.0 + 1e-9) {
            active.push(stage.role.box_constraint());
        }
    }
    active.sort();
    active.dedup();
    active
}

fn report_from_solution(
    problem: &StageProblem,
    scenario: &Scenario,
    sol: StageSolution,
) -> Result<SolveReport> {
    let allocation = allocation_from_durations(problem, &sol.durations)?;
    let times = stage_times(problem, &sol.durations);
    let breakdown = breakdown_from_times(problem, scenario, &times)?;
    let active = active_constraints(problem, &sol.durations);
    Ok(SolveReport {
        variant: problem.variant,
        allocation,
        breakdown,
        active_constraints: active,
        lambda: Some(sol.lambda),
        iterations: sol.iterations,
        converged: sol.converged,
    })
}

// ---------------------------------------------------------------------------
// Public solver entry points
// ---------------------------------------------------------------------------

/// Minimizes the split-learning pass energy subject to the pass deadline and
/// the clock/power boxes. See the module docs for the algorithm.
pub fn minimize_energy(scenario: &Scenario) -> Result<SolveReport> {
    minimize_energy_with(scenario, &SolverOptions::default())
}

pub fn minimize_energy_with(scenario: &Scenario, opts: &SolverOptions) -> Result<SolveReport> {
    let problem = build_split_problem(scenario);
    let sol = solve_stages(&problem, opts)?;
    report_from_solution(&problem, scenario, sol)
}

/// Same optimization on the direct-download baseline: raw batch down, whole
/// model on the ground, no gradient uplink, no ISL handoff.
pub fn minimize_energy_direct_download(scenario: &Scenario) -> Result<SolveReport> {
    minimize_energy_direct_download_with(scenario, &SolverOptions::default())
}

pub fn minimize_energy_direct_download_with(
    scenario: &Scenario,
    opts: &SolverOptions,
) -> Result<SolveReport> {
    let problem = build_direct_problem(scenario);
    let sol = solve_stages(&problem, opts)?;
    report_from_solution(&problem, scenario, sol)
}

/// Runs [`minimize_energy`] once per catalog entry, marking infeasible
/// entries instead of aborting, and flags the minimum-energy label.
pub fn sweep_splits(
    scenario: &Scenario,
    catalog: &[crate::compute::WorkloadSplit],
) -> Result<SweepOutcome> {
    if catalog.is_empty() {
        return Err(Error::Validation("sweep catalog is empty".into()));
    }
    let mut entries = Vec::with_capacity(catalog.len());
    for split in catalog {
        let mut sc = scenario.clone();
        sc.split = split.clone();
        sc.split.validate()?;
        let outcome = match minimize_energy(&sc) {
            Ok(report) => Ok(report),
            Err(e @ Error::Infeasible { .. }) => Err(e.to_string()),
            Err(e) => return Err(e),
        };
        entries.push(SweepEntry {
            label: split.split_label.clone(),
            outcome,
        });
    }
    let argmin_label = entries
        .iter()
        .filter_map(|e| {
            e.outcome
                .as_ref()
                .ok()
                .map(|r| (e.label.clone(), r.breakdown.e_total_j))
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(label, _)| label);
    Ok(SweepOutcome {
        entries,
        argmin_label,
    })
}

// ---------------------------------------------------------------------------
// Grid oracle
// ---------------------------------------------------------------------------

/// Per-stage grid axis: candidate `(duration, energy)` pairs, one per grid
/// point of the stage's decision variable.
fn oracle_axis(stage: &Stage, budget: f64, points: usize) -> Result<Vec<(f64, f64)>> {
    let mut axis = Vec::with_capacity(points);
    match &stage.model {
        StageModel::Compute { flops, spec } => {
            // Slowest useful clock fills the whole budget alone.
            let f_hi = spec.max_freq_hz;
            let f_lo = (flops / (spec.flops_per_clock() * budget)).min(f_hi);
            for i in 0..points {
                let frac = i as f64 / (points - 1) as f64;
                let f = (f_lo * (f_hi / f_lo).powf(frac)).min(f_hi);
                axis.push((
                    compute::proc_time(*flops, f, spec)?,
                    compute::proc_energy(*flops, f, spec)?,
                ));
            }
        }
        StageModel::Comm { bits, link } => {
            let p_hi = link.max_tx_power_w;
            // Weakest useful power delivers the bits in the whole budget.
            let p_lo = match link::power_for_time(*bits, budget, link) {
                Ok(p) => p,
                Err(_) => p_hi,
            }
            .min(p_hi)
            .max(p_hi * 1e-15);
            for i in 0..points {
                let frac = i as f64 / (points - 1) as f64;
                let p = (p_lo * (p_hi / p_lo).powf(frac)).min(p_hi);
                axis.push((
                    link::comm_time(*bits, p, link)?,
                    link::comm_energy(*bits, p, link)?,
                ));
            }
        }
    }
    Ok(axis)
}

/// Exhaustive scan over the product of the per-stage axes. Returns the best
/// feasible per-stage durations, the decision-variable index per axis, and
/// the number of candidates evaluated.
fn oracle_scan(axes: &[Vec<(f64, f64)>], budget: f64) -> Option<(Vec<f64>, Vec<usize>, u64)> {
    let dims = axes.len();
    if dims == 0 {
        return Some((vec![], vec![], 1));
    }
    // Suffix sums of the per-axis minimum times enable early pruning.
    let axis_min_t: Vec<f64> = axes
        .iter()
        .map(|a| a.iter().map(|&(t, _)| t).fold(f64::INFINITY, f64::min))
        .collect();
    let mut suffix_min = vec![0.0; dims + 1];
    for d in (0..dims).rev() {
        suffix_min[d] = suffix_min[d + 1] + axis_min_t[d];
    }

    let mut best_e = f64::INFINITY;
    let mut best_idx: Vec<usize> = vec![];
    let mut evaluated: u64 = 0;
    let mut idx = vec![0usize; dims];
    let mut t_acc = vec![0.0f64; dims + 1];
    let mut e_acc = vec![0.0f64; dims + 1];

    let mut d = 0usize;
    loop {
        if d == dims {
            evaluated += 1;
            if e_acc[dims] < best_e {
                best_e = e_acc[dims];
                best_idx = idx.clone();
            }
            d -= 1;
            idx[d] += 1;
            continue;
        }
        if idx[d] >= axes[d].len() {
            idx[d] = 0;
            if d == 0 {
                break;
            }
            d -= 1;
            idx[d] += 1;
            continue;
        }
        let (t, e) = axes[d][idx[d]];
        if t_acc[d] + t + suffix_min[d + 1] > budget {
            idx[d] += 1;
            continue;
        }
        t_acc[d + 1] = t_acc[d] + t;
        e_acc[d + 1] = e_acc[d] + e;
        d += 1;
    }

    if best_idx.is_empty() && dims > 0 && best_e.is_infinite() {
        return None;
    }
    let durations = best_idx
        .iter()
        .enumerate()
        .map(|(dd, &i)| axes[dd][i].0)
        .collect();
    Some((durations, best_idx, evaluated))
}

/// Stage energy with a round-off guard at the box floor.
fn stage_energy(stage: &Stage, t: f64) -> f64 {
    let t = t.max(stage.t_min());
    match &stage.model {
        StageModel::Compute { flops, spec } => {
            compute::energy_vs_time(*flops, t, spec).expect("t >= floor")
        }
        StageModel::Comm { bits, link } => {
            link::comm_energy_vs_time(*bits, t, link).expect("t >= floor")
        }
    }
}

/// Derivative-free polish of a feasible duration vector: exhaustive scans of
/// pairwise time exchanges (which keep the total on the budget), with the
/// exchange window zooming around each scan's best point. For strictly
/// convex decreasing stage energies, pairwise exchanges reach the global
/// optimum of the budget-constrained allocation.
fn exchange_polish(
    problem: &StageProblem,
    durations: &mut [f64],
    budget: f64,
    points: usize,
    sweeps: u32,
) -> u64 {
    let dims = durations.len();
    let mut evaluated: u64 = 0;
    if dims == 0 {
        return evaluated;
    }
    // Slack is always worth spending: energies strictly decrease with time.
    let slack = budget - durations.iter().sum::<f64>();
    if slack > 0.0 {
        durations[0] += slack;
    }
    if dims == 1 {
        return evaluated;
    }
    for _ in 0..sweeps {
        let mut improved = false;
        for i in 0..dims {
            for j in (i + 1)..dims {
                let (si, sj) = (&problem.stages[i], &problem.stages[j]);
                // delta > 0 moves time from stage i to stage j
                let mut lo = -(durations[j] - sj.t_min());
                let mut hi = durations[i] - si.t_min();
                if hi - lo <= 0.0 {
                    continue;
                }
                let base = stage_energy(si, durations[i]) + stage_energy(sj, durations[j]);
                let mut best = (0.0, base);
                for _ in 0..60 {
                    for k in 0..=points {
                        let delta = lo + (hi - lo) * k as f64 / points as f64;
                        let e = stage_energy(si, durations[i] - delta)
                            + stage_energy(sj, durations[j] + delta);
                        evaluated += 1;
                        if e < best.1 {
                            best = (delta, e);
                        }
                    }
                    let step = (hi - lo) / points as f64;
                    lo = (best.0 - step).max(-(durations[j] - sj.t_min()));
                    hi = (best.0 + step).min(durations[i] - si.t_min());
                    if step <= 1e-14 * durations[i].max(durations[j]).max(1e-300) {
                        break;
                    }
                }
                if best.1 < base * (1.0 - 1e-15) {
                    durations[i] -= best.0;
                    durations[j] += best.0;
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    evaluated
}

fn oracle_solve(
    problem: &StageProblem,
    scenario: &Scenario,
    points: usize,
    polish_sweeps: u32,
) -> Result<SolveReport> {
    if points < 10 {
        return Err(Error::Domain(format!(
            "oracle grid needs at least 10 points per axis, got {points}"
        )));
    }
    let budget = problem.stage_budget();
    if budget < 0.0 {
        return Err(infeasible_error(problem));
    }

    let mut axes = Vec::with_capacity(problem.stages.len());
    for stage in &problem.stages {
        axes.push(oracle_axis(stage, budget, points)?);
    }
    let Some((mut durations, _, mut evaluated)) = oracle_scan(&axes, budget) else {
        return Err(infeasible_error(problem));
    };
    if polish_sweeps > 0 {
        evaluated += exchange_polish(problem, &mut durations, budget, points, polish_sweeps);
        for (stage, t) in problem.stages.iter().zip(durations.iter_mut()) {
            *t = t.max(stage.t_min());
        }
    }
    let times = stage_times(problem, &durations);
    let breakdown = breakdown_from_times(problem, scenario, &times)?;
    let allocation = allocation_from_durations(problem, &durations)?;
    let active = active_constraints(problem, &durations);
    Ok(SolveReport {
        variant: problem.variant,
        allocation,
        breakdown,
        active_constraints: active,
        lambda: None,
        iterations: evaluated.min(u32::MAX as u64) as u32,
        converged: true,
    })
}

/// Brute-force verification oracle for [`minimize_energy`]: one exhaustive
/// scan of a log-spaced grid (`points_per_axis` per decision variable)
/// spanning each variable's useful range, keeping the best latency-feasible
/// candidate. Intended for tests.
pub fn oracle_grid_search(scenario: &Scenario, points_per_axis: usize) -> Result<SolveReport> {
    let problem = build_split_problem(scenario);
    oracle_solve(&problem, scenario, points_per_axis, 1)
}

/// Grid oracle for the direct-download baseline (2-D scan).
pub fn oracle_grid_search_direct_download(
    scenario: &Scenario,
    points_per_axis: usize,
) -> Result<SolveReport> {
    let problem = build_direct_problem(scenario);
    oracle_solve(&problem, scenario, points_per_axis, 1)
}

/// Grid oracle followed by up to `polish_sweeps` rounds of exhaustive
/// pairwise time-exchange scans, resolving the optimum far below grid
/// resolution for tight two-sided comparisons against the solver. Still a
/// pure scan: no derivatives, multipliers, or solver internals.
pub fn oracle_grid_search_refined(
    scenario: &Scenario,
    points_per_axis: usize,
    polish_sweeps: u32,
) -> Result<SolveReport> {
    let problem = build_split_problem(scenario);
    oracle_solve(&problem, scenario, points_per_axis, polish_sweeps)
}
