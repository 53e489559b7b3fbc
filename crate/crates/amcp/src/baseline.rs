//! Bunch-style steepest-ascent hill climbing on TurboMQ.
//!
//! Stability is ignored entirely. Each step applies the single-module move
//! with the largest TurboMQ gain; ties go to the lower `(module, to_cluster)`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::DependencyGraph;
use crate::metrics::{self, CohesionState, MojoMode};
use crate::negotiation::{self, NegotiationOptions, StepRecord, ThresholdConfig, IMPROVEMENT_EPS};
use crate::partition::{Move, Partition};
use crate::restriction::{CommonRestriction, Side};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClimbStep {
    pub mv: Move,
    pub turbomq: f64,
    pub improving_moves: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HillClimbResult {
    pub partition: Partition,
    pub steps: usize,
    pub path: Vec<ClimbStep>,
    pub initial_turbomq: f64,
    /// False when the run stopped at `max_steps` rather than a local optimum.
    pub converged: bool,
}

pub fn hillclimb_turbomq(graph: &DependencyGraph, start: &Partition, max_steps: usize) -> Result<HillClimbResult> {
    let mut current = start.clone();
    let mut state = CohesionState::new(graph, &current)?;
    let initial_turbomq = state.turbomq();
    let mut value = initial_turbomq;
    let mut path = Vec::new();
    let mut converged = false;

    while path.len() < max_steps {
        let mut best: Option<(Move, f64)> = None;
        let mut improving = 0;
        let links: Vec<_> = (0..graph.n()).map(|m| state.links(graph, &current, m)).collect();
        for mv in current.enumerate_moves() {
            let (t, _) = state.score_move(&links[mv.module], mv);
            if t - value > IMPROVEMENT_EPS {
                improving += 1;
                if best.is_none_or(|(_, b)| t > b) {
                    best = Some((mv, t));
                }
            }
        }
        let Some((mv, t)) = best else {
            converged = true;
            break;
        };
        current = current.apply_move(mv)?;
        state = CohesionState::new(graph, &current)?;
        value = t;
        path.push(ClimbStep {
            mv,
            turbomq: t,
            improving_moves: improving,
        });
    }
    if !converged && path.len() == max_steps {
        // capped: report whether the final state happens to be optimal anyway
        converged = !has_improving_move(graph, &current)?;
    }

    Ok(HillClimbResult {
        partition: current,
        steps: path.len(),
        path,
        initial_turbomq,
        converged,
    })
}

/// Full-recompute check for any TurboMQ-improving single move.
pub fn has_improving_move(graph: &DependencyGraph, partition: &Partition) -> Result<bool> {
    let base = metrics::turbomq(graph, partition)?;
    for mv in partition.enumerate_moves() {
        if metrics::turbomq(graph, &partition.apply_move(mv)?)? - base > IMPROVEMENT_EPS {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Replays a climb and reports it in the negotiation trace format, with
/// stability measured against `previous` (over the current version's
/// modules). TurboMQ rises and `k` never grows, so cohesion rises at every
/// step and the concession ratio is always defined.
pub fn annotate(
    graph: &DependencyGraph,
    start: &Partition,
    climb: &HillClimbResult,
    previous: &Partition,
    restriction: &CommonRestriction,
    mode: MojoMode,
) -> Result<Vec<StepRecord>> {
    let prev = restriction.restrict(previous, Side::New)?;
    let n_common = restriction.n_common();
    let sta = |p: &Partition| -> Result<f64> {
        metrics::u_sta_with(&restriction.restrict(p, Side::New)?, &prev, n_common, mode)
    };
    let mut current = start.clone();
    let mut u_coh = metrics::u_coh(graph, &current)?;
    let mut u_sta = sta(&current)?;
    let mut records = Vec::with_capacity(climb.steps);
    for (i, step) in climb.path.iter().enumerate() {
        let candidates = current.len() * current.k().saturating_sub(1);
        current = current.apply_move(step.mv)?;
        let (c, s) = (metrics::u_coh(graph, &current)?, sta(&current)?);
        records.push(StepRecord {
            step: i + 1,
            mv: step.mv,
            u_coh: c,
            u_sta: s,
            ratio: negotiation::concession_ratio(u_sta, s, u_coh, c)?,
            sw: metrics::social_welfare(c, s),
            valid_move_count: step.improving_moves,
            candidates_evaluated: candidates,
        });
        u_coh = c;
        u_sta = s;
    }
    Ok(records)
}

/// One row of a head-to-head table. `tau_sta` is `None` for the baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub system: String,
    pub tau_sta: Option<f64>,
    pub u_coh: f64,
    pub u_sta: f64,
    pub sw: f64,
    pub steps: usize,
}

/// Default step cap for the baseline in comparisons.
pub const DEFAULT_MAX_STEPS: usize = 100_000;

/// AMCP at each `tau_sta` plus the hill-climbing baseline started from the
/// previous decomposition.
pub fn compare_runs(
    graph: &DependencyGraph,
    previous: &Partition,
    restriction: &CommonRestriction,
    tau_coh: f64,
    taus: &[f64],
    options: &NegotiationOptions,
) -> Result<Vec<ComparisonRow>> {
    let mut rows = Vec::with_capacity(taus.len() + 1);
    for &tau_sta in taus {
        let config = ThresholdConfig::new(tau_sta, tau_coh)?;
        let res = negotiation::negotiate_with(graph, previous, restriction, &config, options)?;
        rows.push(ComparisonRow {
            system: "AMCP".into(),
            tau_sta: Some(tau_sta),
            u_coh: res.final_u_coh,
            u_sta: res.final_u_sta,
            sw: res.final_sw(),
            steps: res.steps(),
        });
    }
    let climb = hillclimb_turbomq(graph, previous, DEFAULT_MAX_STEPS)?;
    let prev = restriction.restrict(previous, Side::New)?;
    let u_coh = metrics::u_coh(graph, &climb.partition)?;
    let u_sta = metrics::u_sta_with(
        &restriction.restrict(&climb.partition, Side::New)?,
        &prev,
        restriction.n_common(),
        options.mojo_mode,
    )?;
    rows.push(ComparisonRow {
        system: "hill-climb".into(),
        tau_sta: None,
        u_coh,
        u_sta,
        sw: metrics::social_welfare(u_coh, u_sta),
        steps: climb.steps,
    });
    Ok(rows)
}
