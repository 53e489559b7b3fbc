//! Stability-budget sensitivity sweeps.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::DependencyGraph;
use crate::negotiation::{negotiate_with, NegotiationOptions, NegotiationResult, ThresholdConfig};
use crate::partition::Partition;
use crate::restriction::CommonRestriction;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub tau_sta: f64,
    pub u_coh: f64,
    pub u_sta: f64,
    pub sw: f64,
    pub steps: usize,
    /// The final partition differs from the unconstrained (`tau_sta = 0`) run
    /// at the same `tau_coh`.
    pub diverged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Per-row full results, in row order.
    pub runs: Vec<NegotiationResult>,
    pub reference: NegotiationResult,
}

impl SweepResult {
    /// Lowest stability the unconstrained run passes through, including its
    /// start. Budgets at or below this never bind.
    pub fn reference_min_u_sta(&self) -> f64 {
        self.reference
            .trace
            .iter()
            .map(|s| s.u_sta)
            .fold(self.reference.initial_u_sta, f64::min)
    }
}

pub fn sweep(
    graph: &DependencyGraph,
    previous: &Partition,
    restriction: &CommonRestriction,
    taus: &[f64],
    tau_coh: f64,
    options: &NegotiationOptions,
) -> Result<SweepResult> {
    let reference = negotiate_with(
        graph,
        previous,
        restriction,
        &ThresholdConfig::new(0.0, tau_coh)?,
        options,
    )?;
    let mut rows = Vec::with_capacity(taus.len());
    let mut runs = Vec::with_capacity(taus.len());
    for &tau_sta in taus {
        let res = negotiate_with(
            graph,
            previous,
            restriction,
            &ThresholdConfig::new(tau_sta, tau_coh)?,
            options,
        )?;
        rows.push(SweepRow {
            tau_sta,
            u_coh: res.final_u_coh,
            u_sta: res.final_u_sta,
            sw: res.final_sw(),
            steps: res.steps(),
            diverged: res.final_partition != reference.final_partition,
        });
        runs.push(res);
    }
    Ok(SweepResult { rows, runs, reference })
}
