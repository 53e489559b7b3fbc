//! The asymmetric monotonic concession protocol.
//!
//! The stability agent is the only proposer. Each round it scores every
//! single-module reassignment of the current decomposition, keeps the moves
//! that strictly raise cohesion without dropping stability below
//! `tau_sta`, and concedes the one with the smallest concession ratio
//!
//! ```text
//! R = (u_sta(D) - u_sta(D')) / (u_coh(D') - u_coh(D))
//! ```
//!
//! i.e. the least stability given up per unit of cohesion gained. The loop
//! stops when cohesion reaches `tau_coh` or when no valid move remains
//! (deadlock). Deadlock is a normal outcome: it means the budget is binding.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DependencyGraph;
use crate::metrics::{self, mojo_from_table, u_coh, u_sta_with, CohesionState, ModuleLinks, MojoMode};
use crate::partition::{Move, Partition};
use crate::restriction::{CommonRestriction, Side};

/// Minimum cohesion gain that counts as a strict improvement.
pub const IMPROVEMENT_EPS: f64 = 1e-12;

/// Survival thresholds chosen by the architect.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdConfig {
    pub tau_sta: f64,
    pub tau_coh: f64,
}

impl ThresholdConfig {
    pub fn new(tau_sta: f64, tau_coh: f64) -> Result<Self> {
        for (name, value) in [("tau_sta", tau_sta), ("tau_coh", tau_coh)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::ThresholdRange { name, value });
            }
        }
        Ok(ThresholdConfig { tau_sta, tau_coh })
    }
}

/// Knobs that do not change what the protocol means.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegotiationOptions {
    pub mojo_mode: MojoMode,
    /// Worker threads for candidate scoring; `0` or `1` scores sequentially.
    pub threads: usize,
}

impl Default for NegotiationOptions {
    fn default() -> Self {
        NegotiationOptions {
            mojo_mode: MojoMode::Symmetric,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateEvaluation {
    pub mv: Move,
    pub partition_after: Partition,
    pub u_coh_after: f64,
    pub u_sta_after: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// 1-based.
    pub step: usize,
    pub mv: Move,
    /// Utilities after the move.
    pub u_coh: f64,
    pub u_sta: f64,
    pub ratio: f64,
    pub sw: f64,
    pub valid_move_count: usize,
    pub candidates_evaluated: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    ThresholdReached,
    Deadlock,
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Termination::ThresholdReached => "threshold_reached",
            Termination::Deadlock => "deadlock",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegotiationResult {
    pub final_partition: Partition,
    pub trace: Vec<StepRecord>,
    pub termination: Termination,
    pub initial_u_coh: f64,
    pub initial_u_sta: f64,
    pub final_u_coh: f64,
    pub final_u_sta: f64,
    /// Steps whose ratio is below the previous step's. Non-zero values mean a
    /// cheaper concession became available after a reassignment.
    pub ratio_decreases: usize,
    pub config: ThresholdConfig,
}

impl NegotiationResult {
    pub fn steps(&self) -> usize {
        self.trace.len()
    }

    pub fn final_sw(&self) -> f64 {
        metrics::social_welfare(self.final_u_coh, self.final_u_sta)
    }
}

pub fn concession_ratio(u_sta_before: f64, u_sta_after: f64, u_coh_before: f64, u_coh_after: f64) -> Result<f64> {
    let gain = u_coh_after - u_coh_before;
    if gain <= IMPROVEMENT_EPS {
        return Err(Error::NonPositiveGain(gain));
    }
    Ok((u_sta_before - u_sta_after) / gain)
}

/// Smallest ratio wins; ties go to the lower `(module, to_cluster)`.
pub fn select_move(candidates: &[CandidateEvaluation]) -> Result<&CandidateEvaluation> {
    candidates
        .iter()
        .min_by(|a, b| {
            a.ratio
                .total_cmp(&b.ratio)
                .then_with(|| (a.mv.module, a.mv.to_cluster).cmp(&(b.mv.module, b.mv.to_cluster)))
        })
        .ok_or(Error::Deadlock)
}

/// One negotiation state with the bookkeeping needed to score moves
/// incrementally.
struct Round<'a> {
    graph: &'a DependencyGraph,
    partition: &'a Partition,
    cohesion: CohesionState,
    links: Vec<ModuleLinks>,
    /// Rows: clusters of `partition`; columns: clusters of the previous
    /// decomposition restricted to the common modules.
    overlap: Vec<Vec<u32>>,
    prev_cols: usize,
    prev_cluster: Vec<Option<usize>>,
    u_coh: f64,
    u_sta: f64,
}

struct Scored {
    mv: Move,
    u_coh: f64,
    u_sta: f64,
}

impl<'a> Round<'a> {
    fn new(
        graph: &'a DependencyGraph,
        partition: &'a Partition,
        previous_common: &Partition,
        restriction: &CommonRestriction,
        mode: MojoMode,
    ) -> Result<Self> {
        let n_common = restriction.n_common();
        if n_common == 0 {
            return Err(Error::NoCommonModules);
        }
        let map = restriction.map(Side::New);
        if map.len() != partition.len() || previous_common.len() != n_common {
            return Err(Error::SizeMismatch {
                expected: map.len(),
                actual: partition.len(),
            });
        }
        let cohesion = CohesionState::new(graph, partition)?;
        let links = (0..graph.n()).map(|m| cohesion.links(graph, partition, m)).collect();
        let prev_cluster: Vec<Option<usize>> = map.iter().map(|c| c.map(|c| previous_common.cluster_of(c))).collect();
        let mut overlap = vec![vec![0u32; previous_common.k()]; partition.k()];
        for (m, p) in prev_cluster.iter().enumerate() {
            if let Some(p) = p {
                overlap[partition.cluster_of(m)][*p] += 1;
            }
        }
        let mojo = mojo_from_table(&overlap, previous_common.k(), mode);
        Ok(Round {
            graph,
            partition,
            u_coh: cohesion.u_coh(),
            cohesion,
            links,
            overlap,
            prev_cols: previous_common.k(),
            prev_cluster,
            u_sta: 1.0 - mojo as f64 / n_common as f64,
        })
    }

    fn score(&self, mv: Move, mode: MojoMode, n_common: usize) -> Scored {
        let (turbomq, k) = self.cohesion.score_move(&self.links[mv.module], mv);
        let u_coh = turbomq / k as f64;
        let u_sta = match self.prev_cluster[mv.module] {
            None => self.u_sta,
            Some(p) => {
                let mut table = self.overlap.clone();
                table[mv.from_cluster][p] -= 1;
                table[mv.to_cluster][p] += 1;
                1.0 - mojo_from_table(&table, self.prev_cols, mode) as f64 / n_common as f64
            }
        };
        Scored { mv, u_coh, u_sta }
    }

    fn candidates(
        &self,
        config: &ThresholdConfig,
        options: &NegotiationOptions,
        n_common: usize,
        pool: Option<&rayon::ThreadPool>,
    ) -> Result<(Vec<CandidateEvaluation>, usize)> {
        let moves = self.partition.enumerate_moves();
        let scored: Vec<Scored> = match pool {
            Some(pool) => pool.install(|| {
                moves
                    .par_iter()
                    .map(|&mv| self.score(mv, options.mojo_mode, n_common))
                    .collect()
            }),
            None => moves
                .iter()
                .map(|&mv| self.score(mv, options.mojo_mode, n_common))
                .collect(),
        };
        let mut valid = Vec::new();
        for s in scored {
            if s.u_coh - self.u_coh > IMPROVEMENT_EPS && s.u_sta >= config.tau_sta {
                valid.push(CandidateEvaluation {
                    mv: s.mv,
                    partition_after: self.partition.apply_move(s.mv)?,
                    u_coh_after: s.u_coh,
                    u_sta_after: s.u_sta,
                    ratio: concession_ratio(self.u_sta, s.u_sta, self.u_coh, s.u_coh)?,
                });
            }
        }
        debug_assert!(self.graph.n() == self.partition.len());
        Ok((valid, moves.len()))
    }
}

fn build_pool(threads: usize) -> Option<rayon::ThreadPool> {
    if threads <= 1 {
        return None;
    }
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().ok()
}

/// The valid move set of `partition`: every single-module move that strictly
/// improves cohesion and keeps stability at or above `tau_sta`, in
/// enumeration order.
///
/// `previous` is over the current version's modules.
pub fn valid_moves(
    graph: &DependencyGraph,
    partition: &Partition,
    previous: &Partition,
    restriction: &CommonRestriction,
    config: &ThresholdConfig,
) -> Result<Vec<CandidateEvaluation>> {
    let options = NegotiationOptions::default();
    let previous_common = restriction.restrict(previous, Side::New)?;
    let round = Round::new(graph, partition, &previous_common, restriction, options.mojo_mode)?;
    Ok(round.candidates(config, &options, restriction.n_common(), None)?.0)
}

pub fn negotiate(
    graph: &DependencyGraph,
    previous: &Partition,
    restriction: &CommonRestriction,
    config: &ThresholdConfig,
) -> Result<NegotiationResult> {
    negotiate_with(graph, previous, restriction, config, &NegotiationOptions::default())
}

pub fn negotiate_with(
    graph: &DependencyGraph,
    previous: &Partition,
    restriction: &CommonRestriction,
    config: &ThresholdConfig,
    options: &NegotiationOptions,
) -> Result<NegotiationResult> {
    let config = ThresholdConfig::new(config.tau_sta, config.tau_coh)?;
    let n_common = restriction.n_common();
    let previous_common = restriction.restrict(previous, Side::New)?;
    let pool = build_pool(options.threads);

    let mut current = previous.clone();
    let mut trace: Vec<StepRecord> = Vec::new();
    let (initial_u_coh, initial_u_sta);
    let (mut u_coh, mut u_sta);
    {
        let round = Round::new(graph, &current, &previous_common, restriction, options.mojo_mode)?;
        initial_u_coh = round.u_coh;
        initial_u_sta = round.u_sta;
        u_coh = round.u_coh;
        u_sta = round.u_sta;
    }

    let mut termination = Termination::ThresholdReached;
    while u_coh < config.tau_coh {
        let round = Round::new(graph, &current, &previous_common, restriction, options.mojo_mode)?;
        let (candidates, evaluated) = round.candidates(&config, options, n_common, pool.as_ref())?;
        let Ok(best) = select_move(&candidates) else {
            termination = Termination::Deadlock;
            break;
        };
        trace.push(StepRecord {
            step: trace.len() + 1,
            mv: best.mv,
            u_coh: best.u_coh_after,
            u_sta: best.u_sta_after,
            ratio: best.ratio,
            sw: metrics::social_welfare(best.u_coh_after, best.u_sta_after),
            valid_move_count: candidates.len(),
            candidates_evaluated: evaluated,
        });
        u_coh = best.u_coh_after;
        u_sta = best.u_sta_after;
        let next = best.partition_after.clone();
        drop(round);
        current = next;
    }

    let ratio_decreases = trace.windows(2).filter(|w| w[1].ratio < w[0].ratio).count();
    Ok(NegotiationResult {
        final_partition: current,
        trace,
        termination,
        initial_u_coh,
        initial_u_sta,
        final_u_coh: u_coh,
        final_u_sta: u_sta,
        ratio_decreases,
        config,
    })
}

/// Exhaustively re-checks that no single-module move from `partition`
/// strictly improves cohesion while keeping stability within budget.
///
/// Every neighbour is rebuilt and scored from scratch, independently of the
/// incremental scoring used by [`negotiate`].
pub fn verify_local_pareto(
    graph: &DependencyGraph,
    partition: &Partition,
    previous: &Partition,
    restriction: &CommonRestriction,
    config: &ThresholdConfig,
) -> bool {
    verify_local_pareto_with(graph, partition, previous, restriction, config, MojoMode::Symmetric)
}

pub fn verify_local_pareto_with(
    graph: &DependencyGraph,
    partition: &Partition,
    previous: &Partition,
    restriction: &CommonRestriction,
    config: &ThresholdConfig,
    mode: MojoMode,
) -> bool {
    let check = || -> Result<bool> {
        let prev = restriction.restrict(previous, Side::New)?;
        let n_common = restriction.n_common();
        let base = u_coh(graph, partition)?;
        for mv in partition.enumerate_moves() {
            let next = partition.apply_move(mv)?;
            let gain = u_coh(graph, &next)? - base;
            let sta = u_sta_with(&restriction.restrict(&next, Side::New)?, &prev, n_common, mode)?;
            if gain > IMPROVEMENT_EPS && sta >= config.tau_sta {
                return Ok(false);
            }
        }
        Ok(true)
    };
    check().unwrap_or(false)
}
