//! Synthetic block-structured benchmarks.
//!
//! # Random stream
//!
//! Generation is pinned to ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`, split into two independent streams:
//!
//! * stream 0 draws edges: one draw per ordered pair `(i, j)`, `i != j`, in
//!   row-major order. The pair gets an edge iff `u < p`, where
//!   `u = (next_u64 >> 11) * 2^-53` and `p` is `p_in` for pairs inside a
//!   block and `p_out` otherwise.
//! * stream 1 perturbs the previous decomposition. It picks
//!   `ceil(perturb_fraction * n)` modules by a partial Fisher-Yates shuffle of
//!   `0..n`, then sends each picked module, in pick order, to another block
//!   chosen uniformly. A bounded draw in `0..r` is
//!   `(next_u64 as u128 * r) >> 64`.
//!
//! Module `i` is named `m` followed by `i` zero-padded to the width of
//! `n - 1`, so lexicographic order equals index order. Blocks are contiguous
//! runs of near-equal size; the first `n % blocks` blocks get one extra module.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DependencyGraph;
use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSpec {
    pub n: usize,
    pub blocks: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub perturb_fraction: f64,
    pub seed: u64,
}

impl BenchSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        if self.blocks == 0 || self.blocks > self.n {
            return bad(format!("blocks must be in 1..={}", self.n));
        }
        if !(0.0 <= self.p_out && self.p_out <= self.p_in && self.p_in <= 1.0) {
            return bad(format!(
                "need 0 <= p_out <= p_in <= 1, got p_in={} p_out={}",
                self.p_in, self.p_out
            ));
        }
        if !(0.0..=1.0).contains(&self.perturb_fraction) {
            return bad(format!("perturb_fraction {} outside [0, 1]", self.perturb_fraction));
        }
        if self.blocks == 1 && self.perturb_count() > 0 {
            return bad("perturbation needs at least two blocks".into());
        }
        Ok(())
    }

    pub fn perturb_count(&self) -> usize {
        ((self.perturb_fraction * self.n as f64).ceil() as usize).min(self.n)
    }

    pub fn module_names(&self) -> Vec<String> {
        let width = (self.n.max(2) - 1).to_string().len();
        (0..self.n).map(|i| format!("m{i:0width$}")).collect()
    }

    fn block_of(&self) -> Vec<usize> {
        let base = self.n / self.blocks;
        let extra = self.n % self.blocks;
        (0..self.blocks)
            .flat_map(|b| std::iter::repeat_n(b, base + usize::from(b < extra)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bench {
    pub graph: DependencyGraph,
    pub ground_truth: Partition,
    pub previous: Partition,
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn below(rng: &mut ChaCha8Rng, range: usize) -> usize {
    ((rng.next_u64() as u128 * range as u128) >> 64) as usize
}

pub fn generate(spec: &BenchSpec) -> Result<Bench> {
    spec.validate()?;
    let names = spec.module_names();
    let block = spec.block_of();

    let mut edges_rng = ChaCha8Rng::seed_from_u64(spec.seed);
    edges_rng.set_stream(0);
    let mut edges = Vec::new();
    for i in 0..spec.n {
        for j in 0..spec.n {
            if i == j {
                continue;
            }
            let p = if block[i] == block[j] { spec.p_in } else { spec.p_out };
            if unit(&mut edges_rng) < p {
                edges.push((names[i].as_str(), names[j].as_str(), 1));
            }
        }
    }
    let graph = DependencyGraph::build(edges, names.iter().map(String::as_str))?;

    let mut perturb_rng = ChaCha8Rng::seed_from_u64(spec.seed);
    perturb_rng.set_stream(1);
    let mut order: Vec<usize> = (0..spec.n).collect();
    let mut previous = block.clone();
    for i in 0..spec.perturb_count() {
        let j = i + below(&mut perturb_rng, spec.n - i);
        order.swap(i, j);
        let m = order[i];
        let r = below(&mut perturb_rng, spec.blocks - 1);
        previous[m] = if r >= block[m] { r + 1 } else { r };
    }

    Ok(Bench {
        graph,
        ground_truth: Partition::from_labels(block),
        previous: Partition::from_labels(previous),
    })
}
