use crate::error::{Error, Result};
use crate::graph::DependencyGraph;
use crate::partition::{Move, Partition};

/// Intra- and inter-cluster edge weight totals for one partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterFlows {
    /// `mu[i]`: weight of edges with both endpoints in cluster `i`.
    pub mu: Vec<u64>,
    /// `eps[i][j]`: weight of edges from cluster `i` to cluster `j`; the
    /// diagonal is zero.
    pub eps: Vec<Vec<u64>>,
}

impl ClusterFlows {
    pub fn k(&self) -> usize {
        self.mu.len()
    }

    /// `sum_{j != i} (eps[i][j] + eps[j][i])`.
    pub fn incident_inter(&self, i: usize) -> u64 {
        (0..self.k())
            .filter(|&j| j != i)
            .map(|j| self.eps[i][j] + self.eps[j][i])
            .sum()
    }

    pub fn total(&self) -> u64 {
        self.mu.iter().sum::<u64>() + self.eps.iter().flatten().sum::<u64>()
    }
}

fn check_size(graph: &DependencyGraph, partition: &Partition) -> Result<()> {
    if graph.n() != partition.len() {
        return Err(Error::SizeMismatch {
            expected: graph.n(),
            actual: partition.len(),
        });
    }
    Ok(())
}

pub fn cluster_flows(graph: &DependencyGraph, partition: &Partition) -> Result<ClusterFlows> {
    check_size(graph, partition)?;
    let k = partition.k();
    let mut mu = vec![0; k];
    let mut eps = vec![vec![0; k]; k];
    for (s, t, w) in graph.edges() {
        let (cs, ct) = (partition.cluster_of(s), partition.cluster_of(t));
        if cs == ct {
            mu[cs] += w;
        } else {
            eps[cs][ct] += w;
        }
    }
    Ok(ClusterFlows { mu, eps })
}

/// One cluster's TurboMQ term. A cluster without internal weight contributes
/// 0, including the isolated 0/0 case.
#[inline]
pub(crate) fn cluster_factor(intra: u64, inter: u64) -> f64 {
    if intra == 0 {
        0.0
    } else {
        intra as f64 / (intra as f64 + 0.5 * inter as f64)
    }
}

pub fn turbomq(graph: &DependencyGraph, partition: &Partition) -> Result<f64> {
    Ok(CohesionState::new(graph, partition)?.turbomq())
}

/// Cohesion utility: TurboMQ divided by the number of clusters.
pub fn u_coh(graph: &DependencyGraph, partition: &Partition) -> Result<f64> {
    let state = CohesionState::new(graph, partition)?;
    Ok(state.u_coh())
}

/// Per-cluster totals that let a single move be scored in `O(deg + k)`.
///
/// Moving module `m` from `s` to `t` changes only the factors of `s` and `t`:
/// every other cluster keeps the same incident inter-cluster weight.
#[derive(Debug, Clone)]
pub struct CohesionState {
    intra: Vec<u64>,
    inter: Vec<u64>,
    sizes: Vec<usize>,
}

/// Weight between one module and each cluster, both directions combined.
#[derive(Debug, Clone)]
pub struct ModuleLinks {
    pub to_cluster: Vec<u64>,
    pub total: u64,
}

impl CohesionState {
    pub fn new(graph: &DependencyGraph, partition: &Partition) -> Result<Self> {
        let flows = cluster_flows(graph, partition)?;
        let inter = (0..flows.k()).map(|i| flows.incident_inter(i)).collect();
        Ok(CohesionState {
            intra: flows.mu,
            inter,
            sizes: partition.cluster_sizes(),
        })
    }

    pub fn k(&self) -> usize {
        self.intra.len()
    }

    pub fn turbomq(&self) -> f64 {
        self.intra
            .iter()
            .zip(&self.inter)
            .map(|(&a, &e)| cluster_factor(a, e))
            .sum()
    }

    pub fn u_coh(&self) -> f64 {
        if self.k() == 0 {
            0.0
        } else {
            self.turbomq() / self.k() as f64
        }
    }

    pub fn links(&self, graph: &DependencyGraph, partition: &Partition, module: usize) -> ModuleLinks {
        let mut to_cluster = vec![0; self.k()];
        let mut total = 0;
        for &(v, w) in graph.neighbours(module) {
            to_cluster[partition.cluster_of(v)] += w;
            total += w;
        }
        ModuleLinks { to_cluster, total }
    }

    /// `(TurboMQ, k)` after applying `mv`. `links` must belong to `mv.module`.
    pub fn score_move(&self, links: &ModuleLinks, mv: Move) -> (f64, usize) {
        let (s, t) = (mv.from_cluster, mv.to_cluster);
        let (ws, wt) = (links.to_cluster[s], links.to_cluster[t]);
        let source_emptied = self.sizes[s] == 1;

        let intra_s = self.intra[s] - ws;
        let inter_s = self.inter[s] + 2 * ws - links.total;
        let intra_t = self.intra[t] + wt;
        let inter_t = self.inter[t] + links.total - 2 * wt;

        let mut sum = 0.0;
        for c in 0..self.k() {
            sum += if c == s {
                if source_emptied {
                    continue;
                }
                cluster_factor(intra_s, inter_s)
            } else if c == t {
                cluster_factor(intra_t, inter_t)
            } else {
                cluster_factor(self.intra[c], self.inter[c])
            };
        }
        let k = self.k() - usize::from(source_emptied);
        (sum, k)
    }
}
