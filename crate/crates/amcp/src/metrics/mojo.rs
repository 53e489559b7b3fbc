//! Exact MoJo (Move-and-Join) distance.
//!
//! The one-way distance from `A` to `B` tags every cluster of `A` with a
//! cluster ("group") of `B`. Given the tags, `A` is turned into `B` by moving
//! every element that disagrees with its cluster's tag and joining clusters
//! that share a tag:
//!
//! ```text
//! cost = (n - sum of tagged overlaps) + (l - number of distinct tags)
//! ```
//!
//! where `l` is the number of clusters of `A`. Giving up a maximum-overlap tag
//! costs at least one extra move and saves at most one join, so an optimal
//! assignment tags each cluster with one of its maximum-overlap groups and,
//! among those, maximizes the number of distinct tags. That last step is a
//! maximum bipartite matching between clusters and groups.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Direction in which MoJo is measured.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MojoMode {
    /// `min(mno(a, b), mno(b, a))`.
    #[default]
    Symmetric,
    /// Operations needed to turn the first partition into the second.
    Forward,
    /// Operations needed to turn the second partition into the first.
    Backward,
}

impl std::str::FromStr for MojoMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "symmetric" => Ok(MojoMode::Symmetric),
            "forward" => Ok(MojoMode::Forward),
            "backward" => Ok(MojoMode::Backward),
            other => Err(format!("unknown MoJo mode `{other}`")),
        }
    }
}

/// Contingency table: `table[i][j]` = modules in cluster `i` of the first
/// partition and cluster `j` of the second.
pub fn overlap_table(a: &Partition, b: &Partition) -> Result<Vec<Vec<u32>>> {
    if a.len() != b.len() {
        return Err(Error::ModuleSetMismatch);
    }
    let mut table = vec![vec![0u32; b.k()]; a.k()];
    for (&ca, &cb) in a.assignment().iter().zip(b.assignment()) {
        table[ca][cb] += 1;
    }
    Ok(table)
}

fn transpose(table: &[Vec<u32>], cols: usize) -> Vec<Vec<u32>> {
    (0..cols).map(|j| table.iter().map(|row| row[j]).collect()).collect()
}

/// One-way distance from the row partition to the column partition of a
/// contingency table. All-zero rows (emptied clusters) are ignored.
pub(crate) fn mno_from_table(table: &[Vec<u32>], cols: usize) -> u64 {
    let mut n = 0u64;
    let mut kept = 0u64;
    let mut clusters = 0u64;
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(table.len());
    for row in table {
        let max = row.iter().copied().max().unwrap_or(0);
        if max == 0 {
            continue;
        }
        clusters += 1;
        n += row.iter().map(|&x| x as u64).sum::<u64>();
        kept += max as u64;
        candidates.push((0..cols).filter(|&j| row[j] == max).collect());
    }
    let distinct = max_matching(&candidates, cols) as u64;
    (n - kept) + (clusters - distinct)
}

/// Kuhn's augmenting-path matching; `adj[row]` lists admissible columns.
fn max_matching(adj: &[Vec<usize>], cols: usize) -> usize {
    fn augment(row: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &c in &adj[row] {
            if seen[c] {
                continue;
            }
            seen[c] = true;
            if owner[c].is_none_or(|r| augment(r, adj, seen, owner)) {
                owner[c] = Some(row);
                return true;
            }
        }
        false
    }

    let mut owner = vec![None; cols];
    let mut seen = vec![false; cols];
    let mut size = 0;
    for row in 0..adj.len() {
        seen.fill(false);
        if augment(row, adj, &mut seen, &mut owner) {
            size += 1;
        }
    }
    size
}

pub(crate) fn mojo_from_table(table: &[Vec<u32>], cols: usize, mode: MojoMode) -> u64 {
    match mode {
        MojoMode::Forward => mno_from_table(table, cols),
        MojoMode::Backward => mno_from_table(&transpose(table, cols), table.len()),
        MojoMode::Symmetric => mno_from_table(table, cols).min(mno_from_table(&transpose(table, cols), table.len())),
    }
}

/// One-way MoJo: minimum Move and Join operations turning `a` into `b`.
pub fn mno(a: &Partition, b: &Partition) -> Result<u64> {
    mojo_with(a, b, MojoMode::Forward)
}

/// Symmetric MoJo distance.
pub fn mojo(a: &Partition, b: &Partition) -> Result<u64> {
    mojo_with(a, b, MojoMode::Symmetric)
}

pub fn mojo_with(a: &Partition, b: &Partition, mode: MojoMode) -> Result<u64> {
    let table = overlap_table(a, b)?;
    Ok(mojo_from_table(&table, b.k(), mode))
}

/// Stability utility `1 - MoJo(candidate, previous) / n_common`, both
/// partitions already restricted to the common modules.
pub fn u_sta(candidate: &Partition, previous: &Partition, n_common: usize) -> Result<f64> {
    u_sta_with(candidate, previous, n_common, MojoMode::Symmetric)
}

pub fn u_sta_with(candidate: &Partition, previous: &Partition, n_common: usize, mode: MojoMode) -> Result<f64> {
    if n_common == 0 {
        return Err(Error::NoCommonModules);
    }
    if candidate.len() != n_common || previous.len() != n_common {
        return Err(Error::ModuleSetMismatch);
    }
    let d = mojo_with(candidate, previous, mode)?;
    Ok(1.0 - d as f64 / n_common as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_is_zero() {
        let p = Partition::from_labels([0, 1, 1, 2, 0]);
        assert_eq!(mojo(&p, &p).unwrap(), 0);
        assert_eq!(u_sta(&p, &p, 5).unwrap(), 1.0);
    }

    #[test]
    fn single_join() {
        let one = Partition::single_cluster(3);
        let prev = Partition::from_labels([0, 0, 1]);
        assert_eq!(mojo(&one, &prev).unwrap(), 1);
        assert_eq!(mno(&prev, &one).unwrap(), 1);
        // splitting C back out is a move
        assert_eq!(mno(&one, &prev).unwrap(), 1);
        assert!((u_sta(&one, &prev, 3).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn joins_and_moves() {
        // four singletons into one cluster: three joins
        let s = Partition::singletons(4);
        let one = Partition::single_cluster(4);
        assert_eq!(mno(&s, &one).unwrap(), 3);
        // one cluster into four singletons: three moves
        assert_eq!(mno(&one, &s).unwrap(), 3);
    }

    #[test]
    fn matching_needed_for_distinct_tags() {
        // a = {0,1 | 2,3}, b = {0,2 | 1,3}: every cluster ties on both groups
        let a = Partition::from_labels([0, 0, 1, 1]);
        let b = Partition::from_labels([0, 1, 0, 1]);
        assert_eq!(mno(&a, &b).unwrap(), 2);
    }

    #[test]
    fn errors() {
        let a = Partition::singletons(3);
        assert_eq!(mojo(&a, &Partition::singletons(4)), Err(Error::ModuleSetMismatch));
        assert_eq!(u_sta(&a, &a, 0), Err(Error::NoCommonModules));
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("forward".parse::<MojoMode>().unwrap(), MojoMode::Forward);
        assert!("sideways".parse::<MojoMode>().is_err());
    }
}
