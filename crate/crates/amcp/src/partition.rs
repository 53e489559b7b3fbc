//! Flat partitions of modules into clusters, and single-module moves.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A flat decomposition of `n` modules into `k` non-empty clusters.
///
/// Labels are always canonical: `0..k` numbered by first occurrence over
/// module index. Two partitions describing the same grouping are therefore
/// `==` and hash identically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    assignment: Vec<usize>,
    k: usize,
}

impl Partition {
    /// Canonicalizes an arbitrary labelling.
    pub fn from_labels<L: Hash + Eq>(labels: impl IntoIterator<Item = L>) -> Self {
        let mut seen: HashMap<L, usize> = HashMap::new();
        let assignment = labels
            .into_iter()
            .map(|l| {
                let next = seen.len();
                *seen.entry(l).or_insert(next)
            })
            .collect();
        Partition {
            assignment,
            k: seen.len(),
        }
    }

    /// Every module in its own cluster.
    pub fn singletons(n: usize) -> Self {
        Partition {
            assignment: (0..n).collect(),
            k: n,
        }
    }

    /// All modules in one cluster.
    pub fn single_cluster(n: usize) -> Self {
        Partition {
            assignment: vec![0; n],
            k: usize::from(n > 0),
        }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Number of non-empty clusters.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn cluster_of(&self, module: usize) -> usize {
        self.assignment[module]
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn members(&self, cluster: usize) -> impl Iterator<Item = usize> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter(move |&(_, &c)| c == cluster)
            .map(|(i, _)| i)
    }

    /// Returns a new partition with `mv` applied. `self` is left untouched.
    pub fn apply_move(&self, mv: Move) -> Result<Partition> {
        self.check_move(mv)?;
        let mut labels = self.assignment.clone();
        labels[mv.module] = mv.to_cluster;
        Ok(Partition::from_labels(labels))
    }

    pub(crate) fn check_move(&self, mv: Move) -> Result<()> {
        if mv.module >= self.len() {
            return Err(Error::InvalidMove(format!("module {} out of range", mv.module)));
        }
        if self.assignment[mv.module] != mv.from_cluster {
            return Err(Error::InvalidMove(format!(
                "module {} is not in cluster {}",
                mv.module, mv.from_cluster
            )));
        }
        if mv.from_cluster == mv.to_cluster {
            return Err(Error::InvalidMove("source and target cluster coincide".into()));
        }
        if mv.to_cluster >= self.k {
            return Err(Error::InvalidMove(format!("cluster {} does not exist", mv.to_cluster)));
        }
        Ok(())
    }

    /// All single-module reassignments to another existing cluster, ordered by
    /// module index then target label. There are exactly `n * (k - 1)`.
    pub fn enumerate_moves(&self) -> Vec<Move> {
        let mut moves = Vec::with_capacity(self.len() * self.k.saturating_sub(1));
        for (module, &from) in self.assignment.iter().enumerate() {
            for to in (0..self.k).filter(|&c| c != from) {
                moves.push(Move {
                    module,
                    from_cluster: from,
                    to_cluster: to,
                });
            }
        }
        moves
    }
}

/// Reassignment of one module to a different existing cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub module: usize,
    pub from_cluster: usize,
    pub to_cluster: usize,
}

impl Move {
    pub fn new(module: usize, from_cluster: usize, to_cluster: usize) -> Self {
        Move {
            module,
            from_cluster,
            to_cluster,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_labels() {
        let p = Partition::from_labels(["x", "y", "x", "z"]);
        assert_eq!(p.assignment(), &[0, 1, 0, 2]);
        assert_eq!(p.k(), 3);
        assert_eq!(Partition::from_labels([7, 7, 3]), Partition::from_labels([0, 0, 1]));
    }

    #[test]
    fn move_that_empties_cluster() {
        let p = Partition::from_labels([0, 0, 1]);
        let q = p.apply_move(Move::new(2, 1, 0)).unwrap();
        assert_eq!(q.assignment(), &[0, 0, 0]);
        assert_eq!(q.k(), 1);
        assert_eq!(p.assignment(), &[0, 0, 1]);

        let p = Partition::from_labels([0, 1]);
        let q = p.apply_move(Move::new(0, 0, 1)).unwrap();
        assert_eq!(q.assignment(), &[0, 0]);
        assert_eq!(q.k(), 1);
    }

    #[test]
    fn invalid_moves() {
        let p = Partition::from_labels([0, 0, 1]);
        assert!(p.apply_move(Move::new(0, 0, 0)).is_err());
        assert!(p.apply_move(Move::new(0, 0, 2)).is_err());
        assert!(p.apply_move(Move::new(0, 1, 0)).is_err());
        assert!(p.apply_move(Move::new(5, 0, 1)).is_err());
    }

    #[test]
    fn move_enumeration() {
        let p = Partition::from_labels([0, 0, 1]);
        let moves = p.enumerate_moves();
        assert_eq!(moves, vec![Move::new(0, 0, 1), Move::new(1, 0, 1), Move::new(2, 1, 0)]);
        assert!(Partition::single_cluster(5).enumerate_moves().is_empty());
        assert_eq!(Partition::from_labels([0, 1, 2, 0]).enumerate_moves().len(), 8);
    }

    fn arb_partition() -> impl Strategy<Value = Partition> {
        (1usize..=10).prop_flat_map(|n| proptest::collection::vec(0usize..n, n).prop_map(Partition::from_labels))
    }

    proptest! {
        #[test]
        fn labels_contiguous_and_inhabited(p in arb_partition()) {
            let sizes = p.cluster_sizes();
            prop_assert_eq!(sizes.len(), p.k());
            prop_assert!(sizes.iter().all(|&s| s > 0));
        }

        #[test]
        fn move_count_formula(p in arb_partition()) {
            // brute count over every (module, label) pair
            let mut count = 0;
            for m in 0..p.len() {
                for c in 0..p.k() {
                    if p.apply_move(Move::new(m, p.cluster_of(m), c)).is_ok() {
                        count += 1;
                    }
                }
            }
            prop_assert_eq!(p.enumerate_moves().len(), count);
            prop_assert_eq!(count, p.len() * (p.k() - 1));
        }

        #[test]
        fn apply_move_is_pure_and_canonical(p in arb_partition(), pick in any::<proptest::sample::Index>()) {
            let moves = p.enumerate_moves();
            prop_assume!(!moves.is_empty());
            let before = p.clone();
            let q = p.apply_move(*pick.get(&moves)).unwrap();
            prop_assert_eq!(&p, &before);
            prop_assert_eq!(Partition::from_labels(q.assignment().to_vec()), q);
        }
    }
}
