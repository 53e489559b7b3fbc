//! Restricting partitions to the modules shared by two versions.

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Which version a partition was built over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Old,
    New,
}

/// The modules common to an old and a new version, with index maps from each
/// version's module indices into `0..n_common`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonRestriction {
    common_names: Vec<String>,
    old_to_common: Vec<Option<usize>>,
    new_to_common: Vec<Option<usize>>,
}

impl CommonRestriction {
    /// Both arguments must be sorted and duplicate-free, as
    /// [`DependencyGraph::modules`](crate::DependencyGraph::modules) is.
    pub fn between(old_names: &[String], new_names: &[String]) -> Self {
        let mut common_names = Vec::new();
        let mut old_to_common = vec![None; old_names.len()];
        let mut new_to_common = vec![None; new_names.len()];
        let (mut i, mut j) = (0, 0);
        while i < old_names.len() && j < new_names.len() {
            match old_names[i].cmp(&new_names[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    old_to_common[i] = Some(common_names.len());
                    new_to_common[j] = Some(common_names.len());
                    common_names.push(old_names[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        CommonRestriction {
            common_names,
            old_to_common,
            new_to_common,
        }
    }

    /// Restriction of a version onto itself.
    pub fn identity(names: &[String]) -> Self {
        Self::between(names, names)
    }

    pub fn n_common(&self) -> usize {
        self.common_names.len()
    }

    pub fn common_names(&self) -> &[String] {
        &self.common_names
    }

    pub fn map(&self, side: Side) -> &[Option<usize>] {
        match side {
            Side::Old => &self.old_to_common,
            Side::New => &self.new_to_common,
        }
    }

    /// Common index of a module of the given version, if it is shared.
    pub fn common_index(&self, side: Side, module: usize) -> Option<usize> {
        self.map(side).get(module).copied().flatten()
    }

    pub fn is_identity(&self) -> bool {
        self.old_to_common.len() == self.n_common() && self.new_to_common.len() == self.n_common()
    }

    /// Drops the modules of `partition` that are not shared. Clusters that
    /// lose all members disappear; labels are re-canonicalized.
    pub fn restrict(&self, partition: &Partition, side: Side) -> Result<Partition> {
        let map = self.map(side);
        if map.len() != partition.len() {
            return Err(Error::SizeMismatch {
                expected: map.len(),
                actual: partition.len(),
            });
        }
        let mut labels = vec![0; self.n_common()];
        for (module, common) in map.iter().enumerate() {
            if let Some(c) = common {
                labels[*c] = partition.cluster_of(module);
            }
        }
        Ok(Partition::from_labels(labels))
    }
}

/// Free-function form of [`CommonRestriction::restrict`].
pub fn restrict(partition: &Partition, restriction: &CommonRestriction, side: Side) -> Result<Partition> {
    restriction.restrict(partition, side)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn identity_is_noop() {
        let n = names(&["A", "B", "C"]);
        let r = CommonRestriction::identity(&n);
        assert!(r.is_identity());
        let p = Partition::from_labels([0, 1, 0]);
        assert_eq!(r.restrict(&p, Side::New).unwrap(), p);
    }

    #[test]
    fn drops_missing_module() {
        let old = names(&["A", "B", "C", "D"]);
        let new = names(&["A", "B", "C"]);
        let r = CommonRestriction::between(&old, &new);
        assert_eq!(r.n_common(), 3);
        let p = Partition::from_labels([0, 0, 1, 1]);
        assert_eq!(r.restrict(&p, Side::Old).unwrap().assignment(), &[0, 0, 1]);
    }

    #[test]
    fn emptied_cluster_disappears() {
        let old = names(&["A", "B", "C"]);
        let new = names(&["A", "B", "E"]);
        let r = CommonRestriction::between(&old, &new);
        assert_eq!(r.common_names(), names(&["A", "B"]));
        let p = Partition::from_labels([0, 0, 1]);
        let q = r.restrict(&p, Side::Old).unwrap();
        assert_eq!(q.k(), 1);
        assert_eq!(r.common_index(Side::New, 2), None);
    }

    #[test]
    fn size_mismatch() {
        let r = CommonRestriction::identity(&names(&["A", "B"]));
        assert!(r.restrict(&Partition::singletons(3), Side::Old).is_err());
    }
}
