//! Directed, weighted module dependency graphs.
//!
//! A [`DependencyGraph`] is the dependency structure matrix of one version of
//! a system. Modules are identified by name; indices are dense and follow the
//! lexicographic order of names, so two graphs built from the same edges in a
//! different order are identical.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyGraph {
    modules: Vec<String>,
    edges: BTreeMap<(usize, usize), u64>,
    /// Per-module undirected adjacency: `(neighbour, combined weight of both directions)`.
    neighbours: Vec<Vec<(usize, u64)>>,
    total_weight: u64,
}

impl DependencyGraph {
    /// Builds a graph from `(source, target, weight)` triples.
    ///
    /// Duplicate pairs are summed and self-loops dropped. `declared` lists
    /// modules that exist even without edges; every edge endpoint is added
    /// implicitly.
    pub fn build<S, I, D>(edges: I, declared: D) -> Result<Self>
    where
        S: AsRef<str>,
        I: IntoIterator<Item = (S, S, u64)>,
        D: IntoIterator<Item = S>,
    {
        let mut names = BTreeSet::new();
        let mut raw = Vec::new();
        for (s, t, w) in edges {
            let (s, t) = (s.as_ref(), t.as_ref());
            if s.is_empty() || t.is_empty() {
                return Err(Error::EmptyModuleName);
            }
            if w == 0 {
                return Err(Error::ZeroWeight {
                    source_name: s.to_owned(),
                    target: t.to_owned(),
                });
            }
            names.insert(s.to_owned());
            names.insert(t.to_owned());
            raw.push((s.to_owned(), t.to_owned(), w));
        }
        for d in declared {
            let d = d.as_ref();
            if d.is_empty() {
                return Err(Error::EmptyModuleName);
            }
            names.insert(d.to_owned());
        }
        if names.is_empty() {
            return Err(Error::EmptyGraph);
        }

        let modules: Vec<String> = names.into_iter().collect();
        let mut edges = BTreeMap::new();
        for (s, t, w) in raw {
            if s == t {
                continue;
            }
            let si = modules.binary_search(&s).expect("source registered");
            let ti = modules.binary_search(&t).expect("target registered");
            *edges.entry((si, ti)).or_insert(0) += w;
        }
        Ok(Self::from_parts(modules, edges))
    }

    fn from_parts(modules: Vec<String>, edges: BTreeMap<(usize, usize), u64>) -> Self {
        let n = modules.len();
        let mut adj: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); n];
        let mut total_weight = 0;
        for (&(s, t), &w) in &edges {
            *adj[s].entry(t).or_insert(0) += w;
            *adj[t].entry(s).or_insert(0) += w;
            total_weight += w;
        }
        let neighbours = adj.into_iter().map(|m| m.into_iter().collect()).collect();
        DependencyGraph {
            modules,
            edges,
            neighbours,
            total_weight,
        }
    }

    /// Number of modules.
    pub fn n(&self) -> usize {
        self.modules.len()
    }

    pub fn modules(&self) -> &[String] {
        &self.modules
    }

    pub fn module_name(&self, index: usize) -> &str {
        &self.modules[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.modules.binary_search_by(|m| m.as_str().cmp(name)).ok()
    }

    /// Directed edges in `(source, target)` index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.edges.iter().map(|(&(s, t), &w)| (s, t, w))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, source: usize, target: usize) -> u64 {
        self.edges.get(&(source, target)).copied().unwrap_or(0)
    }

    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    /// Neighbours of `module` ignoring direction, with the summed weight of
    /// both directions.
    pub fn neighbours(&self, module: usize) -> &[(usize, u64)] {
        &self.neighbours[module]
    }

    /// Replaces every weight by 1.
    pub fn to_binary(&self) -> Self {
        let edges = self.edges.keys().map(|&k| (k, 1)).collect();
        Self::from_parts(self.modules.clone(), edges)
    }

    /// Out-neighbours of `module` in target index order.
    pub fn targets(&self, module: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((module, 0)..(module + 1, 0)).map(|(&(_, t), _)| t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn none() -> Vec<&'static str> {
        Vec::new()
    }

    #[test]
    fn three_module_example() {
        let g = DependencyGraph::build([("A", "B", 1), ("B", "A", 1), ("C", "A", 1), ("A", "C", 1)], none()).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.modules(), ["A", "B", "C"]);
        assert_eq!(g.neighbours(0), &[(1, 2), (2, 2)]);
    }

    #[test]
    fn self_loop_dropped() {
        let g = DependencyGraph::build([("A", "A", 5)], ["A"]).unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.total_weight(), 0);
    }

    #[test]
    fn duplicates_merge() {
        let g = DependencyGraph::build([("X", "Y", 2), ("X", "Y", 3)], none()).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.weight(0, 1), 5);
    }

    #[test]
    fn empty_is_error() {
        let e = DependencyGraph::build(Vec::<(&str, &str, u64)>::new(), none()).unwrap_err();
        assert_eq!(e, Error::EmptyGraph);
        assert_eq!(e.to_string(), "empty graph");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(DependencyGraph::build([("A", "B", 0)], none()).is_err());
        assert!(DependencyGraph::build([("", "B", 1)], none()).is_err());
    }

    #[test]
    fn indices_are_lexicographic() {
        let g = DependencyGraph::build([("zeta", "alpha", 1), ("mid", "zeta", 1)], none()).unwrap();
        assert_eq!(g.modules(), ["alpha", "mid", "zeta"]);
        assert_eq!(g.index_of("mid"), Some(1));
        assert_eq!(g.targets(2).collect::<Vec<_>>(), vec![0]);
    }
}
