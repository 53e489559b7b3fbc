use proptest::prelude::*;

use crate::graph::DependencyGraph;
use crate::partition::Partition;

/// A, B, C with A <-> B and A <-> C.
pub fn three_module_graph() -> DependencyGraph {
    DependencyGraph::build(
        [("A", "B", 1), ("B", "A", 1), ("C", "A", 1), ("A", "C", 1)],
        Vec::<&str>::new(),
    )
    .unwrap()
}

pub fn graph_from(n: usize, edges: &[(usize, usize, u64)]) -> DependencyGraph {
    let names: Vec<String> = (0..n).map(|i| format!("m{i:02}")).collect();
    DependencyGraph::build(
        edges.iter().map(|&(s, t, w)| (names[s].clone(), names[t].clone(), w)),
        names.clone(),
    )
    .unwrap()
}

/// Random weighted graph on `1..=max_n` modules with a random partition.
pub fn arb_instance(max_n: usize) -> impl Strategy<Value = (DependencyGraph, Partition)> {
    (1..=max_n).prop_flat_map(|n| {
        (
            proptest::collection::vec((0..n, 0..n, 1u64..4), 0..=3 * n),
            proptest::collection::vec(0..n, n),
        )
            .prop_map(move |(edges, labels)| (graph_from(n, &edges), Partition::from_labels(labels)))
    })
}
