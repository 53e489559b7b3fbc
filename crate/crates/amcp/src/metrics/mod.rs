//! Cohesion (TurboMQ), stability (MoJo) and social welfare.

mod mojo;
mod oracle;
mod turbomq;

pub(crate) use mojo::mojo_from_table;
pub use mojo::{mno, mojo, mojo_with, overlap_table, u_sta, u_sta_with, MojoMode};
pub use oracle::{all_partitions, mojo_bruteforce, mojo_bruteforce_with, ORACLE_MAX_N};
pub use turbomq::{cluster_flows, turbomq, u_coh, ClusterFlows, CohesionState, ModuleLinks};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::DependencyGraph;
use crate::partition::Partition;
use crate::restriction::{CommonRestriction, Side};

pub fn social_welfare(u_coh: f64, u_sta: f64) -> f64 {
    u_coh + u_sta
}

/// All scores of one partition of the current version.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsBundle {
    pub turbomq: f64,
    pub u_coh: f64,
    pub u_sta: f64,
    pub sw: f64,
    pub mojo: u64,
}

impl MetricsBundle {
    /// `partition` is over the current version's modules, `previous` over
    /// the common modules.
    pub fn evaluate(
        graph: &DependencyGraph,
        partition: &Partition,
        previous: &Partition,
        restriction: &CommonRestriction,
        mode: MojoMode,
    ) -> Result<Self> {
        let state = CohesionState::new(graph, partition)?;
        let common = restriction.restrict(partition, Side::New)?;
        let n_common = restriction.n_common();
        let mojo = mojo_with(&common, previous, mode)?;
        let u_sta = u_sta_with(&common, previous, n_common, mode)?;
        let u_coh = state.u_coh();
        Ok(MetricsBundle {
            turbomq: state.turbomq(),
            u_coh,
            u_sta,
            sw: social_welfare(u_coh, u_sta),
            mojo,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::{arb_instance, three_module_graph};
    use proptest::prelude::*;
    use rand_chacha::rand_core::{RngCore, SeedableRng};

    #[test]
    fn welfare() {
        // tabulated inputs are rounded to 4 places, so the sum carries +-1e-4
        assert!((social_welfare(0.5980, 0.9167) - 1.5146).abs() <= 1e-4 + 1e-12);
        assert_eq!(social_welfare(0.0, 0.0), 0.0);
        assert_eq!(social_welfare(1.0, 1.0), 2.0);
    }

    #[test]
    fn bundle_worked_example() {
        let g = three_module_graph();
        let prev = Partition::from_labels([0, 0, 1]);
        let r = CommonRestriction::identity(g.modules());
        let b = MetricsBundle::evaluate(&g, &Partition::single_cluster(3), &prev, &r, MojoMode::Symmetric).unwrap();
        assert_eq!(b.mojo, 1);
        assert_eq!(b.u_coh, 1.0);
        assert!((b.u_sta - 2.0 / 3.0).abs() < 1e-12);
        assert!((b.sw - 5.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn exhaustive_agreement_n4() {
        let all = all_partitions(4);
        assert_eq!(all.len(), 15);
        for a in &all {
            for b in &all {
                for mode in [MojoMode::Symmetric, MojoMode::Forward, MojoMode::Backward] {
                    assert_eq!(
                        mojo_with(a, b, mode).unwrap(),
                        mojo_bruteforce_with(a, b, mode).unwrap(),
                        "{a:?} vs {b:?} ({mode:?})"
                    );
                }
            }
        }
    }

    #[test]
    fn random_agreement_n5_n6() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for i in 0..400 {
            let n = 5 + i % 2;
            let mut draw = || Partition::from_labels((0..n).map(|_| rng.next_u32() as usize % n).collect::<Vec<_>>());
            let (a, b) = (draw(), draw());
            assert_eq!(mojo(&a, &b).unwrap(), mojo_bruteforce(&a, &b).unwrap());
            assert_eq!(
                mno(&a, &b).unwrap(),
                mojo_bruteforce_with(&a, &b, MojoMode::Forward).unwrap()
            );
        }
    }

    proptest! {
        #[test]
        fn mojo_symmetric(a in proptest::collection::vec(0usize..8, 8), b in proptest::collection::vec(0usize..8, 8)) {
            let (a, b) = (Partition::from_labels(a), Partition::from_labels(b));
            prop_assert_eq!(mojo(&a, &b).unwrap(), mojo(&b, &a).unwrap());
            prop_assert_eq!(mojo(&a, &a).unwrap(), 0);
        }

        #[test]
        fn single_move_bounds((g, p) in arb_instance(10), prev in proptest::collection::vec(0usize..4, 10)) {
            let prev = Partition::from_labels(prev[..p.len()].to_vec());
            let n = p.len();
            let t0 = turbomq(&g, &p).unwrap();
            let s0 = u_sta(&p, &prev, n).unwrap();
            for mv in p.enumerate_moves() {
                let q = p.apply_move(mv).unwrap();
                let dt = turbomq(&g, &q).unwrap() - t0;
                prop_assert!(dt.abs() <= 2.0 + 1e-12);
                let ds = u_sta(&q, &prev, n).unwrap() - s0;
                prop_assert!(ds.abs() <= 1.0 / n as f64 + 1e-12);
                if q.k() == p.k() {
                    let dc = u_coh(&g, &q).unwrap() - u_coh(&g, &p).unwrap();
                    prop_assert!(dc.abs() <= 2.0 / p.k() as f64 + 1e-12);
                }
            }
        }
    }
}
