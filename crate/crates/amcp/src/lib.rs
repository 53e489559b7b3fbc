//! Negotiated software module clustering.
//!
//! A cohesion agent and a stability agent negotiate a flat decomposition of a
//! dependency graph. Starting from the previous version's decomposition, the
//! stability agent proposes single-module reassignments, always conceding as
//! little stability as possible per unit of cohesion gained, and never
//! dropping below the architect's stability budget.

pub mod baseline;
pub mod benchgen;
pub mod error;
pub mod extraction;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod negotiation;
pub mod partition;
pub mod restriction;
pub mod sweep;

#[cfg(test)]
pub(crate) mod test_support;

pub use error::{Error, Result};
pub use graph::DependencyGraph;
pub use partition::{Move, Partition};
pub use restriction::{restrict, CommonRestriction, Side};
