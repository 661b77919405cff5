//! Exact-arithmetic workbench for the calculus of group-topology-generating
//! (GTG) subsets of abelian groups and the constructive machinery for
//! building strictly finer non-discrete UFSS group topologies on metric
//! abelian groups.
//!
//! Everything is computed over exact integers and rationals; infinite-group
//! decisions are certified within explicit windows and never extrapolate.

pub mod coeff;
pub mod descriptor;
pub mod error;
pub mod group;
pub mod hom;
pub mod independence;
pub mod metric;
pub mod symset;
pub mod topology;
pub mod window;

pub use error::{Error, Result};
