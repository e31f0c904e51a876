//! Switch-level network topologies built on random regular graphs, plus the
//! machinery to evaluate them: incremental expansion, path-length and bound
//! metrics, ECMP / k-shortest-path route sets, and an approximate maximum
//! concurrent multi-commodity flow solver for permutation traffic.
//!
//! The crate is `no_std` (with `alloc`); file formats, CSV output and the
//! command-line driver live in the companion `jellynet` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod expand;
pub mod flow;
pub mod metrics;
pub mod rng;
pub mod route;
pub mod topo;

pub use error::Error;
pub use topo::{Topology, TopologyKind};
