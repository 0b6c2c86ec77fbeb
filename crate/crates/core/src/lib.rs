//! Location Area planning for GSM-style cellular networks.
//!
//! Cells (BSs) hang off base station controllers (BSCs), which are homed on
//! switching centres (MSCs). A plan attaches every cell to a BSC and groups
//! cells into Location Areas (LAs). The objective is the handoff flow that
//! crosses LA borders, since every crossing costs a location update. Plans
//! must respect BSC capacities, paging capacities, and keep each LA under a
//! single MSC.
//!
//! [`anneal::run`] searches plans by simulated annealing;
//! [`oracle::enumerate_optimal`] solves small instances exactly and
//! [`oracle::greedy_baseline`] gives a deterministic comparison point.

pub mod anneal;
pub mod cli;
pub mod constraints;
pub mod cost;
pub mod error;
pub mod model;
pub mod netgen;
pub mod oracle;

pub use error::{Error, Result};
