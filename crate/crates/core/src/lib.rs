//! Branching-coalescing random walks on the even sublattice, their dual
//! walks, the sticky left-right SDE and a Monte Carlo harness that checks
//! lattice statistics against closed-form limits.

// `!(x > 0.0)` is used on purpose so that NaN fails parameter checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod closed_forms;
pub mod error;
pub mod experiments;
pub mod lattice;
pub mod mapping;
pub mod particles;
pub mod pathspace;
pub mod rng;
pub mod sde;
pub mod stats;
pub mod svg;
pub mod tolerances;

pub use error::{Error, Result};
