//! Edge deletion to destroy all k-edge paths in a weighted DAG.
//!
//! The crate solves the covering LP by row generation, rounds fractional
//! solutions with random vertex labels, analyses label distributions exactly
//! and checks everything against an exact branch-and-bound solver.

pub mod cli;
pub mod dist;
pub mod exact;
pub mod generate;
pub mod graph;
pub mod io;
pub mod lp;
pub mod rounding;
#[cfg(test)]
mod testutil;
pub mod verify;
