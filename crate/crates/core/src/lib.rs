//! Geometry and nonclassicality tooling for the P3 network correlation scenario.
//!
//! Three parties sit on a line, with one independent common cause shared by
//! each neighbouring pair. The classically realisable behaviours of that
//! causal structure form a non-convex set whose extreme points are the 64
//! deterministic strategies. This crate:
//!
//! * enumerates the strategies and their 26-D / 8-D vertex vectors ([`strategy`]),
//! * decides which vertex pairs see each other and analyses the resulting
//!   visibility graph ([`geometry`]),
//! * simulates entanglement-based key distribution with and without a
//!   man in the middle ([`quantum`]),
//! * measures the departure of a behaviour from the uncorrelated manifold
//!   ([`manifold`]),
//! * and runs the statistical tests used to decide whether an observed
//!   behaviour matches the expected one ([`stats`]).

pub mod cli;
pub mod error;
pub mod geometry;
pub mod manifold;
pub mod quantum;
pub mod stats;
pub mod strategy;

pub use error::{Error, Result};
