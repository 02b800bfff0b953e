//! Differentially private sublinear-time estimators for graph parameters.
//!
//! The crate is organised around a query-counting [`Oracle`] facade over an
//! immutable [`Graph`]. Estimators only touch the graph through the facade,
//! so the number of degree and neighbor queries they make is observable:
//!
//! * [`avg_degree`] estimates the average degree under edge-level privacy,
//!   using noisy degree buckets and a merged low-degree bucket.
//! * [`matching`] estimates maximum-matching and minimum-vertex-cover sizes
//!   through local greedy-matching oracles driven by a random edge ranking.
//! * [`audit`] checks the sensitivity and privacy claims behind both by
//!   brute force on small instances.
//!
//! Randomness comes from [`NoiseSource`], a seeded counter-based generator
//! that derives independent child streams per algorithm stage.

pub mod audit;
pub mod avg_degree;
pub mod error;
pub mod graph;
pub mod matching;
pub mod noise;
pub mod par;
pub mod trials;

pub use error::{Error, Result};
pub use graph::{Graph, NeighborKind, NeighborPair, Oracle, QueryCounts, Witness};
pub use noise::NoiseSource;
pub use par::Execution;
