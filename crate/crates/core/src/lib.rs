//! Seeded local community detection by direct optimization of σ-conductance.
//!
//! The numerical code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`, which is what the CLI uses.

pub mod diffusion;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod generators;
pub mod graph;
pub mod objective;
pub mod optim;
pub mod scalar;
pub mod theory;

pub use error::{Error, Result};
pub use graph::{Adjacency, Graph, LocalNeighborhood, NodeId, NodeSet};
pub use scalar::Scalar;

pub type MembershipVector64 = objective::MembershipVector<f64>;
pub type MembershipVector32 = objective::MembershipVector<f32>;
pub type DetectionResult64 = optim::DetectionResult<f64>;
pub type DetectionResult32 = optim::DetectionResult<f32>;
pub type PgdParams64 = optim::PgdParams<f64>;
pub type EmParams64 = optim::EmParams<f64>;
pub type SigmaSchedule64 = optim::SigmaSchedule<f64>;
pub type PprParams64 = diffusion::PprParams<f64>;
pub type SweepProfile64 = diffusion::SweepProfile<f64>;
