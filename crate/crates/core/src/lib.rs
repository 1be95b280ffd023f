//! n-quasigroups of order 4, the MDS codes and double-codes they induce,
//! and an exhaustive census of reduced quasigroups.
//!
//! Vertices of Σⁿ, Σ = {0,1,2,3}, are indexed in base 4 with the first
//! coordinate most significant. Coordinates are 0-based throughout the API.

pub mod census;
pub mod cli;
pub mod dcode;
pub mod error;
pub mod quasigroup;
pub mod space;

pub use error::{Error, Result};
pub use quasigroup::Quasigroup;
pub use space::{CellSet, Isotopy, Perm4, Vertex};
