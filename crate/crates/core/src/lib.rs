//! Exact weighted-voting power analysis.
//!
//! Banzhaf and Shapley-Shubik indices computed with exact rationals, divisor
//! voting systems, and the index map `w -> index([1/2_s; w])` together with its
//! fixed points.

pub mod divisor;
pub mod error;
pub mod fixedpoint;
pub mod indices;
pub mod rational;
pub mod system;
pub mod verify;

pub use error::{Error, Result};
pub use indices::{Engine, EngineConfig};
pub use rational::{format_rational, parse_rational, Rational};
pub use system::{normalize, Coalition, IndexKind, IndexVector, QuotaMode, VotingSystem};
