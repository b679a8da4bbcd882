//! One-dimensional reduction toolkit for higher-order Sobolev-type
//! embeddings: rearrangements, Hardy-type kernel operators driven by
//! isoperimetric profiles, rearrangement-invariant norms and their
//! associates, optimal-target constructions, and a verification harness.

pub mod error;
pub mod grid;
pub mod norms;
pub mod operators;
pub mod profiles;
pub mod quad;
pub mod targets;
pub mod verify;

pub use error::{Result, RskError};
