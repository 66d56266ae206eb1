//! Semantic workbench for a family of finite-height extensions of S4 and
//! their intermediate-logic companions.
//!
//! The crate decides validity over each logic's finite frame class, computes
//! uniform Lyndon interpolants by enumerating polarity-restricted formula
//! families to a signature fixpoint, builds and checks the labeled amalgams
//! behind the amalgamation argument, and reproduces a counterexample showing
//! that Lyndon interpolation fails for a band of logics in between two of
//! them. Everything is decided semantically against finite model classes;
//! there is no proof search.

pub mod amalgam;
pub mod decide;
pub mod formula;
pub mod gen;
pub mod heyting;
pub mod interp;
pub mod kripke;

pub(crate) mod bits;
pub(crate) mod sem;

use thiserror::Error;

/// Crate-wide error type. `Internal` marks broken guarantees (a witness the
/// construction promises could not be found); everything else is bad input
/// or a resource cap.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("unknown logic tag: {0}")]
    UnknownLogic(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
