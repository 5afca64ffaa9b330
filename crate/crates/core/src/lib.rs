//! Periodic non-commutative weighted shifts on truncated Fock space.

pub mod classify;
pub mod cli;
pub mod config;
pub mod decomposition;
pub mod error;
pub mod fock;
pub mod periodicity;
pub mod scalar;
pub mod shift;
pub mod sparse;
pub mod words;

pub use error::{Error, Result};
