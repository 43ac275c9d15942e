//! Finite-block spectra of two-mode bosonic Hamiltonians.

pub mod algebra;
pub mod error;
pub mod linalg;
pub mod rational;

pub use error::{Error, Result};
pub mod catalog;
pub mod oracle;
pub mod poly;
pub mod qes;
pub mod sextic;
pub mod cli;
