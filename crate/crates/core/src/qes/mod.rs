//! Reduction of two-mode blocks to single-boson operators, energy
//! polynomials and the associated differential equation.

pub mod block;
pub mod energy;
pub mod ode;
pub mod transform;

pub use block::*;
pub use energy::*;
pub use ode::*;
pub use transform::*;
