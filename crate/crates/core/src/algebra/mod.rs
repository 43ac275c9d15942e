//! Exact normal-ordered algebra of two boson modes.
//!
//! Operators are sums of words `(a1†)^m1 (a1)^m2 (a2†)^m3 (a2)^m4` with exact
//! complex-rational coefficients. Conservation, hermiticity and zero-commutator
//! checks are exact comparisons, never tolerance based.

mod charge;
mod fock;
mod monomial;
mod polynomial;

pub use charge::{charge_of_state, conserves, ConservedCharge, FockState};
pub(crate) use charge::require_conserving;
pub use fock::{apply_to_fock, FockVector};
pub use monomial::{monomial_product, BosonMonomial, Exponents};
pub use polynomial::{commutator, is_hermitian, OperatorPolynomial};
