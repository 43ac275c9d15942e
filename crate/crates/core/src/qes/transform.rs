//! Similarity transforms that slave mode 2 to mode 1.
//!
//! Conjugating by `S = (a2†)^(η N1)` or `T = (a2)^(α N1)` with `η = α = s/p`
//! removes `N1` from the transformed charge, so on the block `K = κ` the mode-2
//! occupation becomes the diagonal function `n2(n1) = (κ − s·n1)/p`. What is
//! left of each term is a mode-1 ladder pair times a polynomial in `n2`.
//!
//! The transforms are realized at the level of these slaved factors; the
//! fractional powers of `a2†` and `a2` never appear as operators.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::{require_conserving, ConservedCharge, OperatorPolynomial};
use crate::error::{Error, Result};
use crate::rational::Coeff;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Conjugation by `S`: mode-2 lowering turns into a falling factorial.
    S,
    /// Conjugation by `T`: mode-2 raising turns into a rising factorial.
    T,
    /// Blocks taken directly from the Fock-space matrix elements, rescaled to
    /// the monomial basis.
    MatrixElement,
}

/// Coefficient of `N1` and `N2` in a transformed charge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformedCharge {
    pub n1: BigRational,
    pub n2: BigRational,
}

/// `S K S⁻¹ = (s − pη) N1 + p N2` and `T K T⁻¹ = (s + pη) N1 + p N2`.
pub fn transformed_charge(charge: ConservedCharge, eta: &BigRational, route: Route) -> TransformedCharge {
    let s = BigRational::from_integer(BigInt::from(charge.s()));
    let p = BigRational::from_integer(BigInt::from(charge.p()));
    let n1 = match route {
        Route::T => &s + &p * eta,
        Route::S | Route::MatrixElement => &s - &p * eta,
    };
    TransformedCharge { n1, n2: p }
}

/// Polynomial in the slaved occupation `n2`, integer coefficients, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlavedFactor {
    coeffs: Vec<BigInt>,
}

impl SlavedFactor {
    pub fn one() -> Self {
        Self {
            coeffs: vec![BigInt::one()],
        }
    }

    fn times_linear(&self, shift: i64) -> Self {
        // (n2 + shift) · self
        let mut out = vec![BigInt::zero(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i + 1] += c;
            out[i] += c * BigInt::from(shift);
        }
        Self { coeffs: out }
    }

    /// `n2 (n2 − 1) ⋯ (n2 − m + 1)`.
    pub fn falling(m: u32) -> Self {
        (0..m as i64).fold(Self::one(), |acc, j| acc.times_linear(-j))
    }

    /// `(n2 + 1) (n2 + 2) ⋯ (n2 + m)`.
    pub fn rising(m: u32) -> Self {
        Self::rising_from(m, 0)
    }

    /// `(n2 − below + 1) ⋯ (n2 − below + m)`, i.e. `(n2 − below + m)!/(n2 − below)!`.
    pub fn rising_from(m: u32, below: u32) -> Self {
        (1..=m as i64).fold(Self::one(), |acc, j| acc.times_linear(j - below as i64))
    }

    /// `n2^m`.
    pub fn power(m: u32) -> Self {
        let mut coeffs = vec![BigInt::zero(); m as usize + 1];
        coeffs[m as usize] = BigInt::one();
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn eval(&self, n2: u64) -> BigInt {
        let x = BigInt::from(n2);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
    }

    pub fn is_constant_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

impl std::fmt::Display for SlavedFactor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let body = match (i, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => "n2".to_string(),
                (1, false) => format!("{mag}·n2"),
                (_, true) => format!("n2^{i}"),
                (_, false) => format!("{mag}·n2^{i}"),
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, " {sign} {body}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `coeff · (a1†)^m1 (a1)^m2 · factor(n2)`, the factor evaluated on the
/// occupation the term acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedTerm {
    pub m1: u32,
    pub m2: u32,
    pub coeff: Coeff,
    pub factor: SlavedFactor,
}

/// A single-boson operator on one `K` block.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedOperator {
    pub charge: ConservedCharge,
    pub route: Route,
    /// Slaved factors use the plain power `n2^m4` rather than the falling
    /// factorial; only exact when every `m4 ≤ 1`.
    pub literal_power: bool,
    pub terms: Vec<ReducedTerm>,
    /// Kept for the matrix-element route, whose blocks come from `H` itself.
    pub(crate) source: Option<OperatorPolynomial>,
}

impl ReducedOperator {
    /// The transform exponent `η = α = s/p`.
    pub fn transform_exponent(&self) -> BigRational {
        BigRational::new(BigInt::from(self.charge.s()), BigInt::from(self.charge.p()))
    }
}

fn reduce(h: &OperatorPolynomial, charge: ConservedCharge, route: Route, literal_power: bool) -> Result<ReducedOperator> {
    require_conserving(h, charge)?;
    let mut terms = Vec::with_capacity(h.len());
    for (e, c) in h.terms() {
        // (a2†)^m (a2)^m is the number-operator function n2!/(n2 − m)!, which
        // both routes carry as is; other mixed words are left to the
        // matrix-element route.
        if e.m3 > 0 && e.m4 > 0 && e.m3 != e.m4 {
            return Err(Error::UnsupportedTermShape(e.as_array()));
        }
        let factor = match (route, literal_power) {
            (Route::S, false) => SlavedFactor::falling(e.m4),
            (Route::S, true) => SlavedFactor::power(e.m4),
            (Route::T, _) => SlavedFactor::rising_from(e.m3, e.m4),
            (Route::MatrixElement, _) => unreachable!("matrix-element route has no term factors"),
        };
        terms.push(ReducedTerm {
            m1: e.m1,
            m2: e.m2,
            coeff: c.clone(),
            factor,
        });
    }
    Ok(ReducedOperator {
        charge,
        route,
        literal_power,
        terms,
        source: None,
    })
}

/// `S H S⁻¹`: `(a2†)^m3 (a2)^m4` acting on `n2` becomes `n2!/(n2 − m4)!`.
///
/// Accepts terms that are pure raising, pure lowering, or diagonal
/// (`m3 = m4`) in mode 2.
pub fn reduce_via_s(h: &OperatorPolynomial, charge: ConservedCharge) -> Result<ReducedOperator> {
    reduce(h, charge, Route::S, false)
}

/// The S-route with the slaved factor read as the plain power `n2^m4`.
pub fn reduce_via_s_literal(h: &OperatorPolynomial, charge: ConservedCharge) -> Result<ReducedOperator> {
    reduce(h, charge, Route::S, true)
}

/// `T H T⁻¹`: `(a2†)^m3 (a2)^m4` acting on `n2` becomes `(n2 − m4 + m3)!/(n2 − m4)!`,
/// which is `(n2 + m3)!/n2!` for pure raising and `1` for pure lowering.
pub fn reduce_via_t(h: &OperatorPolynomial, charge: ConservedCharge) -> Result<ReducedOperator> {
    reduce(h, charge, Route::T, false)
}

/// Matrix-element route; accepts any conserving `H`.
pub fn reduce_via_matrix_elements(h: &OperatorPolynomial, charge: ConservedCharge) -> Result<ReducedOperator> {
    require_conserving(h, charge)?;
    Ok(ReducedOperator {
        charge,
        route: Route::MatrixElement,
        literal_power: false,
        terms: Vec::new(),
        source: Some(h.clone()),
    })
}

/// S-route when every term has a supported mode-2 shape, matrix-element
/// route otherwise.
pub fn reduce_auto(h: &OperatorPolynomial, charge: ConservedCharge) -> Result<ReducedOperator> {
    match reduce_via_s(h, charge) {
        Err(Error::UnsupportedTermShape(_)) => reduce_via_matrix_elements(h, charge),
        other => other,
    }
}
