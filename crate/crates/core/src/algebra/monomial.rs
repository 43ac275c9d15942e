use std::fmt;

use num::{One, Zero};

use super::OperatorPolynomial;
use crate::rational::{binomial, factorial, real, Coeff, DisplayCoeff};

/// Exponents of the canonical word `(a1†)^m1 (a1)^m2 (a2†)^m3 (a2)^m4`.
///
/// The derived ordering is lexicographic in `(m1, m2, m3, m4)`, which is the
/// order terms are stored and serialized in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Exponents {
    pub m1: u32,
    pub m2: u32,
    pub m3: u32,
    pub m4: u32,
}

impl Exponents {
    pub const IDENTITY: Exponents = Exponents::new(0, 0, 0, 0);

    pub const fn new(m1: u32, m2: u32, m3: u32, m4: u32) -> Self {
        Self { m1, m2, m3, m4 }
    }

    pub fn as_array(self) -> [u32; 4] {
        [self.m1, self.m2, self.m3, self.m4]
    }

    /// Exponents of the adjoint word (creation and annihilation swap per mode).
    pub fn adjoint(self) -> Self {
        Self::new(self.m2, self.m1, self.m4, self.m3)
    }

    /// Net change of the mode-1 and mode-2 occupations produced by the word.
    pub fn shift(self) -> (i64, i64) {
        (
            self.m1 as i64 - self.m2 as i64,
            self.m3 as i64 - self.m4 as i64,
        )
    }
}

impl From<[u32; 4]> for Exponents {
    fn from(m: [u32; 4]) -> Self {
        Self::new(m[0], m[1], m[2], m[3])
    }
}

/// One normal-ordered term `coeff · (a1†)^m1 (a1)^m2 (a2†)^m3 (a2)^m4`.
#[derive(Debug, Clone, PartialEq)]
pub struct BosonMonomial {
    pub coeff: Coeff,
    pub exponents: Exponents,
}

impl BosonMonomial {
    pub fn new(coeff: Coeff, m1: u32, m2: u32, m3: u32, m4: u32) -> Self {
        Self {
            coeff,
            exponents: Exponents::new(m1, m2, m3, m4),
        }
    }

    pub fn unit(m1: u32, m2: u32, m3: u32, m4: u32) -> Self {
        Self::new(Coeff::one(), m1, m2, m3, m4)
    }

    pub fn a1_dag() -> Self {
        Self::unit(1, 0, 0, 0)
    }

    pub fn a1() -> Self {
        Self::unit(0, 1, 0, 0)
    }

    pub fn a2_dag() -> Self {
        Self::unit(0, 0, 1, 0)
    }

    pub fn a2() -> Self {
        Self::unit(0, 0, 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Normal-ordered product `self · rhs`.
    pub fn product(&self, rhs: &BosonMonomial) -> OperatorPolynomial {
        monomial_product(self, rhs)
    }
}

impl fmt::Display for BosonMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", DisplayCoeff(&self.coeff))?;
        let e = self.exponents;
        for (name, power) in [("a1+", e.m1), ("a1", e.m2), ("a2+", e.m3), ("a2", e.m4)] {
            match power {
                0 => {}
                1 => write!(f, " {name}")?,
                _ => write!(f, " {name}^{power}")?,
            }
        }
        Ok(())
    }
}

/// Expands `a^annihilate (a†)^create` of one mode into normal order:
/// `Σ_j C(annihilate, j) C(create, j) j! (a†)^(create-j) a^(annihilate-j)`.
///
/// Returns `(weight, creation power, annihilation power)` triples.
fn single_mode_reorder(annihilate: u32, create: u32) -> Vec<(num::BigInt, u32, u32)> {
    (0..=annihilate.min(create))
        .map(|j| {
            let weight = binomial(annihilate as u64, j as u64)
                * binomial(create as u64, j as u64)
                * factorial(j as u64);
            (weight, create - j, annihilate - j)
        })
        .collect()
}

/// Normal-ordered canonical form of `lhs · rhs`.
///
/// Cross-mode commutators vanish, so the mode-1 and mode-2 reorderings are
/// carried out independently and multiplied together.
pub fn monomial_product(lhs: &BosonMonomial, rhs: &BosonMonomial) -> OperatorPolynomial {
    let mut out = OperatorPolynomial::zero();
    let coeff = &lhs.coeff * &rhs.coeff;
    if coeff.is_zero() {
        return out;
    }
    let (l, r) = (lhs.exponents, rhs.exponents);
    let mode1 = single_mode_reorder(l.m2, r.m1);
    let mode2 = single_mode_reorder(l.m4, r.m3);
    for (w1, c1, a1) in &mode1 {
        for (w2, c2, a2) in &mode2 {
            let weight = real(num::BigRational::from_integer(w1 * w2));
            let exps = Exponents::new(l.m1 + c1, a1 + r.m2, l.m3 + c2, a2 + r.m4);
            out.add_term(exps, &coeff * &weight);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn a1_times_a1_dag_gains_identity() {
        let p = monomial_product(&BosonMonomial::a1(), &BosonMonomial::a1_dag());
        let mut expected = OperatorPolynomial::zero();
        expected.add_term(Exponents::new(1, 1, 0, 0), int(1));
        expected.add_term(Exponents::IDENTITY, int(1));
        assert_eq!(p, expected);
    }

    #[test]
    fn squared_reordering() {
        let p = monomial_product(&BosonMonomial::unit(0, 2, 0, 0), &BosonMonomial::unit(2, 0, 0, 0));
        let mut expected = OperatorPolynomial::zero();
        expected.add_term(Exponents::new(2, 2, 0, 0), int(1));
        expected.add_term(Exponents::new(1, 1, 0, 0), int(4));
        expected.add_term(Exponents::IDENTITY, int(2));
        assert_eq!(p, expected);
    }

    #[test]
    fn modes_commute() {
        let p = monomial_product(&BosonMonomial::a2_dag(), &BosonMonomial::a1());
        assert_eq!(p.len(), 1);
        assert_eq!(p.coefficient(Exponents::new(0, 1, 1, 0)), int(1));
    }

    #[test]
    fn display_lists_factors() {
        let m = BosonMonomial::new(int(3), 2, 0, 0, 1);
        assert_eq!(m.to_string(), "3 a1+^2 a2");
    }
}
