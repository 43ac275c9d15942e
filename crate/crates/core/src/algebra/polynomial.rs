use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::Zero;

use super::monomial::{monomial_product, BosonMonomial, Exponents};
use crate::rational::Coeff;

/// Canonical sum of normal-ordered monomials.
///
/// Terms are keyed by their exponent tuple; zero coefficients are never stored,
/// so structural equality is operator equality.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OperatorPolynomial {
    terms: BTreeMap<Exponents, Coeff>,
}

impl OperatorPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::from_monomial(BosonMonomial::unit(0, 0, 0, 0))
    }

    pub fn from_monomial(m: BosonMonomial) -> Self {
        let mut out = Self::zero();
        out.add_term(m.exponents, m.coeff);
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = BosonMonomial>) -> Self {
        let mut out = Self::zero();
        for m in terms {
            out.add_term(m.exponents, m.coeff);
        }
        out
    }

    /// Accumulates `coeff` onto the term with exponents `exps`.
    pub fn add_term(&mut self, exps: Exponents, coeff: Coeff) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps).or_insert_with(Coeff::zero);
        *slot = &*slot + &coeff;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: Exponents) -> Coeff {
        self.terms.get(&exps).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Terms in canonical `(m1, m2, m3, m4)` order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponents, &Coeff)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn monomials(&self) -> impl Iterator<Item = BosonMonomial> + '_ {
        self.terms.iter().map(|(e, c)| BosonMonomial {
            coeff: c.clone(),
            exponents: *e,
        })
    }

    pub fn scale(&self, factor: &Coeff) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, c * factor);
        }
        out
    }

    /// Hermitian adjoint. Reversing a canonical word and daggering each factor
    /// gives `(a1†)^m2 (a1)^m1 (a2†)^m4 (a2)^m3`, already in normal order since
    /// the two modes commute.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(e.adjoint(), c.conj());
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        self.adjoint() == *self
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }
}

pub fn commutator(a: &OperatorPolynomial, b: &OperatorPolynomial) -> OperatorPolynomial {
    a.commutator(b)
}

pub fn is_hermitian(h: &OperatorPolynomial) -> bool {
    h.is_hermitian()
}

impl Add for &OperatorPolynomial {
    type Output = OperatorPolynomial;

    fn add(self, rhs: &OperatorPolynomial) -> OperatorPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &OperatorPolynomial {
    type Output = OperatorPolynomial;

    fn sub(self, rhs: &OperatorPolynomial) -> OperatorPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &OperatorPolynomial {
    type Output = OperatorPolynomial;

    fn neg(self) -> OperatorPolynomial {
        let mut out = OperatorPolynomial::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &OperatorPolynomial {
    type Output = OperatorPolynomial;

    fn mul(self, rhs: &OperatorPolynomial) -> OperatorPolynomial {
        let mut out = OperatorPolynomial::zero();
        for l in self.monomials() {
            for r in rhs.monomials() {
                for (e, c) in monomial_product(&l, &r).terms {
                    out.add_term(e, c);
                }
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for OperatorPolynomial {
            type Output = OperatorPolynomial;
            fn $method(self, rhs: OperatorPolynomial) -> OperatorPolynomial {
                (&self).$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl fmt::Display for OperatorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, m) in self.monomials().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}
