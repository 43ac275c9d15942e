use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::Zero;

use super::{BosonMonomial, FockState, OperatorPolynomial};
use crate::rational::{factorial, falling_factorial, rational_to_f64, real, Coeff};

fn occupation_weight(state: FockState) -> BigInt {
    factorial(state.n1) * factorial(state.n2)
}

/// An exact vector in the two-mode Fock space.
///
/// Ladder amplitudes are square roots of integers, so the amplitude on
/// `|n1, n2⟩` is stored as `coeff · sqrt(n1! n2! / weight)` with `coeff` an
/// exact complex rational and `weight` shared by the whole vector. Every
/// normal-ordered word maps this form to itself, so repeated application stays
/// exact.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    coeffs: BTreeMap<FockState, Coeff>,
    weight: BigRational,
}

impl FockVector {
    pub fn basis(state: FockState) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(state, Coeff::new(BigRational::from_integer(1.into()), BigRational::zero()));
        Self {
            coeffs,
            weight: BigRational::from_integer(occupation_weight(state)),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn support(&self) -> impl Iterator<Item = FockState> + '_ {
        self.coeffs.keys().copied()
    }

    /// Exact amplitude as `(c, r)` meaning `c · sqrt(r)`.
    pub fn exact_amplitude(&self, state: FockState) -> Option<(Coeff, BigRational)> {
        self.coeffs.get(&state).map(|c| {
            let radicand = BigRational::from_integer(occupation_weight(state)) / &self.weight;
            (c.clone(), radicand)
        })
    }

    /// Amplitude rounded to `f64`; the radicand is reduced exactly first.
    pub fn amplitude(&self, state: FockState) -> Complex64 {
        match self.exact_amplitude(state) {
            Some((c, radicand)) => {
                let scale = rational_to_f64(&radicand).sqrt();
                Complex64::new(rational_to_f64(&c.re) * scale, rational_to_f64(&c.im) * scale)
            }
            None => Complex64::zero(),
        }
    }

    pub fn amplitudes(&self) -> BTreeMap<FockState, Complex64> {
        self.support().map(|s| (s, self.amplitude(s))).collect()
    }

    fn apply_monomial_into(&self, m: &BosonMonomial, out: &mut BTreeMap<FockState, Coeff>) {
        let e = m.exponents;
        for (state, c) in &self.coeffs {
            let (n1, n2) = (state.n1, state.n2);
            if n1 < e.m2 as u64 || n2 < e.m4 as u64 {
                continue;
            }
            // sqrt(n!/(n-m2)!) from the annihilators and sqrt(n'!/(n-m2)!) from
            // the creators combine to the integer n!/(n-m2)! in this scaling.
            let ladder = falling_factorial(n1, e.m2 as u64) * falling_factorial(n2, e.m4 as u64);
            let target = FockState::new(n1 - e.m2 as u64 + e.m1 as u64, n2 - e.m4 as u64 + e.m3 as u64);
            let term = c * &m.coeff * real(BigRational::from_integer(ladder));
            let slot = out.entry(target).or_insert_with(Coeff::zero);
            *slot = &*slot + &term;
        }
    }

    pub fn apply(&self, h: &OperatorPolynomial) -> FockVector {
        let mut out = BTreeMap::new();
        for m in h.monomials() {
            self.apply_monomial_into(&m, &mut out);
        }
        out.retain(|_, c| !c.is_zero());
        FockVector {
            coeffs: out,
            weight: self.weight.clone(),
        }
    }
}

/// Exact image of `|state⟩` under `h`; terms that annihilate more quanta than
/// present contribute nothing.
pub fn apply_to_fock(h: &OperatorPolynomial, state: FockState) -> FockVector {
    FockVector::basis(state).apply(h)
}
