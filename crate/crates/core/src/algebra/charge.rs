use num::integer::Integer;
use serde::Serialize;

use super::{BosonMonomial, Exponents, OperatorPolynomial};
use crate::error::{Error, Result};
use crate::rational::int;

/// Weighted number operator `K = s·N1 + p·N2`, stored with `gcd(s, p) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ConservedCharge {
    s: u64,
    p: u64,
}

impl ConservedCharge {
    pub fn new(s: i64, p: i64) -> Result<Self> {
        if s < 1 || p < 1 {
            return Err(Error::InvalidCharge { s, p });
        }
        let g = s.gcd(&p);
        Ok(Self {
            s: (s / g) as u64,
            p: (p / g) as u64,
        })
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `K` as an operator polynomial.
    pub fn operator(&self) -> OperatorPolynomial {
        OperatorPolynomial::from_terms([
            BosonMonomial::new(int(self.s as i64), 1, 1, 0, 0),
            BosonMonomial::new(int(self.p as i64), 0, 0, 1, 1),
        ])
    }

    /// `s(m1 - m2) + p(m3 - m4)`: the eigenvalue of `ad_K` on the word.
    pub fn weight(&self, exps: Exponents) -> i64 {
        let (d1, d2) = exps.shift();
        self.s as i64 * d1 + self.p as i64 * d2
    }

    pub fn charge_of_state(&self, state: FockState) -> u64 {
        self.s * state.n1 + self.p * state.n2
    }

    /// The closed form of `[K, H]`: every term scaled by its weight.
    pub fn commutator_closed_form(&self, h: &OperatorPolynomial) -> OperatorPolynomial {
        let mut out = OperatorPolynomial::zero();
        for (e, c) in h.terms() {
            out.add_term(e, c * &int(self.weight(e)));
        }
        out
    }

    /// Mode-2 occupation forced by `s·n1 + p·n2 = kappa`, if it is a
    /// non-negative integer.
    pub fn slaved_occupation(&self, kappa: u64, n1: u64) -> Option<u64> {
        let used = self.s.checked_mul(n1)?;
        if used > kappa {
            return None;
        }
        let rest = kappa - used;
        rest.is_multiple_of(self.p).then_some(rest / self.p)
    }

    /// Every charge with `s, p ≤ limit` (in lowest terms) under which `h` conserves.
    pub fn all_conserving(h: &OperatorPolynomial, limit: u64) -> Vec<ConservedCharge> {
        let mut out = Vec::new();
        for s in 1..=limit {
            for p in 1..=limit {
                if s.gcd(&p) != 1 {
                    continue;
                }
                let c = ConservedCharge { s, p };
                if conserves(h, c) {
                    out.push(c);
                }
            }
        }
        out
    }
}

/// Occupation-number basis state `|n1, n2⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FockState {
    pub n1: u64,
    pub n2: u64,
}

impl FockState {
    pub const VACUUM: FockState = FockState { n1: 0, n2: 0 };

    pub const fn new(n1: u64, n2: u64) -> Self {
        Self { n1, n2 }
    }
}

pub fn charge_of_state(charge: ConservedCharge, state: FockState) -> u64 {
    charge.charge_of_state(state)
}

/// True iff every term of `h` has zero `K`-weight.
pub fn conserves(h: &OperatorPolynomial, charge: ConservedCharge) -> bool {
    h.terms().all(|(e, _)| charge.weight(e) == 0)
}

pub(crate) fn require_conserving(h: &OperatorPolynomial, charge: ConservedCharge) -> Result<()> {
    if conserves(h, charge) {
        Ok(())
    } else {
        Err(Error::NonConservingHamiltonian {
            s: charge.s,
            p: charge.p,
        })
    }
}
