#![allow(dead_code)]

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;
use qesboson::algebra::{BosonMonomial, ConservedCharge, Exponents, FockState, OperatorPolynomial};
use qesboson::rational::{complex, int, Coeff};
use rand::rngs::StdRng;
use rand::Rng;

pub fn small_rational(rng: &mut StdRng) -> BigRational {
    let num = rng.gen_range(-9i64..=9);
    let den = rng.gen_range(1i64..=5);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn small_coeff(rng: &mut StdRng) -> Coeff {
    let im = if rng.gen_bool(0.3) {
        small_rational(rng)
    } else {
        BigRational::zero()
    };
    complex(small_rational(rng), im)
}

pub fn nonzero_coeff(rng: &mut StdRng) -> Coeff {
    loop {
        let c = small_coeff(rng);
        if !c.is_zero() {
            return c;
        }
    }
}

pub fn random_word(rng: &mut StdRng, max: u32) -> Exponents {
    Exponents::new(
        rng.gen_range(0..=max),
        rng.gen_range(0..=max),
        rng.gen_range(0..=max),
        rng.gen_range(0..=max),
    )
}

pub fn random_polynomial(rng: &mut StdRng, terms: usize, max: u32) -> OperatorPolynomial {
    let mut h = OperatorPolynomial::zero();
    for _ in 0..terms {
        h.add_term(random_word(rng, max), nonzero_coeff(rng));
    }
    h
}

/// A word with `s(m1 − m2) + p(m3 − m4) = 0`; when `pure`, mode 2 is only
/// raised or only lowered (diagonal words excepted).
pub fn conserving_word(rng: &mut StdRng, charge: ConservedCharge, max: u32, pure: bool) -> Exponents {
    let (s, p) = (charge.s() as i64, charge.p() as i64);
    loop {
        let m1 = rng.gen_range(0..=max) as i64;
        let m2 = rng.gen_range(0..=max) as i64;
        let d = s * (m1 - m2);
        if d % p != 0 {
            continue;
        }
        let lift = if pure { 0 } else { rng.gen_range(0..=2) };
        let (m3, m4) = if d >= 0 { (lift, lift + d / p) } else { (lift - d / p, lift) };
        if m3 > 2 * max as i64 || m4 > 2 * max as i64 {
            continue;
        }
        return Exponents::new(m1 as u32, m2 as u32, m3 as u32, m4 as u32);
    }
}

pub fn conserving_polynomial(
    rng: &mut StdRng,
    charge: ConservedCharge,
    terms: usize,
    max: u32,
    pure: bool,
) -> OperatorPolynomial {
    let mut h = OperatorPolynomial::zero();
    for _ in 0..terms {
        h.add_term(conserving_word(rng, charge, max, pure), nonzero_coeff(rng));
    }
    h
}

pub fn hermitian_part(h: &OperatorPolynomial) -> OperatorPolynomial {
    h + &h.adjoint()
}

pub fn random_charge(rng: &mut StdRng) -> ConservedCharge {
    ConservedCharge::new(rng.gen_range(1..=3), rng.gen_range(1..=3)).unwrap()
}

/// Unnormalized ladder representation: `a e_n = n e_{n-1}`, `a† e_n = e_{n+1}`,
/// states above `cutoff` in either mode are discarded.
pub type LadderVector = BTreeMap<(u64, u64), Coeff>;

#[derive(Clone, Copy)]
pub enum Letter {
    Create1,
    Destroy1,
    Create2,
    Destroy2,
}

pub fn apply_letter(v: &LadderVector, letter: Letter, cutoff: u64) -> LadderVector {
    let mut out = LadderVector::new();
    for (&(n1, n2), c) in v {
        let (target, factor) = match letter {
            Letter::Create1 => ((n1 + 1, n2), 1),
            Letter::Create2 => ((n1, n2 + 1), 1),
            Letter::Destroy1 if n1 > 0 => ((n1 - 1, n2), n1 as i64),
            Letter::Destroy2 if n2 > 0 => ((n1, n2 - 1), n2 as i64),
            _ => continue,
        };
        if target.0 > cutoff || target.1 > cutoff {
            continue;
        }
        let slot = out.entry(target).or_insert_with(Coeff::zero);
        *slot = &*slot + c * int(factor);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Letters of a normal-ordered word, leftmost first.
pub fn letters(e: Exponents) -> Vec<Letter> {
    let mut out = Vec::new();
    out.extend(std::iter::repeat_n(Letter::Create1, e.m1 as usize));
    out.extend(std::iter::repeat_n(Letter::Destroy1, e.m2 as usize));
    out.extend(std::iter::repeat_n(Letter::Create2, e.m3 as usize));
    out.extend(std::iter::repeat_n(Letter::Destroy2, e.m4 as usize));
    out
}

pub fn apply_letters(v: &LadderVector, word: &[Letter], cutoff: u64) -> LadderVector {
    word.iter().rev().fold(v.clone(), |acc, l| apply_letter(&acc, *l, cutoff))
}

pub fn apply_polynomial(h: &OperatorPolynomial, v: &LadderVector, cutoff: u64) -> LadderVector {
    let mut out = LadderVector::new();
    for (e, c) in h.terms() {
        for (state, a) in apply_letters(v, &letters(e), cutoff) {
            let slot = out.entry(state).or_insert_with(Coeff::zero);
            *slot = &*slot + a * c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn unit(n1: u64, n2: u64) -> LadderVector {
    let mut v = LadderVector::new();
    v.insert((n1, n2), int(1));
    v
}

pub fn monomial(c: Coeff, e: Exponents) -> BosonMonomial {
    BosonMonomial::new(c, e.m1, e.m2, e.m3, e.m4)
}

pub fn state(n1: u64, n2: u64) -> FockState {
    FockState::new(n1, n2)
}
