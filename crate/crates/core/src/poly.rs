//! Dense univariate polynomials with exact complex-rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::{One, Signed, Zero};

use crate::error::Result;
use crate::linalg::{self, CMatrix};
use crate::rational::{to_complex64, Coeff, DisplayCoeff};

/// `Σ coeffs[i] · x^i`, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<Coeff>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Coeff>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Coeff) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::new(vec![Coeff::zero(), Coeff::one()])
    }

    pub fn monomial(c: Coeff, degree: usize) -> Self {
        let mut coeffs = vec![Coeff::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Coeff {
        self.coeffs.get(i).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * crate::rational::int(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Coeff) -> Coeff {
        self.coeffs
            .iter()
            .rev()
            .fold(Coeff::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| acc * x + to_complex64(c))
    }

    /// Roots as eigenvalues of the companion matrix, sorted by (real, imag).
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let Some(n) = self.degree() else {
            return Ok(Vec::new());
        };
        if n == 0 {
            return Ok(Vec::new());
        }
        let lead = to_complex64(&self.coeffs[n]);
        let mut companion = CMatrix::zeros(n, n);
        for i in 1..n {
            companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..n {
            companion[(i, n - 1)] = -to_complex64(&self.coeffs[i]) / lead;
        }
        Ok(linalg::general_eigen(&companion)?.values)
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Coeff::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative_real = c.im.is_zero() && c.re.is_negative();
            let shown = if negative_real && !first { -c } else { c.clone() };
            if !first {
                write!(f, "{}", if negative_real { " - " } else { " + " })?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", DisplayCoeff(&shown))?,
                1 => write!(f, "{}·E", DisplayCoeff(&shown))?,
                _ => write!(f, "{}·E^{i}", DisplayCoeff(&shown))?,
            }
        }
        Ok(())
    }
}

/// `det(x·I − A)` by the Faddeev–LeVerrier recursion, exact over the rationals.
pub fn characteristic_polynomial(a: &DMatrix<Coeff>) -> Poly {
    let n = a.nrows();
    let mut coeffs = vec![Coeff::zero(); n + 1];
    coeffs[n] = Coeff::one();
    let mut m = DMatrix::from_element(n, n, Coeff::zero());
    for k in 1..=n {
        let mut next = a * &m;
        for i in 0..n {
            next[(i, i)] = &next[(i, i)] + &coeffs[n - k + 1];
        }
        m = next;
        let am = a * &m;
        let trace = (0..n).fold(Coeff::zero(), |acc, i| acc + &am[(i, i)]);
        coeffs[n - k] = -trace / crate::rational::int(k as i64);
    }
    Poly::new(coeffs)
}
