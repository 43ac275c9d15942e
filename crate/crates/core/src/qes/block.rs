use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::rational::BigRational;
use num::Zero;

use super::transform::{reduce_auto, ReducedOperator, Route};
use crate::algebra::{require_conserving, ConservedCharge, FockState, OperatorPolynomial};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, Eigensystem};
use crate::oracle::{self, enumerate_block, SolveOptions, SpectrumMethod, SpectrumReport};
use crate::rational::{falling_factorial, ln_factorial, real, to_complex64, Coeff};

/// Monomial degrees `n` with a non-negative integer slaved occupation,
/// ascending. These are exactly the `n1` values of the Fock block.
pub fn physical_degrees(charge: ConservedCharge, kappa: u64) -> Vec<u64> {
    let mut degrees: Vec<u64> = enumerate_block(charge, kappa).iter().map(|b| b.n1).collect();
    degrees.reverse();
    degrees
}

/// A reduced operator restricted to one block, in the monomial basis `x^n`.
#[derive(Debug, Clone)]
pub struct ReducedBlock {
    pub charge: ConservedCharge,
    pub kappa: u64,
    pub route: Route,
    pub degrees: Vec<u64>,
    /// Entry `(i, j)`: coefficient of `x^{degrees[i]}` in the image of `x^{degrees[j]}`.
    pub exact: DMatrix<Coeff>,
}

impl ReducedBlock {
    pub fn dimension(&self) -> usize {
        self.degrees.len()
    }

    pub fn matrix(&self) -> CMatrix {
        self.exact.map(|c| to_complex64(&c))
    }

    /// Fock state paired with each degree.
    pub fn states(&self) -> Vec<FockState> {
        self.degrees
            .iter()
            .map(|&n| {
                let n2 = self.charge.slaved_occupation(self.kappa, n).expect("physical degree");
                FockState::new(n, n2)
            })
            .collect()
    }

    pub fn eigensystem(&self) -> Result<Eigensystem> {
        linalg::general_eigen(&self.matrix())
    }
}

impl ReducedOperator {
    /// Block `kappa`. Contributions that would leave the physical sector
    /// (annihilating more quanta than the slaved mode holds) are dropped.
    pub fn block(&self, kappa: u64) -> Result<ReducedBlock> {
        let degrees = physical_degrees(self.charge, kappa);
        let exact = match (&self.route, &self.source) {
            (Route::MatrixElement, Some(h)) => {
                // D⁻¹ M D with D = diag(sqrt(n1! n2!)) is the scaled oracle block.
                let basis = enumerate_block(self.charge, kappa);
                let scaled = oracle::block_matrix_scaled(h, &basis)?;
                let d = basis.len();
                DMatrix::from_fn(d, d, |i, j| scaled[(d - 1 - i, d - 1 - j)].clone())
            }
            _ => self.block_from_terms(kappa, &degrees),
        };
        Ok(ReducedBlock {
            charge: self.charge,
            kappa,
            route: self.route,
            degrees,
            exact,
        })
    }

    fn block_from_terms(&self, kappa: u64, degrees: &[u64]) -> DMatrix<Coeff> {
        let d = degrees.len();
        let index: BTreeMap<u64, usize> = degrees.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let mut out = DMatrix::from_element(d, d, Coeff::zero());
        for (col, &n) in degrees.iter().enumerate() {
            let n2 = self.charge.slaved_occupation(kappa, n).expect("physical degree");
            for t in &self.terms {
                if n < t.m2 as u64 {
                    continue;
                }
                let target = n - t.m2 as u64 + t.m1 as u64;
                let Some(&row) = index.get(&target) else {
                    continue;
                };
                let weight = falling_factorial(n, t.m2 as u64) * t.factor.eval(n2);
                if weight.is_zero() {
                    continue;
                }
                let value = &t.coeff * real(BigRational::from_integer(weight));
                out[(row, col)] = &out[(row, col)] + value;
            }
        }
        out
    }
}

/// Reduced block through the S-route, or through matrix elements when `H`
/// has mode-2 words the S-route does not carry. Either way it equals
/// `D⁻¹ M D`, `M` the Fock block and `D = diag(sqrt(n1! n2!))`.
pub fn reduced_block_matrix(h: &OperatorPolynomial, charge: ConservedCharge, kappa: u64) -> Result<ReducedBlock> {
    reduce_auto(h, charge)?.block(kappa)
}

/// Number of terminating energy polynomials, i.e. the block dimension.
pub fn termination_degree(h: &OperatorPolynomial, charge: ConservedCharge, kappa: u64) -> Result<usize> {
    require_conserving(h, charge)?;
    Ok(enumerate_block(charge, kappa).len())
}

pub fn qes_spectrum(h: &OperatorPolynomial, charge: ConservedCharge, kappa: u64) -> Result<SpectrumReport> {
    qes_spectrum_with(h, charge, kappa, &SolveOptions::default())
}

pub fn qes_spectrum_with(
    h: &OperatorPolynomial,
    charge: ConservedCharge,
    kappa: u64,
    options: &SolveOptions,
) -> Result<SpectrumReport> {
    let block = reduced_block_matrix(h, charge, kappa)?;
    spectrum_of_block(&block, options)
}

pub fn spectrum_of_block(block: &ReducedBlock, options: &SolveOptions) -> Result<SpectrumReport> {
    let m = block.matrix();
    let eig = linalg::general_eigen(&m)?;
    let max_residual = eig.max_residual(&m);
    oracle::check_residual(max_residual, &m, options)?;
    Ok(SpectrumReport {
        kappa: block.kappa,
        dimension: block.dimension(),
        eigenvalues: eig.values,
        method: SpectrumMethod::ReducedBanded,
        max_residual,
    })
}

/// Maps monomial coefficients `c(n1)` of a reduced eigenvector to normalized
/// Fock amplitudes `A(n1, n2) ∝ c(n1) · sqrt(n1! n2!)`, listed in block-basis
/// order (increasing `n2`).
pub fn eigenvector_to_fock(
    coeffs: &BTreeMap<u64, Complex64>,
    charge: ConservedCharge,
    kappa: u64,
) -> Result<Vec<(FockState, Complex64)>> {
    let basis = enumerate_block(charge, kappa);
    if let Some(&bad) = coeffs.keys().find(|n| !basis.iter().any(|b| b.n1 == **n)) {
        return Err(Error::DegreeOutsidePhysicalSector(bad));
    }
    // sqrt(n1! n2!) in log form, rescaled by the largest weight.
    let log_weights: Vec<f64> = basis
        .iter()
        .map(|b| 0.5 * (ln_factorial(b.n1) + ln_factorial(b.n2)))
        .collect();
    let top = log_weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut amps: Vec<(FockState, Complex64)> = basis
        .iter()
        .zip(&log_weights)
        .map(|(b, lw)| {
            let c = coeffs.get(&b.n1).copied().unwrap_or_default();
            (*b, c * (lw - top).exp())
        })
        .collect();
    let norm = amps.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for (_, a) in &mut amps {
            *a /= norm;
        }
    }
    Ok(amps)
}
