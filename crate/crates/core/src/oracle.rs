//! Ground-truth spectra from the exact invariant Fock blocks.
//!
//! When `[K, H] = 0` with `s, p ≥ 1`, the eigenspace `K = κ` is spanned by the
//! finitely many states with `s·n1 + p·n2 = κ`, and `H` maps it into itself.
//! The block matrix is therefore the exact restriction of `H`: there is no
//! truncation anywhere, which is what makes this module usable as an oracle
//! for every other route.

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::rational::BigRational;
use num::Zero;
use serde::Serialize;

use crate::algebra::{
    apply_to_fock, charge_of_state, require_conserving, ConservedCharge, FockState,
    OperatorPolynomial,
};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, Eigensystem};
use crate::rational::{factorial, rational_to_f64, Coeff};

/// Residual tolerance for accepting an eigendecomposition, relative to
/// `max(1, max |M_ij|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub residual_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { residual_tol: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMethod {
    OracleHermitian,
    OracleGeneral,
    ReducedBanded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub kappa: u64,
    pub dimension: usize,
    /// Ascending by (real, imag).
    pub eigenvalues: Vec<Complex64>,
    pub method: SpectrumMethod,
    pub max_residual: f64,
}

/// All `(n1, n2) ≥ 0` with `s·n1 + p·n2 = kappa`, by increasing `n2`.
pub fn enumerate_block(charge: ConservedCharge, kappa: u64) -> Vec<FockState> {
    (0..=kappa / charge.p())
        .filter_map(|n2| {
            let rest = kappa - charge.p() * n2;
            rest.is_multiple_of(charge.s()).then(|| FockState::new(rest / charge.s(), n2))
        })
        .collect()
}

fn occupation_weight(state: FockState) -> BigRational {
    BigRational::from_integer(factorial(state.n1) * factorial(state.n2))
}

/// Exact block in scaled form: entry `(row, col)` is the rational `c` with
/// `⟨row|H|col⟩ = c · sqrt(row! / col!)`, where `n! = n1! n2!`.
pub fn block_matrix_scaled(h: &OperatorPolynomial, basis: &[FockState]) -> Result<DMatrix<Coeff>> {
    let n = basis.len();
    let mut out = DMatrix::from_element(n, n, Coeff::zero());
    for (col, &state) in basis.iter().enumerate() {
        let image = apply_to_fock(h, state);
        for target in image.support() {
            let row = basis
                .iter()
                .position(|b| *b == target)
                .ok_or(Error::BlockClosureViolation(target))?;
            let (c, radicand) = image.exact_amplitude(target).expect("target is in the support");
            // radicand = target!/state! already; `c` is the scaled entry.
            debug_assert_eq!(radicand, occupation_weight(target) / occupation_weight(state));
            out[(row, col)] = c;
        }
    }
    Ok(out)
}

/// Numeric block matrix. Each entry is assembled from its exact rational
/// parts and rounded once.
pub fn block_matrix(h: &OperatorPolynomial, basis: &[FockState]) -> Result<CMatrix> {
    let scaled = block_matrix_scaled(h, basis)?;
    Ok(unscale(&scaled, basis))
}

fn unscale(scaled: &DMatrix<Coeff>, basis: &[FockState]) -> CMatrix {
    CMatrix::from_fn(basis.len(), basis.len(), |row, col| {
        let c = &scaled[(row, col)];
        if c.is_zero() {
            return Complex64::zero();
        }
        let ratio = occupation_weight(basis[row]) / occupation_weight(basis[col]);
        let factor = rational_to_f64(&ratio).sqrt();
        Complex64::new(rational_to_f64(&c.re) * factor, rational_to_f64(&c.im) * factor)
    })
}

/// The finite invariant subspace `K = kappa` together with `H` restricted to it.
#[derive(Debug, Clone)]
pub struct FockBlock {
    pub charge: ConservedCharge,
    pub kappa: u64,
    pub basis: Vec<FockState>,
    /// See [`block_matrix_scaled`].
    pub scaled: DMatrix<Coeff>,
    pub matrix: CMatrix,
}

impl FockBlock {
    pub fn new(h: &OperatorPolynomial, charge: ConservedCharge, kappa: u64) -> Result<Self> {
        require_conserving(h, charge)?;
        let basis = enumerate_block(charge, kappa);
        debug_assert!(basis.iter().all(|b| charge_of_state(charge, *b) == kappa));
        let scaled = block_matrix_scaled(h, &basis)?;
        let matrix = unscale(&scaled, &basis);
        Ok(Self {
            charge,
            kappa,
            basis,
            scaled,
            matrix,
        })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// `M = M†` decided on the exact entries: `c_ij · i! = conj(c_ji) · j!`.
    pub fn is_exactly_hermitian(&self) -> bool {
        let n = self.dimension();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let wi = crate::rational::real(occupation_weight(self.basis[i]));
                let wj = crate::rational::real(occupation_weight(self.basis[j]));
                &self.scaled[(i, j)] * wi == self.scaled[(j, i)].conj() * wj
            })
        })
    }

    pub fn eigensystem(&self, hermitian: bool) -> Result<Eigensystem> {
        linalg::eigen(&self.matrix, hermitian)
    }
}

pub(crate) fn check_residual(max_residual: f64, m: &CMatrix, options: &SolveOptions) -> Result<()> {
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let tol = options.residual_tol * scale;
    if max_residual.is_nan() || max_residual > tol {
        return Err(Error::NumericalFailure {
            residual: max_residual,
            tol,
        });
    }
    Ok(())
}

/// Oracle eigenvalues and eigenvectors of block `kappa`.
pub fn block_eigensystem(
    h: &OperatorPolynomial,
    charge: ConservedCharge,
    kappa: u64,
) -> Result<(FockBlock, Eigensystem)> {
    let block = FockBlock::new(h, charge, kappa)?;
    let eig = block.eigensystem(h.is_hermitian())?;
    Ok((block, eig))
}

pub fn block_spectrum(h: &OperatorPolynomial, charge: ConservedCharge, kappa: u64) -> Result<SpectrumReport> {
    block_spectrum_with(h, charge, kappa, &SolveOptions::default())
}

pub fn block_spectrum_with(
    h: &OperatorPolynomial,
    charge: ConservedCharge,
    kappa: u64,
    options: &SolveOptions,
) -> Result<SpectrumReport> {
    let hermitian = h.is_hermitian();
    let block = FockBlock::new(h, charge, kappa)?;
    let eig = block.eigensystem(hermitian)?;
    let max_residual = eig.max_residual(&block.matrix);
    check_residual(max_residual, &block.matrix, options)?;
    Ok(SpectrumReport {
        kappa,
        dimension: block.dimension(),
        eigenvalues: eig.values,
        method: if hermitian {
            SpectrumMethod::OracleHermitian
        } else {
            SpectrumMethod::OracleGeneral
        },
        max_residual,
    })
}
