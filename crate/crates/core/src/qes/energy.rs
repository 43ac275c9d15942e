use std::fmt;

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::Zero;
use serde::Serialize;

use super::block::{reduced_block_matrix, spectrum_of_block, ReducedBlock};
use crate::algebra::{ConservedCharge, Exponents, OperatorPolynomial};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::oracle::{SolveOptions, SpectrumReport};
use crate::poly::Poly;
use crate::rational::{int, to_complex64, Coeff};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyMode {
    /// Diagonal `k·ω1 + m(ω2 − 2ω1)`, isospectral with the Fock block.
    #[default]
    Corrected,
    /// Adds the `a2†a2` coefficient to every diagonal entry, the form whose
    /// spectra come out shifted by `ω2` for second-harmonic generation.
    PaperLiteral,
}

impl fmt::Display for EnergyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnergyMode::Corrected => "corrected",
            EnergyMode::PaperLiteral => "paper-literal",
        })
    }
}

/// Energy polynomials `P_0 = 1, P_1, …, P_{d-1}` and the termination
/// polynomial whose roots are the block spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyPolynomialTable {
    pub kappa: u64,
    pub mode: EnergyMode,
    pub polys: Vec<Poly>,
    /// Vanishes exactly on the spectrum; degree equals the block dimension.
    pub termination: Poly,
    pub termination_degree: usize,
    /// Recurrence `Σ_j R[m][j] P_j = E P_m`, indexed by slaved occupation `m = n2`.
    pub recurrence: DMatrix<Coeff>,
}

impl EnergyPolynomialTable {
    pub fn recurrence_matrix(&self) -> CMatrix {
        self.recurrence.map(|c| to_complex64(&c))
    }

    pub fn recurrence_spectrum(&self) -> Result<Vec<Complex64>> {
        Ok(linalg::general_eigen(&self.recurrence_matrix())?.values)
    }

    pub fn termination_roots(&self) -> Result<Vec<Complex64>> {
        self.termination.roots()
    }
}

/// The reduced block re-indexed by `n2` (reverse degree order). For second
/// harmonic generation this is the coefficient recurrence of the reduced ODE.
pub fn occupation_ordered(block: &ReducedBlock) -> DMatrix<Coeff> {
    let d = block.dimension();
    DMatrix::from_fn(d, d, |i, j| block.exact[(d - 1 - i, d - 1 - j)].clone())
}

pub fn energy_polynomial_table(
    h: &OperatorPolynomial,
    charge: ConservedCharge,
    kappa: u64,
    mode: EnergyMode,
) -> Result<EnergyPolynomialTable> {
    let block = reduced_block_matrix(h, charge, kappa)?;
    let mut recurrence = occupation_ordered(&block).transpose();
    let shift = literal_shift(h, mode);
    for i in 0..recurrence.nrows() {
        recurrence[(i, i)] = &recurrence[(i, i)] + &shift;
    }
    table_from_recurrence(kappa, mode, recurrence)
}

/// The `a2†a2` coefficient added to the diagonal in paper-literal mode.
pub fn literal_shift(h: &OperatorPolynomial, mode: EnergyMode) -> Coeff {
    match mode {
        EnergyMode::Corrected => Coeff::zero(),
        EnergyMode::PaperLiteral => h.coefficient(Exponents::new(0, 0, 1, 1)),
    }
}

/// Spectrum of the energy recurrence in the given mode, by dense eigensolve.
/// Needs no band structure, so it covers every conserving `H`.
pub fn qes_spectrum_in_mode(
    h: &OperatorPolynomial,
    charge: ConservedCharge,
    kappa: u64,
    mode: EnergyMode,
    options: &SolveOptions,
) -> Result<SpectrumReport> {
    let block = reduced_block_matrix(h, charge, kappa)?;
    let mut report = spectrum_of_block(&block, options)?;
    let shift = to_complex64(&literal_shift(h, mode));
    for e in &mut report.eigenvalues {
        *e += shift;
    }
    Ok(report)
}

/// Generates `P_{m+1}` from row `m` of a lower-Hessenberg recurrence with
/// nonzero superdiagonal; the last row yields the termination polynomial.
pub fn table_from_recurrence(kappa: u64, mode: EnergyMode, r: DMatrix<Coeff>) -> Result<EnergyPolynomialTable> {
    let d = r.nrows();
    for i in 0..d {
        for j in i + 2..d {
            if !r[(i, j)].is_zero() {
                return Err(Error::BandStructureUnsupported(format!(
                    "entry ({i}, {j}) lies above the first superdiagonal"
                )));
            }
        }
    }
    if d == 0 {
        return Ok(EnergyPolynomialTable {
            kappa,
            mode,
            polys: Vec::new(),
            termination: Poly::one(),
            termination_degree: 0,
            recurrence: r,
        });
    }
    let e = Poly::x();
    let row_sum = |polys: &[Poly], m: usize| -> Poly {
        polys
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != m)
            .fold(Poly::zero(), |acc, (j, p)| &acc + &p.scale(&r[(m, j)]))
    };
    let mut polys = vec![Poly::one()];
    for m in 0..d - 1 {
        let sup = &r[(m, m + 1)];
        if sup.is_zero() {
            return Err(Error::BandStructureUnsupported(format!(
                "superdiagonal entry ({m}, {}) vanishes",
                m + 1
            )));
        }
        let diag = &e - &Poly::constant(r[(m, m)].clone());
        let next = &(&diag * &polys[m]) - &row_sum(&polys, m);
        polys.push(next.scale(&(int(1) / sup)));
    }
    let last = d - 1;
    let termination = &(&row_sum(&polys, last) + &polys[last].scale(&r[(last, last)])) - &(&e * &polys[last]);
    Ok(EnergyPolynomialTable {
        kappa,
        mode,
        polys,
        termination,
        termination_degree: d,
        recurrence: r,
    })
}
