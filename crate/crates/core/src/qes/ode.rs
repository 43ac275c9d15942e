use nalgebra::DMatrix;
use num::Zero;

use super::energy::EnergyMode;
use crate::poly::Poly;
use crate::rational::{int, Coeff};

/// `c3·z³φ'' + c1(z)·φ' + c0(z)·φ = E·φ`, the second-harmonic equation for
/// `ψ = x1^k φ(z)` with `z = x2 / x1^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeCoefficients {
    pub mode: EnergyMode,
    pub k: u64,
    pub c3: Coeff,
    pub c1: Poly,
    pub c0: Poly,
}

pub fn shg_ode(omega1: &Coeff, omega2: &Coeff, kappa: &Coeff, kappa_bar: &Coeff, k: u64, mode: EnergyMode) -> OdeCoefficients {
    let ki = k as i64;
    let c3 = kappa_bar * int(4);
    let c1 = Poly::new(vec![
        kappa.clone(),
        omega2 - omega1 * int(2),
        kappa_bar * int(2 * (3 - 2 * ki)),
    ]);
    let mut constant = omega1 * int(ki);
    if mode == EnergyMode::PaperLiteral {
        constant += omega2;
    }
    let c0 = Poly::new(vec![constant, kappa_bar * int(ki * (ki - 1))]);
    OdeCoefficients { mode, k, c3, c1, c0 }
}

impl OdeCoefficients {
    /// 2 unless `c3` vanishes.
    pub fn order(&self) -> u32 {
        if !self.c3.is_zero() {
            2
        } else if !self.c1.is_zero() {
            1
        } else {
            0
        }
    }

    /// Coefficient of `z^m` in the left-hand side applied to `z^j`, for
    /// `m, j < dim`. The span of `1, …, z^{⌊k/2⌋}` is invariant.
    pub fn coefficient_matrix(&self, dim: usize) -> DMatrix<Coeff> {
        let mut out = DMatrix::from_element(dim, dim, Coeff::zero());
        let mut add = |row: usize, col: usize, value: Coeff| {
            if row < dim {
                out[(row, col)] = &out[(row, col)] + value;
            }
        };
        for j in 0..dim {
            let ji = j as i64;
            if j >= 2 {
                add(j + 1, j, &self.c3 * int(ji * (ji - 1)));
            }
            for (d, c) in self.c1.coeffs().iter().enumerate() {
                if j >= 1 {
                    add(j - 1 + d, j, c * int(ji));
                }
            }
            for (d, c) in self.c0.coeffs().iter().enumerate() {
                add(j + d, j, c.clone());
            }
        }
        out
    }
}
