//! Schrödinger form of the second-harmonic reduced equation.
//!
//! With `z = −1/(κ̄ y²)` and `φ(z) = e^{−∫W dy} ψ(y)` the reduced operator
//! becomes a one-dimensional Hamiltonian with a sextic potential. The
//! identity is checked numerically, and the potential can be diagonalized on
//! a finite-difference grid for comparison with the algebraic levels.

use std::fmt;

use num::complex::Complex64;
use num::Zero;
use serde::Serialize;

use crate::algebra::ConservedCharge;
use crate::catalog::build_shg;
use crate::error::{Error, Result};
use crate::linalg::tridiagonal_lowest;
use crate::poly::Poly;
use crate::qes::{qes_spectrum, shg_ode, EnergyMode};
use crate::rational::{int, is_real, rational_to_f64, to_complex64, Coeff};

/// Second-harmonic parameters `(ω1, ω2, κ, κ̄)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShgParams {
    pub omega1: Coeff,
    pub omega2: Coeff,
    pub kappa: Coeff,
    pub kappa_bar: Coeff,
}

impl ShgParams {
    pub fn new(omega1: Coeff, omega2: Coeff, kappa: Coeff, kappa_bar: Coeff) -> Self {
        Self {
            omega1,
            omega2,
            kappa,
            kappa_bar,
        }
    }

    fn detuning(&self) -> Coeff {
        &self.omega2 - &self.omega1 * int(2)
    }

    fn coupling(&self) -> Coeff {
        &self.kappa * &self.kappa_bar
    }
}

/// `W(y) = inverse/y + linear·y + cubic·y³`.
#[derive(Debug, Clone, PartialEq)]
pub struct Superpotential {
    pub inverse: Coeff,
    pub linear: Coeff,
    pub cubic: Coeff,
}

impl Superpotential {
    pub fn zero() -> Self {
        Self {
            inverse: Coeff::zero(),
            linear: Coeff::zero(),
            cubic: Coeff::zero(),
        }
    }

    pub fn eval(&self, y: Complex64) -> Complex64 {
        to_complex64(&self.inverse) / y + to_complex64(&self.linear) * y + to_complex64(&self.cubic) * y.powi(3)
    }

    /// An antiderivative of `W`.
    pub fn integral(&self, y: Complex64) -> Complex64 {
        to_complex64(&self.inverse) * y.ln() + to_complex64(&self.linear) * y * y / 2.0
            + to_complex64(&self.cubic) * y.powi(4) / 4.0
    }
}

pub fn gauge_superpotential(params: &ShgParams, k: u64) -> Superpotential {
    Superpotential {
        inverse: int(k as i64),
        linear: params.detuning() / int(4),
        cubic: -params.coupling() / int(4),
    }
}

/// `c0 + c2 y² + c4 y⁴ + c6 y⁶`.
#[derive(Debug, Clone, PartialEq)]
pub struct SexticPotential {
    pub c0: Coeff,
    pub c2: Coeff,
    pub c4: Coeff,
    pub c6: Coeff,
}

impl SexticPotential {
    pub fn zero() -> Self {
        Self {
            c0: Coeff::zero(),
            c2: Coeff::zero(),
            c4: Coeff::zero(),
            c6: Coeff::zero(),
        }
    }

    pub fn coefficients(&self) -> [&Coeff; 4] {
        [&self.c0, &self.c2, &self.c4, &self.c6]
    }

    pub fn eval(&self, y: Complex64) -> Complex64 {
        let y2 = y * y;
        let [c0, c2, c4, c6] = self.coefficients().map(to_complex64);
        c0 + y2 * (c2 + y2 * (c4 + y2 * c6))
    }

    pub fn is_real(&self) -> bool {
        self.coefficients().iter().all(|c| is_real(c))
    }

    /// Real-valued evaluator; fails for complex coefficients.
    pub fn real_evaluator(&self) -> Result<impl Fn(f64) -> f64> {
        if !self.is_real() {
            return Err(Error::InvalidParameter("potential has complex coefficients".into()));
        }
        let [c0, c2, c4, c6] = self.coefficients().map(|c| rational_to_f64(&c.re));
        Ok(move |y: f64| {
            let y2 = y * y;
            c0 + y2 * (c2 + y2 * (c4 + y2 * c6))
        })
    }
}

pub fn sextic_potential(params: &ShgParams, k: u64) -> SexticPotential {
    let k = k as i64;
    let det = params.detuning();
    let g = params.coupling();
    SexticPotential {
        c0: (&params.omega2 * int(2 * k + 5) - &params.omega1 * int(2)) / int(4),
        c2: (&det * &det - &g * int(4 * (2 * k + 3))) / int(16),
        c4: -(&g * &det) / int(8),
        c6: &g * &g / int(16),
    }
}

/// Sign and normalization choices for `φ = exp(exponent_sign · ∫ w_sign·W) ψ`
/// and `−kinetic·d²/dy² + V − shift`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaugeConvention {
    pub w_sign: i8,
    pub exponent_sign: i8,
    pub kinetic: f64,
}

impl GaugeConvention {
    /// The printed form: `φ = e^{−∫W} ψ` with kinetic prefactor ½.
    pub const PRINTED: GaugeConvention = GaugeConvention {
        w_sign: 1,
        exponent_sign: -1,
        kinetic: 0.5,
    };

    pub fn all() -> Vec<GaugeConvention> {
        let mut out = Vec::new();
        for w_sign in [1, -1] {
            for exponent_sign in [-1, 1] {
                for kinetic in [0.5, 1.0] {
                    out.push(GaugeConvention {
                        w_sign,
                        exponent_sign,
                        kinetic,
                    });
                }
            }
        }
        out
    }

    fn gauge(&self, w: &Superpotential, y: f64) -> Complex64 {
        (w.integral(Complex64::new(y, 0.0)) * f64::from(self.w_sign * self.exponent_sign)).exp()
    }
}

impl fmt::Display for GaugeConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |s: i8| if s > 0 { '+' } else { '-' };
        write!(
            f,
            "W sign {}, exponent sign {}, kinetic {}",
            sign(self.w_sign),
            sign(self.exponent_sign),
            self.kinetic
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaugeReport {
    pub convention: GaugeConvention,
    /// Largest residual relative to the size of the operator images.
    pub residual: f64,
    /// Constant fitted so that `L φ = g (−kinetic ψ'' + (V − shift) ψ)`.
    pub shift: Complex64,
    pub tried: Vec<(GaugeConvention, f64)>,
}

pub const GAUGE_TOLERANCE: f64 = 1e-6;

/// Seven-point central second derivative.
pub fn second_derivative(f: &dyn Fn(f64) -> Complex64, y: f64, h: f64) -> Complex64 {
    const W: [f64; 7] = [2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0];
    let sum: Complex64 = W
        .iter()
        .enumerate()
        .map(|(i, w)| f(y + (i as f64 - 3.0) * h) * *w)
        .sum();
    sum / (180.0 * h * h)
}

/// A function of `y` and the image of some operator applied to it.
pub struct TestPair<'a> {
    pub phi: &'a dyn Fn(f64) -> Complex64,
    pub image: &'a dyn Fn(f64) -> Complex64,
}

/// Compares `image(y)` with `g (−kinetic ψ'' + V ψ − shift ψ)` where
/// `ψ = φ / g`, fitting one complex shift over all pairs and points.
/// Returns `(relative residual, shift)`.
pub fn conjugation_residual(
    pairs: &[TestPair<'_>],
    w: &Superpotential,
    v: &SexticPotential,
    convention: GaugeConvention,
    points: &[f64],
) -> (f64, Complex64) {
    let mut rows = Vec::new();
    let mut scale = 0.0f64;
    for pair in pairs {
        let psi = |y: f64| (pair.phi)(y) / convention.gauge(w, y);
        for &y in points {
            let g = convention.gauge(w, y);
            let p = psi(y);
            let kinetic = -second_derivative(&psi, y, 1e-3 * y.abs()) * convention.kinetic;
            let potential = v.eval(Complex64::new(y, 0.0)) * p;
            let lhs = (pair.image)(y);
            scale = scale.max(lhs.norm()).max((g * kinetic).norm()).max((g * potential).norm());
            rows.push((lhs - g * (kinetic + potential), g * p));
        }
    }
    // minimize Σ |a + shift·b|²
    let num: Complex64 = rows.iter().map(|(a, b)| b.conj() * a).sum();
    let den: f64 = rows.iter().map(|(_, b)| b.norm_sqr()).sum();
    let shift = if den > 0.0 { -num / den } else { Complex64::zero() };
    let worst = rows.iter().map(|(a, b)| (a + shift * b).norm()).fold(0.0, f64::max);
    let residual = if scale > 0.0 { worst / scale } else { worst };
    (residual, shift)
}

/// Verifies that the gauge transformation carries the reduced operator
/// (corrected constant term) into `−kinetic d²/dy² + V − shift`, searching
/// every [`GaugeConvention`]. Test polynomials are in `z`; sample points
/// must be nonzero.
pub fn gauge_identity_residual(params: &ShgParams, k: u64, test_polys: &[Poly], points: &[f64]) -> Result<GaugeReport> {
    if params.kappa_bar.is_zero() {
        return Err(Error::InvalidParameter("change of variable needs κ̄ ≠ 0".into()));
    }
    if points.iter().any(|y| *y == 0.0 || !y.is_finite()) {
        return Err(Error::InvalidParameter("sample points must be finite and nonzero".into()));
    }
    let ode = shg_ode(
        &params.omega1,
        &params.omega2,
        &params.kappa,
        &params.kappa_bar,
        k,
        EnergyMode::Corrected,
    );
    let kb = to_complex64(&params.kappa_bar);
    let z_of = move |y: f64| -1.0 / (kb * y * y);
    let c3 = to_complex64(&ode.c3);
    let derivs: Vec<(Poly, Poly, Poly)> = test_polys
        .iter()
        .map(|p| (p.clone(), p.derivative(), p.derivative().derivative()))
        .collect();
    let phis: Vec<Box<dyn Fn(f64) -> Complex64>> = derivs
        .iter()
        .map(|(p, _, _)| {
            let p = p.clone();
            Box::new(move |y: f64| p.eval_f64(z_of(y))) as Box<dyn Fn(f64) -> Complex64>
        })
        .collect();
    let images: Vec<Box<dyn Fn(f64) -> Complex64>> = derivs
        .iter()
        .map(|(p, d1, d2)| {
            let (p, d1, d2, c1, c0) = (p.clone(), d1.clone(), d2.clone(), ode.c1.clone(), ode.c0.clone());
            Box::new(move |y: f64| {
                let z = z_of(y);
                c3 * z.powi(3) * d2.eval_f64(z) + c1.eval_f64(z) * d1.eval_f64(z) + c0.eval_f64(z) * p.eval_f64(z)
            }) as Box<dyn Fn(f64) -> Complex64>
        })
        .collect();
    let pairs: Vec<TestPair<'_>> = phis
        .iter()
        .zip(&images)
        .map(|(phi, image)| TestPair {
            phi: phi.as_ref(),
            image: image.as_ref(),
        })
        .collect();
    let w = gauge_superpotential(params, k);
    let v = sextic_potential(params, k);
    let mut best: Option<(GaugeConvention, f64, Complex64)> = None;
    let mut tried = Vec::new();
    for convention in GaugeConvention::all() {
        let (residual, shift) = conjugation_residual(&pairs, &w, &v, convention, points);
        let residual = if residual.is_finite() { residual } else { f64::INFINITY };
        tried.push((convention, residual));
        if best.is_none_or(|(_, r, _)| residual < r) {
            best = Some((convention, residual, shift));
        }
    }
    let (convention, residual, shift) = best.expect("convention set is non-empty");
    if residual > GAUGE_TOLERANCE {
        return Err(Error::ConventionMismatch {
            best: residual,
            tried: tried.iter().map(|(c, r)| (c.to_string(), *r)).collect(),
        });
    }
    Ok(GaugeReport {
        convention,
        residual,
        shift,
        tried,
    })
}

/// Lowest `count` eigenvalues of `−kinetic ψ'' + V ψ` on `[−L, L]` with
/// Dirichlet ends and `n` interior points.
pub fn fd_spectrum_with_kinetic(
    v: &dyn Fn(f64) -> f64,
    kinetic: f64,
    half_width: f64,
    n: usize,
    count: usize,
) -> Result<Vec<f64>> {
    if n < 3 {
        return Err(Error::InvalidGrid(format!("need at least 3 points, got {n}")));
    }
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(Error::InvalidGrid(format!("half-width must be positive, got {half_width}")));
    }
    if kinetic.is_nan() || kinetic <= 0.0 {
        return Err(Error::InvalidGrid(format!("kinetic prefactor must be positive, got {kinetic}")));
    }
    let h = 2.0 * half_width / (n + 1) as f64;
    let t = kinetic / (h * h);
    let diag: Vec<f64> = (1..=n).map(|i| 2.0 * t + v(-half_width + i as f64 * h)).collect();
    let off = vec![-t; n - 1];
    Ok(tridiagonal_lowest(&diag, &off, count))
}

/// Lowest `count` eigenvalues of `−½ψ'' + V ψ` on `[−L, L]`.
pub fn fd_spectrum(v: &dyn Fn(f64) -> f64, half_width: f64, n: usize, count: usize) -> Result<Vec<f64>> {
    fd_spectrum_with_kinetic(v, 0.5, half_width, n, count)
}

/// Solves on `n` and `2n` points; fails with [`Error::GridTooCoarse`] when a
/// level moves by more than `tol`. Returns the finer levels.
pub fn fd_spectrum_refined(
    v: &(dyn Fn(f64) -> f64 + Sync),
    kinetic: f64,
    half_width: f64,
    n: usize,
    count: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    let (coarse, fine) = rayon::join(
        || fd_spectrum_with_kinetic(v, kinetic, half_width, n, count),
        || fd_spectrum_with_kinetic(v, kinetic, half_width, 2 * n + 1, count),
    );
    let (coarse, fine) = (coarse?, fine?);
    for (level, (a, b)) in coarse.iter().zip(&fine).enumerate() {
        let change = (a - b).abs();
        if change > tol {
            return Err(Error::GridTooCoarse { level, change, tol });
        }
    }
    Ok(fine)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FdComparison {
    /// Algebraic levels of the block `κ = k`, ascending.
    pub qes: Vec<f64>,
    /// Lowest levels of `−ψ'' + V ψ` on the grid.
    pub fd: Vec<f64>,
    /// `fd_match[i] − qes[i]`, averaged.
    pub shift: f64,
    /// Largest deviation of an individual offset from `shift`.
    pub spread: f64,
    pub fd_match: Vec<f64>,
}

/// Diagonalizes the sextic Hamiltonian with unit kinetic prefactor and
/// locates the algebraic levels in its spectrum up to one constant offset.
pub fn compare_with_fd(params: &ShgParams, k: u64, half_width: f64, n: usize) -> Result<FdComparison> {
    let h = build_shg(
        params.omega1.clone(),
        params.omega2.clone(),
        params.kappa.clone(),
        params.kappa_bar.clone(),
    );
    let report = qes_spectrum(&h, ConservedCharge::new(1, 2)?, k)?;
    if report.eigenvalues.iter().any(|e| e.im.abs() > 1e-9 * e.norm().max(1.0)) {
        return Err(Error::InvalidParameter("block spectrum is not real".into()));
    }
    let qes: Vec<f64> = report.eigenvalues.iter().map(|e| e.re).collect();
    let v = sextic_potential(params, k).real_evaluator()?;
    let count = 5usize.max(k as usize + 2);
    let fd = fd_spectrum_with_kinetic(&v, 1.0, half_width, n, count)?;
    let nearest = |x: f64| fd.iter().copied().min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()));
    let mut best: Option<(f64, f64, Vec<f64>)> = None;
    for &anchor in &fd {
        let offset = anchor - qes[0];
        let matched: Vec<f64> = qes.iter().map(|e| nearest(e + offset).expect("non-empty")).collect();
        let offsets: Vec<f64> = matched.iter().zip(&qes).map(|(m, e)| m - e).collect();
        let mean = offsets.iter().sum::<f64>() / offsets.len() as f64;
        let spread = offsets.iter().map(|o| (o - mean).abs()).fold(0.0, f64::max);
        if best.as_ref().is_none_or(|(_, s, _)| spread < *s) {
            best = Some((mean, spread, matched));
        }
    }
    let (shift, spread, fd_match) = best.ok_or_else(|| Error::InvalidGrid("no levels computed".into()))?;
    Ok(FdComparison {
        qes,
        fd,
        shift,
        spread,
        fd_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn params() -> ShgParams {
        ShgParams::new(int(1), int(2), ratio(1, 2), ratio(1, 2))
    }

    fn points() -> Vec<f64> {
        (0..16).map(|i| 0.5 + 1.5 * i as f64 / 15.0).collect()
    }

    #[test]
    fn superpotential_examples() {
        let w = gauge_superpotential(&params(), 2);
        assert_eq!((w.inverse, w.linear, w.cubic), (int(2), int(0), ratio(-1, 16)));
        let w = gauge_superpotential(&ShgParams::new(int(1), int(2), int(3), int(1)), 0);
        assert_eq!((w.inverse, w.linear, w.cubic), (int(0), int(0), ratio(-3, 4)));
        let w = gauge_superpotential(&ShgParams::new(int(1), int(3), int(0), int(1)), 1);
        assert_eq!(w.cubic, int(0));
    }

    #[test]
    fn potential_examples() {
        let v = sextic_potential(&params(), 2);
        assert_eq!(v.coefficients(), [&int(4), &ratio(-7, 16), &int(0), &ratio(1, 256)]);
        let v = sextic_potential(&ShgParams::new(int(1), int(5), int(0), int(2)), 3);
        assert_eq!((v.c2, v.c4, v.c6), (ratio(9, 16), int(0), int(0)));
    }

    #[test]
    fn gauge_identity_holds_with_unit_kinetic_and_omega2_shift() {
        let polys = [Poly::one(), Poly::x(), Poly::new(vec![int(1), ratio(-2, 3), ratio(1, 5)])];
        for k in 0..4 {
            let r = gauge_identity_residual(&params(), k, &polys, &points()).unwrap();
            assert!(r.residual < 1e-6, "k={k}: {}", r.residual);
            assert_eq!(r.convention.kinetic, 1.0);
            assert_eq!(r.convention.w_sign * r.convention.exponent_sign, -1);
            assert!((r.shift - Complex64::new(2.0, 0.0)).norm() < 1e-6, "{}", r.shift);
            let printed = r.tried.iter().find(|(c, _)| *c == GaugeConvention::PRINTED).unwrap();
            assert!(printed.1 > 1e-3);
        }
    }

    #[test]
    fn degenerate_case_is_plain_kinetic() {
        let phi = |y: f64| Complex64::new((y * 1.3).sin() + y * y, 0.0);
        let image = |y: f64| Complex64::new(0.5 * 1.69 * (y * 1.3).sin() - 1.0, 0.0);
        let pairs = [TestPair {
            phi: &phi,
            image: &image,
        }];
        let (residual, shift) = conjugation_residual(
            &pairs,
            &Superpotential::zero(),
            &SexticPotential::zero(),
            GaugeConvention::PRINTED,
            &points(),
        );
        assert!(residual < 1e-8, "{residual}");
        assert!(shift.norm() < 1e-8);
    }

    #[test]
    fn harmonic_oscillator_levels() {
        let v = |y: f64| 0.5 * y * y;
        let levels = fd_spectrum(&v, 10.0, 2000, 5).unwrap();
        for (i, l) in levels.iter().enumerate() {
            assert!((l - (i as f64 + 0.5)).abs() < 1e-3, "{i}: {l}");
        }
    }

    #[test]
    fn second_order_convergence() {
        let v = |y: f64| 0.5 * y * y;
        let err = |n| (fd_spectrum(&v, 10.0, n, 1).unwrap()[0] - 0.5).abs();
        let ratio = err(400) / err(801);
        assert!((3.5..=4.5).contains(&ratio), "{ratio}");
    }

    #[test]
    fn refinement_detects_coarse_grids() {
        let v = |y: f64| 0.5 * y * y;
        assert!(matches!(
            fd_spectrum_refined(&v, 0.5, 10.0, 20, 3, 1e-6),
            Err(Error::GridTooCoarse { .. })
        ));
        assert!(fd_spectrum_refined(&v, 0.5, 10.0, 2000, 3, 1e-3).is_ok());
        assert!(fd_spectrum(&v, 10.0, 2, 1).is_err());
        assert!(fd_spectrum(&v, 0.0, 10, 1).is_err());
    }

    #[test]
    fn qes_levels_appear_in_the_sextic_spectrum() {
        let cmp = compare_with_fd(&params(), 2, 6.0, 4000).unwrap();
        assert_eq!(cmp.qes.len(), 2);
        assert!(cmp.spread < 1e-3, "{cmp:?}");
        assert!((cmp.shift - 2.0).abs() < 1e-3, "{cmp:?}");
    }

    #[test]
    fn complex_potential_is_rejected_for_fd() {
        let p = ShgParams::new(int(1), int(2), crate::rational::complex(crate::rational::rat(0, 1), crate::rational::rat(1, 1)), int(1));
        assert!(sextic_potential(&p, 1).real_evaluator().is_err());
    }
}
