//! Dense eigensolvers for the block matrices.
//!
//! Hermitian input goes through `SymmetricEigen`; everything else through a
//! balanced complex Schur form with eigenvectors recovered by back
//! substitution on the triangular factor.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use num::complex::Complex64;
use num::Zero;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Ascending by real part, ties broken by imaginary part.
pub fn cmp_eigenvalues(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

pub fn sort_eigenvalues(values: &mut [Complex64]) {
    values.sort_by(cmp_eigenvalues);
}

/// Largest positional gap between two spectra after sorting each.
/// Spectra of different length are infinitely far apart.
pub fn max_sorted_deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    sort_eigenvalues(&mut a);
    sort_eigenvalues(&mut b);
    a.iter()
        .zip(&b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone)]
pub struct Eigensystem {
    /// Sorted by [`cmp_eigenvalues`].
    pub values: Vec<Complex64>,
    /// Unit-norm right eigenvectors, aligned with `values`.
    pub vectors: Vec<CVector>,
}

impl Eigensystem {
    fn sorted(mut pairs: Vec<(Complex64, CVector)>) -> Self {
        pairs.sort_by(|a, b| cmp_eigenvalues(&a.0, &b.0));
        let (values, vectors) = pairs.into_iter().unzip();
        Self { values, vectors }
    }

    pub fn max_residual(&self, m: &CMatrix) -> f64 {
        self.values
            .iter()
            .zip(&self.vectors)
            .map(|(l, v)| eigen_residual(m, *l, v).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `‖M v − λ v‖₂ / ‖v‖₂`.
pub fn eigen_residual(m: &CMatrix, value: Complex64, v: &CVector) -> Result<f64> {
    let norm = v.norm();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let r = m * v - v * value;
    Ok(r.norm() / norm)
}

pub fn is_hermitian_matrix(m: &CMatrix) -> bool {
    m.is_square() && *m == m.adjoint()
}

pub fn hermitian_eigen(m: &CMatrix) -> Eigensystem {
    if m.nrows() == 0 {
        return Eigensystem {
            values: Vec::new(),
            vectors: Vec::new(),
        };
    }
    let eig = SymmetricEigen::new(m.clone());
    let pairs = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &l)| (Complex64::new(l, 0.0), eig.eigenvectors.column(i).into_owned()))
        .collect();
    Eigensystem::sorted(pairs)
}

/// Diagonal similarity by powers of two that evens out row and column norms
/// (Parlett–Reinsch). Returns the scaling `d` with `balanced = D⁻¹ M D`.
fn balance(m: &mut CMatrix) -> Vec<f64> {
    let n = m.nrows();
    let mut d = vec![1.0; n];
    let radix = 2.0;
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let (mut c, mut r) = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].norm();
                    r += m[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let total = c + r;
            let mut f = 1.0;
            while c < r / radix {
                c *= radix;
                r /= radix;
                f *= radix;
            }
            while c >= r * radix {
                c /= radix;
                r *= radix;
                f /= radix;
            }
            if c + r < 0.95 * total {
                converged = false;
                d[i] *= f;
                for j in 0..n {
                    m[(j, i)] *= f;
                    m[(i, j)] /= f;
                }
            }
        }
    }
    d
}

const SCHUR_MAX_ITER: usize = 100_000;

/// Diagonal shifts tried when the QR iteration stalls, as fractions of the
/// matrix norm. Symmetric zero-diagonal patterns can defeat the default shifts.
const RETRY_SHIFTS: [(f64, f64); 4] = [(0.0, 0.0), (0.312_5, 0.0), (-0.562_5, 0.140_625), (0.0, 0.687_5)];

fn schur_with_retries(m: &CMatrix, norm: f64) -> Result<(CMatrix, CMatrix)> {
    let n = m.nrows();
    for (re, im) in RETRY_SHIFTS {
        let sigma = Complex64::new(re * norm, im * norm);
        let shifted = m + CMatrix::identity(n, n) * sigma;
        if let Some(schur) = Schur::try_new(shifted, f64::EPSILON, SCHUR_MAX_ITER) {
            let (q, mut t) = schur.unpack();
            for i in 0..n {
                t[(i, i)] -= sigma;
            }
            return Ok((q, t));
        }
    }
    Err(Error::NumericalFailure {
        residual: f64::INFINITY,
        tol: 0.0,
    })
}

/// General complex eigendecomposition.
pub fn general_eigen(m: &CMatrix) -> Result<Eigensystem> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Eigensystem {
            values: Vec::new(),
            vectors: Vec::new(),
        });
    }
    if n == 1 {
        return Ok(Eigensystem {
            values: vec![m[(0, 0)]],
            vectors: vec![CVector::from_element(1, Complex64::new(1.0, 0.0))],
        });
    }
    let mut balanced = m.clone();
    let scaling = balance(&mut balanced);
    let norm = balanced.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let (q, t) = schur_with_retries(&balanced, norm)?;
    let small = f64::EPSILON * norm;
    let mut pairs = Vec::with_capacity(n);
    for i in 0..n {
        let lambda = t[(i, i)];
        // Solve (T − λ I) y = 0 with y_i = 1, y_j = 0 for j > i.
        let mut y = CVector::zeros(n);
        y[i] = Complex64::new(1.0, 0.0);
        for j in (0..i).rev() {
            let mut acc = Complex64::zero();
            for l in (j + 1)..=i {
                acc += t[(j, l)] * y[l];
            }
            let mut denom = t[(j, j)] - lambda;
            if denom.norm() < small {
                denom = Complex64::new(small, 0.0);
            }
            y[j] = -acc / denom;
        }
        let mut v = &q * y;
        for (k, s) in scaling.iter().enumerate() {
            v[k] *= *s;
        }
        let vn = v.norm();
        if vn > 0.0 {
            v /= Complex64::new(vn, 0.0);
        }
        pairs.push((lambda, v));
    }
    Ok(Eigensystem::sorted(pairs))
}

/// Hermitian path when the matrix is exactly Hermitian, general path otherwise.
pub fn eigen(m: &CMatrix, hermitian: bool) -> Result<Eigensystem> {
    if hermitian {
        Ok(hermitian_eigen(m))
    } else {
        general_eigen(m)
    }
}

/// Number of eigenvalues below `x` of the symmetric tridiagonal matrix with
/// diagonal `diag` and off-diagonal `off` (Sturm sequence).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, &a) in diag.iter().enumerate() {
        let b2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = a - x - if i == 0 { 0.0 } else { b2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (a.abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest `count` eigenvalues of a symmetric tridiagonal matrix, ascending,
/// by bisection on the Sturm count.
pub fn tridiagonal_lowest(diag: &[f64], off: &[f64], count: usize) -> Vec<f64> {
    let n = diag.len();
    let count = count.min(n);
    let radius = |i: usize| {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { off[i].abs() } else { 0.0 };
        left + right
    };
    let lo = (0..n).map(|i| diag[i] - radius(i)).fold(f64::INFINITY, f64::min);
    let hi = (0..n).map(|i| diag[i] + radius(i)).fold(f64::NEG_INFINITY, f64::max);
    let scale = lo.abs().max(hi.abs()).max(1.0);
    (0..count)
        .map(|k| {
            let (mut a, mut b) = (lo, hi);
            while b - a > 4.0 * f64::EPSILON * scale {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if sturm_count(diag, off, mid) > k {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn residual_of_identity_is_zero() {
        let m = CMatrix::identity(3, 3);
        let v = CVector::from_vec(vec![c(1.0), c(-2.0), c(0.5)]);
        assert_eq!(eigen_residual(&m, c(1.0), &v).unwrap(), 0.0);
    }

    #[test]
    fn residual_of_closed_form_pair() {
        let h = 0.5 * 2f64.sqrt();
        let m = CMatrix::from_row_slice(2, 2, &[c(2.0), c(h), c(h), c(2.0)]);
        let v = CVector::from_vec(vec![c(1.0), c(1.0)]);
        assert!(eigen_residual(&m, c(2.7071068), &v).unwrap() <= 1e-7);
    }

    #[test]
    fn residual_of_null_vector() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        let v = CVector::from_vec(vec![c(1.0), c(0.0)]);
        assert_eq!(eigen_residual(&m, c(0.0), &v).unwrap(), 0.0);
        assert_eq!(eigen_residual(&m, c(0.0), &CVector::zeros(2)), Err(Error::ZeroVector));
    }

    #[test]
    fn general_solver_on_nonsymmetric_tridiagonal() {
        let m = CMatrix::from_row_slice(2, 2, &[c(2.0), c(1.0), c(0.5), c(2.0)]);
        let eig = general_eigen(&m).unwrap();
        let r = 0.5f64.sqrt();
        assert!((eig.values[0].re - (2.0 - r)).abs() < 1e-14);
        assert!((eig.values[1].re - (2.0 + r)).abs() < 1e-14);
        assert!(eig.max_residual(&m) < 1e-14);
    }

    #[test]
    fn general_solver_on_rotation() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0), c(-1.0), c(1.0), c(0.0)]);
        let eig = general_eigen(&m).unwrap();
        assert!((eig.values[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((eig.values[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn general_solver_on_badly_scaled_matrix() {
        // D⁻¹ A D with D spanning twelve decades; balancing has to undo it.
        let n = 6;
        let mut a = CMatrix::zeros(n, n);
        for i in 0..n {
            a[(i, i)] = c(i as f64);
            if i + 1 < n {
                a[(i, i + 1)] = c(1.0);
                a[(i + 1, i)] = c(1.0);
            }
        }
        let reference = hermitian_eigen(&a);
        let mut scaled = a.clone();
        for i in 0..n {
            for j in 0..n {
                scaled[(i, j)] *= 10f64.powi(2 * j as i32 - 2 * i as i32);
            }
        }
        let eig = general_eigen(&scaled).unwrap();
        assert!(max_sorted_deviation(&eig.values, &reference.values) < 1e-12);
    }

    #[test]
    fn random_complex_matrices_have_small_residuals() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for n in 1..12 {
            let m = CMatrix::from_fn(n, n, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let eig = general_eigen(&m).unwrap();
            assert_eq!(eig.len(), n);
            assert!(eig.max_residual(&m) < 1e-10, "n = {n}");
            let trace: Complex64 = (0..n).map(|i| m[(i, i)]).sum();
            let sum: Complex64 = eig.values.iter().sum();
            assert!((trace - sum).norm() < 1e-10);
        }
    }

    #[test]
    fn deviation_of_mismatched_lengths_is_infinite() {
        assert!(max_sorted_deviation(&[c(1.0)], &[]).is_infinite());
        assert_eq!(max_sorted_deviation(&[c(2.0), c(1.0)], &[c(1.0), c(2.0)]), 0.0);
    }

    #[test]
    fn tridiagonal_bisection_matches_dense() {
        let diag = [2.0, -1.0, 3.5, 0.25, 1.0];
        let off = [1.0, 0.5, -2.0, 0.75];
        let m = DMatrix::from_fn(5, 5, |i, j| {
            if i == j {
                c(diag[i])
            } else if i + 1 == j {
                c(off[i])
            } else if j + 1 == i {
                c(off[j])
            } else {
                c(0.0)
            }
        });
        let dense = hermitian_eigen(&m).values;
        let bisect = tridiagonal_lowest(&diag, &off, 5);
        for (d, b) in dense.iter().zip(&bisect) {
            assert!((d.re - b).abs() < 1e-12);
        }
        assert_eq!(tridiagonal_lowest(&diag, &off, 2).len(), 2);
        assert_eq!(sturm_count(&diag, &off, 1e9), 5);
    }

    #[test]
    fn stalled_qr_pattern_is_recovered() {
        let m = DMatrix::from_row_slice(3, 3, &[c(0.0), c(0.35), c(0.0), c(0.7), c(0.0), c(0.7), c(0.0), c(0.35), c(0.0)]);
        let eig = general_eigen(&m).unwrap();
        let want = [-0.7, 0.0, 0.7];
        for (got, w) in eig.values.iter().zip(want) {
            assert!((got - c(w)).norm() < 1e-12);
        }
        assert!(eig.max_residual(&m) < 1e-12);
    }
}
