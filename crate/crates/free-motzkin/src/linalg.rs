//! Thin wrappers around the LAPACK-backed eigensolvers and small solves.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Determinant, Eig, Eigh, Inverse, Solve, UPLO};
use num_complex::Complex64 as C64;

use crate::operator::Operator;
use crate::Result;

/// Eigenvalues and right eigenvectors of a general complex matrix.
pub fn eig(op: &Operator) -> Result<(Vec<C64>, Array2<C64>)> {
    let (vals, vecs) = op.mat().eig()?;
    Ok((vals.to_vec(), vecs))
}

/// Eigenvalues only of a general complex matrix.
pub fn eigvals(op: &Operator) -> Result<Vec<C64>> {
    Ok(eig(op)?.0)
}

/// Eigendecomposition of a Hermitian operator; eigenvalues ascending.
pub fn eigh(op: &Operator) -> Result<(Vec<f64>, Array2<C64>)> {
    let (vals, vecs) = op.mat().eigh(UPLO::Lower)?;
    Ok((vals.to_vec(), vecs))
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn eigh_real(mat: &Array2<f64>) -> Result<Vec<f64>> {
    let (vals, _) = mat.eigh(UPLO::Lower)?;
    Ok(vals.to_vec())
}

pub fn determinant(op: &Operator) -> Result<C64> {
    Ok(op.mat().det()?)
}

/// Solve the dense complex system `a x = b`.
pub fn solve(a: &Array2<C64>, b: &Array1<C64>) -> Result<Array1<C64>> {
    Ok(a.solve(b)?)
}

pub fn inverse(a: &Array2<C64>) -> Result<Array2<C64>> {
    Ok(a.inv()?)
}

/// Inverse of the Vandermonde matrix `V[i][k] = nodes[i]^k`.
///
/// Used to recover polynomial coefficients from evaluations at distinct
/// nodes: `coeffs[k] = sum_i Vinv[k][i] * values[i]`.
pub fn vandermonde_inverse(nodes: &[C64]) -> Result<Array2<C64>> {
    let n = nodes.len();
    let mut v = Array2::zeros((n, n));
    for (i, &x) in nodes.iter().enumerate() {
        let mut p = C64::new(1.0, 0.0);
        for k in 0..n {
            v[[i, k]] = p;
            p *= x;
        }
    }
    inverse(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Operator;

    #[test]
    fn complex_eig_of_diagonal() {
        let op = Operator::from_fn(3, |i, j| {
            if i == j {
                C64::new(i as f64, -(i as f64))
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let mut vals = eigvals(&op).unwrap();
        vals.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((vals[2] - C64::new(2.0, -2.0)).norm() < 1e-12);
    }

    #[test]
    fn vandermonde_recovers_coefficients() {
        // p(x) = 2 - x + 3x^2 sampled at three nodes.
        let nodes = [C64::new(-1.0, 0.0), C64::new(0.5, 0.0), C64::new(2.0, 0.0)];
        let p = |x: C64| C64::new(2.0, 0.0) - x + x * x * C64::new(3.0, 0.0);
        let vinv = vandermonde_inverse(&nodes).unwrap();
        let values: Vec<C64> = nodes.iter().map(|&x| p(x)).collect();
        for (k, expected) in [2.0, -1.0, 3.0].into_iter().enumerate() {
            let coeff: C64 = (0..3).map(|i| vinv[[k, i]] * values[i]).sum();
            assert!((coeff - C64::new(expected, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn determinant_of_singular_matrix_vanishes() {
        let op = Operator::from_fn(3, |i, _| C64::new(i as f64 + 1.0, 0.0));
        assert!(determinant(&op).unwrap().norm() < 1e-12);
    }
}
