//! Dense complex operators and tensor-product plumbing.
//!
//! Everything in the model lives in small tensor-product spaces (at most a
//! few thousand dimensions), so operators are stored as dense
//! `Array2<Complex64>`. [`TensorSpace`] handles mixed-radix index arithmetic
//! and the embedding of two-site operators into a chain, including the
//! row-sparse left application used to build monodromy products without
//! materializing every factor.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// A square complex matrix with explicit dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    mat: Array2<C64>,
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "operator dimension must be positive");
        Operator { mat: Array2::zeros((dim, dim)) }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zeros(dim);
        for i in 0..dim {
            op.mat[[i, i]] = C64::new(1.0, 0.0);
        }
        op
    }

    pub fn from_array(mat: Array2<C64>) -> Self {
        assert_eq!(mat.nrows(), mat.ncols(), "operator must be square");
        assert!(mat.nrows() >= 1, "operator dimension must be positive");
        Operator { mat }
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        Operator { mat: Array2::from_shape_fn((dim, dim), |(i, j)| f(i, j)) }
    }

    /// Build from real entries laid out row-major.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        Self::from_fn(dim, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &Array2<C64> {
        &self.mat
    }

    pub fn mat_mut(&mut self) -> &mut Array2<C64> {
        &mut self.mat
    }

    pub fn into_inner(self) -> Array2<C64> {
        self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[[i, j]]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.mat[[i, j]] = v;
    }

    /// Matrix product `self * rhs`.
    pub fn dot(&self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in product");
        Operator { mat: self.mat.dot(&rhs.mat) }
    }

    pub fn apply(&self, v: &Array1<C64>) -> Array1<C64> {
        self.mat.dot(v)
    }

    /// Kronecker product, first factor most significant.
    pub fn kron(&self, rhs: &Operator) -> Operator {
        let (n, m) = (self.dim(), rhs.dim());
        let mut out = Array2::zeros((n * m, n * m));
        for i in 0..n {
            for j in 0..n {
                let a = self.mat[[i, j]];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out[[i * m + k, j * m + l]] = a * rhs.mat[[k, l]];
                    }
                }
            }
        }
        Operator { mat: out }
    }

    pub fn scale(&self, s: C64) -> Operator {
        Operator { mat: self.mat.mapv(|x| x * s) }
    }

    pub fn transpose(&self) -> Operator {
        Operator { mat: self.mat.t().to_owned() }
    }

    pub fn adjoint(&self) -> Operator {
        Operator { mat: self.mat.t().mapv(|x| x.conj()) }
    }

    pub fn trace(&self) -> C64 {
        self.mat.diag().sum()
    }

    /// Max-norm (largest entry magnitude).
    pub fn max_norm(&self) -> f64 {
        self.mat.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference against another operator.
    pub fn max_diff(&self, other: &Operator) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in comparison");
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Entrywise equality within an absolute tolerance.
    pub fn approx_eq(&self, other: &Operator, abs_tol: f64) -> bool {
        self.dim() == other.dim() && self.max_diff(other) <= abs_tol
    }

    pub fn commutator(&self, other: &Operator) -> Operator {
        &self.dot(other) - &other.dot(self)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_diff(&self.adjoint()) <= tol
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.mat.iter().all(|x| x.im.abs() <= tol)
    }

    /// Real part as an `f64` matrix (imaginary parts are discarded).
    pub fn to_real(&self) -> Array2<f64> {
        self.mat.mapv(|x| x.re)
    }

    /// Image under the 180-degree rotation about the matrix center:
    /// entry `(i, j)` maps to `(dim-1-i, dim-1-j)`.
    pub fn rotate_180(&self) -> Operator {
        let n = self.dim();
        Operator::from_fn(n, |i, j| self.mat[[n - 1 - i, n - 1 - j]])
    }
}

impl std::ops::Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in sum");
        Operator { mat: &self.mat + &rhs.mat }
    }
}

impl std::ops::Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in difference");
        Operator { mat: &self.mat - &rhs.mat }
    }
}

impl std::ops::Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator { mat: self.mat.mapv(|x| -x) }
    }
}

/// A mixed-radix tensor-product space: factor 0 is the most significant
/// index digit (row-major ordering).
#[derive(Debug, Clone)]
pub struct TensorSpace {
    dims: Vec<usize>,
}

impl TensorSpace {
    pub fn new(dims: Vec<usize>) -> Self {
        assert!(!dims.is_empty() && dims.iter().all(|&d| d >= 1));
        TensorSpace { dims }
    }

    /// `n` factors of equal local dimension.
    pub fn uniform(radix: usize, n: usize) -> Self {
        Self::new(vec![radix; n])
    }

    pub fn n_factors(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, factor: usize) -> usize {
        self.dims[factor]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.dims.len());
        let mut idx = 0;
        for (d, &radix) in digits.iter().zip(&self.dims) {
            debug_assert!(*d < radix);
            idx = idx * radix + d;
        }
        idx
    }

    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &radix) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % radix;
            index /= radix;
        }
        out
    }

    /// Embed a two-site operator acting on factors `(p, q)` into the full
    /// space. The operator's pair index is `x_p * dim(q) + x_q`, i.e. its
    /// first slot is factor `p`, its second factor `q`; `p` and `q` need not
    /// be adjacent or ordered.
    pub fn embed_two_site(&self, op: &Operator, p: usize, q: usize) -> Operator {
        assert_ne!(p, q);
        let (dp, dq) = (self.dims[p], self.dims[q]);
        assert_eq!(op.dim(), dp * dq, "local operator does not fit factors");
        let total = self.total_dim();
        let mut out = Operator::zeros(total);
        let mut digits = vec![0; self.dims.len()];
        for row in 0..total {
            self.digits_into(row, &mut digits);
            let rp = digits[p];
            let rq = digits[q];
            let local_row = rp * dq + rq;
            for cp in 0..dp {
                for cq in 0..dq {
                    let v = op.get(local_row, cp * dq + cq);
                    if v == C64::new(0.0, 0.0) {
                        continue;
                    }
                    digits[p] = cp;
                    digits[q] = cq;
                    let col = self.index(&digits);
                    out.set(row, col, v);
                }
            }
            digits[p] = rp;
            digits[q] = rq;
        }
        out
    }

    /// Compute `op_{pq} * target` without materializing the embedded factor.
    /// Each row of the embedded operator has as many nonzeros as the
    /// corresponding row of `op`, so the cost is `O(nnz_per_row * dim^2)`.
    pub fn apply_two_site_left(&self, op: &Operator, p: usize, q: usize, target: &Operator) -> Operator {
        assert_ne!(p, q);
        let (dp, dq) = (self.dims[p], self.dims[q]);
        assert_eq!(op.dim(), dp * dq, "local operator does not fit factors");
        let total = self.total_dim();
        assert_eq!(target.dim(), total, "target dimension mismatch");

        // Row-sparse view of the local operator.
        let local = dp * dq;
        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); local];
        for r in 0..local {
            for c in 0..local {
                let v = op.get(r, c);
                if v != C64::new(0.0, 0.0) {
                    rows[r].push((c, v));
                }
            }
        }

        let mut out = Operator::zeros(total);
        let mut digits = vec![0; self.dims.len()];
        for row in 0..total {
            self.digits_into(row, &mut digits);
            let rp = digits[p];
            let rq = digits[q];
            for &(local_col, coeff) in &rows[rp * dq + rq] {
                digits[p] = local_col / dq;
                digits[q] = local_col % dq;
                let src = self.index(&digits);
                let src_row = target.mat().row(src);
                let mut dst_row = out.mat_mut().row_mut(row);
                dst_row.scaled_add(coeff, &src_row);
            }
            digits[p] = rp;
            digits[q] = rq;
        }
        out
    }

    fn digits_into(&self, mut index: usize, out: &mut [usize]) {
        for (slot, &radix) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % radix;
            index /= radix;
        }
    }

    /// Partial trace over factor 0: maps an operator on the full space to one
    /// on the remaining factors.
    pub fn trace_out_first(&self, op: &Operator) -> Operator {
        let d0 = self.dims[0];
        let rest: usize = self.dims[1..].iter().product();
        assert_eq!(op.dim(), d0 * rest);
        let mut out = Operator::zeros(rest);
        for a in 0..d0 {
            for i in 0..rest {
                for j in 0..rest {
                    let v = op.get(a * rest + i, a * rest + j);
                    if v != C64::new(0.0, 0.0) {
                        let cur = out.get(i, j);
                        out.set(i, j, cur + v);
                    }
                }
            }
        }
        out
    }
}

/// Dimension-cap guard used by the dense constructors.
pub fn check_dense_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::SizeCap { n, cap })
    } else {
        Ok(())
    }
}
