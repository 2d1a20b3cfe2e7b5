//! Local operators of the chain: the 9x9 R-matrix, the Temperley-Lieb
//! generator and the single-site matrices it decomposes into, plus numerical
//! checks of the R-matrix properties.
//!
//! Basis ordering is fixed crate-wide: single-site `u = 0, f = 1, d = 2`,
//! two-site states row-major (`|uu>, |uf>, |ud>, |fu>, ..., |dd>`). All other
//! modules inherit this ordering.

use num_complex::Complex64 as C64;

use crate::operator::{Operator, TensorSpace};
use crate::tolerance::Residual;
use crate::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

// Two-site basis indices (3a + b with u=0, f=1, d=2).
const UF: usize = 1;
const FU: usize = 3;
const FD: usize = 5;
const DF: usize = 7;

/// Spectral parameter and crossing parameter of the R-matrix.
#[derive(Debug, Clone, Copy)]
pub struct SpectralParameters {
    pub lambda: C64,
    pub eta: C64,
}

impl SpectralParameters {
    /// `eta` must be nonzero: it sets the Hamiltonian normalization, and at
    /// `eta = 0` the R-matrix loses its projection point.
    pub fn new(lambda: C64, eta: C64) -> Result<Self> {
        if eta == ZERO {
            return Err(Error::InvalidConfig("crossing parameter eta must be nonzero".into()));
        }
        Ok(SpectralParameters { lambda, eta })
    }
}

/// Permutation operator on a two-site space of local dimension `d`.
pub fn permutation(d: usize) -> Operator {
    let mut p = Operator::zeros(d * d);
    for a in 0..d {
        for b in 0..d {
            p.set(a * d + b, b * d + a, ONE);
        }
    }
    p
}

/// Projector (unnormalized, eigenvalue 2 on its range) onto `|uf> - |fu>`.
pub fn tl_up_part() -> Operator {
    rank_one_difference(UF, FU)
}

/// Projector (unnormalized) onto `|df> - |fd>`.
pub fn tl_down_part() -> Operator {
    rank_one_difference(DF, FD)
}

fn rank_one_difference(i: usize, j: usize) -> Operator {
    let mut op = Operator::zeros(9);
    op.set(i, i, ONE);
    op.set(i, j, -ONE);
    op.set(j, i, -ONE);
    op.set(j, j, ONE);
    op
}

/// The Temperley-Lieb generator: sum of the two rank-one projectors.
pub fn build_tl_generator() -> Operator {
    &tl_up_part() + &tl_down_part()
}

/// The 9x9 R-matrix `P [ (lambda + eta) 1 - lambda e ]`.
pub fn build_r(params: &SpectralParameters) -> Operator {
    let SpectralParameters { lambda, eta } = *params;
    let mut inner = build_tl_generator().scale(-lambda);
    for i in 0..9 {
        let v = inner.get(i, i);
        inner.set(i, i, v + lambda + eta);
    }
    permutation(3).dot(&inner)
}

// Single-site matrices (3x3) used by the recursive operator constructions
// and the Pauli-like decomposition of the projectors.

/// Identity on the `{u, f}` subspace.
pub fn upper_identity() -> Operator {
    Operator::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0]])
}

/// Identity on the `{f, d}` subspace.
pub fn lower_identity() -> Operator {
    Operator::from_real_rows(&[&[0.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]])
}

/// `|u><d|`.
pub fn s_plus() -> Operator {
    let mut op = Operator::zeros(3);
    op.set(0, 2, ONE);
    op
}

/// `|d><u|`.
pub fn s_minus() -> Operator {
    let mut op = Operator::zeros(3);
    op.set(2, 0, ONE);
    op
}

pub fn u_x() -> Operator {
    Operator::from_real_rows(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0]])
}

pub fn u_y() -> Operator {
    let mut op = Operator::zeros(3);
    op.set(0, 1, C64::new(0.0, -1.0));
    op.set(1, 0, C64::new(0.0, 1.0));
    op
}

pub fn u_z() -> Operator {
    Operator::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, -1.0, 0.0], &[0.0, 0.0, 0.0]])
}

pub fn d_x() -> Operator {
    Operator::from_real_rows(&[&[0.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0]])
}

pub fn d_y() -> Operator {
    let mut op = Operator::zeros(3);
    op.set(1, 2, C64::new(0.0, -1.0));
    op.set(2, 1, C64::new(0.0, 1.0));
    op
}

pub fn d_z() -> Operator {
    Operator::from_real_rows(&[&[0.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, -1.0]])
}

/// The up projector written through the Pauli-like single-site matrices;
/// equals [`tl_up_part`] entrywise.
pub fn tl_up_part_pauli() -> Operator {
    pauli_combination(&upper_identity(), &u_x(), &u_y(), &u_z())
}

/// The down projector through the Pauli-like matrices; equals
/// [`tl_down_part`] entrywise.
pub fn tl_down_part_pauli() -> Operator {
    pauli_combination(&lower_identity(), &d_x(), &d_y(), &d_z())
}

fn pauli_combination(id: &Operator, x: &Operator, y: &Operator, z: &Operator) -> Operator {
    let sum = &(&id.kron(id) - &x.kron(x)) - &(&y.kron(y) + &z.kron(z));
    sum.scale(C64::new(0.5, 0.0))
}

/// `R_21(lambda) = P R_12(lambda) P`.
pub fn build_r_swapped(params: &SpectralParameters) -> Operator {
    let p = permutation(3);
    p.dot(&build_r(params)).dot(&p)
}

/// Max-norm residual of the Yang-Baxter equation
/// `R12(l) R13(l+v) R23(v) = R23(v) R13(l+v) R12(l)` on the triple space.
pub fn check_ybe(lambda: C64, nu: C64, eta: C64) -> Result<Residual> {
    let ts = TensorSpace::uniform(3, 3);
    let r12 = ts.embed_two_site(&build_r(&SpectralParameters::new(lambda, eta)?), 0, 1);
    let r13 = ts.embed_two_site(&build_r(&SpectralParameters::new(lambda + nu, eta)?), 0, 2);
    let r23 = ts.embed_two_site(&build_r(&SpectralParameters::new(nu, eta)?), 1, 2);
    let lhs = r12.dot(&r13).dot(&r23);
    let rhs = r23.dot(&r13).dot(&r12);
    Ok(Residual::new(lhs.max_diff(&rhs), lhs.max_norm().max(rhs.max_norm())))
}

/// Max-norm residual of `R12(l) R21(-l) = (eta + l)(eta - l) 1`.
pub fn check_unitarity(lambda: C64, eta: C64) -> Result<Residual> {
    let lhs = build_r(&SpectralParameters::new(lambda, eta)?)
        .dot(&build_r_swapped(&SpectralParameters::new(-lambda, eta)?));
    let rhs = Operator::identity(9).scale((eta + lambda) * (eta - lambda));
    Ok(Residual::new(lhs.max_diff(&rhs), lhs.max_norm().max(rhs.max_norm())))
}

/// Partial transpose in the first tensor factor.
pub fn partial_transpose_first(op: &Operator, d: usize) -> Operator {
    assert_eq!(op.dim(), d * d);
    Operator::from_fn(d * d, |row, col| {
        let (a, b) = (row / d, row % d);
        let (c, e) = (col / d, col % d);
        op.get(c * d + b, a * d + e)
    })
}

/// Determinant of the partially transposed R-matrix; vanishes identically,
/// which is why the model lacks crossing unitarity.
pub fn check_partial_transpose_degenerate(lambda: C64, eta: C64) -> Result<C64> {
    let r = build_r(&SpectralParameters::new(lambda, eta)?);
    crate::linalg::determinant(&partial_transpose_first(&r, 3))
}
