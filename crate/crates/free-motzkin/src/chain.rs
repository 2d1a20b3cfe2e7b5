//! Chain-level operators: the inhomogeneous monodromy matrix, the transfer
//! matrix and its polynomial coefficients, the nine auxiliary-space blocks,
//! and the Hamiltonian built both as a direct projector sum and through the
//! logarithmic trace identity.

use num_complex::Complex64 as C64;

use crate::linalg::vandermonde_inverse;
use crate::local_algebra::{build_r, build_tl_generator, SpectralParameters};
use crate::omega::pow3;
use crate::operator::{Operator, TensorSpace};
use crate::{Error, Result};

const ONE: C64 = C64::new(1.0, 0.0);

/// Default hard cap on the number of sites for dense operator construction.
pub const DEFAULT_DENSE_CAP: usize = 8;

/// Chain length, crossing parameter and per-site inhomogeneities.
#[derive(Debug, Clone)]
pub struct ChainConfig {
    pub n_sites: usize,
    pub eta: C64,
    pub thetas: Vec<C64>,
    dense_cap: usize,
}

impl ChainConfig {
    pub fn new(n_sites: usize, eta: C64, thetas: Vec<C64>) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::InvalidConfig("chain must have at least one site".into()));
        }
        if eta == C64::new(0.0, 0.0) {
            return Err(Error::InvalidConfig("crossing parameter eta must be nonzero".into()));
        }
        if thetas.len() != n_sites {
            return Err(Error::InvalidConfig(format!(
                "expected {} inhomogeneities, got {}",
                n_sites,
                thetas.len()
            )));
        }
        Ok(ChainConfig { n_sites, eta, thetas, dense_cap: DEFAULT_DENSE_CAP })
    }

    /// All inhomogeneities zero: the physical chain.
    pub fn homogeneous(n_sites: usize, eta: C64) -> Result<Self> {
        Self::new(n_sites, eta, vec![C64::new(0.0, 0.0); n_sites])
    }

    /// Raise the dense construction cap. Memory grows as `9^n`; calling this
    /// is the explicit acknowledgment required to go past the default.
    pub fn with_dense_cap(mut self, cap: usize) -> Self {
        self.dense_cap = cap;
        self
    }

    pub fn dense_cap(&self) -> usize {
        self.dense_cap
    }

    pub fn is_homogeneous(&self) -> bool {
        self.thetas.iter().all(|t| *t == C64::new(0.0, 0.0))
    }

    fn check_cap(&self) -> Result<()> {
        if self.n_sites > self.dense_cap {
            return Err(Error::SizeCap { n: self.n_sites, cap: self.dense_cap });
        }
        Ok(())
    }

    /// Operator-identity evaluation points must be distinct and separated:
    /// `theta_j - theta_k` outside `{0, eta, -eta}` for `j != k`.
    pub fn check_distinct_for_identities(&self) -> Result<()> {
        let tol = 1e-9;
        for j in 0..self.n_sites {
            for k in 0..j {
                let gap = self.thetas[j] - self.thetas[k];
                if gap.norm() < tol
                    || (gap - self.eta).norm() < tol
                    || (gap + self.eta).norm() < tol
                {
                    return Err(Error::Precondition(format!(
                        "inhomogeneities {j} and {k} collide (gap {gap})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Ordered product of R-matrix factors sharing one auxiliary factor:
/// `R_{aux, sites[last]} ... R_{aux, sites[0]}`. The first listed site is the
/// rightmost factor. Factors are applied by row-sparse multiplication.
pub fn monodromy_product(
    space: &TensorSpace,
    aux: usize,
    sites: &[usize],
    r_for_site: impl Fn(usize) -> Operator,
) -> Operator {
    assert!(!sites.is_empty());
    let mut acc = space.embed_two_site(&r_for_site(0), aux, sites[0]);
    for (pos, &site) in sites.iter().enumerate().skip(1) {
        acc = space.apply_two_site_left(&r_for_site(pos), aux, site, &acc);
    }
    acc
}

/// The monodromy matrix on auxiliary space (leftmost tensor factor) times
/// the `n`-site quantum space; dimension `3 * 3^n`.
pub fn build_monodromy(lambda: C64, cfg: &ChainConfig) -> Result<Operator> {
    cfg.check_cap()?;
    let n = cfg.n_sites;
    let space = TensorSpace::uniform(3, n + 1);
    let sites: Vec<usize> = (1..=n).collect();
    let eta = cfg.eta;
    let thetas = cfg.thetas.clone();
    Ok(monodromy_product(&space, 0, &sites, |pos| {
        build_r(&SpectralParameters { lambda: lambda - thetas[pos], eta })
    }))
}

/// The nine blocks of the monodromy matrix, indexed by auxiliary-space
/// position.
#[derive(Debug, Clone)]
pub struct MonodromyBlocks {
    pub a: Operator,
    pub b1: Operator,
    pub b2: Operator,
    pub c1: Operator,
    pub d11: Operator,
    pub d12: Operator,
    pub c2: Operator,
    pub d21: Operator,
    pub d22: Operator,
}

impl MonodromyBlocks {
    /// Rebuild the full monodromy matrix from the blocks.
    pub fn reassemble(&self) -> Operator {
        let q = self.a.dim();
        let grid = [
            [&self.a, &self.b1, &self.b2],
            [&self.c1, &self.d11, &self.d12],
            [&self.c2, &self.d21, &self.d22],
        ];
        Operator::from_fn(3 * q, |row, col| grid[row / q][col / q].get(row % q, col % q))
    }
}

/// Split a `3 * 3^n` operator into its auxiliary-space blocks.
pub fn extract_blocks(t: &Operator, n_sites: usize) -> Result<MonodromyBlocks> {
    let q = pow3(n_sites);
    if t.dim() != 3 * q {
        return Err(Error::DimensionMismatch { expected: 3 * q, got: t.dim() });
    }
    let block = |i: usize, j: usize| Operator::from_fn(q, |r, c| t.get(i * q + r, j * q + c));
    Ok(MonodromyBlocks {
        a: block(0, 0),
        b1: block(0, 1),
        b2: block(0, 2),
        c1: block(1, 0),
        d11: block(1, 1),
        d12: block(1, 2),
        c2: block(2, 0),
        d21: block(2, 1),
        d22: block(2, 2),
    })
}

/// Transfer matrix: the auxiliary-space trace of the monodromy matrix.
pub fn transfer_matrix(lambda: C64, cfg: &ChainConfig) -> Result<Operator> {
    let t = build_monodromy(lambda, cfg)?;
    let space = TensorSpace::new(vec![3, pow3(cfg.n_sites)]);
    Ok(space.trace_out_first(&t))
}

/// Vacuum eigenvalue of the first diagonal block: `prod_j (l - theta_j + eta)`.
pub fn vacuum_a(lambda: C64, cfg: &ChainConfig) -> C64 {
    cfg.thetas.iter().map(|t| lambda - t + cfg.eta).product()
}

/// Vacuum eigenvalue of the middle diagonal block: `prod_j (l - theta_j)`.
pub fn vacuum_d(lambda: C64, cfg: &ChainConfig) -> C64 {
    cfg.thetas.iter().map(|t| lambda - t).product()
}

/// An operator-valued polynomial in the spectral parameter.
#[derive(Debug, Clone)]
pub struct OperatorPolynomial {
    /// `coeffs[k]` multiplies `lambda^k`.
    pub coeffs: Vec<Operator>,
}

impl OperatorPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, lambda: C64) -> Operator {
        let mut acc = self.coeffs.last().expect("polynomial has coefficients").clone();
        for coeff in self.coeffs.iter().rev().skip(1) {
            acc = &acc.scale(lambda) + coeff;
        }
        acc
    }
}

/// Interpolation nodes: `n + 1` equispaced real points on `[-1, 1]` scaled
/// by `max(1, max |theta| + |eta|)`.
fn interpolation_nodes(cfg: &ChainConfig) -> Vec<C64> {
    let n = cfg.n_sites;
    let scale = cfg
        .thetas
        .iter()
        .map(|t| t.norm())
        .fold(0.0, f64::max)
        + cfg.eta.norm();
    let scale = scale.max(1.0);
    (0..=n)
        .map(|i| C64::new(scale * (-1.0 + 2.0 * i as f64 / n.max(1) as f64), 0.0))
        .collect()
}

fn interpolate(nodes: &[C64], values: &[Operator]) -> Result<OperatorPolynomial> {
    for i in 0..nodes.len() {
        for j in 0..i {
            if (nodes[i] - nodes[j]).norm() == 0.0 {
                return Err(Error::InvalidConfig("repeated interpolation nodes".into()));
            }
        }
    }
    let vinv = vandermonde_inverse(nodes)?;
    let dim = values[0].dim();
    let coeffs = (0..nodes.len())
        .map(|k| {
            let mut acc = Operator::zeros(dim);
            for (i, v) in values.iter().enumerate() {
                acc = &acc + &v.scale(vinv[[k, i]]);
            }
            acc
        })
        .collect();
    Ok(OperatorPolynomial { coeffs })
}

/// Transfer matrix as a degree-`n` operator polynomial, recovered from
/// evaluations at `n + 1` real nodes. The top coefficient is the shift
/// operator plus the identity.
pub fn transfer_polynomial(cfg: &ChainConfig) -> Result<OperatorPolynomial> {
    let nodes = interpolation_nodes(cfg);
    let values = nodes
        .iter()
        .map(|&l| transfer_matrix(l, cfg))
        .collect::<Result<Vec<_>>>()?;
    interpolate(&nodes, &values)
}

/// Monodromy matrix as a degree-`n` operator polynomial.
pub fn monodromy_polynomial(cfg: &ChainConfig) -> Result<OperatorPolynomial> {
    let nodes = interpolation_nodes(cfg);
    let values = nodes
        .iter()
        .map(|&l| build_monodromy(l, cfg))
        .collect::<Result<Vec<_>>>()?;
    interpolate(&nodes, &values)
}

/// Direction of the one-site cyclic shift on the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftDirection {
    /// `|s_1 ... s_n>  ->  |s_n s_1 ... s_{n-1}>`
    Right,
    /// `|s_1 ... s_n>  ->  |s_2 ... s_n s_1>`
    Left,
}

/// The one-site cyclic shift permutation operator on `3^n`.
pub fn cyclic_shift(n_sites: usize, direction: ShiftDirection) -> Operator {
    let total = pow3(n_sites);
    let mut op = Operator::zeros(total);
    let space = TensorSpace::uniform(3, n_sites);
    for col in 0..total {
        let digits = space.digits(col);
        let mut rotated = digits.clone();
        match direction {
            ShiftDirection::Right => rotated.rotate_right(1),
            ShiftDirection::Left => rotated.rotate_left(1),
        }
        op.set(space.index(&rotated), col, ONE);
    }
    op
}

/// Periodic-chain Hamiltonian as the direct sum of two-site projector
/// generators over all bonds, including the wrap-around bond.
pub fn hamiltonian_direct(n_sites: usize) -> Result<Operator> {
    if n_sites < 2 {
        return Err(Error::Precondition("hamiltonian needs at least two sites".into()));
    }
    crate::operator::check_dense_cap(n_sites, DEFAULT_DENSE_CAP)?;
    let space = TensorSpace::uniform(3, n_sites);
    let e = build_tl_generator();
    let mut h = Operator::zeros(pow3(n_sites));
    for j in 0..n_sites {
        h = &h + &space.embed_two_site(&e, j, (j + 1) % n_sites);
    }
    Ok(h)
}

/// Hamiltonian through the logarithmic trace identity at the homogeneous
/// point: `-eta t'(0) t(0)^{-1} + n`, with `t(0)^{-1}` computed analytically
/// as `eta^{-n}` times the inverse cyclic shift.
pub fn hamiltonian_from_trace_identity(cfg: &ChainConfig) -> Result<Operator> {
    if !cfg.is_homogeneous() {
        return Err(Error::Precondition(
            "trace identity requires all inhomogeneities zero".into(),
        ));
    }
    if cfg.n_sites < 2 {
        return Err(Error::Precondition("hamiltonian needs at least two sites".into()));
    }
    let poly = transfer_polynomial(cfg)?;
    let t_prime = &poly.coeffs[1];
    let eta_pow = cfg.eta.powu(cfg.n_sites as u32);
    let t0_inv = cyclic_shift(cfg.n_sites, ShiftDirection::Left).scale(ONE / eta_pow);
    let n = C64::new(cfg.n_sites as f64, 0.0);
    Ok(&t_prime.dot(&t0_inv).scale(-cfg.eta) + &Operator::identity(pow3(cfg.n_sites)).scale(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_algebra::permutation;
    use ndarray::Array1;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_config(n: usize, eta: C64, rng: &mut ChaCha8Rng) -> ChainConfig {
        loop {
            let thetas: Vec<C64> = (0..n)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let cfg = ChainConfig::new(n, eta, thetas).unwrap();
            if cfg.check_distinct_for_identities().is_ok() {
                return cfg;
            }
        }
    }

    #[test]
    fn single_site_monodromy_is_the_r_matrix() {
        let cfg = ChainConfig::homogeneous(1, c(1.0, 0.0)).unwrap();
        let lambda = c(0.4, -0.7);
        let t = build_monodromy(lambda, &cfg).unwrap();
        let r = build_r(&SpectralParameters { lambda, eta: c(1.0, 0.0) });
        assert!(t.approx_eq(&r, 0.0));
    }

    #[test]
    fn monodromy_at_theta2_factorizes() {
        let eta = c(1.0, 0.0);
        let thetas = vec![c(0.3, 0.1), c(-0.8, 0.4)];
        let cfg = ChainConfig::new(2, eta, thetas.clone()).unwrap();
        let t = build_monodromy(thetas[1], &cfg).unwrap();

        let space = TensorSpace::uniform(3, 3);
        let p02 = space.embed_two_site(&permutation(3), 0, 2).scale(eta);
        let r01 = space.embed_two_site(
            &build_r(&SpectralParameters { lambda: thetas[1] - thetas[0], eta }),
            0,
            1,
        );
        assert!(t.approx_eq(&p02.dot(&r01), 1e-13));
    }

    #[test]
    fn block_extraction_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cfg = random_config(3, c(0.9, 0.2), &mut rng);
        let t = build_monodromy(c(0.5, 0.25), &cfg).unwrap();
        let blocks = extract_blocks(&t, 3).unwrap();
        assert!(blocks.reassemble().approx_eq(&t, 0.0));
    }

    #[test]
    fn vacuum_actions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cfg = random_config(3, c(1.0, 0.0), &mut rng);
        let lambda = c(0.37, 0.81);
        let t = build_monodromy(lambda, &cfg).unwrap();
        let blocks = extract_blocks(&t, 3).unwrap();
        let q = pow3(3);

        let mut vacuum = Array1::zeros(q);
        vacuum[0] = c(1.0, 0.0);
        let av = blocks.a.apply(&vacuum);
        let a_expected = vacuum_a(lambda, &cfg);
        assert!((av[0] - a_expected).norm() < 1e-12 * a_expected.norm().max(1.0));
        assert!(av.iter().skip(1).all(|x: &C64| x.norm() < 1e-12));

        let dv = blocks.d11.apply(&vacuum);
        let d_expected = vacuum_d(lambda, &cfg);
        assert!((dv[0] - d_expected).norm() < 1e-12 * d_expected.norm().max(1.0));
        assert!(dv.iter().skip(1).all(|x: &C64| x.norm() < 1e-12));

        assert!(blocks.d22.apply(&vacuum).iter().all(|x: &C64| x.norm() < 1e-12));
        assert!(blocks.c1.apply(&vacuum).iter().all(|x: &C64| x.norm() < 1e-12));
        assert!(blocks.c2.apply(&vacuum).iter().all(|x: &C64| x.norm() < 1e-12));
        // B blocks act nontrivially on the vacuum.
        assert!(blocks.b1.apply(&vacuum).iter().any(|x: &C64| x.norm() > 1e-6));
    }

    #[test]
    fn transfer_matrices_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for n in 2..=4 {
            let cfg = random_config(n, c(1.0, 0.0), &mut rng);
            let l = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let v = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let tl = transfer_matrix(l, &cfg).unwrap();
            let tv = transfer_matrix(v, &cfg).unwrap();
            let comm = tl.commutator(&tv);
            let scale = tl.dot(&tv).max_norm().max(1.0);
            assert!(comm.max_norm() / scale < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn transfer_at_zero_is_eta_pow_times_right_shift() {
        for n in 2..=4 {
            let eta = c(0.8, -0.3);
            let cfg = ChainConfig::homogeneous(n, eta).unwrap();
            let t0 = transfer_matrix(c(0.0, 0.0), &cfg).unwrap();
            let expected = cyclic_shift(n, ShiftDirection::Right).scale(eta.powu(n as u32));
            assert!(t0.approx_eq(&expected, 1e-12), "n = {n}");
        }
    }

    #[test]
    fn monodromy_yang_baxter_relation() {
        // R_12(l - v) T_1(l) T_2(v) = T_2(v) T_1(l) R_12(l - v) with two
        // auxiliary factors in front of the quantum space.
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for n in 1..=3 {
            let cfg = random_config(n, c(1.0, 0.0), &mut rng);
            let l = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let v = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let space = TensorSpace::uniform(3, n + 2);
            let sites: Vec<usize> = (2..n + 2).collect();
            let t1 = monodromy_product(&space, 0, &sites, |pos| {
                build_r(&SpectralParameters { lambda: l - cfg.thetas[pos], eta: cfg.eta })
            });
            let t2 = monodromy_product(&space, 1, &sites, |pos| {
                build_r(&SpectralParameters { lambda: v - cfg.thetas[pos], eta: cfg.eta })
            });
            let r12 = space.embed_two_site(
                &build_r(&SpectralParameters { lambda: l - v, eta: cfg.eta }),
                0,
                1,
            );
            let lhs = r12.dot(&t1).dot(&t2);
            let rhs = t2.dot(&t1).dot(&r12);
            let scale = lhs.max_norm().max(rhs.max_norm()).max(1.0);
            assert!(lhs.max_diff(&rhs) / scale < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn transfer_polynomial_round_trips_at_held_out_node() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let cfg = random_config(3, c(1.0, 0.0), &mut rng);
        let poly = transfer_polynomial(&cfg).unwrap();
        assert_eq!(poly.degree(), 3);
        let probe = c(0.731, 0.292);
        let direct = transfer_matrix(probe, &cfg).unwrap();
        let interp = poly.eval(probe);
        let scale = direct.max_norm().max(1.0);
        assert!(interp.max_diff(&direct) / scale < 1e-10);
    }

    #[test]
    fn transfer_top_coefficient_n1_is_shift_plus_identity() {
        let cfg = ChainConfig::homogeneous(1, c(1.0, 0.0)).unwrap();
        let poly = transfer_polynomial(&cfg).unwrap();
        let expected = Operator::from_real_rows(&[
            &[2.0, 0.0, 0.0],
            &[0.0, 3.0, 0.0],
            &[0.0, 0.0, 2.0],
        ]);
        assert!(poly.coeffs[1].approx_eq(&expected, 1e-12));
    }

    #[test]
    fn hamiltonian_direct_n2_spectrum() {
        let h = hamiltonian_direct(2).unwrap();
        assert!(h.is_hermitian(0.0));
        assert!(h.is_real(0.0));
        let vals = crate::linalg::eigh(&h).unwrap().0;
        let expected = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 4.0, 4.0];
        for (v, e) in vals.iter().zip(expected) {
            assert!((v - e).abs() < 1e-12, "got {v}, want {e}");
        }
    }

    #[test]
    fn hamiltonian_annihilates_all_flat() {
        let h = hamiltonian_direct(3).unwrap();
        let mut v = Array1::zeros(27);
        v[13] = c(1.0, 0.0); // |fff>
        assert!(h.apply(&v).iter().all(|x: &C64| x.norm() < 1e-14));
    }

    #[test]
    fn hamiltonian_is_positive_semidefinite() {
        let h = hamiltonian_direct(3).unwrap();
        let vals = crate::linalg::eigh(&h).unwrap().0;
        assert!(vals.iter().all(|&v| v >= -1e-12));
        assert!(vals[0].abs() < 1e-10);
    }

    #[test]
    fn trace_identity_matches_direct_hamiltonian() {
        for (n, eta) in [(2, c(1.0, 0.0)), (3, c(2.0, 0.0)), (3, c(1.0, 0.0))] {
            let cfg = ChainConfig::homogeneous(n, eta).unwrap();
            let via_identity = hamiltonian_from_trace_identity(&cfg).unwrap();
            let direct = hamiltonian_direct(n).unwrap();
            assert!(
                via_identity.approx_eq(&direct, 1e-10),
                "n = {n} eta = {eta}: diff {}",
                via_identity.max_diff(&direct)
            );
        }
    }

    #[test]
    fn trace_identity_requires_homogeneous_config() {
        let cfg = ChainConfig::new(2, c(1.0, 0.0), vec![c(0.1, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(hamiltonian_from_trace_identity(&cfg).is_err());
    }

    #[test]
    fn dense_cap_is_enforced_and_overridable() {
        let cfg = ChainConfig::homogeneous(9, c(1.0, 0.0)).unwrap();
        assert!(matches!(build_monodromy(c(0.0, 0.0), &cfg), Err(Error::SizeCap { .. })));
        let widened = ChainConfig::homogeneous(3, c(1.0, 0.0)).unwrap().with_dense_cap(2);
        assert!(build_monodromy(c(0.0, 0.0), &widened).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(ChainConfig::new(2, c(0.0, 0.0), vec![c(0.0, 0.0); 2]).is_err());
        assert!(ChainConfig::new(2, c(1.0, 0.0), vec![c(0.0, 0.0); 3]).is_err());
        let bad = ChainConfig::new(2, c(1.0, 0.0), vec![c(0.3, 0.0), c(0.3, 0.0)]).unwrap();
        assert!(bad.check_distinct_for_identities().is_err());
        let bad = ChainConfig::new(2, c(1.0, 0.0), vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(bad.check_distinct_for_identities().is_err());
    }
}
