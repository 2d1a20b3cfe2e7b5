//! The operator sitting at the top spectral-parameter power of the transfer
//! matrix, constructed three independent ways, and the exact combinatorics
//! of its eigenvalues.
//!
//! On a basis state the operator acts as a left cyclic shift of the non-flat
//! letters (flat positions stay put); the all-flat state is fixed with
//! coefficient 2. Its eigenvalues are therefore the special value 2 plus
//! roots of unity, one full set of k-th roots per length-k cycle of the
//! shift permutation. The count of k-th roots for a chain of length `n`
//! is `(sum_{d|k} 2^d mu(k/d)) * sum_m C(n, k m)`, with `mu` the Mobius
//! function; [`moebius_count`] evaluates this exactly and [`cycle_census`]
//! cross-checks it by brute-force enumeration.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64 as C64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::chain::{extract_blocks, monodromy_polynomial, ChainConfig};
use crate::local_algebra::{lower_identity, s_minus, s_plus, upper_identity};
use crate::operator::{check_dense_cap, Operator};
use crate::{Error, Result};

/// Hard cap for dense matrix construction (3^n entries squared).
pub const DENSE_CAP: usize = 8;
/// Hard cap for iterator-based state enumeration (no matrices).
pub const ENUMERATION_CAP: usize = 16;

pub fn pow3(n: usize) -> usize {
    3usize.pow(n as u32)
}

/// Single-site letter; the index encoding `u = 0, f = 1, d = 2` matches the
/// crate-wide basis ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    U,
    F,
    D,
}

impl Letter {
    pub fn to_index(self) -> usize {
        match self {
            Letter::U => 0,
            Letter::F => 1,
            Letter::D => 2,
        }
    }

    pub fn from_index(i: usize) -> Letter {
        match i {
            0 => Letter::U,
            1 => Letter::F,
            2 => Letter::D,
            _ => panic!("letter index out of range"),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::U => 'u',
            Letter::F => 'f',
            Letter::D => 'd',
        }
    }
}

/// A length-`n` word over `{u, f, d}` indexing the 3^n-dimensional space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinBasisState {
    letters: Vec<Letter>,
}

impl SpinBasisState {
    pub fn new(letters: Vec<Letter>) -> Self {
        assert!(!letters.is_empty());
        SpinBasisState { letters }
    }

    /// Parse from a string like `"udf"`.
    pub fn parse(word: &str) -> Result<Self> {
        let letters = word
            .chars()
            .map(|ch| match ch {
                'u' => Ok(Letter::U),
                'f' => Ok(Letter::F),
                'd' => Ok(Letter::D),
                _ => Err(Error::InvalidConfig(format!("invalid letter {ch:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::InvalidConfig("empty basis word".into()));
        }
        Ok(SpinBasisState { letters })
    }

    pub fn from_index(n_sites: usize, index: usize) -> Self {
        assert!(index < pow3(n_sites));
        let mut letters = vec![Letter::U; n_sites];
        let mut rem = index;
        for slot in letters.iter_mut().rev() {
            *slot = Letter::from_index(rem % 3);
            rem /= 3;
        }
        SpinBasisState { letters }
    }

    /// Base-3 index under `u = 0, f = 1, d = 2`, leftmost site most
    /// significant.
    pub fn index(&self) -> usize {
        self.letters.iter().fold(0, |acc, l| acc * 3 + l.to_index())
    }

    pub fn n_sites(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_all_flat(&self) -> bool {
        self.letters.iter().all(|&l| l == Letter::F)
    }
}

impl fmt::Display for SpinBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// Apply the shift operator to a basis state: the all-flat state is fixed
/// with coefficient 2; otherwise the non-flat letters are cyclically shifted
/// one position left (flat positions unchanged) with coefficient 1.
pub fn omega_apply(state: &SpinBasisState) -> (SpinBasisState, u8) {
    if state.is_all_flat() {
        return (state.clone(), 2);
    }
    let mut letters = state.letters.clone();
    let positions: Vec<usize> = letters
        .iter()
        .enumerate()
        .filter(|(_, &l)| l != Letter::F)
        .map(|(i, _)| i)
        .collect();
    let m = positions.len();
    let shifted: Vec<Letter> = (0..m).map(|i| letters[positions[(i + 1) % m]]).collect();
    for (i, &pos) in positions.iter().enumerate() {
        letters[pos] = shifted[i];
    }
    (SpinBasisState { letters }, 1)
}

/// Successor index of `index` under the shift permutation (all-flat maps to
/// itself). Avoids constructing `SpinBasisState`; used by the census walker.
fn shift_successor(digits: &mut [u8], positions: &mut Vec<usize>) {
    positions.clear();
    for (i, &d) in digits.iter().enumerate() {
        if d != 1 {
            positions.push(i);
        }
    }
    let m = positions.len();
    if m == 0 {
        return;
    }
    let first = digits[positions[0]];
    for w in 0..m - 1 {
        digits[positions[w]] = digits[positions[w + 1]];
    }
    digits[positions[m - 1]] = first;
}

fn decode_digits(mut index: usize, digits: &mut [u8]) {
    for d in digits.iter_mut().rev() {
        *d = (index % 3) as u8;
        index /= 3;
    }
}

fn encode_digits(digits: &[u8]) -> usize {
    digits.iter().fold(0usize, |acc, &d| acc * 3 + d as usize)
}

/// Exact cycle-length decomposition of the shift permutation restricted to
/// the non-all-flat states.
#[derive(Debug, Clone, Serialize)]
pub struct CycleDecomposition {
    pub n_sites: usize,
    /// Map cycle length -> number of cycles of that length.
    pub counts: BTreeMap<u64, u64>,
    /// The all-flat state, fixed with coefficient 2 (always exactly one).
    pub fixed_special: u64,
}

impl CycleDecomposition {
    /// Total states covered: `sum_k k * counts[k] + 1` must equal 3^n.
    pub fn total_states(&self) -> u64 {
        self.counts.iter().map(|(k, c)| k * c).sum::<u64>() + self.fixed_special
    }
}

/// Walk every cycle of the shift permutation with a visited bitmap; no
/// matrix is materialized, so this extends well beyond the dense cap.
pub fn cycle_census(n_sites: usize) -> Result<CycleDecomposition> {
    check_dense_cap(n_sites, ENUMERATION_CAP)?;
    let total = pow3(n_sites);
    let all_flat = SpinBasisState::new(vec![Letter::F; n_sites]).index();
    let mut visited = vec![false; total];
    visited[all_flat] = true;
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    let mut digits = vec![0u8; n_sites];
    let mut positions = Vec::with_capacity(n_sites);
    for start in 0..total {
        if visited[start] {
            continue;
        }
        let mut len = 0u64;
        let mut cur = start;
        loop {
            visited[cur] = true;
            len += 1;
            decode_digits(cur, &mut digits);
            shift_successor(&mut digits, &mut positions);
            cur = encode_digits(&digits);
            if cur == start {
                break;
            }
        }
        *counts.entry(len).or_insert(0) += 1;
    }
    Ok(CycleDecomposition { n_sites, counts, fixed_special: 1 })
}

/// The explicit cycles (lists of basis indices) of the shift permutation,
/// excluding the all-flat fixed point. Needed to build exact eigensector
/// bases; sized for dense-scale systems.
pub fn cycle_list(n_sites: usize) -> Result<Vec<Vec<usize>>> {
    check_dense_cap(n_sites, ENUMERATION_CAP)?;
    let total = pow3(n_sites);
    let all_flat = SpinBasisState::new(vec![Letter::F; n_sites]).index();
    let mut visited = vec![false; total];
    visited[all_flat] = true;
    let mut cycles = Vec::new();
    let mut digits = vec![0u8; n_sites];
    let mut positions = Vec::with_capacity(n_sites);
    for start in 0..total {
        if visited[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut cur = start;
        loop {
            visited[cur] = true;
            cycle.push(cur);
            decode_digits(cur, &mut digits);
            shift_successor(&mut digits, &mut positions);
            cur = encode_digits(&digits);
            if cur == start {
                break;
            }
        }
        cycles.push(cycle);
    }
    Ok(cycles)
}

/// Dense matrix of the shift operator: column `s` carries the coefficient at
/// row `successor(s)`.
pub fn omega_matrix_permutation(n_sites: usize) -> Result<Operator> {
    check_dense_cap(n_sites, DENSE_CAP)?;
    let total = pow3(n_sites);
    let mut op = Operator::zeros(total);
    for s in 0..total {
        let state = SpinBasisState::from_index(n_sites, s);
        let (image, coeff) = omega_apply(&state);
        op.set(image.index(), s, C64::new(coeff as f64, 0.0));
    }
    Ok(op)
}

/// Dense matrix through the recursive construction: the upper part is grown
/// site by site from `upper_identity` and the pair `s_minus`/`s_plus`, and
/// the lower part is its image under 180-degree rotation about the matrix
/// center.
pub fn omega_matrix_recursive(n_sites: usize) -> Result<Operator> {
    check_dense_cap(n_sites, DENSE_CAP)?;
    let a = recursive_upper_part(n_sites);
    let d = a.rotate_180();
    Ok(&a + &d)
}

fn recursive_upper_part(n_sites: usize) -> Operator {
    let mut a = upper_identity();
    let mut b = s_minus();
    for _ in 1..n_sites {
        let next_a = &a.kron(&upper_identity()) + &b.kron(&s_plus());
        let next_b = &a.kron(&s_minus()) + &b.kron(&lower_identity());
        a = next_a;
        b = next_b;
    }
    a
}

/// Dense matrix as the top spectral-parameter coefficient of the sum of the
/// first and last diagonal monodromy blocks; theta-independent.
pub fn omega_matrix_limit(cfg: &ChainConfig) -> Result<Operator> {
    let poly = monodromy_polynomial(cfg)?;
    let top = poly.coeffs.last().expect("monodromy polynomial is never empty");
    let blocks = extract_blocks(top, cfg.n_sites)?;
    Ok(&blocks.a + &blocks.d22)
}

/// Exact eigenvalue of the shift operator: the special value 2 or a reduced
/// root of unity `exp(2 pi i p / k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OmegaValue {
    SpecialTwo,
    RootOfUnity { p: u64, k: u64 },
}

impl OmegaValue {
    /// Reduce `exp(2 pi i p / k)` to lowest terms with `0 <= p < k`.
    pub fn root_of_unity(p: u64, k: u64) -> Self {
        assert!(k >= 1);
        let p = p % k;
        if p == 0 {
            return OmegaValue::RootOfUnity { p: 0, k: 1 };
        }
        let g = p.gcd(&k);
        OmegaValue::RootOfUnity { p: p / g, k: k / g }
    }

    pub fn one() -> Self {
        OmegaValue::RootOfUnity { p: 0, k: 1 }
    }

    pub fn to_c64(&self) -> C64 {
        match self {
            OmegaValue::SpecialTwo => C64::new(2.0, 0.0),
            OmegaValue::RootOfUnity { p, k } => {
                C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (*p as f64) / (*k as f64))
            }
        }
    }

    pub fn conjugate(&self) -> Self {
        match self {
            OmegaValue::SpecialTwo => OmegaValue::SpecialTwo,
            OmegaValue::RootOfUnity { p, k } => OmegaValue::root_of_unity(k - p, *k),
        }
    }

    /// Order of the root (`None` for the special value 2).
    pub fn order(&self) -> Option<u64> {
        match self {
            OmegaValue::SpecialTwo => None,
            OmegaValue::RootOfUnity { k, .. } => Some(*k),
        }
    }
}

impl Ord for OmegaValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Special value first, then roots by (order, numerator).
        match (self, other) {
            (OmegaValue::SpecialTwo, OmegaValue::SpecialTwo) => std::cmp::Ordering::Equal,
            (OmegaValue::SpecialTwo, _) => std::cmp::Ordering::Less,
            (_, OmegaValue::SpecialTwo) => std::cmp::Ordering::Greater,
            (OmegaValue::RootOfUnity { p, k }, OmegaValue::RootOfUnity { p: p2, k: k2 }) => {
                (k, p).cmp(&(k2, p2))
            }
        }
    }
}

impl PartialOrd for OmegaValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OmegaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaValue::SpecialTwo => write!(f, "2"),
            OmegaValue::RootOfUnity { p: 0, k: 1 } => write!(f, "1"),
            OmegaValue::RootOfUnity { p: 1, k: 2 } => write!(f, "-1"),
            OmegaValue::RootOfUnity { p, k } => write!(f, "exp(2*pi*i*{p}/{k})"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum OmegaRepr {
    Tag(String),
    Root { p: u64, k: u64 },
}

impl Serialize for OmegaValue {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            OmegaValue::SpecialTwo => OmegaRepr::Tag("two".into()).serialize(ser),
            OmegaValue::RootOfUnity { p, k } => OmegaRepr::Root { p: *p, k: *k }.serialize(ser),
        }
    }
}

impl<'de> Deserialize<'de> for OmegaValue {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        match OmegaRepr::deserialize(de)? {
            OmegaRepr::Tag(s) if s == "two" => Ok(OmegaValue::SpecialTwo),
            OmegaRepr::Tag(s) => Err(serde::de::Error::custom(format!("unknown omega tag {s:?}"))),
            OmegaRepr::Root { p, k } => Ok(OmegaValue::root_of_unity(p, k)),
        }
    }
}

/// Exact eigenvalue multiset of the shift operator: each length-k cycle
/// contributes one copy of every k-th root of unity, plus the single
/// eigenvalue 2. Total multiplicity is 3^n.
pub fn eigenvalue_multiset(n_sites: usize) -> Result<BTreeMap<OmegaValue, u64>> {
    let census = cycle_census(n_sites)?;
    let mut out: BTreeMap<OmegaValue, u64> = BTreeMap::new();
    out.insert(OmegaValue::SpecialTwo, 1);
    for (&k, &cycles) in &census.counts {
        for p in 0..k {
            *out.entry(OmegaValue::root_of_unity(p, k)).or_insert(0) += cycles;
        }
    }
    Ok(out)
}

/// Mobius function by trial-division factorization.
pub fn moebius(mut n: u64) -> i64 {
    assert!(n >= 1);
    let mut factors = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            factors += 1;
        }
        p += 1;
    }
    if n > 1 {
        factors += 1;
    }
    if factors % 2 == 0 {
        1
    } else {
        -1
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .expect("binomial overflow; system size too large for exact counting");
        acc /= (i + 1) as u128;
    }
    acc
}

/// Exact count of k-th-root-of-unity eigenvalues for a chain of length
/// `n_sites`: `(sum_{d|k} 2^d mu(k/d)) * sum_{m=1}^{floor(n/k)} C(n, k m)`.
///
/// For `k = 1` this counts the diagonal eigenvalue 1 with the eigenvalue 2
/// excluded; it equals `2^(n+1) - 2`.
pub fn moebius_count(n_sites: u64, k: u64) -> u128 {
    assert!(k >= 1, "root order must be positive");
    let mut weight: i128 = 0;
    for d in 1..=k {
        if k % d == 0 {
            let mu = moebius(k / d) as i128;
            weight += mu
                .checked_mul(1i128.checked_shl(d as u32).expect("2^d overflow"))
                .expect("mobius weight overflow");
        }
    }
    debug_assert!(weight >= 0, "necklace count is nonnegative");
    let mut binom_sum: u128 = 0;
    let mut m = k;
    while m <= n_sites {
        binom_sum = binom_sum
            .checked_add(binomial(n_sites, m))
            .expect("binomial sum overflow");
        m += k;
    }
    (weight as u128)
        .checked_mul(binom_sum)
        .expect("eigenvalue count overflow")
}

/// One row of the eigenvalue-distribution table.
#[derive(Debug, Clone, Serialize)]
pub struct RootDistribution {
    pub n_sites: u64,
    /// `per_order[k-1]` counts the k-th-root eigenvalues, `k = 1..=n_sites`.
    pub per_order: Vec<u128>,
    /// The eigenvalue 2, kept out of the k = 1 column.
    pub diag_special: u64,
}

impl RootDistribution {
    pub fn count(&self, k: u64) -> u128 {
        if k == 0 || k > self.per_order.len() as u64 {
            0
        } else {
            self.per_order[(k - 1) as usize]
        }
    }

    pub fn total(&self) -> u128 {
        self.per_order.iter().sum()
    }
}

/// Rows `n = 1..=n_max` of the eigenvalue-distribution table from the exact
/// Mobius-function count.
pub fn table_census(n_max: u64) -> Vec<RootDistribution> {
    (1..=n_max)
        .map(|n| RootDistribution {
            n_sites: n,
            per_order: (1..=n).map(|k| moebius_count(n, k)).collect(),
            diag_special: 1,
        })
        .collect()
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// For prime `n`, the count of n-th roots equals `2^n - 2`, which is then
/// divisible by `n`. Returns the count and whether both facts hold.
pub fn prime_divisibility_check(n_sites: u64) -> Result<(u128, bool)> {
    if !is_prime(n_sites) {
        return Err(Error::Precondition(format!("{n_sites} is not prime")));
    }
    let f_nn = moebius_count(n_sites, n_sites);
    let expected = (1u128 << n_sites) - 2;
    let ok = f_nn == expected && f_nn % (n_sites as u128) == 0;
    Ok((f_nn, ok))
}
