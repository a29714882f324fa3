//! Polymatroid inequalities for the binary restriction
//! `K = {(x, z) : sqrt(sigma0 + sum_i a_i x_i) <= z, x binary}`.
//!
//! For an ordering `(1), (2), ..., (n)` of the indices, the partial sums
//! `sigma_(k) = sigma_(k-1) + a_(k)` with `sigma_(0) = sigma0` give the
//! coefficients `pi_(k) = sqrt(sigma_(k)) - sqrt(sigma_(k-1))`, and the
//! inequality `pi'x <= z - sqrt(sigma0)`. Sorting `x` non-increasingly yields
//! the most violated one (greedy over the polymatroid).

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Violation threshold below which a cut is not reported.
pub const DEFAULT_TOL_VIOLATION: f64 = 1e-6;

/// An ordering of distinct indices drawn from `0..n`.
///
/// A full permutation covers every index exactly once; cut classes acting on a
/// subset `S` use an ordering of `S` only.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    /// Builds an ordering of distinct indices, each below `n`.
    pub fn new(order: Vec<usize>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for &i in &order {
            if i >= n {
                return Err(Error::InvalidPermutation(format!("index {i} out of range 0..{n}")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPermutation(format!("index {i} repeated")));
            }
        }
        Ok(Permutation(order))
    }

    /// Convenience constructor from 1-based indices.
    pub fn from_one_based(order: &[usize], n: usize) -> Result<Self> {
        if order.contains(&0) {
            return Err(Error::InvalidPermutation("1-based index 0".into()));
        }
        Permutation::new(order.iter().map(|i| i - 1).collect(), n)
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Sorts `0..n` by `key` non-increasing, ties by ascending index.
    pub fn sorted_desc_by(n: usize, key: impl Fn(usize) -> f64) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| key(j).partial_cmp(&key(i)).unwrap_or(Ordering::Equal).then(i.cmp(&j)));
        Permutation(order)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_full(&self, n: usize) -> bool {
        self.0.len() == n
    }

    /// Keeps only the indices for which `keep` is true, preserving order.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Permutation {
        Permutation(self.0.iter().copied().filter(|&i| keep(i)).collect())
    }
}

impl std::ops::Deref for Permutation {
    type Target = [usize];
    fn deref(&self) -> &[usize] {
        &self.0
    }
}

/// Polymatroid inequality `pi'x <= z - sqrt(sigma0)`, coefficients stored in
/// original index order.
#[derive(Debug, Clone, PartialEq)]
pub struct PolymatroidCut {
    pub pi: Vec<f64>,
    pub sigma0: f64,
    pub perm: Permutation,
}

impl PolymatroidCut {
    /// `pi'x + sqrt(sigma0) - z`; positive means violated.
    pub fn violation(&self, x: &[f64], z: f64) -> f64 {
        self.pi.iter().zip(x).map(|(p, x)| p * x).sum::<f64>() + self.sigma0.sqrt() - z
    }
}

/// Partial sums `sigma_(0..=k)` along `perm`, which may order a subset.
pub fn partial_sums(a: &[f64], sigma0: f64, perm: &Permutation) -> Result<Vec<f64>> {
    if perm.iter().any(|&i| i >= a.len()) {
        return Err(Error::LengthMismatch { expected: a.len(), got: perm.len() });
    }
    let mut out = Vec::with_capacity(perm.len() + 1);
    let mut acc = sigma0;
    out.push(acc);
    for &i in perm.iter() {
        acc += a[i];
        out.push(acc);
    }
    Ok(out)
}

/// Marginal gains `sqrt(sigma_(k)) - sqrt(sigma_(k-1))` scattered to original
/// positions; indices outside `perm` get zero.
pub(crate) fn marginal_gains(a: &[f64], sums: &[f64], perm: &[usize]) -> Vec<f64> {
    let mut pi = vec![0.0; a.len()];
    for (k, &i) in perm.iter().enumerate() {
        // difference of square roots without cancellation
        pi[i] = a[i] / (sums[k + 1].sqrt() + sums[k].sqrt());
    }
    pi
}

pub fn compute_pi(a: &[f64], sigma0: f64, perm: &Permutation) -> Result<PolymatroidCut> {
    if !perm.is_full(a.len()) {
        return Err(Error::LengthMismatch { expected: a.len(), got: perm.len() });
    }
    let sums = partial_sums(a, sigma0, perm)?;
    Ok(PolymatroidCut { pi: marginal_gains(a, &sums, perm), sigma0, perm: perm.clone() })
}

/// Most violated polymatroid inequality at `(x, z)`, if its violation exceeds
/// [`DEFAULT_TOL_VIOLATION`].
pub fn greedy_separate_binary(a: &[f64], sigma0: f64, x: &[f64], z: f64) -> Option<PolymatroidCut> {
    greedy_separate_binary_with_tol(a, sigma0, x, z, DEFAULT_TOL_VIOLATION)
}

pub fn greedy_separate_binary_with_tol(
    a: &[f64],
    sigma0: f64,
    x: &[f64],
    z: f64,
    tol: f64,
) -> Option<PolymatroidCut> {
    if x.len() != a.len() {
        return None;
    }
    let perm = Permutation::sorted_desc_by(a.len(), |i| x[i]);
    let cut = compute_pi(a, sigma0, &perm).ok()?;
    (cut.violation(x, z) > tol).then_some(cut)
}
