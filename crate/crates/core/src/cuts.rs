//! Lifted polymatroid cuts for the mixed-integer set
//! `F = {(x, y, z) : sigma0 + sum_i a_i y_i^2 <= z^2, 0 <= y <= x, x binary}`.
//!
//! Three classes are provided:
//!
//! * [`LiftedLinearCut`]: `pi'x - alpha'(x - y) + sqrt(sigma0) <= z`, with
//!   `alpha_(i) = a_(i) / sqrt(sigma_(i))`.
//! * [`SubsetConeCut`]: the linear cut applied to a subset `S` and combined
//!   with the remaining diagonal terms in a cone,
//!   `sqrt(tau^2 + sigma0 + sum_{i not in S} a_i y_i^2) <= z`,
//!   `tau = pi_S'x_S - alpha_S'(x_S - y_S)`.
//! * [`MixedConeCut`]: as above with partial sums offset by `a(T)` and the
//!   term `nu(y_T) = sqrt(sum_{i in T} a_i y_i^2)` added to `tau`.
//!
//! In the cone classes `tau` enters through `max(tau, 0)`: the conic form
//! bounds `tau <= t` for a nonnegative auxiliary `t`, so a negative `tau`
//! carries no information. `sigma0` is placed among the outer terms.
//!
//! All coefficient vectors are stored densely in original index order with
//! zeros off-support.

use crate::error::{Error, Result};
use crate::instance::{dot, Point};
use crate::polymatroid::{marginal_gains, partial_sums, Permutation};

/// Below this value of the cone function no gradient row is produced.
pub const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CutClass {
    LiftedLinear,
    SubsetCone,
    MixedCone,
}

impl CutClass {
    pub const ALL: [CutClass; 3] = [CutClass::LiftedLinear, CutClass::SubsetCone, CutClass::MixedCone];

    pub fn index(self) -> usize {
        match self {
            CutClass::LiftedLinear => 0,
            CutClass::SubsetCone => 1,
            CutClass::MixedCone => 2,
        }
    }
}

/// A linear inequality `coef_x'x + coef_y'y - coef_z z <= rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearCutRow {
    pub coef_x: Vec<f64>,
    pub coef_y: Vec<f64>,
    pub coef_z: f64,
    pub rhs: f64,
}

impl LinearCutRow {
    /// `coef_x'x + coef_y'y - rhs`, the bound the row places on `coef_z * z`.
    pub fn value(&self, x: &[f64], y: &[f64]) -> f64 {
        dot(&self.coef_x, x) + dot(&self.coef_y, y) - self.rhs
    }

    pub fn violation(&self, p: &Point) -> f64 {
        self.value(&p.x, &p.y) - self.coef_z * p.z
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiftedLinearCut {
    pub pi: Vec<f64>,
    pub alpha: Vec<f64>,
    pub sigma0: f64,
    pub perm: Permutation,
}

impl LiftedLinearCut {
    /// `pi'x - alpha'(x - y) + sqrt(sigma0)`.
    pub fn lower_bound(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut acc = self.sigma0.sqrt();
        for i in 0..self.pi.len() {
            acc += self.pi[i] * x[i] - self.alpha[i] * (x[i] - y[i]);
        }
        acc
    }

    pub fn row(&self) -> LinearCutRow {
        LinearCutRow {
            coef_x: self.pi.iter().zip(&self.alpha).map(|(p, a)| p - a).collect(),
            coef_y: self.alpha.clone(),
            coef_z: 1.0,
            rhs: -self.sigma0.sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsetConeCut {
    /// Ordering of `S`.
    pub perm: Permutation,
    pub pi: Vec<f64>,
    pub alpha: Vec<f64>,
    /// `a_i` for `i` outside `S`, zero on `S`.
    pub rest: Vec<f64>,
    pub sigma0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixedConeCut {
    /// Ordering of `S`.
    pub perm: Permutation,
    pub t: Vec<usize>,
    pub pi: Vec<f64>,
    pub alpha: Vec<f64>,
    /// `a_i` for `i` in `T`, zero elsewhere.
    pub t_weight: Vec<f64>,
    /// `a_i` for `i` outside `S` and `T`, zero elsewhere.
    pub rest: Vec<f64>,
    pub sigma0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cut {
    Linear(LiftedLinearCut),
    Subset(SubsetConeCut),
    Mixed(MixedConeCut),
}

impl Cut {
    pub fn class(&self) -> CutClass {
        match self {
            Cut::Linear(_) => CutClass::LiftedLinear,
            Cut::Subset(_) => CutClass::SubsetCone,
            Cut::Mixed(_) => CutClass::MixedCone,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Cut::Linear(c) => c.pi.len(),
            Cut::Subset(c) => c.pi.len(),
            Cut::Mixed(c) => c.pi.len(),
        }
    }

    /// The smallest `z` the cut allows at `(x, y)`.
    pub fn lower_bound(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            Cut::Linear(c) => c.lower_bound(x, y),
            _ => self.cone().value(x, y),
        }
    }

    pub fn violation(&self, p: &Point) -> f64 {
        self.lower_bound(&p.x, &p.y) - p.z
    }

    fn cone(&self) -> ConeForm<'_> {
        match self {
            Cut::Linear(_) => unreachable!("linear cut has no cone form"),
            Cut::Subset(c) => ConeForm { pi: &c.pi, alpha: &c.alpha, t_weight: None, rest: &c.rest, sigma0: c.sigma0 },
            Cut::Mixed(c) => ConeForm {
                pi: &c.pi,
                alpha: &c.alpha,
                t_weight: Some(&c.t_weight),
                rest: &c.rest,
                sigma0: c.sigma0,
            },
        }
    }
}

impl From<LiftedLinearCut> for Cut {
    fn from(c: LiftedLinearCut) -> Self {
        Cut::Linear(c)
    }
}

impl From<SubsetConeCut> for Cut {
    fn from(c: SubsetConeCut) -> Self {
        Cut::Subset(c)
    }
}

impl From<MixedConeCut> for Cut {
    fn from(c: MixedConeCut) -> Self {
        Cut::Mixed(c)
    }
}

struct ConeForm<'a> {
    pi: &'a [f64],
    alpha: &'a [f64],
    t_weight: Option<&'a [f64]>,
    rest: &'a [f64],
    sigma0: f64,
}

impl ConeForm<'_> {
    fn nu(&self, y: &[f64]) -> f64 {
        self.t_weight.map_or(0.0, |w| w.iter().zip(y).map(|(w, y)| w * y * y).sum::<f64>().sqrt())
    }

    fn tau(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut acc = self.nu(y);
        for i in 0..self.pi.len() {
            acc += self.pi[i] * x[i] - self.alpha[i] * (x[i] - y[i]);
        }
        acc
    }

    fn outer(&self, y: &[f64]) -> f64 {
        self.sigma0 + self.rest.iter().zip(y).map(|(r, y)| r * y * y).sum::<f64>()
    }

    fn value(&self, x: &[f64], y: &[f64]) -> f64 {
        let tau = self.tau(x, y).max(0.0);
        (tau * tau + self.outer(y)).sqrt()
    }

    fn linearize(&self, p: &Point) -> Result<LinearCutRow> {
        let n = self.pi.len();
        let f = self.value(&p.x, &p.y);
        if !(f > DEGENERATE_TOL) {
            return Err(Error::DegeneratePoint(f));
        }
        let tau = self.tau(&p.x, &p.y).max(0.0);
        let mut coef_x = vec![0.0; n];
        let mut coef_y = vec![0.0; n];
        if tau > 0.0 {
            let scale = tau / f;
            for i in 0..n {
                coef_x[i] = scale * (self.pi[i] - self.alpha[i]);
                coef_y[i] = scale * self.alpha[i];
            }
            if let Some(w) = self.t_weight {
                let nu = self.nu(&p.y);
                // at nu = 0 the zero subgradient of the norm is used
                if nu > 0.0 {
                    for i in 0..n {
                        coef_y[i] += scale * w[i] * p.y[i] / nu;
                    }
                }
            }
        }
        for i in 0..n {
            coef_y[i] += self.rest[i] * p.y[i] / f;
        }
        let rhs = dot(&coef_x, &p.x) + dot(&coef_y, &p.y) - f;
        Ok(LinearCutRow { coef_x, coef_y, coef_z: 1.0, rhs })
    }
}

fn check_positive(a: &[f64]) -> Result<()> {
    match a.iter().position(|&v| !(v > 0.0)) {
        Some(k) => Err(Error::InvalidCut(format!("a[{k}] must be positive"))),
        None => Ok(()),
    }
}

/// `alpha_(k) = a_(k) / sqrt(sigma_(k))` scattered to original positions.
fn lifting_coefficients(a: &[f64], sums: &[f64], perm: &[usize]) -> Vec<f64> {
    let mut alpha = vec![0.0; a.len()];
    for (k, &i) in perm.iter().enumerate() {
        alpha[i] = a[i] / sums[k + 1].sqrt();
    }
    alpha
}

pub fn build_lifted_linear(a: &[f64], sigma0: f64, perm: &Permutation) -> Result<LiftedLinearCut> {
    check_positive(a)?;
    if !perm.is_full(a.len()) {
        return Err(Error::LengthMismatch { expected: a.len(), got: perm.len() });
    }
    let sums = partial_sums(a, sigma0, perm)?;
    Ok(LiftedLinearCut {
        pi: marginal_gains(a, &sums, perm),
        alpha: lifting_coefficients(a, &sums, perm),
        sigma0,
        perm: perm.clone(),
    })
}

/// Subset cone cut for `S` = the indices of `perm_s`, in that order.
pub fn build_subset_cone(a: &[f64], sigma0: f64, perm_s: &Permutation) -> Result<SubsetConeCut> {
    check_positive(a)?;
    if perm_s.is_empty() {
        return Err(Error::InvalidCut("empty S reduces to the original cone".into()));
    }
    let sums = partial_sums(a, 0.0, perm_s)?;
    let mut rest = a.to_vec();
    for &i in perm_s.iter() {
        rest[i] = 0.0;
    }
    Ok(SubsetConeCut {
        perm: perm_s.clone(),
        pi: marginal_gains(a, &sums, perm_s),
        alpha: lifting_coefficients(a, &sums, perm_s),
        rest,
        sigma0,
    })
}

/// Mixed cone cut for `S` = the indices of `perm_s` and a disjoint `T`.
///
/// An empty `S` is accepted: it reproduces the original cone when combined
/// with any `T`.
pub fn build_mixed_cone(a: &[f64], sigma0: f64, perm_s: &Permutation, t: &[usize]) -> Result<MixedConeCut> {
    check_positive(a)?;
    let n = a.len();
    let mut in_t = vec![false; n];
    for &i in t {
        if i >= n || std::mem::replace(&mut in_t[i], true) {
            return Err(Error::InvalidCut(format!("T index {i} out of range or repeated")));
        }
    }
    if let Some(&i) = perm_s.iter().find(|&&i| i < n && in_t[i]) {
        return Err(Error::InvalidCut(format!("S and T overlap at index {i}")));
    }
    let a_t: f64 = t.iter().map(|&i| a[i]).sum();
    let sums = partial_sums(a, a_t, perm_s)?;
    let mut t_weight = vec![0.0; n];
    let mut rest = a.to_vec();
    for &i in t {
        t_weight[i] = a[i];
        rest[i] = 0.0;
    }
    for &i in perm_s.iter() {
        rest[i] = 0.0;
    }
    let mut t_sorted = t.to_vec();
    t_sorted.sort_unstable();
    Ok(MixedConeCut {
        perm: perm_s.clone(),
        t: t_sorted,
        pi: marginal_gains(a, &sums, perm_s),
        alpha: lifting_coefficients(a, &sums, perm_s),
        t_weight,
        rest,
        sigma0,
    })
}

/// Positive means the point violates the cut.
pub fn violation(cut: &Cut, p: &Point) -> f64 {
    cut.violation(p)
}

/// Supporting hyperplane of the cut's convex lower-bound function at `p`.
///
/// For the linear class this is the cut itself.
pub fn gradient_linearize(cut: &Cut, p: &Point) -> Result<LinearCutRow> {
    if p.x.len() != cut.n() || p.y.len() != cut.n() {
        return Err(Error::LengthMismatch { expected: cut.n(), got: p.x.len().min(p.y.len()) });
    }
    match cut {
        Cut::Linear(c) => Ok(c.row()),
        _ => cut.cone().linearize(p),
    }
}
