//! Exact solvers for
//!
//! ```text
//! (OPT)   min c'x + d'y + sqrt(sigma0 + sum_i a_i y_i^2),  0 <= y <= x,  x binary
//! ```
//!
//! and its continuous counterpart over the box,
//!
//! ```text
//! (COPT)  min c~'y + sqrt(offset + sum_i a_i y_i^2),  0 <= y <= 1,  c~ < 0.
//! ```
//!
//! COPT is solved by a KKT construction: indices sorted by `c~_i / a_i`
//! receive `y_i = 1` up to a threshold and `y_i = -c~_i sqrt(sigma) / a_i`
//! beyond it, where `sigma` solves a scalar fixed-point equation. OPT has an
//! optimal `x` that is a prefix of the indices sorted by `(c_i + d_i) / a_i`,
//! so trying the `n + 1` prefixes with one COPT solve each is exact.
//!
//! The brute-force routines enumerate every binary `x`. Their inner problem is
//! solved along a different route (a golden-section search over the
//! perspective variable) so they can serve as independent oracles.

use std::cmp::Ordering;

use crate::cuts::Cut;
use crate::error::{Error, Result};
use crate::instance::Instance;

/// Largest `n` accepted by the enumeration oracles.
pub const ENUMERATION_LIMIT: usize = 20;

const GOLDEN_ITERATIONS: usize = 120;

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationSolution {
    pub y: Vec<f64>,
    /// `offset + sum_i a_i y_i^2` at the returned point.
    pub sigma_tilde: f64,
    /// Indices with `0 < y_i < 1` (zero when `sigma_tilde` collapses to 0).
    pub fractional: Vec<usize>,
    /// Indices with `y_i = 1`.
    pub at_one: Vec<usize>,
    pub objective: f64,
}

impl RelaxationSolution {
    /// Multipliers `(lambda, mu)` of `y >= 0` and `y <= 1` recovered from
    /// stationarity `c~_i + a_i y_i / sqrt(sigma) - lambda_i + mu_i = 0`.
    ///
    /// Returns `None` at `sigma_tilde = 0`, where the square root is not
    /// differentiable.
    pub fn multipliers(&self, c_tilde: &[f64], a: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
        if !(self.sigma_tilde > 0.0) {
            return None;
        }
        let root = self.sigma_tilde.sqrt();
        let n = self.y.len();
        let mut lambda = vec![0.0; n];
        let mut mu = vec![0.0; n];
        for i in 0..n {
            let g = c_tilde[i] + a[i] * self.y[i] / root;
            if self.at_one.contains(&i) {
                mu[i] = -g;
            } else if self.y[i] <= 0.0 {
                lambda[i] = g;
            }
        }
        Some((lambda, mu))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptSolution {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub value: f64,
    /// Number of leading indices (in `(c + d) / a` order) set to one, not
    /// counting indices fixed by preprocessing.
    pub prefix_len: usize,
}

fn ratio_order(num: &[f64], a: &[f64], idx: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut order: Vec<usize> = idx.collect();
    order.sort_by(|&i, &j| {
        (num[i] / a[i]).partial_cmp(&(num[j] / a[j])).unwrap_or(Ordering::Equal).then(i.cmp(&j))
    });
    order
}

/// KKT point of COPT.
pub fn solve_continuous_relaxation(c_tilde: &[f64], a: &[f64], sigma_offset: f64) -> Result<RelaxationSolution> {
    let n = a.len();
    if c_tilde.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: c_tilde.len() });
    }
    if let Some(k) = c_tilde.iter().position(|&c| !(c < 0.0)) {
        return Err(Error::Precondition(format!("c~[{k}] = {} must be negative", c_tilde[k])));
    }
    if let Some(k) = a.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::Precondition(format!("a[{k}] must be positive")));
    }
    if !(sigma_offset >= 0.0) {
        return Err(Error::Precondition("sigma offset must be nonnegative".into()));
    }

    let order = ratio_order(c_tilde, a, 0..n);
    // prefix[k] = a of the first k sorted indices
    let mut prefix = vec![0.0; n + 1];
    for (k, &i) in order.iter().enumerate() {
        prefix[k + 1] = prefix[k] + a[i];
    }

    let mut sigma = sigma_offset + prefix[n];
    let mut frac_weight = 0.0;
    let mut p = n;
    while p > 0 {
        let i = order[p - 1];
        if -c_tilde[i] * sigma.sqrt() >= a[i] {
            break;
        }
        frac_weight += c_tilde[i] * c_tilde[i] / a[i];
        p -= 1;
        let numerator = sigma_offset + prefix[p];
        let denominator = 1.0 - frac_weight;
        sigma = if numerator <= 0.0 || denominator <= 0.0 { 0.0 } else { numerator / denominator };
    }

    let mut y = vec![0.0; n];
    let root = sigma.sqrt();
    for &i in &order[..p] {
        y[i] = 1.0;
    }
    for &i in &order[p..] {
        y[i] = (-c_tilde[i] * root / a[i]).clamp(0.0, 1.0);
    }
    let quad: f64 = sigma_offset + a.iter().zip(&y).map(|(a, y)| a * y * y).sum::<f64>();
    let objective = c_tilde.iter().zip(&y).map(|(c, y)| c * y).sum::<f64>() + quad.sqrt();
    let mut at_one: Vec<usize> = order[..p].to_vec();
    at_one.sort_unstable();
    let mut fractional: Vec<usize> = order[p..].to_vec();
    fractional.sort_unstable();
    Ok(RelaxationSolution { y, sigma_tilde: sigma, fractional, at_one, objective })
}

/// `min d'y + sqrt(offset + sum a_i y_i^2)` over `0 <= y_i <= 1` for `i` in
/// `support`, `y = 0` elsewhere. Indices with `d_i >= 0` stay at zero.
/// Returns the full-length `y` and the optimal value.
pub(crate) fn inner_min(d: &[f64], a: &[f64], offset: f64, support: &[usize]) -> (Vec<f64>, f64) {
    let active: Vec<usize> = support.iter().copied().filter(|&i| d[i] < 0.0).collect();
    let mut y = vec![0.0; d.len()];
    if active.is_empty() {
        return (y, offset.sqrt());
    }
    let cs: Vec<f64> = active.iter().map(|&i| d[i]).collect();
    let as_: Vec<f64> = active.iter().map(|&i| a[i]).collect();
    let sol = solve_continuous_relaxation(&cs, &as_, offset).expect("preconditions checked");
    for (k, &i) in active.iter().enumerate() {
        y[i] = sol.y[k];
    }
    (y, sol.objective)
}

/// O(n^2) exact solver for OPT.
pub fn solve_opt(c: &[f64], d: &[f64], a: &[f64], sigma0: f64) -> Result<OptSolution> {
    let n = a.len();
    for len in [c.len(), d.len()] {
        if len != n {
            return Err(Error::LengthMismatch { expected: n, got: len });
        }
    }
    if let Some(k) = a.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::Precondition(format!("a[{k}] must be positive")));
    }

    let forced: Vec<usize> = (0..n).filter(|&i| c[i] <= 0.0).collect();
    let regular = (0..n).filter(|&i| c[i] > 0.0 && d[i] < 0.0 && c[i] + d[i] < 0.0);
    let cd: Vec<f64> = c.iter().zip(d).map(|(c, d)| c + d).collect();
    let order = ratio_order(&cd, a, regular);
    let fixed_cost: f64 = forced.iter().map(|&i| c[i]).sum();

    let mut best: Option<OptSolution> = None;
    let mut support = forced.clone();
    let mut prefix_cost = fixed_cost;
    for m in 0..=order.len() {
        if m > 0 {
            support.push(order[m - 1]);
            prefix_cost += c[order[m - 1]];
        }
        let (y, inner) = inner_min(d, a, sigma0, &support);
        let value = prefix_cost + inner;
        if best.as_ref().is_none_or(|b| value < b.value) {
            let mut x = vec![0.0; n];
            for &i in &support {
                x[i] = 1.0;
            }
            best = Some(OptSolution { x, y, value, prefix_len: m });
        }
    }
    Ok(best.expect("at least the empty prefix"))
}

/// Inner problem of the enumeration oracles, solved independently of the KKT
/// construction: `sqrt(q) = min_{s > 0} q / (2s) + s / 2`, and for fixed `s`
/// the minimizing `y` is `clamp(-d_i s / a_i, 0, 1)`. The resulting function
/// of `s` is convex, so a golden-section search locates its minimum.
pub fn perspective_inner_min(d: &[f64], a: &[f64], offset: f64, support: &[usize]) -> (Vec<f64>, f64) {
    let active: Vec<usize> = support.iter().copied().filter(|&i| d[i] < 0.0).collect();
    let n = d.len();
    let y_at = |s: f64| {
        let mut y = vec![0.0; n];
        for &i in &active {
            y[i] = (-d[i] * s / a[i]).clamp(0.0, 1.0);
        }
        y
    };
    let objective = |y: &[f64]| {
        let q: f64 = offset + active.iter().map(|&i| a[i] * y[i] * y[i]).sum::<f64>();
        active.iter().map(|&i| d[i] * y[i]).sum::<f64>() + q.sqrt()
    };
    let phi = |s: f64| {
        let mut acc = s / 2.0;
        let mut q = offset;
        for &i in &active {
            let yi = (-d[i] * s / a[i]).clamp(0.0, 1.0);
            acc += d[i] * yi;
            q += a[i] * yi * yi;
        }
        acc + q / (2.0 * s)
    };

    let zero = vec![0.0; n];
    let zero_value = offset.sqrt();
    if active.is_empty() {
        return (zero, zero_value);
    }
    let hi_bound = (offset + active.iter().map(|&i| a[i]).sum::<f64>()).sqrt();
    let ratio = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0, hi_bound);
    let mut m1 = hi - ratio * (hi - lo);
    let mut m2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (phi(m1), phi(m2));
    for _ in 0..GOLDEN_ITERATIONS {
        if f1 <= f2 {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - ratio * (hi - lo);
            f1 = phi(m1);
        } else {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + ratio * (hi - lo);
            f2 = phi(m2);
        }
    }
    let y = y_at(0.5 * (lo + hi));
    let value = objective(&y);
    if value < zero_value {
        (y, value)
    } else {
        (zero, zero_value)
    }
}

fn check_enumerable(n: usize) -> Result<()> {
    if n > ENUMERATION_LIMIT {
        Err(Error::TooLarge { n, limit: ENUMERATION_LIMIT })
    } else {
        Ok(())
    }
}

/// Exhaustive solver for OPT over all `2^n` binary `x`.
pub fn brute_force_opt(c: &[f64], d: &[f64], a: &[f64], sigma0: f64) -> Result<OptSolution> {
    let n = a.len();
    check_enumerable(n)?;
    for len in [c.len(), d.len()] {
        if len != n {
            return Err(Error::LengthMismatch { expected: n, got: len });
        }
    }
    let mut best: Option<OptSolution> = None;
    let mut support = Vec::with_capacity(n);
    for mask in 0u32..(1u32 << n) {
        support.clear();
        support.extend((0..n).filter(|&i| mask >> i & 1 == 1));
        let (y, inner) = perspective_inner_min(d, a, sigma0, &support);
        let value = support.iter().map(|&i| c[i]).sum::<f64>() + inner;
        if best.as_ref().is_none_or(|b| value < b.value) {
            let mut x = vec![0.0; n];
            for &i in &support {
                x[i] = 1.0;
            }
            best = Some(OptSolution { x, y, value, prefix_len: support.len() });
        }
    }
    Ok(best.expect("nonempty enumeration"))
}

/// Exhaustive optimum of a diagonal [`Instance`], honoring `omega` and the
/// cardinality row.
pub fn brute_force_instance(inst: &Instance) -> Result<OptSolution> {
    let n = inst.n;
    check_enumerable(n)?;
    if inst.is_correlated() {
        return Err(Error::Precondition("enumeration oracle needs a diagonal instance".into()));
    }
    let k = inst.cardinality.unwrap_or(n);
    let scaled: Vec<f64> = inst.d.iter().map(|d| d / inst.omega).collect();
    let mut best: Option<OptSolution> = None;
    let mut support = Vec::with_capacity(n);
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() as usize > k {
            continue;
        }
        support.clear();
        support.extend((0..n).filter(|&i| mask >> i & 1 == 1));
        let (y, inner) = perspective_inner_min(&scaled, &inst.a, inst.sigma0, &support);
        let value = support.iter().map(|&i| inst.c[i]).sum::<f64>() + inst.omega * inner;
        if best.as_ref().is_none_or(|b| value < b.value) {
            let mut x = vec![0.0; n];
            for &i in &support {
                x[i] = 1.0;
            }
            best = Some(OptSolution { x, y, value, prefix_len: support.len() });
        }
    }
    Ok(best.expect("nonempty enumeration"))
}

/// `max_y  w'y - sqrt(offset + sum a_i y_i^2)` over `0 <= y_i <= 1` on `support`
/// for positive weights `w`.
fn concave_inner_max(w: &[f64], a: &[f64], offset: f64, support: &[usize]) -> f64 {
    if support.is_empty() {
        return -offset.sqrt();
    }
    let cs: Vec<f64> = support.iter().map(|&i| -w[i]).collect();
    let as_: Vec<f64> = support.iter().map(|&i| a[i]).collect();
    -solve_continuous_relaxation(&cs, &as_, offset).expect("positive weights").objective
}

/// Largest violation of `cut` over the mixed-integer set with offset `sigma0`.
///
/// For the linear class this is exact. For the cone classes the value returned
/// is `max(0, max tau - t)` with `t = sqrt(sum_{S u T} a_i y_i^2)`; this is
/// the exact maximal violation when `sigma0 = 0` and has the same sign
/// otherwise. Cone cuts must carry the same `sigma0`.
pub fn max_cut_violation(cut: &Cut, a: &[f64], sigma0: f64) -> Result<f64> {
    let n = a.len();
    check_enumerable(n)?;
    if cut.n() != n {
        return Err(Error::LengthMismatch { expected: n, got: cut.n() });
    }
    match cut {
        Cut::Linear(c) => {
            let mut zeta = f64::NEG_INFINITY;
            let mut support = Vec::with_capacity(n);
            for mask in 0u32..(1u32 << n) {
                support.clear();
                support.extend((0..n).filter(|&i| mask >> i & 1 == 1));
                let fixed: f64 = support.iter().map(|&i| c.pi[i] - c.alpha[i]).sum();
                let v = fixed + c.sigma0.sqrt() + concave_inner_max(&c.alpha, a, sigma0, &support);
                zeta = zeta.max(v);
            }
            Ok(zeta)
        }
        Cut::Subset(c) => {
            if c.sigma0 != sigma0 {
                return Err(Error::Precondition("cone cut offset differs from sigma0".into()));
            }
            Ok(split_cone_max(&c.pi, &c.alpha, c.perm.as_slice(), &[], a))
        }
        Cut::Mixed(c) => {
            if c.sigma0 != sigma0 {
                return Err(Error::Precondition("cone cut offset differs from sigma0".into()));
            }
            Ok(split_cone_max(&c.pi, &c.alpha, c.perm.as_slice(), &c.t, a))
        }
    }
}

/// `max(0, max_{x, y} tau(x, y) - sqrt(sum_{S u T} a_i y_i^2))`.
///
/// For a fixed binary `x`, `y_i = x_i` on `T` is optimal since
/// `nu - sqrt(nu^2 + q)` is nondecreasing in `nu`; the remaining `y_S` problem
/// is a COPT with offset `a(T n support)`.
fn split_cone_max(pi: &[f64], alpha: &[f64], s: &[usize], t: &[usize], a: &[f64]) -> f64 {
    let k = s.len() + t.len();
    let mut zeta = 0.0_f64;
    let mut chosen = Vec::with_capacity(s.len());
    for mask in 0u32..(1u32 << k) {
        chosen.clear();
        chosen.extend((0..s.len()).filter(|&j| mask >> j & 1 == 1).map(|j| s[j]));
        let nu_sq: f64 = (0..t.len()).filter(|&j| mask >> (s.len() + j) & 1 == 1).map(|j| a[t[j]]).sum();
        let fixed: f64 = chosen.iter().map(|&i| pi[i] - alpha[i]).sum();
        let v = fixed + nu_sq.sqrt() + concave_inner_max(alpha, a, nu_sq, &chosen);
        zeta = zeta.max(v);
    }
    zeta
}
