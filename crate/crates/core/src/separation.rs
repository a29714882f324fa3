//! Heuristic separation of the three lifted cut classes.
//!
//! For each of three orderings of the indices (by `x`, by `a x`, by `a / x`,
//! all non-increasing) the engine
//!
//! 1. tries the lifted linear cut; if violated it is emitted and the ordering
//!    is done;
//! 2. otherwise shrinks `S` from `N`, scanning the ordering backwards over
//!    indices with `x_i > y_i` and keeping a removal only when the subset cone
//!    cut becomes violated (its gradient row is emitted);
//! 3. then grows `T` from the resulting `S`, scanning forwards, again keeping
//!    a move only when the mixed cone cut becomes violated.
//!
//! Each ordering has its own invocation budget.

use std::cmp::Ordering;

use crate::cuts::{
    build_lifted_linear, build_mixed_cone, build_subset_cone, gradient_linearize, Cut, CutClass, LinearCutRow,
};
use crate::instance::Point;
use crate::polymatroid::{Permutation, DEFAULT_TOL_VIOLATION};

/// Minimum `x_i - y_i` for an index to be considered by the `S`/`T` scans.
const GAP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationConfig {
    pub budget_primary: u32,
    pub budget_secondary: u32,
    pub max_depth: u32,
    pub tol_violation: f64,
}

impl Default for SeparationConfig {
    fn default() -> Self {
        SeparationConfig { budget_primary: 5000, budget_secondary: 200, max_depth: 10, tol_violation: DEFAULT_TOL_VIOLATION }
    }
}

/// Invocations consumed so far, one counter per ordering rule.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SeparationState {
    pub used: [u32; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderingRule {
    /// `x` non-increasing.
    ByValue,
    /// `a_i x_i` non-increasing.
    ByWeightedValue,
    /// `a_i / x_i` non-increasing; `x_i = 0` counts as `+inf`.
    ByRatio,
}

impl OrderingRule {
    pub const ALL: [OrderingRule; 3] = [OrderingRule::ByValue, OrderingRule::ByWeightedValue, OrderingRule::ByRatio];

    fn slot(self) -> usize {
        match self {
            OrderingRule::ByValue => 0,
            OrderingRule::ByWeightedValue => 1,
            OrderingRule::ByRatio => 2,
        }
    }

    pub fn permutation(self, a: &[f64], x: &[f64]) -> Permutation {
        let n = a.len();
        let x = |i: usize| x[i].clamp(0.0, 1.0);
        match self {
            OrderingRule::ByValue => Permutation::sorted_desc_by(n, x),
            OrderingRule::ByWeightedValue => Permutation::sorted_desc_by(n, |i| a[i] * x(i)),
            OrderingRule::ByRatio => {
                let mut order: Vec<usize> = (0..n).collect();
                let key = |i: usize| if x(i) > 0.0 { a[i] / x(i) } else { f64::INFINITY };
                order.sort_by(|&i, &j| {
                    key(j)
                        .partial_cmp(&key(i))
                        .unwrap_or(Ordering::Equal)
                        .then_with(|| {
                            if key(i).is_infinite() && key(j).is_infinite() {
                                a[j].partial_cmp(&a[i]).unwrap_or(Ordering::Equal)
                            } else {
                                Ordering::Equal
                            }
                        })
                        .then(i.cmp(&j))
                });
                Permutation::new(order, n).expect("sorted indices form a permutation")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct EmittedCut {
    pub class: CutClass,
    pub rule: OrderingRule,
    pub row: LinearCutRow,
    /// Violation of the parent cut at the query point.
    pub violation: f64,
    pub cut: Cut,
}

#[derive(Debug, Clone, Default)]
pub struct SeparationOutcome {
    pub cuts: Vec<EmittedCut>,
    pub counts: [u32; 3],
}

impl SeparationOutcome {
    pub fn rows(&self) -> impl Iterator<Item = &LinearCutRow> {
        self.cuts.iter().map(|c| &c.row)
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    fn push(&mut self, cut: Cut, rule: OrderingRule, violation: f64, p: &Point) -> bool {
        let Ok(row) = gradient_linearize(&cut, p) else { return false };
        let class = cut.class();
        self.counts[class.index()] += 1;
        self.cuts.push(EmittedCut { class, rule, row, violation, cut });
        true
    }
}

impl SeparationConfig {
    fn budget(&self, rule: OrderingRule) -> u32 {
        match rule {
            OrderingRule::ByValue => self.budget_primary,
            _ => self.budget_secondary,
        }
    }
}

/// Runs the separation procedure at `p`, consuming one unit of each ordering
/// rule's budget that is not yet exhausted.
pub fn separate(
    p: &Point,
    a: &[f64],
    sigma0: f64,
    cfg: &SeparationConfig,
    state: &mut SeparationState,
) -> SeparationOutcome {
    let mut out = SeparationOutcome::default();
    if p.x.len() != a.len() || p.y.len() != a.len() {
        return out;
    }
    for rule in OrderingRule::ALL {
        if state.used[rule.slot()] >= cfg.budget(rule) {
            continue;
        }
        state.used[rule.slot()] += 1;
        let perm = rule.permutation(a, &p.x);
        separate_for_ordering(p, a, sigma0, &perm, rule, cfg.tol_violation, &mut out);
    }
    out
}

fn separate_for_ordering(
    p: &Point,
    a: &[f64],
    sigma0: f64,
    perm: &Permutation,
    rule: OrderingRule,
    tol: f64,
    out: &mut SeparationOutcome,
) {
    let n = a.len();
    let linear: Cut = match build_lifted_linear(a, sigma0, perm) {
        Ok(c) => c.into(),
        Err(_) => return,
    };
    let v = linear.violation(p);
    if v > tol {
        out.push(linear, rule, v, p);
        return;
    }

    let gap = |i: usize| p.x[i] - p.y[i] > GAP_TOL;
    let mut in_s = vec![true; n];
    for &i in perm.iter().rev() {
        if !gap(i) {
            continue;
        }
        in_s[i] = false;
        let s_perm = perm.restrict(|j| in_s[j]);
        let kept = !s_perm.is_empty()
            && build_subset_cone(a, sigma0, &s_perm)
                .map(Cut::from)
                .map(|cut| {
                    let v = cut.violation(p);
                    v > tol && out.push(cut, rule, v, p)
                })
                .unwrap_or(false);
        if !kept {
            in_s[i] = true;
        }
    }

    let s_order: Vec<usize> = perm.iter().copied().filter(|&i| in_s[i]).collect();
    let mut t: Vec<usize> = Vec::new();
    for &i in &s_order {
        if !gap(i) {
            continue;
        }
        in_s[i] = false;
        t.push(i);
        let s_perm = perm.restrict(|j| in_s[j]);
        let kept = !s_perm.is_empty()
            && build_mixed_cone(a, sigma0, &s_perm, &t)
                .map(Cut::from)
                .map(|cut| {
                    let v = cut.violation(p);
                    v > tol && out.push(cut, rule, v, p)
                })
                .unwrap_or(false);
        if !kept {
            in_s[i] = true;
            t.pop();
        }
    }
}
