//! Linear programming contract and a dense bounded dual simplex.
//!
//! The branch-and-bound only needs three operations from an LP engine: append
//! an inequality, change variable bounds, and re-optimize. [`IncrementalLp`]
//! captures that; [`DualSimplex`] implements it on a dense dictionary that keeps
//! one column per nonbasic variable, so its width does not grow with the row
//! count. Both row
//! additions and bound changes keep the current basis dual feasible, so every
//! re-solve is a warm start.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub coefs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl LpRow {
    pub fn le(coefs: Vec<(usize, f64)>, rhs: f64) -> Self {
        LpRow { coefs, sense: Sense::Le, rhs }
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coefs.iter().map(|&(j, v)| v * x[j]).sum()
    }

    /// Amount by which `x` violates the row (zero when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let act = self.activity(x);
        match self.sense {
            Sense::Le => (act - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - act).max(0.0),
            Sense::Eq => (act - self.rhs).abs(),
        }
    }
}

/// `min objective'x` subject to `rows` and `lower <= x <= upper`.
/// Lower bounds must be finite; upper bounds may be `f64::INFINITY`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    pub num_vars: usize,
    pub objective: Vec<(usize, f64)>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub rows: Vec<LpRow>,
}

impl LpModel {
    pub fn new(num_vars: usize) -> Self {
        LpModel {
            num_vars,
            objective: Vec::new(),
            lower: vec![0.0; num_vars],
            upper: vec![f64::INFINITY; num_vars],
            rows: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

impl fmt::Display for LpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
            LpStatus::IterationLimit => "iteration-limit",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
}

/// Operations the branch-and-bound needs from an LP engine.
pub trait IncrementalLp {
    fn num_vars(&self) -> usize;
    fn num_rows(&self) -> usize;
    fn add_row(&mut self, row: &LpRow);
    fn set_bounds(&mut self, var: usize, lower: f64, upper: f64);
    fn bounds(&self, var: usize) -> (f64, f64);
    fn solve(&mut self) -> LpStatus;
    fn primal(&self) -> Vec<f64>;
    fn objective_value(&self) -> f64;
}

pub const DEFAULT_PIVOT_LIMIT: u64 = 1_000_000;

const PRIMAL_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const REFACTOR_EVERY: u64 = 200;
const ARTIFICIAL_BOUND: f64 = 1e9;
const FEASIBILITY_CHECK: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Basic(usize),
    Nonbasic(usize),
}

/// Dense dictionary-form dual simplex over bounded variables.
///
/// Row `i` is stored as `sum_j a_ij x_j + s_i = b_i` with a slack `s_i >= 0`
/// (`s_i = 0` for equalities); `>=` rows are negated on entry. Variables are
/// numbered structurals first, then slacks. The dictionary keeps
/// `x_B = beta - T x_N` with one column per nonbasic variable, so its width
/// stays at the number of structural variables however many rows are added.
/// The initial basis is all slacks, which is dual feasible after placing each
/// boxed variable at the bound matching the sign of its cost.
#[derive(Clone)]
pub struct DualSimplex {
    n: usize,
    cost: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    artificial: Vec<bool>,
    rows: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
    tab: Vec<Vec<f64>>,
    beta: Vec<f64>,
    reduced: Vec<f64>,
    basis: Vec<usize>,
    nonbasic: Vec<usize>,
    slot: Vec<Slot>,
    at_upper: Vec<bool>,
    value: Vec<f64>,
    values_dirty: bool,
    pivots_since_refactor: u64,
    pub pivot_limit: u64,
    total_pivots: u64,
}

impl fmt::Debug for DualSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DualSimplex")
            .field("vars", &self.n)
            .field("rows", &self.rows.len())
            .field("pivots", &self.total_pivots)
            .finish()
    }
}

impl DualSimplex {
    pub fn new(cost: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        let n = cost.len();
        assert_eq!(lower.len(), n);
        assert_eq!(upper.len(), n);
        assert!(lower.iter().all(|l| l.is_finite()), "lower bounds must be finite");
        let mut lp = DualSimplex {
            n,
            reduced: cost.clone(),
            cost,
            value: lower.clone(),
            lower,
            upper,
            artificial: vec![false; n],
            rows: Vec::new(),
            rhs: Vec::new(),
            tab: Vec::new(),
            beta: Vec::new(),
            basis: Vec::new(),
            nonbasic: (0..n).collect(),
            slot: (0..n).map(Slot::Nonbasic).collect(),
            at_upper: vec![false; n],
            values_dirty: true,
            pivots_since_refactor: 0,
            pivot_limit: DEFAULT_PIVOT_LIMIT,
            total_pivots: 0,
        };
        lp.repair_dual_feasibility();
        lp
    }

    pub fn from_model(model: &LpModel) -> Self {
        let mut cost = vec![0.0; model.num_vars];
        for &(j, v) in &model.objective {
            cost[j] += v;
        }
        let mut lp = DualSimplex::new(cost, model.lower.clone(), model.upper.clone());
        for row in &model.rows {
            lp.add_row(row);
        }
        lp
    }

    pub fn total_pivots(&self) -> u64 {
        self.total_pivots
    }

    fn is_fixed(&self, j: usize) -> bool {
        self.upper[j] - self.lower[j] <= 0.0
    }

    /// Places each nonbasic variable at the bound its reduced cost prefers.
    fn repair_dual_feasibility(&mut self) {
        for k in 0..self.nonbasic.len() {
            let j = self.nonbasic[k];
            let d = self.reduced[k];
            if d < -DUAL_TOL {
                if self.upper[j].is_infinite() {
                    self.upper[j] = self.lower[j] + ARTIFICIAL_BOUND;
                    self.artificial[j] = true;
                }
                self.at_upper[j] = true;
            } else if d > DUAL_TOL {
                self.at_upper[j] = false;
            }
            if self.at_upper[j] && self.upper[j].is_infinite() {
                self.at_upper[j] = false;
            }
            self.value[j] = if self.at_upper[j] { self.upper[j] } else { self.lower[j] };
        }
        self.values_dirty = true;
    }

    fn recompute_basic_values(&mut self) {
        let xn: Vec<(usize, f64)> = self
            .nonbasic
            .iter()
            .enumerate()
            .filter(|&(_, &j)| self.value[j] != 0.0)
            .map(|(k, &j)| (k, self.value[j]))
            .collect();
        for i in 0..self.basis.len() {
            let row = &self.tab[i];
            let v = self.beta[i] - xn.iter().map(|&(k, x)| row[k] * x).sum::<f64>();
            self.value[self.basis[i]] = v;
        }
        self.values_dirty = false;
    }

    /// Exchanges the basic variable of row `r` with the nonbasic variable at
    /// position `k`.
    fn pivot(&mut self, r: usize, k: usize) {
        let p = self.tab[r][k];
        let mut prow = std::mem::take(&mut self.tab[r]);
        for v in prow.iter_mut() {
            *v /= p;
        }
        prow[k] = 1.0 / p;
        self.beta[r] /= p;
        let pbeta = self.beta[r];
        for i in 0..self.basis.len() {
            if i == r {
                continue;
            }
            let row = &mut self.tab[i];
            let f = row[k];
            if f != 0.0 {
                row[k] = 0.0;
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= f * pv;
                }
                self.beta[i] -= f * pbeta;
            }
        }
        let f = self.reduced[k];
        if f != 0.0 {
            self.reduced[k] = 0.0;
            for (v, pv) in self.reduced.iter_mut().zip(&prow) {
                *v -= f * pv;
            }
        }
        self.tab[r] = prow;
        let entering = self.nonbasic[k];
        let leaving = self.basis[r];
        self.basis[r] = entering;
        self.nonbasic[k] = leaving;
        self.slot[entering] = Slot::Basic(r);
        self.slot[leaving] = Slot::Nonbasic(k);
        self.total_pivots += 1;
        self.pivots_since_refactor += 1;
    }

    /// Rebuilds the dictionary for the current basis from the original rows.
    fn refactor(&mut self) -> bool {
        let target: Vec<bool> = (0..self.slot.len()).map(|j| matches!(self.slot[j], Slot::Basic(_))).collect();
        let m = self.rows.len();
        let n = self.n;
        let mut fresh = DualSimplex {
            n,
            cost: self.cost.clone(),
            lower: self.lower.clone(),
            upper: self.upper.clone(),
            artificial: self.artificial.clone(),
            rows: self.rows.clone(),
            rhs: self.rhs.clone(),
            tab: Vec::with_capacity(m),
            beta: self.rhs.clone(),
            reduced: self.cost.clone(),
            basis: (n..n + m).collect(),
            nonbasic: (0..n).collect(),
            slot: (0..n).map(Slot::Nonbasic).chain((0..m).map(Slot::Basic)).collect(),
            at_upper: self.at_upper.clone(),
            value: self.value.clone(),
            values_dirty: true,
            pivots_since_refactor: 0,
            pivot_limit: self.pivot_limit,
            total_pivots: self.total_pivots,
        };
        for row in &self.rows {
            let mut t = vec![0.0; n];
            for &(j, v) in row {
                t[j] += v;
            }
            fresh.tab.push(t);
        }
        for j in 0..n {
            if !target[j] {
                continue;
            }
            let Slot::Nonbasic(k) = fresh.slot[j] else { unreachable!() };
            let mut best = None;
            let mut best_abs = 1e-11;
            for r in 0..m {
                let leaving = fresh.basis[r];
                if leaving >= n && !target[leaving] && fresh.tab[r][k].abs() > best_abs {
                    best_abs = fresh.tab[r][k].abs();
                    best = Some(r);
                }
            }
            let Some(r) = best else { return false };
            fresh.pivot(r, k);
        }
        fresh.total_pivots = self.total_pivots;
        fresh.pivots_since_refactor = 0;
        *self = fresh;
        true
    }

    fn max_row_violation(&self) -> f64 {
        let x = &self.value;
        self.rows
            .iter()
            .zip(&self.rhs)
            .enumerate()
            .map(|(i, (row, &b))| {
                let act: f64 = row.iter().map(|&(j, v)| v * x[j]).sum();
                let lo = b - self.upper[self.n + i];
                (act - b).max(lo - act).max(0.0)
            })
            .fold(0.0, f64::max)
    }

    fn choose_leaving(&self, bland: bool) -> Option<(usize, bool)> {
        let mut best: Option<(usize, bool)> = None;
        let mut best_key = 0.0;
        for (r, &j) in self.basis.iter().enumerate() {
            let v = self.value[j];
            let (infeas, to_lower) = if v < self.lower[j] - PRIMAL_TOL {
                (self.lower[j] - v, true)
            } else if v > self.upper[j] + PRIMAL_TOL {
                (v - self.upper[j], false)
            } else {
                continue;
            };
            if bland {
                if best.is_none_or(|(br, _)| j < self.basis[br]) {
                    best = Some((r, to_lower));
                }
            } else if infeas > best_key {
                best_key = infeas;
                best = Some((r, to_lower));
            }
        }
        best
    }

    fn choose_entering(&self, r: usize, to_lower: bool, bland: bool) -> Option<(usize, f64)> {
        let row = &self.tab[r];
        let mut best: Option<(usize, f64, f64)> = None;
        for (k, &j) in self.nonbasic.iter().enumerate() {
            if self.is_fixed(j) {
                continue;
            }
            let alpha = row[k];
            if alpha.abs() <= PIVOT_TOL {
                continue;
            }
            let up = self.at_upper[j];
            let eligible = if to_lower { (!up && alpha < 0.0) || (up && alpha > 0.0) } else { (!up && alpha > 0.0) || (up && alpha < 0.0) };
            if !eligible {
                continue;
            }
            let ratio = self.reduced[k].abs() / alpha.abs();
            let better = match best {
                None => true,
                Some((bk, br, ba)) => {
                    if bland {
                        ratio < br - 1e-12 || (ratio <= br + 1e-12 && j < self.nonbasic[bk])
                    } else {
                        ratio < br - 1e-12 || (ratio <= br + 1e-12 && alpha.abs() > ba)
                    }
                }
            };
            if better {
                best = Some((k, ratio, alpha.abs()));
            }
        }
        best.map(|(k, ratio, _)| (k, ratio))
    }

    fn drop_artificial_bounds(&mut self) -> bool {
        let mut hit = false;
        for j in 0..self.slot.len() {
            if self.artificial[j] {
                if self.value[j] >= self.upper[j] - 1.0 {
                    hit = true;
                }
                if matches!(self.slot[j], Slot::Basic(_)) || !self.at_upper[j] {
                    self.upper[j] = f64::INFINITY;
                    self.artificial[j] = false;
                }
            }
        }
        hit
    }
}

impl IncrementalLp for DualSimplex {
    fn num_vars(&self) -> usize {
        self.n
    }

    fn num_rows(&self) -> usize {
        self.rows.len()
    }

    fn add_row(&mut self, row: &LpRow) {
        let (sign, slack_upper) = match row.sense {
            Sense::Le => (1.0, f64::INFINITY),
            Sense::Ge => (-1.0, f64::INFINITY),
            Sense::Eq => (1.0, 0.0),
        };
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.coefs.len());
        for &(j, v) in &row.coefs {
            assert!(j < self.n, "row references variable {j} of {}", self.n);
            match merged.iter_mut().find(|(k, _)| *k == j) {
                Some(e) => e.1 += sign * v,
                None => merged.push((j, sign * v)),
            }
        }
        merged.retain(|&(_, v)| v != 0.0);
        let b = sign * row.rhs;

        // s = b - a'x with basic structurals substituted out
        let mut t = vec![0.0; self.n];
        let mut beta = b;
        for &(j, v) in &merged {
            match self.slot[j] {
                Slot::Nonbasic(k) => t[k] += v,
                Slot::Basic(i) => {
                    for (tk, src) in t.iter_mut().zip(&self.tab[i]) {
                        *tk -= v * src;
                    }
                    beta -= v * self.beta[i];
                }
            }
        }
        let slack = self.slot.len();
        self.rows.push(merged);
        self.rhs.push(b);
        self.tab.push(t);
        self.beta.push(beta);
        self.lower.push(0.0);
        self.upper.push(slack_upper);
        self.artificial.push(false);
        self.at_upper.push(false);
        self.value.push(0.0);
        self.slot.push(Slot::Basic(self.basis.len()));
        self.basis.push(slack);
        self.values_dirty = true;
    }

    fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        assert!(var < self.n && lower.is_finite() && lower <= upper);
        self.lower[var] = lower;
        self.upper[var] = upper;
        self.artificial[var] = false;
        if let Slot::Nonbasic(k) = self.slot[var] {
            let d = self.reduced[k];
            self.at_upper[var] = upper.is_finite() && (d < 0.0 || (d == 0.0 && self.at_upper[var]));
            if d < -DUAL_TOL && upper.is_infinite() {
                self.upper[var] = lower + ARTIFICIAL_BOUND;
                self.artificial[var] = true;
                self.at_upper[var] = true;
            }
            self.value[var] = if self.at_upper[var] { self.upper[var] } else { self.lower[var] };
        }
        self.values_dirty = true;
    }

    fn bounds(&self, var: usize) -> (f64, f64) {
        (self.lower[var], if self.artificial[var] { f64::INFINITY } else { self.upper[var] })
    }

    fn solve(&mut self) -> LpStatus {
        let mut pivots = 0u64;
        let mut degenerate_run = 0usize;
        let mut checks = 0;
        self.repair_dual_feasibility();
        loop {
            if self.values_dirty {
                self.recompute_basic_values();
            }
            if pivots >= self.pivot_limit {
                return LpStatus::IterationLimit;
            }
            let bland = degenerate_run > 10 * self.rows.len().max(1);
            let Some((r, to_lower)) = self.choose_leaving(bland) else {
                if checks < 3 && self.max_row_violation() > FEASIBILITY_CHECK {
                    checks += 1;
                    if self.refactor() {
                        self.repair_dual_feasibility();
                        continue;
                    }
                }
                if self.drop_artificial_bounds() {
                    return LpStatus::Unbounded;
                }
                if self.artificial.iter().any(|&a| a) {
                    self.repair_dual_feasibility();
                    continue;
                }
                return LpStatus::Optimal;
            };
            let Some((k, ratio)) = self.choose_entering(r, to_lower, bland) else {
                // a drifted dictionary can hide an entering column
                if self.pivots_since_refactor > 0 && self.refactor() {
                    self.repair_dual_feasibility();
                    continue;
                }
                return LpStatus::Infeasible;
            };
            let leaving = self.basis[r];
            self.pivot(r, k);
            self.at_upper[leaving] = !to_lower;
            self.value[leaving] = if to_lower { self.lower[leaving] } else { self.upper[leaving] };
            self.values_dirty = true;
            pivots += 1;
            if ratio <= 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            if self.pivots_since_refactor >= REFACTOR_EVERY && self.refactor() {
                self.repair_dual_feasibility();
            }
        }
    }

    fn primal(&self) -> Vec<f64> {
        self.value[..self.n].to_vec()
    }

    fn objective_value(&self) -> f64 {
        self.cost.iter().zip(&self.value).map(|(c, x)| c * x).sum()
    }
}

/// Solves a self-contained [`LpModel`] from scratch.
pub fn solve_lp(model: &LpModel) -> LpResult {
    solve_lp_with_limit(model, DEFAULT_PIVOT_LIMIT)
}

pub fn solve_lp_with_limit(model: &LpModel, pivot_limit: u64) -> LpResult {
    let mut lp = DualSimplex::from_model(model);
    lp.pivot_limit = pivot_limit;
    let status = lp.solve();
    LpResult { status, x: lp.primal(), objective: lp.objective_value() }
}
