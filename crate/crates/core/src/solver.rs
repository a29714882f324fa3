//! Outer-approximation branch-and-bound.
//!
//! Variables are laid out as `x (n) | y (n) | z | s` where `s` exists only for
//! correlated instances. The cone `sqrt(sigma0 + s^2 + sum a_i y_i^2) <= z`
//! and, when present, `sqrt(y'Vy) <= s` are enforced lazily through gradient
//! rows. Every node is re-solved until its LP point satisfies both cones
//! within [`OA_TOL`] and, at shallow depth, no separated cut is violated.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cuts::LinearCutRow;
use crate::error::{Error, Result};
use crate::instance::{dot, quad_form, Instance, Point};
use crate::lp::{DualSimplex, IncrementalLp, LpRow, LpStatus};
use crate::oracles::inner_min;
use crate::separation::{separate, SeparationConfig, SeparationState};

/// Cone violation above which a lazy gradient row is added.
pub const OA_TOL: f64 = 1e-6;
/// Distance from 0/1 below which an `x` value counts as integral.
pub const INT_TOL: f64 = 1e-6;
const MAX_ROUNDS_PER_NODE: usize = 400;
const GRADIENT_STEPS: usize = 300;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub time_limit_s: f64,
    pub node_limit: Option<u64>,
    pub gap_tol: f64,
    pub max_cut_depth: u32,
    pub budget_primary: u32,
    pub budget_secondary: u32,
    pub enable_cuts: bool,
    pub lp_pivot_limit: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            time_limit_s: 60.0,
            node_limit: None,
            gap_tol: 1e-6,
            max_cut_depth: 10,
            budget_primary: 5000,
            budget_secondary: 200,
            enable_cuts: true,
            lp_pivot_limit: crate::lp::DEFAULT_PIVOT_LIMIT,
        }
    }
}

impl SolverConfig {
    pub fn with_cuts(mut self, on: bool) -> Self {
        self.enable_cuts = on;
        self
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    fn separation(&self) -> SeparationConfig {
        SeparationConfig {
            budget_primary: self.budget_primary,
            budget_secondary: self.budget_secondary,
            max_depth: self.max_cut_depth,
            ..SeparationConfig::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    TimeLimit,
    NodeLimit,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::TimeLimit => "time-limit",
            SolveStatus::NodeLimit => "node-limit",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub incumbent: f64,
    pub bound: f64,
    pub root_bound: f64,
    /// `100 (incumbent - root_bound) / |incumbent|`.
    pub rgap: f64,
    /// `100 (incumbent - bound) / |incumbent|`.
    pub egap: f64,
    /// Nodes processed, root included.
    pub nodes: u64,
    pub time_s: f64,
    /// Emitted cuts per class: lifted linear, subset cone, mixed cone.
    pub cuts: [u32; 3],
    pub oa_rows: u64,
    /// Nodes whose LP hit the pivot limit; their parent bound is kept.
    pub lp_failures: u64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: f64,
    pub s: Option<f64>,
}

impl SolveReport {
    /// Nodes created by branching (all processed nodes except the root).
    pub fn branch_nodes(&self) -> u64 {
        self.nodes.saturating_sub(1)
    }

    pub fn solved(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

/// Percentage gap between an incumbent and a lower bound. Falls back to the
/// absolute difference when the incumbent is zero.
pub fn percent_gap(incumbent: f64, bound: f64) -> f64 {
    let diff = (incumbent - bound).max(0.0);
    if incumbent.abs() > 1e-12 {
        100.0 * diff / incumbent.abs()
    } else {
        100.0 * diff
    }
}

/// Snapshot passed to a [`SolveObserver`] after a node's LP loop.
#[derive(Debug, Clone)]
pub struct NodeEvent<'a> {
    pub id: u64,
    pub depth: u32,
    /// Branching decisions `(i, x_i)` leading to the node.
    pub fixings: &'a [(usize, bool)],
    /// LP bound after all rounds, `None` when the LP failed.
    pub lp_bound: Option<f64>,
    /// Global lower bound when the node was selected.
    pub global_bound: f64,
    pub incumbent: f64,
}

pub trait SolveObserver {
    fn on_node(&mut self, event: &NodeEvent<'_>);
}

impl<F: FnMut(&NodeEvent<'_>)> SolveObserver for F {
    fn on_node(&mut self, event: &NodeEvent<'_>) {
        self(event)
    }
}

struct NoObserver;

impl SolveObserver for NoObserver {
    fn on_node(&mut self, _: &NodeEvent<'_>) {}
}

/// Root-only statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct RootReport {
    pub bound: f64,
    pub reference: f64,
    pub rgap: f64,
    pub cuts: [u32; 3],
}

/// Column layout of the outer-approximation LP.
///
/// Besides `x`, `y`, `z` and `s`, the LP carries one auxiliary column `t_k`
/// per term of the cone: `a_i y_i^2 <= t_i z` for every `i`, `s^2 <= t_s z`
/// on correlated instances and `sigma0 <= t_0 z` when `sigma0 > 0`, tied by
/// `sum_k t_k <= z`. These three-dimensional rotated cones are outer
/// approximated separately, which converges in far fewer rounds than
/// tangents of the aggregated cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub n: usize,
    pub correlated: bool,
    pub offset: bool,
}

/// Quadratic term behind an auxiliary column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Term {
    Y(usize),
    S,
    Offset,
}

impl Layout {
    pub fn of(inst: &Instance) -> Self {
        Layout { n: inst.n, correlated: inst.is_correlated(), offset: inst.sigma0 > 0.0 }
    }

    pub fn x(&self, i: usize) -> usize {
        i
    }

    pub fn y(&self, i: usize) -> usize {
        self.n + i
    }

    pub fn z(&self) -> usize {
        2 * self.n
    }

    pub fn s(&self) -> Option<usize> {
        self.correlated.then_some(2 * self.n + 1)
    }

    fn t_base(&self) -> usize {
        2 * self.n + 1 + usize::from(self.correlated)
    }

    pub fn num_terms(&self) -> usize {
        self.n + usize::from(self.correlated) + usize::from(self.offset)
    }

    /// Auxiliary column of the `k`-th cone term.
    pub fn t(&self, k: usize) -> usize {
        self.t_base() + k
    }

    fn term(&self, k: usize) -> Term {
        if k < self.n {
            Term::Y(k)
        } else if k == self.n && self.correlated {
            Term::S
        } else {
            Term::Offset
        }
    }

    pub fn num_vars(&self) -> usize {
        self.t_base() + self.num_terms()
    }

    /// Objective, lower and upper bounds of the LP columns.
    pub fn columns(&self, inst: &Instance) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let nv = self.num_vars();
        let mut cost = vec![0.0; nv];
        let lower = vec![0.0; nv];
        let mut upper = vec![f64::INFINITY; nv];
        for i in 0..self.n {
            cost[self.x(i)] = inst.c[i];
            cost[self.y(i)] = inst.d[i];
            upper[self.x(i)] = 1.0;
            upper[self.y(i)] = 1.0;
        }
        cost[self.z()] = inst.omega;
        (cost, lower, upper)
    }

    fn cut_row(&self, row: &LinearCutRow) -> LpRow {
        let mut coefs = Vec::with_capacity(2 * self.n + 1);
        for i in 0..self.n {
            if row.coef_x[i] != 0.0 {
                coefs.push((self.x(i), row.coef_x[i]));
            }
            if row.coef_y[i] != 0.0 {
                coefs.push((self.y(i), row.coef_y[i]));
            }
        }
        coefs.push((self.z(), -row.coef_z));
        LpRow::le(coefs, row.rhs)
    }
}

#[derive(Debug, Clone)]
struct Node {
    id: u64,
    depth: u32,
    bound: f64,
    fixings: Vec<(usize, bool)>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // max-heap: smallest bound first, then smallest id
    fn cmp(&self, other: &Self) -> Ordering {
        other.bound.total_cmp(&self.bound).then_with(|| other.id.cmp(&self.id))
    }
}

#[derive(Debug, Clone)]
struct Incumbent {
    value: f64,
    x: Vec<f64>,
    y: Vec<f64>,
    z: f64,
    s: Option<f64>,
}

/// Gradient row of `sqrt(sigma0 + s^2 + sum a_i y_i^2) <= z` at `(y, s)`.
fn cone_row(inst: &Instance, lay: &Layout, y: &[f64], s: Option<f64>) -> Option<LpRow> {
    let s2 = s.map_or(0.0, |s| s * s);
    let f = (inst.sigma0 + s2 + inst.a.iter().zip(y).map(|(a, y)| a * y * y).sum::<f64>()).sqrt();
    if f <= 1e-12 {
        return None;
    }
    let mut coefs: Vec<(usize, f64)> = (0..inst.n)
        .filter(|&i| y[i] != 0.0)
        .map(|i| (lay.y(i), inst.a[i] * y[i] / f))
        .collect();
    if let (Some(col), Some(s)) = (lay.s(), s) {
        if s != 0.0 {
            coefs.push((col, s / f));
        }
    }
    coefs.push((lay.z(), -1.0));
    Some(LpRow::le(coefs, -inst.sigma0 / f))
}

/// Gradient row of `sqrt(y'Vy) <= s` at `y`; `None` where `y'Vy = 0`.
fn factor_row(v: &[Vec<f64>], lay: &Layout, y: &[f64]) -> Option<LpRow> {
    let q = quad_form(v, y);
    if q <= 1e-14 {
        return None;
    }
    let root = q.sqrt();
    let mut coefs: Vec<(usize, f64)> = (0..lay.n)
        .filter_map(|i| {
            let g = dot(&v[i], y) / root;
            (g != 0.0).then(|| (lay.y(i), g))
        })
        .collect();
    coefs.push((lay.s().expect("correlated layout"), -1.0));
    Some(LpRow::le(coefs, 0.0))
}

/// Tangent of the rotated cone `weight w^2 <= t z`, written as
/// `sqrt(4 weight w^2 + (t - z)^2) <= t + z`, at `(w, t, z)`. For the offset
/// term `w = 1` is a constant. `None` when the point is not violated.
fn term_row(lay: &Layout, k: usize, weight: f64, w: f64, t: f64, z: f64) -> Option<LpRow> {
    let r = (4.0 * weight * w * w + (t - z) * (t - z)).sqrt();
    if r - t - z <= 1e-12 * (1.0 + t + z) || r <= 1e-12 {
        return None;
    }
    let g = (t - z) / r;
    let mut coefs = vec![(lay.t(k), g - 1.0), (lay.z(), -g - 1.0)];
    let gw = 4.0 * weight * w / r;
    let rhs = match lay.term(k) {
        Term::Y(i) => {
            coefs.push((lay.y(i), gw));
            0.0
        }
        Term::S => {
            coefs.push((lay.s().expect("correlated layout"), gw));
            0.0
        }
        Term::Offset => -gw,
    };
    Some(LpRow::le(coefs, rhs))
}

/// Best `y` for a fixed support of a correlated instance by projected
/// gradient descent with backtracking, started from `start`.
fn refine_correlated(inst: &Instance, support: &[bool], start: &[f64]) -> Vec<f64> {
    let n = inst.n;
    let f = |y: &[f64]| dot(&inst.d, y) + inst.omega * inst.cone_value(y);
    let project = |y: &mut Vec<f64>| {
        for i in 0..n {
            y[i] = if support[i] { y[i].clamp(0.0, 1.0) } else { 0.0 };
        }
    };
    let mut y = start.to_vec();
    project(&mut y);
    let mut val = f(&y);
    let mut step = 1.0;
    let v = inst.covariance.as_ref().expect("correlated instance");
    for _ in 0..GRADIENT_STEPS {
        let root = inst.cone_value(&y);
        let grad: Vec<f64> = (0..n)
            .map(|i| {
                let g_cone = if root > 1e-12 { (inst.a[i] * y[i] + dot(&v[i], &y)) / root } else { 0.0 };
                inst.d[i] + inst.omega * g_cone
            })
            .collect();
        let mut improved = false;
        while step > 1e-12 {
            let mut cand: Vec<f64> = y.iter().zip(&grad).map(|(y, g)| y - step * g).collect();
            project(&mut cand);
            let cv = f(&cand);
            if cv < val - 1e-15 {
                y = cand;
                val = cv;
                improved = true;
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    y
}

struct Search<'a, L: IncrementalLp, O: SolveObserver> {
    inst: &'a Instance,
    cfg: &'a SolverConfig,
    lay: Layout,
    lp: L,
    observer: O,
    start: Instant,
    sep_cfg: SeparationConfig,
    sep_state: SeparationState,
    cuts: [u32; 3],
    oa_rows: u64,
    incumbent: Incumbent,
}

enum NodeOutcome {
    Failed,
    Solved { bound: f64, point: Vec<f64> },
    Infeasible,
}

impl<'a, L: IncrementalLp, O: SolveObserver> Search<'a, L, O> {
    fn time_up(&self) -> bool {
        self.start.elapsed().as_secs_f64() >= self.cfg.time_limit_s
    }

    fn cutoff(&self) -> f64 {
        self.incumbent.value - self.cfg.gap_tol * self.incumbent.value.abs()
    }

    fn add_row(&mut self, row: &LpRow) {
        self.lp.add_row(row);
    }

    fn initial_rows(&mut self) {
        let inst = self.inst;
        let n = inst.n;
        for i in 0..n {
            self.add_row(&LpRow::le(vec![(self.lay.y(i), 1.0), (self.lay.x(i), -1.0)], 0.0));
        }
        if let Some(k) = inst.cardinality {
            self.add_row(&LpRow::le((0..n).map(|i| (self.lay.x(i), 1.0)).collect(), k as f64));
        }
        let mut link: Vec<(usize, f64)> = (0..self.lay.num_terms()).map(|k| (self.lay.t(k), 1.0)).collect();
        link.push((self.lay.z(), -1.0));
        self.add_row(&LpRow::le(link, 0.0));
        let mut points = vec![vec![1.0; n]];
        for i in 0..n {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            points.push(e);
        }
        for y in &points {
            let s = inst.is_correlated().then(|| inst.factor_norm(y));
            if let Some(row) = cone_row(inst, &self.lay, y, s) {
                self.add_row(&row);
            }
            if let Some(v) = &inst.covariance {
                if let Some(row) = factor_row(v, &self.lay, y) {
                    self.add_row(&row);
                }
            }
        }
    }

    fn apply_fixings(&mut self, fixings: &[(usize, bool)]) {
        let mut lo = vec![0.0; self.inst.n];
        let mut hi = vec![1.0; self.inst.n];
        for &(i, one) in fixings {
            if one {
                lo[i] = 1.0;
            } else {
                hi[i] = 0.0;
            }
        }
        for i in 0..self.inst.n {
            let col = self.lay.x(i);
            if self.lp.bounds(col) != (lo[i], hi[i]) {
                self.lp.set_bounds(col, lo[i], hi[i]);
            }
        }
    }

    fn point_of(&self, sol: &[f64]) -> Point {
        let n = self.inst.n;
        Point {
            x: sol[..n].to_vec(),
            y: sol[n..2 * n].to_vec(),
            z: sol[self.lay.z()],
            s: self.lay.s().map(|j| sol[j]),
        }
    }

    /// Lazy OA rows violated at the LP point; returns the number added.
    fn oa_round(&mut self, p: &Point, sol: &[f64]) -> usize {
        let inst = self.inst;
        let lay = self.lay;
        let mut rows = Vec::new();
        let s = p.s.unwrap_or(0.0);
        let diag: f64 = inst.a.iter().zip(&p.y).map(|(a, y)| a * y * y).sum();
        let f = (inst.sigma0 + s * s + diag).sqrt();
        if f - p.z > OA_TOL {
            for k in 0..lay.num_terms() {
                let (weight, w) = match lay.term(k) {
                    Term::Y(i) => (inst.a[i], p.y[i]),
                    Term::S => (1.0, s),
                    Term::Offset => (inst.sigma0, 1.0),
                };
                rows.extend(term_row(&lay, k, weight, w, sol[lay.t(k)], p.z));
            }
            if rows.is_empty() {
                rows.extend(cone_row(inst, &lay, &p.y, p.s));
            }
        }
        if let (Some(v), Some(s)) = (&inst.covariance, p.s) {
            if quad_form(v, &p.y).max(0.0).sqrt() - s > OA_TOL {
                rows.extend(factor_row(v, &lay, &p.y));
            }
        }
        for row in &rows {
            self.add_row(row);
        }
        self.oa_rows += rows.len() as u64;
        rows.len()
    }

    fn separation_round(&mut self, p: &Point) -> usize {
        let out = separate(p, &self.inst.a, self.inst.sigma0, &self.sep_cfg, &mut self.sep_state);
        for (k, c) in out.counts.iter().enumerate() {
            self.cuts[k] += c;
        }
        let rows: Vec<LpRow> = out.rows().map(|r| self.lay.cut_row(r)).collect();
        for row in &rows {
            self.add_row(row);
        }
        rows.len()
    }

    fn process(&mut self, depth: u32) -> NodeOutcome {
        let mut rounds = 0;
        loop {
            match self.lp.solve() {
                LpStatus::Optimal => {}
                LpStatus::Infeasible => return NodeOutcome::Infeasible,
                LpStatus::Unbounded | LpStatus::IterationLimit => return NodeOutcome::Failed,
            }
            let bound = self.lp.objective_value();
            let sol = self.lp.primal();
            if bound >= self.cutoff() || rounds >= MAX_ROUNDS_PER_NODE || self.time_up() {
                return NodeOutcome::Solved { bound, point: sol };
            }
            rounds += 1;
            let p = self.point_of(&sol);
            let mut added = self.oa_round(&p, &sol);
            if self.cfg.enable_cuts && depth < self.cfg.max_cut_depth {
                added += self.separation_round(&p);
            }
            if added == 0 {
                return NodeOutcome::Solved { bound, point: sol };
            }
        }
    }

    /// Completes a support into a feasible solution and records it if better.
    fn try_support(&mut self, mut support: Vec<bool>, y_hint: &[f64]) {
        let inst = self.inst;
        let n = inst.n;
        if let Some(k) = inst.cardinality {
            if support.iter().filter(|&&b| b).count() > k {
                return;
            }
        }
        let y = if inst.is_correlated() {
            refine_correlated(inst, &support, y_hint)
        } else {
            let scaled: Vec<f64> = inst.d.iter().map(|d| d / inst.omega).collect();
            let idx: Vec<usize> = (0..n).filter(|&i| support[i]).collect();
            inner_min(&scaled, &inst.a, inst.sigma0, &idx).0
        };
        for i in 0..n {
            if support[i] && y[i] <= 0.0 && inst.c[i] > 0.0 {
                support[i] = false;
            }
        }
        let x: Vec<f64> = support.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        let z = inst.cone_value(&y);
        let value = inst.objective(&x, &y, z);
        if value < self.incumbent.value {
            let s = inst.is_correlated().then(|| inst.factor_norm(&y));
            self.incumbent = Incumbent { value, x, y, z, s };
        }
    }

    /// Rounds an LP point: keep the largest `y` entries within the
    /// cardinality limit.
    fn rounding_heuristic(&mut self, p: &Point) {
        let n = self.inst.n;
        let k = self.inst.cardinality.unwrap_or(n);
        let mut order: Vec<usize> = (0..n).filter(|&i| p.y[i] > 1e-6 || p.x[i] > 1.0 - INT_TOL).collect();
        order.sort_by(|&i, &j| p.y[j].total_cmp(&p.y[i]).then(i.cmp(&j)));
        order.truncate(k);
        let mut support = vec![false; n];
        for i in order {
            support[i] = true;
        }
        self.try_support(support, &p.y);
    }
}

fn most_fractional(x: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &v) in x.iter().enumerate() {
        let frac = v.min(1.0 - v);
        if frac > INT_TOL && best.is_none_or(|(_, b)| frac > b) {
            best = Some((i, frac));
        }
    }
    best.map(|(i, _)| i)
}

pub fn solve(inst: &Instance, cfg: &SolverConfig) -> Result<SolveReport> {
    solve_with_observer(inst, cfg, NoObserver)
}

pub fn solve_with_observer(inst: &Instance, cfg: &SolverConfig, observer: impl SolveObserver) -> Result<SolveReport> {
    let lay = Layout::of(inst);
    let (cost, lower, upper) = lay.columns(inst);
    let mut lp = DualSimplex::new(cost, lower, upper);
    lp.pivot_limit = cfg.lp_pivot_limit;
    solve_with_engine(inst, cfg, lp, observer)
}

/// Runs the search on a caller-supplied LP engine, which must have the
/// columns of [`Layout::columns`] and no rows.
pub fn solve_with_engine<L: IncrementalLp>(
    inst: &Instance,
    cfg: &SolverConfig,
    lp: L,
    observer: impl SolveObserver,
) -> Result<SolveReport> {
    let problems = inst.validate();
    if !problems.is_empty() {
        return Err(Error::InvalidInstance(problems));
    }
    let lay = Layout::of(inst);
    if lp.num_vars() != lay.num_vars() || lp.num_rows() != 0 {
        return Err(Error::InvalidArgument("LP engine does not match the instance layout".into()));
    }
    let n = inst.n;
    let zero = vec![0.0; n];
    let z0 = inst.cone_value(&zero);
    let origin = Incumbent {
        value: inst.objective(&zero, &zero, z0),
        x: zero.clone(),
        y: zero.clone(),
        z: z0,
        s: inst.is_correlated().then_some(0.0),
    };
    let mut search = Search {
        inst,
        cfg,
        lay,
        lp,
        observer,
        start: Instant::now(),
        sep_cfg: cfg.separation(),
        sep_state: SeparationState::default(),
        cuts: [0; 3],
        oa_rows: 0,
        incumbent: origin,
    };
    search.initial_rows();

    let mut heap = BinaryHeap::new();
    heap.push(Node { id: 0, depth: 0, bound: f64::NEG_INFINITY, fixings: Vec::new() });
    let mut next_id = 1;
    let mut nodes = 0u64;
    let mut root_bound = f64::NEG_INFINITY;
    let mut running_bound = f64::NEG_INFINITY;
    // smallest bound among nodes closed without proving them above the incumbent
    let mut closed_floor = f64::INFINITY;
    let mut status = SolveStatus::Optimal;
    let mut lp_failures = 0;

    while let Some(node) = heap.pop() {
        if node.bound >= search.cutoff() {
            closed_floor = closed_floor.min(node.bound);
            continue;
        }
        if search.time_up() {
            status = SolveStatus::TimeLimit;
            heap.push(node);
            break;
        }
        if cfg.node_limit.is_some_and(|lim| nodes >= lim) {
            status = SolveStatus::NodeLimit;
            heap.push(node);
            break;
        }
        running_bound = running_bound.max(node.bound.min(search.incumbent.value));
        let global_bound = running_bound;
        nodes += 1;
        search.apply_fixings(&node.fixings);
        let outcome = search.process(node.depth);
        let lp_bound = match &outcome {
            NodeOutcome::Solved { bound, .. } => Some(*bound),
            _ => None,
        };
        if node.id == 0 {
            root_bound = lp_bound.unwrap_or(f64::NEG_INFINITY);
        }
        match outcome {
            NodeOutcome::Infeasible => {}
            NodeOutcome::Failed => {
                lp_failures += 1;
                closed_floor = closed_floor.min(node.bound);
            }
            NodeOutcome::Solved { bound, point } => {
                let p = search.point_of(&point);
                if !inst.is_correlated() || node.depth < cfg.max_cut_depth {
                    search.rounding_heuristic(&p);
                }
                match most_fractional(&p.x) {
                    None => {
                        let support: Vec<bool> = p.x.iter().map(|&v| v > 0.5).collect();
                        search.try_support(support, &p.y);
                        closed_floor = closed_floor.min(bound);
                    }
                    Some(_) if bound >= search.cutoff() => {
                        closed_floor = closed_floor.min(bound);
                    }
                    Some(i) => {
                        for one in [false, true] {
                            let mut fixings = node.fixings.clone();
                            fixings.push((i, one));
                            heap.push(Node { id: next_id, depth: node.depth + 1, bound, fixings });
                            next_id += 1;
                        }
                    }
                }
            }
        }
        search.observer.on_node(&NodeEvent {
            id: node.id,
            depth: node.depth,
            fixings: &node.fixings,
            lp_bound,
            global_bound,
            incumbent: search.incumbent.value,
        });
    }

    let incumbent = search.incumbent.value;
    let open_floor = heap.iter().map(|nd| nd.bound).fold(f64::INFINITY, f64::min);
    let bound = incumbent.min(closed_floor).min(open_floor).max(running_bound).min(incumbent);
    let root_bound = root_bound.min(incumbent);
    let inc = search.incumbent;
    Ok(SolveReport {
        status,
        incumbent,
        bound,
        root_bound,
        rgap: percent_gap(incumbent, root_bound),
        egap: percent_gap(incumbent, bound),
        nodes,
        time_s: search.start.elapsed().as_secs_f64(),
        cuts: search.cuts,
        oa_rows: search.oa_rows,
        lp_failures,
        x: inc.x,
        y: inc.y,
        z: inc.z,
        s: inc.s,
    })
}

/// Bound after root processing and its gap to `reference`, or to the
/// incumbent of a full solve when no reference is given.
pub fn root_relaxation(inst: &Instance, cfg: &SolverConfig, reference: Option<f64>) -> Result<RootReport> {
    let root_cfg = SolverConfig { node_limit: Some(1), ..cfg.clone() };
    let root = solve(inst, &root_cfg)?;
    let reference = match reference {
        Some(v) => v,
        None => solve(inst, cfg)?.incumbent,
    };
    let bound = root.root_bound.min(reference);
    Ok(RootReport { bound, reference, rgap: percent_gap(reference, bound), cuts: root.cuts })
}
