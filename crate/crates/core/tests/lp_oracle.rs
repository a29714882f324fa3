mod common;

use rand::Rng;

use polycut::lp::{solve_lp, DualSimplex, IncrementalLp, LpModel, LpRow, LpStatus, Sense};

use common::rng;

/// Dense `(coefs, sense, rhs)` form of every row plus the variable bounds.
fn constraints(model: &LpModel) -> Vec<(Vec<f64>, Sense, f64)> {
    let n = model.num_vars;
    let mut out = Vec::new();
    for row in &model.rows {
        let mut c = vec![0.0; n];
        for &(j, v) in &row.coefs {
            c[j] += v;
        }
        out.push((c, row.sense, row.rhs));
    }
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        out.push((e.clone(), Sense::Ge, model.lower[j]));
        out.push((e, Sense::Le, model.upper[j]));
    }
    out
}

/// Solves a square system by Gaussian elimination with partial pivoting.
fn solve_square(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-9 {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                for k in col..n {
                    m[r][k] -= f * m[col][k];
                }
                b[r] -= f * b[col];
            }
        }
    }
    Some((0..n).map(|i| b[i] / m[i][i]).collect())
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if m < k {
        return vec![];
    }
    let mut out = subsets(m - 1, k);
    for mut s in subsets(m - 1, k - 1) {
        s.push(m - 1);
        out.push(s);
    }
    out
}

/// Minimum over all basic feasible solutions; `None` when there is none.
fn vertex_oracle(model: &LpModel) -> Option<f64> {
    let n = model.num_vars;
    let cons = constraints(model);
    let mut cost = vec![0.0; n];
    for &(j, v) in &model.objective {
        cost[j] += v;
    }
    let feasible = |x: &[f64]| {
        cons.iter().all(|(c, s, r)| {
            let act: f64 = c.iter().zip(x).map(|(c, x)| c * x).sum();
            match s {
                Sense::Le => act <= r + 1e-7,
                Sense::Ge => act >= r - 1e-7,
                Sense::Eq => (act - r).abs() <= 1e-7,
            }
        })
    };
    subsets(cons.len(), n)
        .into_iter()
        .filter_map(|active| {
            let m = active.iter().map(|&i| cons[i].0.clone()).collect();
            let b = active.iter().map(|&i| cons[i].2).collect();
            solve_square(m, b)
        })
        .filter(|x| feasible(x))
        .map(|x| cost.iter().zip(&x).map(|(c, x)| c * x).sum::<f64>())
        .min_by(f64::total_cmp)
}

fn random_row(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> LpRow {
    let mut coefs = Vec::new();
    for j in 0..n {
        if r.gen_bool(0.8) {
            coefs.push((j, r.gen_range(-5..=5) as f64));
        }
    }
    let sense = match r.gen_range(0..6) {
        0 => Sense::Eq,
        1 | 2 => Sense::Ge,
        _ => Sense::Le,
    };
    LpRow { coefs, sense, rhs: r.gen_range(-6..=10) as f64 }
}

fn random_model(r: &mut rand_chacha::ChaCha8Rng) -> LpModel {
    let n = r.gen_range(1..=3);
    let mut model = LpModel::new(n);
    model.objective = (0..n).map(|j| (j, r.gen_range(-5..=5) as f64)).collect();
    for j in 0..n {
        model.lower[j] = r.gen_range(-3..=0) as f64;
        model.upper[j] = model.lower[j] + r.gen_range(0..=6) as f64;
    }
    let m = r.gen_range(0..=4);
    model.rows = (0..m).map(|_| random_row(r, n)).collect();
    model
}

#[test]
fn optimal_values_match_vertex_enumeration() {
    let mut r = rng(21);
    let (mut optimal, mut infeasible) = (0, 0);
    for _ in 0..2000 {
        let model = random_model(&mut r);
        let res = solve_lp(&model);
        match vertex_oracle(&model) {
            Some(v) => {
                assert_eq!(res.status, LpStatus::Optimal, "{model:?}");
                assert!((res.objective - v).abs() <= 1e-7 * v.abs().max(1.0), "{model:?}: {} vs {v}", res.objective);
                for row in &model.rows {
                    assert!(row.violation(&res.x) <= 1e-7);
                }
                optimal += 1;
            }
            None => {
                assert_eq!(res.status, LpStatus::Infeasible, "{model:?}");
                infeasible += 1;
            }
        }
    }
    assert!(optimal > 500 && infeasible > 50, "{optimal} optimal, {infeasible} infeasible");
}

#[test]
fn warm_started_rows_match_cold_solves() {
    let mut r = rng(22);
    for _ in 0..300 {
        let mut model = random_model(&mut r);
        let rows = std::mem::take(&mut model.rows);
        let mut lp = DualSimplex::from_model(&model);
        for row in rows {
            lp.add_row(&row);
            model.rows.push(row);
            let status = lp.solve();
            match vertex_oracle(&model) {
                Some(v) => {
                    assert_eq!(status, LpStatus::Optimal);
                    assert!((lp.objective_value() - v).abs() <= 1e-7 * v.abs().max(1.0));
                }
                None => {
                    assert_eq!(status, LpStatus::Infeasible);
                    break;
                }
            }
        }
    }
}

#[test]
fn bound_changes_match_cold_solves() {
    let mut r = rng(23);
    for _ in 0..300 {
        let mut model = random_model(&mut r);
        let mut lp = DualSimplex::from_model(&model);
        for row in &model.rows {
            lp.add_row(row);
        }
        for _ in 0..4 {
            let j = r.gen_range(0..model.num_vars);
            let lo = r.gen_range(-3..=2) as f64;
            let hi = lo + r.gen_range(0..=4) as f64;
            lp.set_bounds(j, lo, hi);
            model.lower[j] = lo;
            model.upper[j] = hi;
            let status = lp.solve();
            match vertex_oracle(&model) {
                Some(v) => {
                    assert_eq!(status, LpStatus::Optimal);
                    assert!((lp.objective_value() - v).abs() <= 1e-7 * v.abs().max(1.0));
                }
                None => assert_eq!(status, LpStatus::Infeasible),
            }
        }
    }
}

#[test]
fn unbounded_above_columns() {
    let mut model = LpModel::new(2);
    model.objective = vec![(0, -1.0), (1, -1.0)];
    model.rows.push(LpRow::le(vec![(1, 1.0)], 3.0));
    assert_eq!(solve_lp(&model).status, LpStatus::Unbounded);
    model.rows.push(LpRow { coefs: vec![(0, 1.0), (1, -2.0)], sense: Sense::Le, rhs: 1.0 });
    let res = solve_lp(&model);
    assert_eq!(res.status, LpStatus::Optimal);
    assert!((res.objective - (-10.0)).abs() < 1e-9);
}
