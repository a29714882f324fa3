//! The bundled LP engine, one-shot and incrementally.

use polycut::lp::{solve_lp, DualSimplex, IncrementalLp, LpModel, LpRow, Sense};

fn main() {
    let mut model = LpModel::new(2);
    model.objective = vec![(0, -1.0), (1, -1.0)];
    model.upper = vec![1.0, 1.0];
    model.rows.push(LpRow::le(vec![(0, 1.0), (1, 1.0)], 1.5));
    let res = solve_lp(&model);
    println!("{}: x {:?}, objective {}", res.status, res.x, res.objective);

    let mut lp = DualSimplex::from_model(&model);
    lp.solve();
    lp.add_row(&LpRow { coefs: vec![(0, 1.0), (1, 2.0)], sense: Sense::Le, rhs: 1.6 });
    let status = lp.solve();
    println!("after a new row: {status}, x {:?}, objective {:.3}", lp.primal(), lp.objective_value());
    lp.set_bounds(0, 0.0, 0.0);
    let status = lp.solve();
    println!("after fixing x0 = 0: {status}, objective {:.3}", lp.objective_value());
}
