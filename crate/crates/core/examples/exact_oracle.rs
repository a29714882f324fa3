//! Exact O(n^2) solver for the diagonal problem against enumeration.

use polycut::oracles::{brute_force_opt, solve_continuous_relaxation, solve_opt};

fn main() -> polycut::Result<()> {
    let a = [5.0, 6.0, 4.0, 5.5, 6.5, 3.0];
    let c = [0.05, 0.4, 0.6, 0.04, 0.5, 0.3];
    let d = [-1.6, -1.0, -0.9, -2.0, -0.8, -0.6];

    let exact = solve_opt(&c, &d, &a, 0.0)?;
    let brute = brute_force_opt(&c, &d, &a, 0.0)?;
    println!("sorted prefix: value {:.8}, x {:?}", exact.value, exact.x);
    println!("enumeration:   value {:.8}, x {:?}", brute.value, brute.x);

    let relax = solve_continuous_relaxation(&d, &a, 0.0)?;
    println!("relaxation y {:.4?}, objective {:.6}", relax.y, relax.objective);
    if let Some((lambda, mu)) = relax.multipliers(&d, &a) {
        println!("multipliers lambda {lambda:.3?} mu {mu:.3?}");
    }
    Ok(())
}
