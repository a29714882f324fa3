//! Factor-model instances, where cuts act on the diagonal part of the risk.

use polycut::generators::gen_correlated;
use polycut::solver::{solve, SolverConfig};

fn main() -> polycut::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    for rho in [0.1, 1.0, 10.0] {
        let inst = gen_correlated(n, 0.2, rho, 0.05, 1)?;
        for cuts in [false, true] {
            let r = solve(&inst, &SolverConfig { time_limit_s: 20.0, ..SolverConfig::default() }.with_cuts(cuts))?;
            println!(
                "rho {rho:>4}: cuts {:<3} value {:.6} rgap {:.3}% nodes {} s = {:.4}",
                if cuts { "on" } else { "off" },
                r.incumbent,
                r.rgap,
                r.branch_nodes(),
                r.s.unwrap_or(0.0)
            );
        }
    }
    Ok(())
}
