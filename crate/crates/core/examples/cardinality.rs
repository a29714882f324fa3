//! Cardinality-constrained instances: root gaps and tree sizes.

use polycut::generators::gen_cardinality;
use polycut::solver::{root_relaxation, solve, SolverConfig};

fn main() -> polycut::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    for seed in 1..=3 {
        let inst = gen_cardinality(n, 0.2, 0.05, seed)?;
        let on = solve(&inst, &SolverConfig::default())?;
        let off = root_relaxation(&inst, &SolverConfig::default().with_cuts(false), Some(on.incumbent))?;
        println!(
            "seed {seed}: optimum {:.6}, picked {}, root gap {:.3}% without cuts, {:.3}% with, {} branch nodes",
            on.incumbent,
            on.x.iter().filter(|&&v| v > 0.5).count(),
            off.rgap,
            on.rgap,
            on.branch_nodes()
        );
    }
    Ok(())
}
