//! Solves seeded fixed-charge instances with and without lifted cuts.
//!
//! `cargo run --release --example fixed_charge -- 30`

use polycut::generators::gen_fixed_charge;
use polycut::solver::{solve, SolverConfig};

fn main() -> polycut::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    println!("{:>4} {:>5} {:>8} {:>8} {:>8} {:>7} {:>12}", "seed", "cuts", "rgap", "egap", "time", "nodes", "cuts l/s/m");
    for seed in 1..=3 {
        let inst = gen_fixed_charge(n, 0.05, seed)?;
        for cuts in [false, true] {
            let cfg = SolverConfig { time_limit_s: 20.0, ..SolverConfig::default() }.with_cuts(cuts);
            let r = solve(&inst, &cfg)?;
            println!(
                "{seed:>4} {:>5} {:>8.3} {:>8.4} {:>8.2} {:>7} {:>12}",
                if cuts { "on" } else { "off" },
                r.rgap,
                r.egap,
                r.time_s,
                r.branch_nodes(),
                format!("{}/{}/{}", r.cuts[0], r.cuts[1], r.cuts[2])
            );
        }
    }
    Ok(())
}
