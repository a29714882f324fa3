//! Writes a small benchmark set with a checksum manifest, then solves it.

use polycut::bench::{self, Mode};
use polycut::generators::Family;
use polycut::solver::SolverConfig;

fn main() -> polycut::Result<()> {
    let dir = std::env::temp_dir().join("polycut-instances");
    let entries = bench::generate(Family::Cardinality { kappa: 0.4, epsilon: 0.05 }, 12, &[1, 2, 3], &dir)?;
    for e in &entries {
        println!("{}  {}", e.sha256, e.file);
    }
    let files = bench::collect_instance_files(&[dir])?;
    let outcome = bench::run_matrix(&files, Mode::Both, &SolverConfig::default());
    bench::write_csv(&outcome.rows, std::io::stdout().lock())?;
    print!("{}", bench::markdown_summary(&outcome.rows));
    Ok(())
}
