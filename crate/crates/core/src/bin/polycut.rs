use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use polycut::bench::{self, Mode};
use polycut::generators::Family;
use polycut::solver::SolverConfig;

#[derive(Parser)]
#[command(name = "polycut", version, about = "Generate, solve and summarize mean-risk benchmark instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    FixedCharge,
    Cardinality,
    Correlated,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Default,
    Cuts,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Write seeded random instances and a checksum manifest.
    Generate {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, default_value_t = 0.2)]
        kappa: f64,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        /// `1..5` (inclusive) or a comma-separated list.
        #[arg(long, default_value = "1..5")]
        seeds: String,
        #[arg(long, default_value = "instances")]
        out: PathBuf,
    },
    /// Solve instance files (or directories of them) and emit CSV rows.
    Solve {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "both")]
        mode: ModeArg,
        #[arg(long)]
        time_limit_s: Option<f64>,
        /// TOML solver configuration.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Directory receiving `results.csv` and `summary.md`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the markdown summary of a results CSV.
    Summarize {
        csv: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> polycut::Result<bool> {
    match cli.command {
        Command::Generate { family, n, eps, kappa, rho, seeds, out } => {
            let family = match family {
                FamilyArg::FixedCharge => Family::FixedCharge { epsilon: eps },
                FamilyArg::Cardinality => Family::Cardinality { kappa, epsilon: eps },
                FamilyArg::Correlated => Family::Correlated { kappa, rho, epsilon: eps },
            };
            let seeds = bench::parse_seeds(&seeds)?;
            for e in bench::generate(family, n, &seeds, &out)? {
                println!("{}  {}", e.sha256, e.file);
            }
            Ok(true)
        }
        Command::Solve { inputs, mode, time_limit_s, config, out } => {
            let mut cfg = match config {
                Some(p) => SolverConfig::load(p)?,
                None => SolverConfig::default(),
            };
            if let Some(t) = time_limit_s {
                cfg.time_limit_s = t;
            }
            let mode = match mode {
                ModeArg::Default => Mode::Default,
                ModeArg::Cuts => Mode::Cuts,
                ModeArg::Both => Mode::Both,
            };
            let files = bench::collect_instance_files(&inputs)?;
            let outcome = bench::run_matrix(&files, mode, &cfg);
            bench::write_csv(&outcome.rows, std::io::stdout().lock())?;
            let summary = bench::markdown_summary(&outcome.rows);
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                bench::write_csv(&outcome.rows, std::fs::File::create(dir.join("results.csv"))?)?;
                std::fs::write(dir.join("summary.md"), &summary)?;
            }
            eprint!("{summary}");
            for f in &outcome.failures {
                eprintln!("error: {f}");
            }
            Ok(outcome.all_completed())
        }
        Command::Summarize { csv, out } => {
            let rows = bench::read_csv(std::fs::File::open(csv)?)?;
            let summary = bench::markdown_summary(&rows);
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    std::fs::write(dir.join("summary.md"), &summary)?;
                }
                None => print!("{summary}"),
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
