//! Benchmark plumbing behind the `polycut` binary: instance generation with
//! checksums, solve matrices and CSV/markdown reporting.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::generators::Family;
use crate::instance::Instance;
use crate::solver::{solve, SolverConfig};

pub const CSV_HEADER: &str = "instance,mode,rgap,time_s,egap,solved,nodes,cuts_linear,cuts_subset,cuts_mixed";
pub const MANIFEST_NAME: &str = "manifest.sha256";

/// Parses `"1..5"` (inclusive), `"1,3,7"` or a single seed.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let bad = || Error::InvalidArgument(format!("bad seed list '{text}'"));
    if let Some((lo, hi)) = text.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub file: String,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes one instance per seed into `out` and a `sha256sum`-style manifest.
pub fn generate(family: Family, n: usize, seeds: &[u64], out: &Path) -> Result<Vec<ManifestEntry>> {
    let instances = seeds.iter().map(|&s| family.generate(n, s)).collect::<Result<Vec<_>>>()?;
    std::fs::create_dir_all(out)?;
    let mut entries = Vec::with_capacity(seeds.len());
    for (inst, &seed) in instances.iter().zip(seeds) {
        let file = family.file_name(n, seed);
        let bytes = inst.write();
        std::fs::write(out.join(&file), &bytes)?;
        entries.push(ManifestEntry { file, sha256: sha256_hex(&bytes) });
    }
    let manifest: String = entries.iter().map(|e| format!("{}  {}\n", e.sha256, e.file)).collect();
    std::fs::write(out.join(MANIFEST_NAME), manifest)?;
    Ok(entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Cuts off.
    Default,
    /// Cuts on.
    Cuts,
    Both,
}

impl Mode {
    pub fn runs(self) -> &'static [&'static str] {
        match self {
            Mode::Default => &["default"],
            Mode::Cuts => &["cuts"],
            Mode::Both => &["default", "cuts"],
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "default" => Ok(Mode::Default),
            "cuts" => Ok(Mode::Cuts),
            "both" => Ok(Mode::Both),
            other => Err(Error::InvalidArgument(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub instance: String,
    pub mode: String,
    pub rgap: f64,
    pub time_s: f64,
    pub egap: f64,
    pub solved: u8,
    /// Branch nodes, the root excluded.
    pub nodes: u64,
    pub cuts_linear: u32,
    pub cuts_subset: u32,
    pub cuts_mixed: u32,
}

impl RunRow {
    /// Row for a run that could not be carried out.
    pub fn failed(instance: String, mode: &str) -> Self {
        RunRow {
            instance,
            mode: mode.to_string(),
            rgap: f64::NAN,
            time_s: 0.0,
            egap: f64::NAN,
            solved: 0,
            nodes: 0,
            cuts_linear: 0,
            cuts_subset: 0,
            cuts_mixed: 0,
        }
    }
}

/// Result of a matrix run: rows in input order plus the runs that failed.
#[derive(Debug, Clone, Default)]
pub struct MatrixOutcome {
    pub rows: Vec<RunRow>,
    pub failures: Vec<String>,
}

impl MatrixOutcome {
    pub fn all_completed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn instance_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

/// Expands directories into their `.json` files, sorted by name.
pub fn collect_instance_files(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = std::fs::read_dir(p)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "json"))
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

pub fn run_one(inst: &Instance, name: &str, mode: &str, cfg: &SolverConfig) -> Result<RunRow> {
    let cfg = cfg.clone().with_cuts(mode == "cuts");
    let rep = solve(inst, &cfg)?;
    Ok(RunRow {
        instance: name.to_string(),
        mode: mode.to_string(),
        rgap: rep.rgap,
        time_s: (rep.time_s * 10.0).round() / 10.0,
        egap: rep.egap,
        solved: u8::from(rep.solved()),
        nodes: rep.branch_nodes(),
        cuts_linear: rep.cuts[0],
        cuts_subset: rep.cuts[1],
        cuts_mixed: rep.cuts[2],
    })
}

/// Solves every file under every requested mode, in input order.
pub fn run_matrix(files: &[PathBuf], mode: Mode, cfg: &SolverConfig) -> MatrixOutcome {
    let mut out = MatrixOutcome::default();
    for path in files {
        let name = instance_name(path);
        let inst = Instance::load(path);
        for &m in mode.runs() {
            let row = match &inst {
                Ok(inst) => run_one(inst, &name, m, cfg),
                Err(e) => Err(Error::InvalidArgument(e.to_string())),
            };
            match row {
                Ok(r) => out.rows.push(r),
                Err(e) => {
                    out.failures.push(format!("{} [{m}]: {e}", path.display()));
                    out.rows.push(RunRow::failed(name.clone(), m));
                }
            }
        }
    }
    out
}

pub fn write_csv<W: Write>(rows: &[RunRow], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for r in rows {
        wtr.serialize(r)?;
    }
    if rows.is_empty() {
        wtr.write_record(CSV_HEADER.split(','))?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(r: R) -> Result<Vec<RunRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    let header = rdr.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != CSV_HEADER {
        return Err(Error::Parse(format!("unexpected CSV header '{header}'")));
    }
    rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
}

/// Instance name without its trailing `_{seed}`, used to group rows.
pub fn group_of(instance: &str) -> &str {
    match instance.rsplit_once('_') {
        Some((head, tail)) if tail.chars().all(|c| c.is_ascii_digit()) && !tail.is_empty() => head,
        _ => instance,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummary {
    pub group: String,
    pub mode: String,
    pub runs: usize,
    pub rgap: f64,
    pub time_s: f64,
    pub egap: f64,
    pub solved: usize,
    pub nodes: f64,
    pub cuts: [f64; 3],
}

/// Arithmetic means per `(group, mode)`, ordered by group then mode.
pub fn summarize(rows: &[RunRow]) -> Vec<GroupSummary> {
    let mut groups: BTreeMap<(String, String), Vec<&RunRow>> = BTreeMap::new();
    for r in rows {
        groups.entry((group_of(&r.instance).to_string(), r.mode.clone())).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((group, mode), rs)| {
            let k = rs.len() as f64;
            let mean = |f: &dyn Fn(&RunRow) -> f64| rs.iter().map(|r| f(r)).sum::<f64>() / k;
            GroupSummary {
                group,
                mode,
                runs: rs.len(),
                rgap: mean(&|r| r.rgap),
                time_s: mean(&|r| r.time_s),
                egap: mean(&|r| r.egap),
                solved: rs.iter().filter(|r| r.solved == 1).count(),
                nodes: mean(&|r| r.nodes as f64),
                cuts: [mean(&|r| r.cuts_linear as f64), mean(&|r| r.cuts_subset as f64), mean(&|r| r.cuts_mixed as f64)],
            }
        })
        .collect()
}

pub fn markdown_summary(rows: &[RunRow]) -> String {
    let mut out = String::new();
    out.push_str("| group | mode | runs | rgap | time_s | egap (#) | nodes | cuts linear | cuts subset | cuts mixed |\n");
    out.push_str("|---|---|---:|---:|---:|---:|---:|---:|---:|---:|\n");
    for g in summarize(rows) {
        let unsolved = g.runs - g.solved;
        let egap = if unsolved > 0 { format!("{:.2} ({unsolved})", g.egap) } else { format!("{:.2}", g.egap) };
        let _ = writeln!(
            out,
            "| {} | {} | {} | {:.2} | {:.1} | {} | {:.1} | {:.1} | {:.1} | {:.1} |",
            g.group, g.mode, g.runs, g.rgap, g.time_s, egap, g.nodes, g.cuts[0], g.cuts[1], g.cuts[2]
        );
    }
    out
}
