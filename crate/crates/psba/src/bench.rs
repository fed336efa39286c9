//! Batch runs over a directory of instance files, reported as CSV.
//!
//! Columns: `instance,algorithm,total,opt,ratio,ms,flow_calls,oracle_calls`.
//! `opt` is the exhaustive optimum and is left blank when it is out of
//! budget, in which case `ratio` is blank as well. A file or algorithm that
//! fails produces a row whose `total` reads `error: <message>` and whose
//! other measurement columns are blank.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use psba_core::brute::{brute_optimum_with, OracleBudget};
use psba_core::solvers::SolveOptions;
use rayon::prelude::*;
use serde::Serialize;

use crate::cli::{run_algorithm, Algorithm};
use crate::format::InstanceFile;

pub const HEADER: [&str; 8] = ["instance", "algorithm", "total", "opt", "ratio", "ms", "flow_calls", "oracle_calls"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub algorithm: String,
    pub total: String,
    pub opt: Option<i64>,
    pub ratio: Option<f64>,
    pub ms: Option<f64>,
    pub flow_calls: Option<u64>,
    pub oracle_calls: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub algorithms: Vec<Algorithm>,
    pub options: SolveOptions,
    pub budget: OracleBudget,
    pub threads: usize,
}

/// `.json` files of `dir`, sorted by name.
pub fn instance_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

fn error_row(instance: &str, algorithm: &str, message: impl std::fmt::Display) -> BenchRow {
    BenchRow {
        instance: instance.to_string(),
        algorithm: algorithm.to_string(),
        total: format!("error: {message}"),
        opt: None,
        ratio: None,
        ms: None,
        flow_calls: None,
        oracle_calls: None,
    }
}

fn bench_file(path: &Path, config: &BenchConfig) -> Vec<BenchRow> {
    let name = path.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
    let loaded = std::fs::read_to_string(path)
        .map_err(|e| e.to_string())
        .and_then(|text| InstanceFile::parse(&text).map_err(|e| e.to_string()))
        .map(|f| f.to_instance())
        .and_then(|inst| {
            let report = inst.validate();
            if report.is_valid() {
                Ok(inst)
            } else {
                Err(report.to_string().trim_end().replace('\n', "; "))
            }
        });
    let instance = match loaded {
        Ok(i) => i,
        Err(e) => return config.algorithms.iter().map(|a| error_row(&name, a.name(), &e)).collect(),
    };
    let opt = brute_optimum_with(&instance, &config.budget).ok().map(|(_, v)| v);
    config
        .algorithms
        .iter()
        .map(|&algorithm| {
            let clock = Instant::now();
            match run_algorithm(&instance, algorithm, &config.options, &config.budget) {
                Ok(run) => BenchRow {
                    instance: name.clone(),
                    algorithm: algorithm.name().to_string(),
                    total: run.total.to_string(),
                    opt,
                    ratio: opt.map(|o| if o == 0 { 1.0 } else { run.total as f64 / o as f64 }),
                    ms: Some(clock.elapsed().as_secs_f64() * 1e3),
                    flow_calls: Some(run.flow_calls),
                    oracle_calls: Some(run.oracle_calls),
                },
                Err(e) => error_row(&name, algorithm.name(), e),
            }
        })
        .collect()
}

/// Runs every algorithm on every instance of `dir` in a worker pool. Rows
/// come out in file order, then algorithm order.
pub fn run_bench(dir: &Path, config: &BenchConfig) -> Result<Vec<BenchRow>> {
    let files = instance_files(dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .context("building worker pool")?;
    Ok(pool.install(|| files.par_iter().flat_map_iter(|f| bench_file(f, config)).collect()))
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(HEADER)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
