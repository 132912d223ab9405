//! Benchmark sweeps written as CSV with a fixed column order.

use std::fs::OpenOptions;
use std::io::Write;
use std::time::Instant;

use fairteam::exact::optimal_fair_bruteforce;
use fairteam::instances::random_instance;
use serde::Serialize;

use crate::{solve_with, Algorithm, BenchArgs, BenchKind, CliError};

pub const HEADER: [&str; 8] = ["instance", "n", "algorithm", "revenue", "exact_opt", "ratio", "wall_time_ms", "params"];

/// One CSV row. `exact_opt` and `ratio` stay empty when the optimum was not computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub algorithm: String,
    pub revenue: f64,
    pub exact_opt: Option<f64>,
    pub ratio: Option<f64>,
    pub wall_time_ms: f64,
    /// `key=value` pairs joined by `;`, keys sorted.
    pub params: String,
}

/// Solves every generated instance with every requested algorithm. Rows come out in
/// (size, seed, algorithm) order as listed on the command line.
pub fn rows(args: &BenchArgs) -> Result<Vec<BenchRow>, CliError> {
    let label = match args.kind {
        BenchKind::Additive => "additive",
        BenchKind::Coverage => "coverage",
    };
    let mut rows = Vec::new();
    for &n in &args.sizes {
        for seed in args.seed_start..args.seed_start + args.seeds {
            let inst =
                random_instance(args.kind.into(), n, seed, args.cost_scale)?.with_enum_cap(args.options.enum_cap);
            let id = format!("{label}-n{n}-s{seed}");
            let exact_opt = if n <= inst.enum_cap() && inst.is_submodular() {
                Some(optimal_fair_bruteforce(&inst)?.revenue)
            } else {
                None
            };
            for &algorithm in &args.algorithms {
                let started = Instant::now();
                let result = solve_with(&inst, algorithm, &args.options)?;
                let wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
                let params = result.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
                rows.push(BenchRow {
                    instance: id.clone(),
                    n,
                    algorithm: Algorithm::name(algorithm).to_string(),
                    revenue: result.revenue,
                    exact_opt,
                    ratio: exact_opt.filter(|&opt| opt > 0.0).map(|opt| result.revenue / opt),
                    wall_time_ms,
                    params,
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_csv(rows: &[BenchRow], with_header: bool, sink: impl Write) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Schema(format!("cannot write CSV: {e}"));
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(sink);
    if with_header {
        w.write_record(HEADER).map_err(io)?;
    }
    for row in rows {
        w.serialize(row).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Schema(format!("cannot write CSV: {e}")))
}

pub fn run(args: &BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let rows = rows(args)?;
    match &args.out {
        None => write_csv(&rows, true, out),
        Some(path) => {
            let file = OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(|e| CliError::Schema(format!("cannot open {}: {e}", path.display())))?;
            let fresh = file.metadata().map(|m| m.len() == 0).unwrap_or(true);
            write_csv(&rows, fresh, file)
        }
    }
}
