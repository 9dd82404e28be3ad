//! Benchmark protocols: accuracy against the oracle across densities
//! (table1), distance as a function of beam width (ksweep), and wall time as
//! a function of graph size (sizesweep).
//!
//! Every protocol generates its graphs from seeds derived deterministically
//! from `--seed`, records one row per computed pair (the seeds included, so
//! any row can be reproduced in isolation), and derives its aggregate rows
//! from the records alone.

use std::fs;
use std::time::Instant;

use ged_core::io::{generate_random, GenSpec};
use ged_core::{
    costs_equal, exact_ged, ged_kbest, CostModel, EngineConfig, LabeledGraph, OracleConfig,
    OracleError, COST_TOLERANCE,
};
use rayon::prelude::*;

use crate::args::{BenchArgs, Protocol, DEFAULT_K};
use crate::error::{io_error, CliError};
use crate::report::{group_stats, BenchRecord, BenchReport, BenchSettings, GroupStats, Totals};

use super::thread_pool;

/// Label alphabets for generated benchmark graphs.
const VERTEX_ALPHABET: [&str; 3] = ["A", "B", "C"];
const EDGE_ALPHABET: [&str; 2] = ["a", "b"];

/// Beam width sizesweep defaults to; the other protocols use [`DEFAULT_K`].
const SIZESWEEP_K: usize = 5_000;

fn make_graph(seed: u64, n: u32, density: f64) -> Result<LabeledGraph, CliError> {
    let spec = GenSpec {
        vertex_count: n,
        density,
        vertex_alphabet: VERTEX_ALPHABET.iter().map(|&l| l.into()).collect(),
        edge_alphabet: EDGE_ALPHABET.iter().map(|&l| l.into()).collect(),
        seed,
    };
    Ok(generate_random(&spec)?)
}

/// Seeds for pair `pair` of group `group`: consecutive, disjoint across
/// groups, reproducible from the base seed alone.
fn pair_seeds(base: u64, group: usize, pairs_per_group: usize, pair: usize) -> (u64, u64) {
    let offset = (group * pairs_per_group + pair) as u64 * 2;
    (base.wrapping_add(offset), base.wrapping_add(offset + 1))
}

/// One unit of benchmark work: a seeded pair run at one engine setting.
struct Job {
    group: String,
    pair: usize,
    g1_seed: u64,
    g2_seed: u64,
    n: u32,
    density: f64,
    k: usize,
}

/// Runs every job in parallel and returns records in job order. The oracle,
/// when configured, runs per pair; a pair whose oracle search exceeds its
/// budget is recorded without an exact value.
fn run_jobs(
    jobs: &[Job],
    costs: CostModel,
    workers: usize,
    oracle: Option<OracleConfig>,
    stable: bool,
) -> Result<Vec<BenchRecord>, CliError> {
    let pool = thread_pool(workers)?;
    pool.install(|| {
        jobs.par_iter()
            .map(|job| {
                let g1 = make_graph(job.g1_seed, job.n, job.density)?;
                let g2 = make_graph(job.g2_seed, job.n, job.density)?;
                let config = EngineConfig {
                    k: job.k,
                    costs,
                    workers,
                    collect_level_stats: false,
                };
                let start = Instant::now();
                let result = ged_kbest(&g1, &g2, &config)?;
                let wall_ms = super::elapsed_ms(start, stable);
                let exact = match &oracle {
                    None => None,
                    Some(oracle_config) => match exact_ged(&g1, &g2, &costs, oracle_config) {
                        Ok(exact) => Some(exact.distance),
                        Err(OracleError::BudgetExceeded { .. }) => None,
                        Err(other) => return Err(CliError::from(other)),
                    },
                };
                let optimal = exact.map(|e| costs_equal(result.distance, e));
                let deviation_pct = exact.and_then(|e| {
                    if e > COST_TOLERANCE {
                        Some((result.distance - e) / e * 100.0)
                    } else if costs_equal(result.distance, 0.0) {
                        Some(0.0)
                    } else {
                        None
                    }
                });
                Ok(BenchRecord {
                    group: job.group.clone(),
                    pair: job.pair,
                    g1_seed: job.g1_seed,
                    g2_seed: job.g2_seed,
                    distance: result.distance,
                    exact,
                    optimal,
                    deviation_pct,
                    wall_ms,
                })
            })
            .collect()
    })
}

fn alphabet_strings() -> (Vec<String>, Vec<String>) {
    (
        VERTEX_ALPHABET.iter().map(|&l| l.to_owned()).collect(),
        EDGE_ALPHABET.iter().map(|&l| l.to_owned()).collect(),
    )
}

fn totals(records: &[BenchRecord], groups: &[GroupStats]) -> Totals {
    Totals {
        pairs: records.len(),
        excluded: groups.iter().map(|g| g.excluded).sum(),
        total_wall_ms: records.iter().map(|r| r.wall_ms).sum(),
    }
}

/// Oracle-vs-engine accuracy across densities at a fixed vertex count.
pub fn table1(args: &BenchArgs) -> Result<BenchReport, CliError> {
    let pairs = args.pairs.unwrap_or(100);
    let n = args.n.unwrap_or(10);
    let k = args.engine.k_or(DEFAULT_K);
    let jobs: Vec<Job> = args
        .densities
        .iter()
        .enumerate()
        .flat_map(|(group_idx, &density)| {
            (0..pairs).map(move |pair| {
                let (g1_seed, g2_seed) = pair_seeds(args.seed, group_idx, pairs, pair);
                Job {
                    group: format!("density={density}"),
                    pair,
                    g1_seed,
                    g2_seed,
                    n,
                    density,
                    k,
                }
            })
        })
        .collect();
    let oracle = OracleConfig {
        node_limit: args.oracle_budget,
        ..OracleConfig::default()
    };
    let records = run_jobs(
        &jobs,
        args.engine.costs,
        args.engine.threads(),
        Some(oracle),
        args.stable_output,
    )?;
    let groups: Vec<GroupStats> = args
        .densities
        .iter()
        .map(|density| group_stats(&format!("density={density}"), &records, None, true))
        .collect();
    let (vertex_alphabet, edge_alphabet) = alphabet_strings();
    Ok(BenchReport {
        protocol: "table1".to_owned(),
        settings: BenchSettings {
            costs: args.engine.costs,
            seed: args.seed,
            pairs_per_group: pairs,
            k: Some(k),
            vertex_count: Some(n),
            densities: Some(args.densities.clone()),
            ks: None,
            sizes: None,
            density: None,
            oracle_budget: Some(args.oracle_budget),
            vertex_alphabet,
            edge_alphabet,
        },
        totals: totals(&records, &groups),
        records,
        groups,
    })
}

/// Distance as a function of beam width on one fixed pair set.
pub fn ksweep(args: &BenchArgs) -> Result<BenchReport, CliError> {
    let pairs = args.pairs.unwrap_or(30);
    let n = args.n.unwrap_or(15);
    let density = args.density.unwrap_or(0.5);
    let jobs: Vec<Job> = args
        .ks
        .iter()
        .flat_map(|&k| {
            (0..pairs).map(move |pair| {
                // The pair set is fixed across beam widths: seeds depend on
                // the pair index only.
                let (g1_seed, g2_seed) = pair_seeds(args.seed, 0, pairs, pair);
                Job {
                    group: format!("k={k}"),
                    pair,
                    g1_seed,
                    g2_seed,
                    n,
                    density,
                    k,
                }
            })
        })
        .collect();
    let records = run_jobs(
        &jobs,
        args.engine.costs,
        args.engine.threads(),
        None,
        args.stable_output,
    )?;
    let baseline = args.ks.first().map(|&k0| {
        let first = group_stats(&format!("k={k0}"), &records, None, false);
        first.mean_distance
    });
    let baseline = baseline.filter(|&m| m > 0.0);
    let groups: Vec<GroupStats> = args
        .ks
        .iter()
        .map(|k| group_stats(&format!("k={k}"), &records, baseline, false))
        .collect();
    let (vertex_alphabet, edge_alphabet) = alphabet_strings();
    Ok(BenchReport {
        protocol: "ksweep".to_owned(),
        settings: BenchSettings {
            costs: args.engine.costs,
            seed: args.seed,
            pairs_per_group: pairs,
            k: None,
            vertex_count: Some(n),
            densities: None,
            ks: Some(args.ks.clone()),
            sizes: None,
            density: Some(density),
            oracle_budget: None,
            vertex_alphabet,
            edge_alphabet,
        },
        totals: totals(&records, &groups),
        records,
        groups,
    })
}

/// Wall time as a function of graph size at a fixed beam width.
pub fn sizesweep(args: &BenchArgs) -> Result<BenchReport, CliError> {
    let pairs = args.pairs.unwrap_or(3);
    let density = args.density.unwrap_or(0.4);
    let k = args.engine.k_or(SIZESWEEP_K);
    let jobs: Vec<Job> = args
        .sizes
        .iter()
        .enumerate()
        .flat_map(|(group_idx, &n)| {
            (0..pairs).map(move |pair| {
                let (g1_seed, g2_seed) = pair_seeds(args.seed, group_idx, pairs, pair);
                Job {
                    group: format!("n={n}"),
                    pair,
                    g1_seed,
                    g2_seed,
                    n,
                    density,
                    k,
                }
            })
        })
        .collect();
    let records = run_jobs(
        &jobs,
        args.engine.costs,
        args.engine.threads(),
        None,
        args.stable_output,
    )?;
    let groups: Vec<GroupStats> = args
        .sizes
        .iter()
        .map(|n| group_stats(&format!("n={n}"), &records, None, false))
        .collect();
    let (vertex_alphabet, edge_alphabet) = alphabet_strings();
    Ok(BenchReport {
        protocol: "sizesweep".to_owned(),
        settings: BenchSettings {
            costs: args.engine.costs,
            seed: args.seed,
            pairs_per_group: pairs,
            k: Some(k),
            vertex_count: None,
            densities: None,
            ks: None,
            sizes: Some(args.sizes.clone()),
            density: Some(density),
            oracle_budget: None,
            vertex_alphabet,
            edge_alphabet,
        },
        totals: totals(&records, &groups),
        records,
        groups,
    })
}

pub fn compute(args: &BenchArgs) -> Result<BenchReport, CliError> {
    match args.protocol {
        Protocol::Table1 => table1(args),
        Protocol::Ksweep => ksweep(args),
        Protocol::Sizesweep => sizesweep(args),
    }
}

pub fn run(args: BenchArgs) -> Result<(), CliError> {
    let report = compute(&args)?;
    // Human-readable summary on stderr; the JSON report is the data.
    eprintln!("protocol: {}", report.protocol);
    for group in &report.groups {
        let mut line = format!(
            "{}: pairs={} mean={:.4}",
            group.group, group.pairs, group.mean_distance
        );
        if let Some(rate) = group.optimal_rate {
            line.push_str(&format!(" optimal={:.1}%", rate * 100.0));
        }
        if let Some(dev) = group.mean_deviation_pct {
            line.push_str(&format!(" deviation={dev:.3}%"));
        }
        if let Some(norm) = group.normalized {
            line.push_str(&format!(" normalized={norm:.4}"));
        }
        if group.excluded > 0 {
            line.push_str(&format!(" excluded={}", group.excluded));
        }
        line.push_str(&format!(" wall={:.1}ms", group.mean_wall_ms));
        eprintln!("{line}");
    }
    let json = crate::report::to_json(&report);
    match &args.out {
        Some(path) => {
            fs::write(path, &json).map_err(|e| io_error(path, e))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{json}"),
    }
    Ok(())
}
