//! Blend two graphs by applying a prefix of their edit path.

use std::fs;

use ged_core::io::{emit_json_graph, read_graph_file};
use ged_core::{apply_prefix, ged_kbest, LabeledGraph};

use crate::args::{CrossoverArgs, OutputFormat};
use crate::error::{io_error, CliError};
use crate::report::CrossoverReport;

use super::{default_engine_config, graph_name, thread_pool};

pub struct CrossoverOutcome {
    pub report: CrossoverReport,
    pub offspring: LabeledGraph,
}

pub fn compute(args: &CrossoverArgs) -> Result<CrossoverOutcome, CliError> {
    let g1 = read_graph_file(&args.g1)?;
    let g2 = read_graph_file(&args.g2)?;
    let pool = thread_pool(args.engine.threads())?;
    let config = default_engine_config(&args.engine);
    let result = pool.install(|| ged_kbest(&g1, &g2, &config))?;
    let ops = &result.path.ops;
    let applied = (args.fraction * ops.len() as f64).ceil() as usize;
    let offspring = apply_prefix(&g1, ops, &g2, applied)
        .map_err(|e| CliError::Capacity(format!("edit path does not apply: {e}")))?
        .graph
        .with_name(format!("{}_x_{}", graph_name(&g1), graph_name(&g2)));
    let from_g1 = pool.install(|| ged_kbest(&g1, &offspring, &config))?;
    let from_g2 = pool.install(|| ged_kbest(&g2, &offspring, &config))?;
    Ok(CrossoverOutcome {
        report: CrossoverReport {
            g1: graph_name(&g1),
            g2: graph_name(&g2),
            fraction: args.fraction,
            ops_applied: applied,
            ops_total: ops.len(),
            offspring_vertices: offspring.vertex_count(),
            offspring_edges: offspring.edge_count(),
            distance_from_g1: from_g1.distance,
            distance_from_g2: from_g2.distance,
        },
        offspring,
    })
}

pub fn run(args: CrossoverArgs) -> Result<(), CliError> {
    let format = args.format;
    let out = args.out.clone();
    let outcome = compute(&args)?;
    let graph_json = emit_json_graph(&outcome.offspring);
    match &out {
        Some(path) => {
            fs::write(path, &graph_json).map_err(|e| io_error(path, e))?;
            eprintln!("wrote {}", path.display());
            match format {
                OutputFormat::Json => print!("{}", crate::report::to_json(&outcome.report)),
                _ => print_text(&outcome.report),
            }
        }
        None => {
            // Without --out the offspring itself is the data; the report
            // moves to stderr to keep stdout pipeable.
            match format {
                OutputFormat::Json => {
                    let mut value = serde_json::to_value(&outcome.report)
                        .expect("reports always serialize");
                    value["offspring"] = serde_json::from_str(&graph_json)
                        .expect("emitted graphs are valid JSON");
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&value).expect("values always serialize")
                    );
                }
                _ => {
                    print!("{graph_json}");
                    eprint_text(&outcome.report);
                }
            }
        }
    }
    Ok(())
}

fn print_text(report: &CrossoverReport) {
    println!(
        "applied {} of {} ops (fraction {})",
        report.ops_applied, report.ops_total, report.fraction
    );
    println!("distance from {}: {}", report.g1, report.distance_from_g1);
    println!("distance from {}: {}", report.g2, report.distance_from_g2);
}

fn eprint_text(report: &CrossoverReport) {
    eprintln!(
        "applied {} of {} ops (fraction {})",
        report.ops_applied, report.ops_total, report.fraction
    );
    eprintln!("distance from {}: {}", report.g1, report.distance_from_g1);
    eprintln!("distance from {}: {}", report.g2, report.distance_from_g2);
}
