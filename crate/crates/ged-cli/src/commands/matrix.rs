//! Pairwise distance matrix over a dataset directory.

use ged_core::io::load_dataset;
use ged_core::{ged_kbest, EngineError};
use rayon::prelude::*;

use crate::args::{MatrixArgs, OutputFormat};
use crate::error::CliError;
use crate::report::MatrixReport;

use super::{default_engine_config, thread_pool};

pub struct MatrixOutcome {
    pub report: MatrixReport,
    /// Human-readable description of each failed pair, for the error log.
    pub pair_errors: Vec<String>,
}

pub fn compute(args: &MatrixArgs) -> Result<MatrixOutcome, CliError> {
    let load = load_dataset(&args.dataset, None)?;
    let graphs = load.dataset.graphs;
    if graphs.len() < 2 {
        return Err(CliError::Input(format!(
            "{}: need at least 2 graphs, found {}",
            args.dataset.display(),
            graphs.len()
        )));
    }
    let names: Vec<String> = graphs
        .iter()
        .map(|g| g.name().unwrap_or("unnamed").to_owned())
        .collect();
    let n = graphs.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let pool = thread_pool(args.engine.threads())?;
    let config = default_engine_config(&args.engine);
    let results: Vec<Result<f64, EngineError>> = pool.install(|| {
        pairs
            .par_iter()
            .map(|&(i, j)| ged_kbest(&graphs[i], &graphs[j], &config).map(|r| r.distance))
            .collect()
    });

    // Each unordered pair is computed once and mirrored, so the matrix is
    // symmetric by construction.
    let mut matrix = vec![vec![Some(0.0); n]; n];
    let mut pair_errors = Vec::new();
    let mut sum = 0.0;
    let mut computed = 0usize;
    for (&(i, j), result) in pairs.iter().zip(&results) {
        match result {
            Ok(distance) => {
                matrix[i][j] = Some(*distance);
                matrix[j][i] = Some(*distance);
                sum += distance;
                computed += 1;
            }
            Err(error) => {
                matrix[i][j] = None;
                matrix[j][i] = None;
                pair_errors.push(format!("{} vs {}: {error}", names[i], names[j]));
            }
        }
    }
    let report = MatrixReport {
        names,
        matrix,
        mean_distance: if computed > 0 {
            sum / computed as f64
        } else {
            0.0
        },
        computed_pairs: computed,
        failed_pairs: pairs.len() - computed,
        skipped_files: load
            .failures
            .iter()
            .map(|f| format!("{}: {}", f.path.display(), f.error))
            .collect(),
    };
    Ok(MatrixOutcome {
        report,
        pair_errors,
    })
}

/// Renders the matrix as CSV: a header row of graph names, then one labeled
/// row per graph. Failed cells are left empty.
pub fn to_csv(report: &MatrixReport) -> String {
    let mut out = String::new();
    out.push_str("name");
    for name in &report.names {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (i, row) in report.matrix.iter().enumerate() {
        out.push_str(&report.names[i]);
        for cell in row {
            out.push(',');
            if let Some(distance) = cell {
                out.push_str(&distance.to_string());
            }
        }
        out.push('\n');
    }
    out
}

pub fn run(args: MatrixArgs) -> Result<(), CliError> {
    let format = args.format;
    let outcome = compute(&args)?;
    for line in &outcome.pair_errors {
        eprintln!("pair failed: {line}");
    }
    for line in &outcome.report.skipped_files {
        eprintln!("skipped: {line}");
    }
    match format {
        OutputFormat::Json => print!("{}", crate::report::to_json(&outcome.report)),
        _ => print!("{}", to_csv(&outcome.report)),
    }
    eprintln!(
        "{} pairs, mean distance {}",
        outcome.report.computed_pairs, outcome.report.mean_distance
    );
    Ok(())
}
