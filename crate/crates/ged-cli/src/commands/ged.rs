//! Pairwise distance between two graph files.

use std::time::Instant;

use ged_core::io::read_graph_file;
use ged_core::{exact_ged, ged_kbest, OracleConfig};

use crate::args::{GedArgs, OutputFormat};
use crate::error::CliError;
use crate::report::PairReport;

use super::{
    default_engine_config, describe_op, elapsed_ms, graph_name, thread_pool, verify_witness,
};

/// Largest graph the exact oracle is offered for; beyond this the
/// branch-and-bound search is hopeless and the beam engine is the answer.
const EXACT_MAX_VERTICES: usize = 16;

pub fn compute(args: &GedArgs) -> Result<PairReport, CliError> {
    let g1 = read_graph_file(&args.g1)?;
    let g2 = read_graph_file(&args.g2)?;
    if args.exact {
        let n = g1.vertex_count().max(g2.vertex_count());
        if n > EXACT_MAX_VERTICES {
            return Err(CliError::Usage(format!(
                "--exact is limited to {EXACT_MAX_VERTICES} vertices per graph (got {n}); \
                 drop --exact to use the beam engine"
            )));
        }
    }
    let pool = thread_pool(args.engine.threads())?;
    let config = default_engine_config(&args.engine);
    let start = Instant::now();
    let result = if args.exact {
        let oracle = OracleConfig {
            node_limit: args.oracle_budget,
            ..OracleConfig::default()
        };
        exact_ged(&g1, &g2, &args.engine.costs, &oracle)?
    } else {
        pool.install(|| ged_kbest(&g1, &g2, &config))?
    };
    let wall_ms = elapsed_ms(start, args.stable_output);
    let verified = args
        .verify
        .then(|| verify_witness(result.distance, &result.path.ops, &g1, &g2, &args.engine.costs));
    Ok(PairReport {
        g1: graph_name(&g1),
        g2: graph_name(&g2),
        distance: result.distance,
        k: (!args.exact).then_some(config.k),
        exact: args.exact,
        wall_ms,
        verified,
        path: args.path.then_some(result.path.ops),
    })
}

pub fn run(args: GedArgs) -> Result<(), CliError> {
    let report = compute(&args)?;
    match args.format {
        OutputFormat::Json => print!("{}", crate::report::to_json(&report)),
        _ => {
            println!("distance: {}", report.distance);
            println!("wall_ms: {}", report.wall_ms);
            if let Some(ops) = &report.path {
                println!("path ({} ops):", ops.len());
                for op in ops {
                    println!("  {}", describe_op(op));
                }
            }
            if let Some(ok) = report.verified {
                println!("verified: {ok}");
            }
        }
    }
    if report.verified == Some(false) {
        return Err(CliError::Capacity(
            "witness verification failed: recomputed cost or reconstruction mismatch".to_owned(),
        ));
    }
    Ok(())
}
