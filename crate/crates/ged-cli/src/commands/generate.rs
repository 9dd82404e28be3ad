//! Write seeded random graphs as JSON files.

use std::fs;

use ged_core::io::{emit_json_graph, generate_random, GenSpec};
use ged_core::Label;

use crate::args::GenArgs;
use crate::error::{io_error, CliError};

fn parse_alphabet(raw: &str, which: &str) -> Result<Vec<Label>, CliError> {
    let labels: Vec<Label> = raw
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(Label::new)
        .collect();
    if labels.is_empty() {
        return Err(CliError::Usage(format!(
            "--{which}-alphabet must list at least one label"
        )));
    }
    Ok(labels)
}

pub fn run(args: GenArgs) -> Result<(), CliError> {
    let vertex_alphabet = parse_alphabet(&args.vertex_alphabet, "vertex")?;
    let edge_alphabet = parse_alphabet(&args.edge_alphabet, "edge")?;
    fs::create_dir_all(&args.out_dir).map_err(|e| io_error(&args.out_dir, e))?;
    for i in 0..args.count {
        let spec = GenSpec {
            vertex_count: args.n,
            density: args.density,
            vertex_alphabet: vertex_alphabet.clone(),
            edge_alphabet: edge_alphabet.clone(),
            seed: args.seed.wrapping_add(u64::from(i)),
        };
        let name = format!("g{i:04}");
        let graph = generate_random(&spec)?.with_name(&name);
        let path = args.out_dir.join(format!("{name}.json"));
        fs::write(&path, emit_json_graph(&graph)).map_err(|e| io_error(&path, e))?;
        println!("{}", path.display());
    }
    eprintln!(
        "wrote {} graphs (n={}, density={}, seed={})",
        args.count, args.n, args.density, args.seed
    );
    Ok(())
}
