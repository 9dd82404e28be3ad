//! Command-line surface: subcommands, flags, and their parsers.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ged_core::CostModel;

/// Graph edit distance toolkit: pairwise distances, distance matrices,
/// nearest-neighbor classification, edit-path crossover, random graph
/// generation, and benchmark protocols.
#[derive(Parser, Debug)]
#[command(name = "ged", version, about, max_term_width = 100)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Distance between two graphs, with an optional witness edit path.
    Ged(GedArgs),
    /// Pairwise distance matrix over a dataset directory, as CSV.
    Matrix(MatrixArgs),
    /// Classify test graphs by their nearest training graphs.
    Knn(KnnArgs),
    /// Blend two graphs by applying part of their edit path.
    Crossover(CrossoverArgs),
    /// Write seeded random graphs as JSON files.
    Gen(GenArgs),
    /// Benchmark protocols producing JSON reports.
    Bench(BenchArgs),
}

/// Flags shared by every command that runs the distance engine.
#[derive(Args, Debug, Clone)]
pub struct EngineOpts {
    /// Partial mappings retained per search level (beam width); defaults to
    /// 700000 (5000 for the sizesweep protocol).
    #[arg(long)]
    pub k: Option<usize>,

    /// Cost model: six comma-separated values
    /// "vsub,vdel,vins,esub,edel,eins", or a preset: default (2,4,4,1,2,2),
    /// uniform (1,2,2,1,2,2), setting2 (4,12,12,1,10,10).
    #[arg(long, value_parser = parse_costs, default_value = "default")]
    pub costs: CostModel,

    /// Worker threads (default: all logical cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

impl EngineOpts {
    /// Resolved thread count.
    pub fn threads(&self) -> usize {
        self.threads.unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
    }

    /// Beam width, falling back to the command's default.
    pub fn k_or(&self, default: usize) -> usize {
        self.k.unwrap_or(default)
    }
}

/// Default beam width everywhere except sizesweep.
pub const DEFAULT_K: usize = 700_000;

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct GedArgs {
    /// Source graph file (.json or .gxl).
    pub g1: PathBuf,
    /// Target graph file (.json or .gxl).
    pub g2: PathBuf,

    #[command(flatten)]
    pub engine: EngineOpts,

    /// Run the exact branch-and-bound oracle instead of the beam engine
    /// (practical only for small graphs; refused above 16 vertices).
    #[arg(long)]
    pub exact: bool,

    /// Node expansion budget for --exact before giving up.
    #[arg(long, default_value_t = 20_000_000)]
    pub oracle_budget: u64,

    /// Print the witness edit path.
    #[arg(long)]
    pub path: bool,

    /// Re-check the witness: recompute its cost and replay it onto the
    /// source graph.
    #[arg(long)]
    pub verify: bool,

    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    /// Zero out wall-time fields so repeated runs are byte-identical.
    #[arg(long)]
    pub stable_output: bool,
}

#[derive(Args, Debug)]
pub struct MatrixArgs {
    /// Directory of graph files (.json / .gxl).
    pub dataset: PathBuf,

    #[command(flatten)]
    pub engine: EngineOpts,

    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct KnnArgs {
    /// Directory of training graphs.
    #[arg(long)]
    pub train: PathBuf,
    /// Directory of test graphs.
    #[arg(long)]
    pub test: PathBuf,
    /// Class CSV for the training set ("name,class" rows); defaults to
    /// classes.csv inside the training directory.
    #[arg(long)]
    pub train_classes: Option<PathBuf>,
    /// Class CSV for the test set; defaults to classes.csv inside the test
    /// directory.
    #[arg(long)]
    pub test_classes: Option<PathBuf>,
    /// Neighbors considered per test graph.
    #[arg(long, default_value_t = 1)]
    pub neighbors: usize,

    #[command(flatten)]
    pub engine: EngineOpts,

    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct CrossoverArgs {
    /// First parent graph file.
    pub g1: PathBuf,
    /// Second parent graph file.
    pub g2: PathBuf,

    /// Fraction of the edit path to apply (0 = first parent, 1 = second).
    #[arg(long, default_value_t = 0.5, value_parser = parse_fraction)]
    pub fraction: f64,

    /// Where to write the offspring JSON (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[command(flatten)]
    pub engine: EngineOpts,

    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Vertices per graph.
    #[arg(long)]
    pub n: u32,
    /// Probability of each vertex pair being joined.
    #[arg(long, value_parser = parse_fraction)]
    pub density: f64,
    /// How many graphs to write.
    #[arg(long, default_value_t = 1)]
    pub count: u32,
    /// Base seed; graph i uses seed + i.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Comma-separated vertex label alphabet.
    #[arg(long, default_value = "A,B,C")]
    pub vertex_alphabet: String,
    /// Comma-separated edge label alphabet.
    #[arg(long, default_value = "a,b")]
    pub edge_alphabet: String,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    /// Oracle-vs-engine accuracy across densities.
    Table1,
    /// Distance as a function of beam width on a fixed pair set.
    Ksweep,
    /// Wall time as a function of graph size at fixed beam width.
    Sizesweep,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub protocol: Protocol,

    /// Pairs per density / per size, or the size of the fixed pair set.
    #[arg(long)]
    pub pairs: Option<usize>,

    /// Vertex count for table1 (default 10) and ksweep (default 15).
    #[arg(long)]
    pub n: Option<u32>,

    /// Densities for table1.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.1, 0.3, 0.5, 0.7, 0.9])]
    pub densities: Vec<f64>,

    /// Beam widths for ksweep.
    #[arg(long, value_delimiter = ',', default_values_t = vec![10, 100, 1000, 10_000])]
    pub ks: Vec<usize>,

    /// Graph sizes for sizesweep.
    #[arg(long, value_delimiter = ',', default_values_t = vec![50, 100, 150, 200])]
    pub sizes: Vec<u32>,

    /// Density for ksweep and sizesweep pairs.
    #[arg(long, value_parser = parse_fraction)]
    pub density: Option<f64>,

    /// Base seed for pair generation.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Node expansion budget per oracle call in table1.
    #[arg(long, default_value_t = 20_000_000)]
    pub oracle_budget: u64,

    /// Where to write the JSON report (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[command(flatten)]
    pub engine: EngineOpts,

    /// Zero out wall-time fields so repeated runs are byte-identical.
    #[arg(long)]
    pub stable_output: bool,
}

/// Parses the --costs flag: a preset name or six comma-separated numbers.
fn parse_costs(raw: &str) -> Result<CostModel, String> {
    match raw {
        "default" => return Ok(CostModel::default()),
        "uniform" => return Ok(CostModel::uniform()),
        "setting2" => return Ok(CostModel::high_indel()),
        _ => {}
    }
    let values: Vec<f64> = raw
        .split(',')
        .map(|part| part.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("cost values must be numbers: {e}"))?;
    let [vs, vd, vi, es, ed, ei]: [f64; 6] = values.try_into().map_err(|v: Vec<f64>| {
        format!(
            "expected 6 comma-separated costs or a preset (default, uniform, setting2), got {} values",
            v.len()
        )
    })?;
    CostModel::new(vs, vd, vi, es, ed, ei).map_err(|e| e.to_string())
}

fn parse_fraction(raw: &str) -> Result<f64, String> {
    let value: f64 = raw.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(format!("{value} is outside [0, 1]"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cost_presets_parse() {
        assert_eq!(parse_costs("uniform").unwrap(), CostModel::uniform());
        assert_eq!(parse_costs("setting2").unwrap(), CostModel::high_indel());
        assert_eq!(parse_costs("default").unwrap(), CostModel::default());
        let custom = parse_costs("2,4,4,1,2,2").unwrap();
        assert_eq!(custom, CostModel::default());
    }

    #[test]
    fn bad_costs_are_rejected() {
        assert!(parse_costs("1,2,3").is_err());
        assert!(parse_costs("a,b,c,d,e,f").is_err());
        assert!(parse_costs("-1,2,2,1,2,2").is_err());
    }

    #[test]
    fn fraction_bounds_are_enforced() {
        assert!(parse_fraction("0.5").is_ok());
        assert!(parse_fraction("-0.1").is_err());
        assert!(parse_fraction("1.5").is_err());
    }

    #[test]
    fn cli_parses_a_full_command_line() {
        use clap::Parser;
        let cli = Cli::try_parse_from([
            "ged", "ged", "a.json", "b.json", "--k", "500", "--costs", "uniform", "--path",
        ])
        .unwrap();
        match cli.command {
            Command::Ged(args) => {
                assert_eq!(args.engine.k_or(DEFAULT_K), 500);
                assert_eq!(args.engine.costs, CostModel::uniform());
                assert!(args.path);
                assert!(!args.exact);
            }
            _ => panic!("wrong subcommand"),
        }
    }
}
