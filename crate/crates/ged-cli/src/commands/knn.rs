//! Nearest-neighbor classification over two graph datasets.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use ged_core::io::{load_dataset, Dataset};
use ged_core::{ged_kbest, LabeledGraph};
use rayon::prelude::*;

use crate::args::{KnnArgs, OutputFormat};
use crate::error::CliError;
use crate::report::{KnnReport, Prediction};

use super::{default_engine_config, thread_pool};

/// Loads a dataset and its class file, which defaults to classes.csv inside
/// the dataset directory. Every graph must be classed.
fn load_classed(dir: &Path, class_file: &Option<PathBuf>) -> Result<Dataset, CliError> {
    let class_path = class_file
        .clone()
        .unwrap_or_else(|| dir.join("classes.csv"));
    if !class_path.exists() {
        return Err(CliError::Input(format!(
            "{}: class file not found",
            class_path.display()
        )));
    }
    let load = load_dataset(dir, Some(&class_path))?;
    for failure in &load.failures {
        eprintln!("skipped: {}: {}", failure.path.display(), failure.error);
    }
    let dataset = load.dataset;
    for graph in &dataset.graphs {
        let name = graph.name().unwrap_or("unnamed");
        if dataset.class_of(name).is_none() {
            return Err(CliError::Input(format!(
                "graph {name:?} has no class in {}",
                class_path.display()
            )));
        }
    }
    Ok(dataset)
}

pub fn compute(args: &KnnArgs) -> Result<KnnReport, CliError> {
    if args.neighbors == 0 {
        return Err(CliError::Usage("--neighbors must be at least 1".to_owned()));
    }
    let train = load_classed(&args.train, &args.train_classes)?;
    let test = load_classed(&args.test, &args.test_classes)?;
    if train.graphs.is_empty() || test.graphs.is_empty() {
        return Err(CliError::Input(
            "both datasets must contain at least one graph".to_owned(),
        ));
    }

    let pool = thread_pool(args.engine.threads())?;
    let config = default_engine_config(&args.engine);
    let pairs: Vec<(usize, usize)> = (0..test.graphs.len())
        .flat_map(|t| (0..train.graphs.len()).map(move |r| (t, r)))
        .collect();
    let distances: Vec<f64> = pool.install(|| {
        pairs
            .par_iter()
            .map(|&(t, r)| {
                ged_kbest(&test.graphs[t], &train.graphs[r], &config).map(|res| res.distance)
            })
            .collect::<Result<_, _>>()
    })?;

    let name_of = |g: &LabeledGraph| g.name().unwrap_or("unnamed").to_owned();
    let k = args.neighbors.min(train.graphs.len());
    let mut predictions = Vec::with_capacity(test.graphs.len());
    let mut correct = 0usize;
    for (t, test_graph) in test.graphs.iter().enumerate() {
        let mut neighbors: Vec<(f64, &str, &str)> = train
            .graphs
            .iter()
            .enumerate()
            .map(|(r, train_graph)| {
                let name = train_graph.name().unwrap_or("unnamed");
                let class = train.class_of(name).expect("validated above");
                (distances[t * train.graphs.len() + r], name, class)
            })
            .collect();
        // Distance first, then name: fully deterministic neighbor order.
        neighbors.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(b.1)));
        let top = &neighbors[..k];
        // Majority class; ties fall to the smaller mean distance, then the
        // lexicographically smaller class.
        let mut tally: BTreeMap<&str, (usize, f64)> = BTreeMap::new();
        for &(distance, _, class) in top {
            let entry = tally.entry(class).or_insert((0, 0.0));
            entry.0 += 1;
            entry.1 += distance;
        }
        let (predicted, _) = tally
            .iter()
            .map(|(class, &(count, sum))| (*class, (count, sum / count as f64)))
            .max_by(|a, b| {
                (a.1 .0.cmp(&b.1 .0))
                    .then_with(|| b.1 .1.total_cmp(&a.1 .1))
                    .then_with(|| b.0.cmp(a.0))
            })
            .expect("at least one neighbor");
        let name = name_of(test_graph);
        let actual = test.class_of(&name).expect("validated above").to_owned();
        if predicted == actual {
            correct += 1;
        }
        predictions.push(Prediction {
            name,
            actual,
            predicted: predicted.to_owned(),
            nearest: top[0].1.to_owned(),
            nearest_distance: top[0].0,
        });
    }

    let mut classes: Vec<String> = predictions
        .iter()
        .flat_map(|p| [p.actual.clone(), p.predicted.clone()])
        .collect();
    classes.sort();
    classes.dedup();
    let index: BTreeMap<&str, usize> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_str(), i))
        .collect();
    let mut confusion = vec![vec![0usize; classes.len()]; classes.len()];
    for p in &predictions {
        confusion[index[p.actual.as_str()]][index[p.predicted.as_str()]] += 1;
    }

    Ok(KnnReport {
        accuracy: correct as f64 / predictions.len() as f64,
        correct,
        total: predictions.len(),
        neighbors: k,
        classes,
        confusion,
        predictions,
    })
}

pub fn run(args: KnnArgs) -> Result<(), CliError> {
    let format = args.format;
    let report = compute(&args)?;
    match format {
        OutputFormat::Json => print!("{}", crate::report::to_json(&report)),
        _ => {
            println!(
                "accuracy: {:.4} ({}/{})",
                report.accuracy, report.correct, report.total
            );
            println!("confusion (rows actual, columns predicted):");
            print!("{:>12}", "");
            for class in &report.classes {
                print!("{class:>12}");
            }
            println!();
            for (i, row) in report.confusion.iter().enumerate() {
                print!("{:>12}", report.classes[i]);
                for cell in row {
                    print!("{cell:>12}");
                }
                println!();
            }
        }
    }
    Ok(())
}
