//! Directory-based dataset loading.
//!
//! A dataset is a directory of `.json` / `.gxl` graph files, optionally
//! paired with a header-less CSV mapping `graph-name,class-label`. Graphs
//! are named by file stem (overriding any name stored inside the file) and
//! ordered by file name, so a dataset loads identically everywhere. Files
//! that fail to parse are collected and reported rather than aborting the
//! load; problems with the class file are fatal because silently dropping
//! labels would corrupt any downstream classification.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use super::ParseError;
use crate::graph::LabeledGraph;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("two dataset files share the name {name:?}")]
    DuplicateName { name: String },
    #[error("class file line {line} is not `name,class`")]
    MalformedClassRow { line: usize },
    #[error("class file names unknown graph {name:?}")]
    UnknownGraph { name: String },
}

/// One file the loader had to skip, and why.
#[derive(Debug, Clone)]
pub struct LoadFailure {
    pub path: PathBuf,
    pub error: ParseError,
}

/// A named graph collection with optional class labels.
#[derive(Debug, Clone)]
pub struct Dataset {
    /// Graphs in file-name order, each named by its file stem.
    pub graphs: Vec<LabeledGraph>,
    /// Class label per graph name, when a class file was given.
    pub classes: Option<BTreeMap<String, String>>,
}

impl Dataset {
    pub fn graph_by_name(&self, name: &str) -> Option<&LabeledGraph> {
        self.graphs.iter().find(|g| g.name() == Some(name))
    }

    pub fn class_of(&self, name: &str) -> Option<&str> {
        self.classes.as_ref()?.get(name).map(String::as_str)
    }
}

/// A loaded dataset together with its skipped files.
#[derive(Debug)]
pub struct DatasetLoad {
    pub dataset: Dataset,
    pub failures: Vec<LoadFailure>,
}

/// Loads every `.json` and `.gxl` file under `dir` (non-recursively).
///
/// Parsing runs in parallel; the resulting order is still deterministic
/// (file-name order). Per-file parse failures end up in
/// [`DatasetLoad::failures`]; I/O problems, duplicate names, and class-file
/// inconsistencies are errors.
pub fn load_dataset(dir: &Path, class_file: Option<&Path>) -> Result<DatasetLoad, DatasetError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|source| DatasetError::Io {
            path: dir.to_owned(),
            source,
        })?
        .collect::<Result<Vec<_>, _>>()
        .map_err(|source| DatasetError::Io {
            path: dir.to_owned(),
            source,
        })?
        .into_iter()
        .map(|entry| entry.path())
        .filter(|path| {
            matches!(
                path.extension().and_then(|e| e.to_str()),
                Some("json") | Some("gxl")
            )
        })
        .collect();
    paths.sort();

    enum Outcome {
        Parsed(Box<LabeledGraph>),
        Failed(LoadFailure),
        Io(PathBuf, std::io::Error),
    }
    let outcomes: Vec<Outcome> = paths
        .par_iter()
        .map(|path| match super::read_graph_file(path) {
            Ok(graph) => Outcome::Parsed(Box::new(graph)),
            Err(super::FileError::Io { path, source }) => Outcome::Io(path, source),
            Err(super::FileError::Parse { path, error }) => {
                Outcome::Failed(LoadFailure { path, error })
            }
        })
        .collect();

    let mut graphs: Vec<LabeledGraph> = Vec::new();
    let mut failures: Vec<LoadFailure> = Vec::new();
    for outcome in outcomes {
        match outcome {
            Outcome::Parsed(graph) => graphs.push(*graph),
            Outcome::Failed(failure) => failures.push(failure),
            Outcome::Io(path, source) => return Err(DatasetError::Io { path, source }),
        }
    }

    let mut seen = std::collections::BTreeSet::new();
    for graph in &graphs {
        let name = graph.name().unwrap_or_default();
        if !seen.insert(name.to_owned()) {
            return Err(DatasetError::DuplicateName {
                name: name.to_owned(),
            });
        }
    }

    let classes = match class_file {
        None => None,
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| DatasetError::Io {
                path: path.to_owned(),
                source,
            })?;
            let mut map = BTreeMap::new();
            for (index, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                let (name, class) = line
                    .split_once(',')
                    .ok_or(DatasetError::MalformedClassRow { line: index + 1 })?;
                let name = name.trim();
                if !seen.contains(name) {
                    return Err(DatasetError::UnknownGraph {
                        name: name.to_owned(),
                    });
                }
                map.insert(name.to_owned(), class.trim().to_owned());
            }
            Some(map)
        }
    };

    Ok(DatasetLoad {
        dataset: Dataset { graphs, classes },
        failures,
    })
}
