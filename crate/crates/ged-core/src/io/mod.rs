//! Graph serialization, dataset loading, and seeded random generation.

pub mod dataset;
pub mod generate;
pub mod gxl;
pub mod json;

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use dataset::{load_dataset, Dataset, DatasetError, DatasetLoad, LoadFailure};
pub use generate::{generate_random, GenError, GenSpec, SplitMix64};
pub use gxl::parse_gxl_graph;
pub use json::{emit_json_graph, parse_json_graph};

use crate::graph::{GraphError, LabeledGraph};

/// Errors raised while decoding a single graph file.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    /// Syntactic or schema-level JSON problem; the message names the
    /// offending field or position.
    #[error("malformed JSON: {0}")]
    Json(String),
    /// Structurally valid JSON that does not describe a valid graph.
    #[error("invalid graph JSON: {0}")]
    JsonGraph(String),
    #[error("malformed GXL at line {line}: {message}")]
    Gxl { line: u32, message: String },
    #[error("unsupported file extension {extension:?} (expected .json or .gxl)")]
    UnknownExtension { extension: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Errors raised by [`read_graph_file`], carrying the file path.
#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}", path = .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {error}", path = .path.display())]
    Parse { path: PathBuf, error: ParseError },
}

/// Reads one graph file, dispatching on its extension (`.json` or `.gxl`).
///
/// The file stem becomes the graph's name, overriding any name stored in the
/// file, so that graphs are addressable the same way however they were
/// serialized.
pub fn read_graph_file(path: &Path) -> Result<LabeledGraph, FileError> {
    let text = fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.to_owned(),
        source,
    })?;
    let parsed = match path.extension().and_then(|e| e.to_str()) {
        Some("json") => parse_json_graph(&text),
        Some("gxl") => parse_gxl_graph(&text),
        other => Err(ParseError::UnknownExtension {
            extension: other.unwrap_or("").to_owned(),
        }),
    };
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parsed.map(|graph| graph.with_name(stem)).map_err(|error| {
        FileError::Parse {
            path: path.to_owned(),
            error,
        }
    })
}
