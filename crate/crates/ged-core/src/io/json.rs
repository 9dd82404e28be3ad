//! JSON graph encoding.
//!
//! ```json
//! {
//!   "name": "caffeine",
//!   "vertices": [{"label": "C"}, {"label": "N"}],
//!   "edges": [{"u": 0, "v": 1, "label": "s"}]
//! }
//! ```
//!
//! `name` is optional, edge `label` defaults to `"—"`, and endpoints must
//! satisfy `u < v` (the graph is undirected; the normalized orientation is
//! part of the format). Emitting always writes every field it knows, so a
//! parse/emit round trip is lossless.

use serde::{Deserialize, Serialize};

use super::ParseError;
use crate::graph::{Label, LabeledGraph};

/// Label given to vertices and edges that do not carry one.
pub(crate) const DEFAULT_LABEL: &str = "—";

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
struct VertexDoc {
    label: String,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    u: u32,
    v: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

/// Decodes one graph from JSON text.
pub fn parse_json_graph(text: &str) -> Result<LabeledGraph, ParseError> {
    let doc: GraphDoc =
        serde_json::from_str(text).map_err(|error| ParseError::Json(error.to_string()))?;
    let vertex_count = doc.vertices.len();
    let mut edges = Vec::with_capacity(doc.edges.len());
    for (index, edge) in doc.edges.into_iter().enumerate() {
        if edge.u >= edge.v {
            return Err(ParseError::JsonGraph(format!(
                "edges[{index}] has u={} and v={}; endpoints must satisfy u < v",
                edge.u, edge.v
            )));
        }
        if edge.v as usize >= vertex_count {
            return Err(ParseError::JsonGraph(format!(
                "edges[{index}] endpoint {} out of range for {vertex_count} vertices",
                edge.v
            )));
        }
        edges.push((
            edge.u,
            edge.v,
            Label::new(edge.label.unwrap_or_else(|| DEFAULT_LABEL.to_owned())),
        ));
    }
    let labels = doc.vertices.into_iter().map(|v| Label::new(v.label)).collect();
    let graph = LabeledGraph::new(labels, edges)?;
    Ok(match doc.name {
        Some(name) => graph.with_name(name),
        None => graph,
    })
}

/// Encodes one graph as pretty-printed JSON (with a trailing newline).
pub fn emit_json_graph(graph: &LabeledGraph) -> String {
    let doc = GraphDoc {
        name: graph.name().map(str::to_owned),
        vertices: graph
            .vertex_labels()
            .iter()
            .map(|label| VertexDoc {
                label: label.as_str().to_owned(),
            })
            .collect(),
        edges: graph
            .edges()
            .map(|(u, v, label)| EdgeDoc {
                u,
                v,
                label: Some(label.as_str().to_owned()),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    text.push('\n');
    text
}
