//! GXL graph decoding (read-only subset).
//!
//! Accepts one `<graph>` element whose children are `<node>` and `<edge>`
//! elements in the usual GXL shape:
//!
//! ```xml
//! <gxl><graph id="mol_1" edgemode="undirected">
//!   <node id="n0"><attr name="symbol"><string>C</string></attr></node>
//!   <node id="n1"><attr name="symbol"><string>O</string></attr></node>
//!   <edge from="n0" to="n1"><attr name="valence"><int>2</int></attr></edge>
//! </graph></gxl>
//! ```
//!
//! Labels come from `<attr>` children: a single attribute contributes its
//! value text verbatim; several attributes are normalized to `name=value`
//! pairs sorted by name and joined with `;`; none at all yields the same
//! placeholder an unlabeled JSON edge gets. Everything is treated as
//! undirected; `edgemode`/`isdirected` markers are ignored. Self-loops and
//! repeated vertex pairs are rejected, as in the JSON decoder.

use std::collections::HashMap;

use roxmltree::{Document, Node};

use super::json::DEFAULT_LABEL;
use super::ParseError;
use crate::graph::{Label, LabeledGraph};

fn error_at(doc: &Document, node: Node, message: String) -> ParseError {
    let pos = doc.text_pos_at(node.range().start);
    ParseError::Gxl {
        line: pos.row,
        message,
    }
}

/// Label text for a `<node>` or `<edge>` from its `<attr>` children.
fn attr_label(element: Node, fallback: &str) -> String {
    let mut attrs: Vec<(String, String)> = element
        .children()
        .filter(|child| child.has_tag_name("attr"))
        .map(|attr| {
            let name = attr.attribute("name").unwrap_or_default().to_owned();
            // The value lives in the first element child (<string>, <int>,
            // <float>, ...); fall back to the attr's own text.
            let value = attr
                .children()
                .find(|c| c.is_element())
                .unwrap_or(attr)
                .text()
                .unwrap_or_default()
                .trim()
                .to_owned();
            (name, value)
        })
        .collect();
    match attrs.len() {
        0 => fallback.to_owned(),
        1 => attrs.pop().expect("len checked").1,
        _ => {
            attrs.sort();
            let pairs: Vec<String> = attrs
                .into_iter()
                .map(|(name, value)| format!("{name}={value}"))
                .collect();
            pairs.join(";")
        }
    }
}

/// Decodes one graph from GXL text.
pub fn parse_gxl_graph(text: &str) -> Result<LabeledGraph, ParseError> {
    let doc = Document::parse(text).map_err(|error| ParseError::Gxl {
        line: error.pos().row,
        message: error.to_string(),
    })?;
    let mut graphs = doc
        .descendants()
        .filter(|node| node.has_tag_name("graph"));
    let graph_el = match (graphs.next(), graphs.next()) {
        (Some(first), None) => first,
        (Some(_), Some(second)) => {
            return Err(error_at(
                &doc,
                second,
                "more than one <graph> element".to_owned(),
            ))
        }
        (None, _) => {
            return Err(ParseError::Gxl {
                line: 1,
                message: "no <graph> element".to_owned(),
            })
        }
    };

    let mut labels: Vec<Label> = Vec::new();
    let mut index_of: HashMap<&str, u32> = HashMap::new();
    for node in graph_el.children().filter(|c| c.has_tag_name("node")) {
        let id = node
            .attribute("id")
            .ok_or_else(|| error_at(&doc, node, "<node> without id".to_owned()))?;
        if index_of.insert(id, labels.len() as u32).is_some() {
            return Err(error_at(&doc, node, format!("duplicate node id {id:?}")));
        }
        labels.push(Label::new(attr_label(node, DEFAULT_LABEL)));
    }

    let mut edges: Vec<(u32, u32, Label)> = Vec::new();
    for edge in graph_el.children().filter(|c| c.has_tag_name("edge")) {
        let endpoint = |attr: &str| -> Result<u32, ParseError> {
            let id = edge
                .attribute(attr)
                .ok_or_else(|| error_at(&doc, edge, format!("<edge> without {attr:?}")))?;
            index_of.get(id).copied().ok_or_else(|| {
                error_at(&doc, edge, format!("edge references unknown node {id:?}"))
            })
        };
        let from = endpoint("from")?;
        let to = endpoint("to")?;
        if from == to {
            return Err(error_at(
                &doc,
                edge,
                format!("self-loop on node index {from}"),
            ));
        }
        if edges
            .iter()
            .any(|&(a, b, _)| (a, b) == (from.min(to), from.max(to)))
        {
            return Err(error_at(
                &doc,
                edge,
                format!("duplicate edge between node indices {from} and {to}"),
            ));
        }
        edges.push((
            from.min(to),
            from.max(to),
            Label::new(attr_label(edge, DEFAULT_LABEL)),
        ));
    }

    let graph = LabeledGraph::new(labels, edges)?;
    Ok(match graph_el.attribute("id") {
        Some(id) => graph.with_name(id),
        None => graph,
    })
}
