use std::collections::BTreeMap;

use super::{EventGraph, GraphError, Node};

#[derive(Debug, thiserror::Error)]
pub enum EdgeListError {
    #[error("line {0}: expected protein<TAB>event_type<TAB>weight")]
    Syntax(usize),
    #[error("line {0}: bad weight {1:?}")]
    Weight(usize, String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `protein<TAB>event_type<TAB>weight` lines, sorted lexicographically.
pub fn write_edge_list(g: &EventGraph) -> String {
    let mut lines: Vec<String> = g
        .edge_triples()
        .map(|(p, h, w)| format!("{}\t{}\t{w}\n", p.key, h.key))
        .collect();
    lines.sort();
    lines.concat()
}

/// Reads an edge list back. Event instance counts are not part of the
/// format, so the histogram of the result is empty.
pub fn read_edge_list(text: &str) -> Result<EventGraph, EdgeListError> {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split('\t').collect();
        let [p, h, w] = parts.as_slice() else {
            return Err(EdgeListError::Syntax(i + 1));
        };
        let w: u64 = w.trim().parse().map_err(|_| EdgeListError::Weight(i + 1, w.to_string()))?;
        nodes.push(Node::protein(*p));
        nodes.push(Node::hub(*h));
        edges.push((Node::protein(*p), Node::hub(*h), w));
    }
    Ok(EventGraph::from_parts(nodes, edges, BTreeMap::new())?)
}
