//! Undirected, weighted, bipartite event network: gene/protein nodes linked
//! to event-type hub nodes, weighted by co-occurrence counts.

mod build;
mod edgelist;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use build::{build_graph, BuildOptions, BuildWarning};
pub use edgelist::{read_edge_list, write_edge_list, EdgeListError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    GeneProtein,
    EventHub,
}

impl NodeKind {
    pub fn name(self) -> &'static str {
        match self {
            NodeKind::GeneProtein => "GeneProtein",
            NodeKind::EventHub => "EventHub",
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node {
    pub kind: NodeKind,
    pub key: String,
}

impl Node {
    pub fn protein(key: impl Into<String>) -> Self {
        Node {
            kind: NodeKind::GeneProtein,
            key: key.into(),
        }
    }

    pub fn hub(key: impl Into<String>) -> Self {
        Node {
            kind: NodeKind::EventHub,
            key: key.into(),
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.key, self.kind)
    }
}

/// Edge between node indices `protein` and `hub`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub protein: usize,
    pub hub: usize,
    pub weight: u64,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {0} -- {1} is a self-loop")]
    SelfLoop(String, String),
    #[error("edge {0} -- {1} does not join a gene/protein to an event hub")]
    NotBipartite(String, String),
    #[error("edge {0} -- {1} has weight 0")]
    ZeroWeight(String, String),
    #[error("edge {0} -- {1} given twice")]
    DuplicateEdge(String, String),
    #[error("edge endpoint {0} is not a node of the graph")]
    UnknownNode(String),
    #[error("unknown seed node {0:?}")]
    UnknownSeed(String),
}

/// Immutable event network. Nodes are ordered by (kind, key), edges by
/// (protein, hub); iteration order is therefore stable across runs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventGraph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    /// Event instances per event type (hub key), including events without
    /// protein arguments.
    event_counts: BTreeMap<String, u64>,
}

impl EventGraph {
    /// Builds a graph from explicit parts, checking every invariant.
    pub fn from_parts(
        nodes: impl IntoIterator<Item = Node>,
        edges: impl IntoIterator<Item = (Node, Node, u64)>,
        event_counts: BTreeMap<String, u64>,
    ) -> Result<Self, GraphError> {
        let nodes: BTreeSet<Node> = nodes.into_iter().collect();
        let nodes: Vec<Node> = nodes.into_iter().collect();
        let index: BTreeMap<&Node, usize> = nodes.iter().enumerate().map(|(i, n)| (n, i)).collect();
        let mut seen = BTreeMap::new();
        for (a, b, w) in edges {
            let label = || (a.to_string(), b.to_string());
            if a == b {
                let (x, y) = label();
                return Err(GraphError::SelfLoop(x, y));
            }
            let (p, h) = match (a.kind, b.kind) {
                (NodeKind::GeneProtein, NodeKind::EventHub) => (&a, &b),
                (NodeKind::EventHub, NodeKind::GeneProtein) => (&b, &a),
                _ => {
                    let (x, y) = label();
                    return Err(GraphError::NotBipartite(x, y));
                }
            };
            if w == 0 {
                let (x, y) = label();
                return Err(GraphError::ZeroWeight(x, y));
            }
            let pi = *index.get(p).ok_or_else(|| GraphError::UnknownNode(p.to_string()))?;
            let hi = *index.get(h).ok_or_else(|| GraphError::UnknownNode(h.to_string()))?;
            if seen.insert((pi, hi), w).is_some() {
                let (x, y) = label();
                return Err(GraphError::DuplicateEdge(x, y));
            }
        }
        let edges = seen
            .into_iter()
            .map(|((protein, hub), weight)| Edge { protein, hub, weight })
            .collect();
        let g = EventGraph {
            nodes,
            edges,
            event_counts,
        };
        debug_assert!(g.is_bipartite());
        Ok(g)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn event_counts(&self) -> &BTreeMap<String, u64> {
        &self.event_counts
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, node: &Node) -> Option<usize> {
        self.nodes.binary_search(node).ok()
    }

    /// Weight of the edge between a protein key and a hub key.
    pub fn weight(&self, protein: &str, hub: &str) -> Option<u64> {
        let p = self.index_of(&Node::protein(protein))?;
        let h = self.index_of(&Node::hub(hub))?;
        self.edges
            .binary_search_by(|e| (e.protein, e.hub).cmp(&(p, h)))
            .ok()
            .map(|i| self.edges[i].weight)
    }

    /// Neighbours of every node with the connecting edge weight.
    pub fn adjacency(&self) -> Vec<Vec<(usize, u64)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.protein].push((e.hub, e.weight));
            adj[e.hub].push((e.protein, e.weight));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn is_bipartite(&self) -> bool {
        self.edges.iter().all(|e| {
            self.nodes[e.protein].kind == NodeKind::GeneProtein && self.nodes[e.hub].kind == NodeKind::EventHub && e.weight >= 1
        })
    }

    /// Edges as (protein node, hub node, weight).
    pub fn edge_triples(&self) -> impl Iterator<Item = (&Node, &Node, u64)> {
        self.edges.iter().map(|e| (&self.nodes[e.protein], &self.nodes[e.hub], e.weight))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphStats {
    pub node_count: usize,
    pub edge_count: usize,
    pub protein_count: usize,
    pub hub_count: usize,
    pub total_weight: u64,
    /// Per node, in graph node order.
    pub weighted_degree: Vec<u64>,
    pub event_type_histogram: BTreeMap<String, u64>,
}

pub fn graph_stats(g: &EventGraph) -> GraphStats {
    let mut weighted_degree = vec![0u64; g.node_count()];
    let mut total_weight = 0;
    for e in g.edges() {
        weighted_degree[e.protein] += e.weight;
        weighted_degree[e.hub] += e.weight;
        total_weight += e.weight;
    }
    let protein_count = g.nodes().iter().filter(|n| n.kind == NodeKind::GeneProtein).count();
    GraphStats {
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        protein_count,
        hub_count: g.node_count() - protein_count,
        total_weight,
        weighted_degree,
        event_type_histogram: g.event_counts().clone(),
    }
}

/// Subgraph induced by the seeds and their neighbours, keeping only edges of
/// weight at least `min_weight` and dropping nodes left isolated.
pub fn induced_subnetwork(g: &EventGraph, seeds: &[Node], min_weight: u64) -> Result<EventGraph, GraphError> {
    let mut keep = BTreeSet::new();
    for s in seeds {
        keep.insert(g.index_of(s).ok_or_else(|| GraphError::UnknownSeed(s.key.clone()))?);
    }
    let adj = g.adjacency();
    for s in keep.clone() {
        keep.extend(adj[s].iter().map(|(n, _)| *n));
    }
    let edges: Vec<&Edge> = g
        .edges()
        .iter()
        .filter(|e| keep.contains(&e.protein) && keep.contains(&e.hub) && e.weight >= min_weight)
        .collect();
    let used: BTreeSet<usize> = edges.iter().flat_map(|e| [e.protein, e.hub]).collect();
    let nodes: Vec<Node> = used.iter().map(|&i| g.nodes()[i].clone()).collect();
    let counts = g
        .event_counts()
        .iter()
        .filter(|(k, _)| nodes.iter().any(|n| n.kind == NodeKind::EventHub && n.key == **k))
        .map(|(k, v)| (k.clone(), *v))
        .collect();
    EventGraph::from_parts(
        nodes,
        edges
            .iter()
            .map(|e| (g.nodes()[e.protein].clone(), g.nodes()[e.hub].clone(), e.weight)),
        counts,
    )
}

/// Connected components as sorted node-index lists, largest first, ties by
/// smallest member.
pub fn clusters(g: &EventGraph) -> Vec<Vec<usize>> {
    let adj = g.adjacency();
    let mut comp = vec![usize::MAX; g.node_count()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for start in 0..g.node_count() {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut block = vec![start];
        comp[start] = id;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if comp[v] == usize::MAX {
                    comp[v] = id;
                    block.push(v);
                    stack.push(v);
                }
            }
        }
        block.sort_unstable();
        out.push(block);
    }
    out.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(edges: &[(&str, &str, u64)]) -> EventGraph {
        let mut nodes = Vec::new();
        let mut es = Vec::new();
        for (p, h, w) in edges {
            nodes.push(Node::protein(*p));
            nodes.push(Node::hub(*h));
            es.push((Node::protein(*p), Node::hub(*h), *w));
        }
        EventGraph::from_parts(nodes, es, BTreeMap::new()).unwrap()
    }

    #[test]
    fn from_parts_rejects_bad_edges() {
        let p = Node::protein("EPO");
        let h = Node::hub("Binding");
        let q = Node::protein("VEGF");
        let nodes = || vec![p.clone(), h.clone(), q.clone()];
        let err = |edges: Vec<(Node, Node, u64)>| EventGraph::from_parts(nodes(), edges, BTreeMap::new()).unwrap_err();
        assert!(matches!(err(vec![(p.clone(), p.clone(), 1)]), GraphError::SelfLoop(..)));
        assert!(matches!(err(vec![(p.clone(), q.clone(), 1)]), GraphError::NotBipartite(..)));
        assert!(matches!(err(vec![(p.clone(), h.clone(), 0)]), GraphError::ZeroWeight(..)));
        assert!(matches!(
            err(vec![(p.clone(), h.clone(), 1), (h.clone(), p.clone(), 2)]),
            GraphError::DuplicateEdge(..)
        ));
        assert!(matches!(
            err(vec![(Node::protein("X"), h.clone(), 1)]),
            GraphError::UnknownNode(..)
        ));
    }

    #[test]
    fn stats_of_empty_graph() {
        let s = graph_stats(&EventGraph::default());
        assert_eq!(s, GraphStats::default());
    }

    #[test]
    fn subnetwork_identity_and_neighbourhood() {
        let g = graph(&[("EPO", "Gene_expression", 3), ("VEGF", "Gene_expression", 1), ("VEGF", "Binding", 2), ("ACE", "Binding", 1)]);
        let all: Vec<Node> = g.nodes().to_vec();
        assert_eq!(induced_subnetwork(&g, &all, 1).unwrap(), g);

        let sub = induced_subnetwork(&g, &[Node::hub("Gene_expression")], 1).unwrap();
        let keys: Vec<&str> = sub.nodes().iter().map(|n| n.key.as_str()).collect();
        assert_eq!(keys, vec!["EPO", "VEGF", "Gene_expression"]);
        assert_eq!(sub.edge_count(), 2);

        let thick = induced_subnetwork(&g, &[Node::hub("Gene_expression")], 2).unwrap();
        assert_eq!(thick.node_count(), 2);

        let e = induced_subnetwork(&g, &[Node::protein("NOPE")], 1).unwrap_err();
        assert_eq!(e.to_string(), "unknown seed node \"NOPE\"");
    }

    #[test]
    fn two_components() {
        let g = graph(&[("A", "X", 1), ("B", "X", 1), ("C", "Y", 1), ("D", "Y", 1)]);
        let cs = clusters(&g);
        assert_eq!(cs.len(), 2);
        assert!(cs.iter().all(|c| c.len() == 3));
        assert!(clusters(&EventGraph::default()).is_empty());
    }
}
