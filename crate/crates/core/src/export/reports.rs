//! Tabular reports (UTF-8 CSV with a header row).

use std::fmt::Write as _;

use crate::corpus::csv_field;
use crate::netgraph::{EventGraph, GraphStats};
use crate::rank::RankResult;

pub const EVENT_TYPES_HEADER: &str = "event_type,count";
pub const RANKS_HEADER: &str = "node,kind,pagerank,weighted_in_degree,weighted_out_degree,minmax_rank";
pub const TOP_RANKED_HEADER: &str = "rank,node,kind,pagerank,minmax_rank";
pub const NETWORK_STATS_HEADER: &str = "nodes,edges,gene_protein_nodes,event_hub_nodes,total_weight,event_instances,components";
pub const CLUSTERS_HEADER: &str = "cluster,node,kind";

fn score(x: f64) -> String {
    format!("{x:.12}")
}

/// Event instances per type, most frequent first, ties by name.
pub fn event_types_csv(stats: &GraphStats) -> String {
    let mut rows: Vec<(&String, &u64)> = stats.event_type_histogram.iter().collect();
    rows.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
    let mut out = format!("{EVENT_TYPES_HEADER}\n");
    for (t, c) in rows {
        writeln!(out, "{},{c}", csv_field(t)).unwrap();
    }
    out
}

/// One summary row; header only for an empty graph.
pub fn network_stats_csv(stats: &GraphStats, component_count: usize) -> String {
    let mut out = format!("{NETWORK_STATS_HEADER}\n");
    if stats.node_count > 0 {
        let events: u64 = stats.event_type_histogram.values().sum();
        writeln!(
            out,
            "{},{},{},{},{},{events},{component_count}",
            stats.node_count, stats.edge_count, stats.protein_count, stats.hub_count, stats.total_weight
        )
        .unwrap();
    }
    out
}

/// Every node in rank order.
pub fn ranks_csv(r: Option<&RankResult>) -> String {
    let mut out = format!("{RANKS_HEADER}\n");
    if let Some(r) = r {
        for n in r.ranked() {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                csv_field(&n.node.key),
                n.node.kind,
                score(n.pagerank),
                n.weighted_in_degree,
                n.weighted_out_degree,
                score(n.minmax_rank)
            )
            .unwrap();
        }
    }
    out
}

/// The first `k` nodes in rank order (all of them if there are fewer).
pub fn top_ranked_csv(r: Option<&RankResult>, k: usize) -> String {
    let mut out = format!("{TOP_RANKED_HEADER}\n");
    if let Some(r) = r {
        for (i, n) in r.ranked().into_iter().take(k).enumerate() {
            writeln!(
                out,
                "{},{},{},{},{}",
                i + 1,
                csv_field(&n.node.key),
                n.node.kind,
                score(n.pagerank),
                score(n.minmax_rank)
            )
            .unwrap();
        }
    }
    out
}

/// Cluster membership, clusters numbered from 1 in the given order.
pub fn clusters_csv(g: &EventGraph, clusters: &[Vec<usize>]) -> String {
    let mut out = format!("{CLUSTERS_HEADER}\n");
    for (c, block) in clusters.iter().enumerate() {
        for &i in block {
            let n = &g.nodes()[i];
            writeln!(out, "{},{},{}", c + 1, csv_field(&n.key), n.kind).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgraph::{clusters, graph_stats, Node};
    use crate::rank::{rank_graph, Algorithm, RankParams};

    fn g() -> EventGraph {
        EventGraph::from_parts(
            [Node::protein("EPO"), Node::protein("VEGF"), Node::hub("Gene_expression")],
            [
                (Node::protein("EPO"), Node::hub("Gene_expression"), 2),
                (Node::protein("VEGF"), Node::hub("Gene_expression"), 1),
            ],
            [("Gene_expression".to_string(), 3), ("Binding".to_string(), 3), ("Transcription".to_string(), 5)]
                .into_iter()
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn histogram_order() {
        let csv = event_types_csv(&graph_stats(&g()));
        assert_eq!(csv, "event_type,count\nTranscription,5\nBinding,3\nGene_expression,3\n");
    }

    #[test]
    fn empty_graph_header_only() {
        let e = EventGraph::default();
        let s = graph_stats(&e);
        assert_eq!(event_types_csv(&s).lines().count(), 1);
        assert_eq!(network_stats_csv(&s, 0).lines().count(), 1);
        assert_eq!(ranks_csv(None).lines().count(), 1);
        assert_eq!(top_ranked_csv(None, 5).lines().count(), 1);
        assert_eq!(clusters_csv(&e, &clusters(&e)).lines().count(), 1);
    }

    #[test]
    fn top_k_clamps() {
        let r = rank_graph(&g(), Algorithm::Weighted, &RankParams::default()).unwrap();
        assert_eq!(top_ranked_csv(Some(&r), 100).lines().count(), 4);
        assert_eq!(top_ranked_csv(Some(&r), 1).lines().count(), 2);
        let first = ranks_csv(Some(&r));
        assert!(first.lines().nth(1).unwrap().starts_with("Gene_expression,EventHub,"));
    }
}
