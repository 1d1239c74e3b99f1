//! GEXF 1.2draft serialization for Gephi.

use std::fmt::Write as _;

use crate::netgraph::EventGraph;
use crate::rank::RankResult;

pub const GEXF_NS: &str = "http://www.gexf.net/1.2draft";

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            // Characters XML 1.0 cannot carry at all.
            c if (c as u32) < 0x20 && !matches!(c, '\t' | '\n' | '\r') => out.push('\u{FFFD}'),
            c => out.push(c),
        }
    }
    out
}

/// Renders `g` as a GEXF document. `ranks`, when given, must cover every
/// node of `g` in graph node order; nodes then carry `pagerank` and
/// `minmax_rank` values.
pub fn gexf_string(g: &EventGraph, ranks: Option<&RankResult>) -> String {
    if let Some(r) = ranks {
        assert_eq!(r.nodes.len(), g.node_count(), "rank result does not cover the graph");
    }
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        s,
        "<gexf xmlns=\"{GEXF_NS}\" xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" \
         xsi:schemaLocation=\"{GEXF_NS} {GEXF_NS}/gexf.xsd\" version=\"1.2\">"
    )
    .unwrap();
    writeln!(s, "  <meta>\n    <creator>eventrank {}</creator>", env!("CARGO_PKG_VERSION")).unwrap();
    s.push_str("    <description>Biomolecular event network: gene/protein nodes linked to event-type hubs</description>\n  </meta>\n");
    s.push_str("  <graph mode=\"static\" defaultedgetype=\"undirected\">\n");
    s.push_str("    <attributes class=\"node\">\n");
    s.push_str("      <attribute id=\"0\" title=\"kind\" type=\"string\"/>\n");
    s.push_str("      <attribute id=\"1\" title=\"pagerank\" type=\"double\"/>\n");
    s.push_str("      <attribute id=\"2\" title=\"minmax_rank\" type=\"double\"/>\n");
    s.push_str("    </attributes>\n");
    s.push_str("    <nodes>\n");
    for (i, n) in g.nodes().iter().enumerate() {
        writeln!(s, "      <node id=\"n{i}\" label=\"{}\">", escape(&n.key)).unwrap();
        s.push_str("        <attvalues>\n");
        writeln!(s, "          <attvalue for=\"0\" value=\"{}\"/>", n.kind).unwrap();
        if let Some(r) = ranks {
            let nr = &r.nodes[i];
            writeln!(s, "          <attvalue for=\"1\" value=\"{}\"/>", nr.pagerank).unwrap();
            writeln!(s, "          <attvalue for=\"2\" value=\"{}\"/>", nr.minmax_rank).unwrap();
        }
        s.push_str("        </attvalues>\n      </node>\n");
    }
    s.push_str("    </nodes>\n    <edges>\n");
    for (i, e) in g.edges().iter().enumerate() {
        writeln!(
            s,
            "      <edge id=\"e{i}\" source=\"n{}\" target=\"n{}\" weight=\"{}\"/>",
            e.protein, e.hub, e.weight
        )
        .unwrap();
    }
    s.push_str("    </edges>\n  </graph>\n</gexf>\n");
    s
}

/// Writes [`gexf_string`] to `path`.
pub fn write_gexf(g: &EventGraph, ranks: Option<&RankResult>, path: &std::path::Path) -> anyhow::Result<()> {
    use anyhow::Context;
    std::fs::write(path, gexf_string(g, ranks)).with_context(|| format!("writing {}", path.display()))
}
