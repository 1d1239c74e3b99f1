//! Structural validator for the GEXF 1.2draft subset we emit, following the
//! element order, required attributes and enumerations of the published
//! schema.

use std::collections::{BTreeMap, BTreeSet};

use roxmltree::{Document, Node};

pub const NS: &str = "http://www.gexf.net/1.2draft";
const XSI: &str = "http://www.w3.org/2001/XMLSchema-instance";

#[derive(Debug, Default)]
pub struct GexfSummary {
    /// node id -> (label, attribute title -> value)
    pub nodes: BTreeMap<String, (String, BTreeMap<String, String>)>,
    /// (source label, target label, weight)
    pub edges: Vec<(String, String, f64)>,
    pub default_edge_type: String,
}

fn elements<'a, 'i>(n: Node<'a, 'i>) -> Result<Vec<Node<'a, 'i>>, String> {
    let mut out = Vec::new();
    for c in n.children() {
        if c.is_element() {
            if c.tag_name().namespace() != Some(NS) {
                return Err(format!("element {:?} outside the GEXF namespace", c.tag_name()));
            }
            out.push(c);
        } else if c.is_text() && !c.text().unwrap_or("").trim().is_empty() && n.tag_name().name() != "creator" && n.tag_name().name() != "description" && n.tag_name().name() != "keywords" {
            return Err(format!("unexpected text inside <{}>", n.tag_name().name()));
        }
    }
    Ok(out)
}

fn only_attrs(n: Node, allowed: &[&str]) -> Result<(), String> {
    for a in n.attributes() {
        if a.namespace() == Some(XSI) {
            continue;
        }
        if a.namespace().is_some() || !allowed.contains(&a.name()) {
            return Err(format!("attribute {:?} not allowed on <{}>", a.name(), n.tag_name().name()));
        }
    }
    Ok(())
}

fn req<'a>(n: Node<'a, '_>, name: &str) -> Result<&'a str, String> {
    n.attribute(name)
        .ok_or_else(|| format!("<{}> lacks required attribute {name}", n.tag_name().name()))
}

fn one_of(v: &str, allowed: &[&str], what: &str) -> Result<(), String> {
    if allowed.contains(&v) {
        Ok(())
    } else {
        Err(format!("{what} {v:?} not in {allowed:?}"))
    }
}

fn check_value(ty: &str, v: &str) -> Result<(), String> {
    let ok = match ty {
        "integer" | "long" => v.parse::<i64>().is_ok(),
        "double" | "float" => v.parse::<f64>().is_ok_and(f64::is_finite),
        "boolean" => matches!(v, "true" | "false" | "1" | "0"),
        _ => true,
    };
    if ok {
        Ok(())
    } else {
        Err(format!("value {v:?} is not a valid {ty}"))
    }
}

pub fn validate_gexf(xml: &str) -> Result<GexfSummary, String> {
    let doc = Document::parse(xml).map_err(|e| format!("not well-formed XML: {e}"))?;
    let root = doc.root_element();
    if root.tag_name().name() != "gexf" || root.tag_name().namespace() != Some(NS) {
        return Err("root element must be gexf in the 1.2draft namespace".into());
    }
    only_attrs(root, &["version", "variant"])?;
    if req(root, "version")? != "1.2" {
        return Err("gexf version must be 1.2".into());
    }
    let kids = elements(root)?;
    let (meta, rest) = match kids.first() {
        Some(k) if k.tag_name().name() == "meta" => (Some(*k), &kids[1..]),
        _ => (None, &kids[..]),
    };
    if let Some(m) = meta {
        only_attrs(m, &["lastmodifieddate"])?;
        for c in elements(m)? {
            one_of(c.tag_name().name(), &["creator", "keywords", "description"], "meta child")?;
            if c.children().any(|x| x.is_element()) {
                return Err("meta children hold text only".into());
            }
        }
    }
    let [graph] = rest else {
        return Err("gexf must contain exactly one graph after meta".into());
    };
    if graph.tag_name().name() != "graph" {
        return Err(format!("expected <graph>, found <{}>", graph.tag_name().name()));
    }
    only_attrs(*graph, &["mode", "defaultedgetype", "idtype", "timeformat"])?;
    if let Some(m) = graph.attribute("mode") {
        one_of(m, &["static", "dynamic"], "graph mode")?;
    }
    let det = graph.attribute("defaultedgetype").unwrap_or("undirected");
    one_of(det, &["directed", "undirected", "mutual"], "defaultedgetype")?;

    let mut summary = GexfSummary {
        default_edge_type: det.to_string(),
        ..Default::default()
    };
    let mut node_attrs: BTreeMap<String, (String, String)> = BTreeMap::new();
    let gkids = elements(*graph)?;
    let mut i = 0;
    while i < gkids.len() && gkids[i].tag_name().name() == "attributes" {
        let a = gkids[i];
        only_attrs(a, &["class", "mode", "start", "end"])?;
        let class = req(a, "class")?;
        one_of(class, &["node", "edge"], "attributes class")?;
        for at in elements(a)? {
            if at.tag_name().name() != "attribute" {
                return Err("attributes may only hold <attribute>".into());
            }
            only_attrs(at, &["id", "title", "type"])?;
            let id = req(at, "id")?.to_string();
            let title = req(at, "title")?.to_string();
            let ty = req(at, "type")?;
            one_of(ty, &["integer", "long", "double", "float", "boolean", "liststring", "string", "anyURI"], "attribute type")?;
            if class == "node" && node_attrs.insert(id.clone(), (title, ty.to_string())).is_some() {
                return Err(format!("attribute id {id} declared twice"));
            }
        }
        i += 1;
    }
    let names: Vec<&str> = gkids[i..].iter().map(|n| n.tag_name().name()).collect();
    if names != ["nodes", "edges"] {
        return Err(format!("graph must hold attributes*, nodes, edges; found {names:?}"));
    }
    let (nodes, edges) = (gkids[i], gkids[i + 1]);
    only_attrs(nodes, &["count"])?;
    only_attrs(edges, &["count"])?;

    for n in elements(nodes)? {
        if n.tag_name().name() != "node" {
            return Err("nodes may only hold <node>".into());
        }
        only_attrs(n, &["id", "label", "pid", "start", "end"])?;
        let id = req(n, "id")?.to_string();
        let label = n.attribute("label").unwrap_or("").to_string();
        let mut values = BTreeMap::new();
        let nk = elements(n)?;
        if nk.len() > 1 {
            return Err(format!("node {id}: unexpected children"));
        }
        for av in nk {
            if av.tag_name().name() != "attvalues" {
                return Err(format!("node {id}: unexpected <{}>", av.tag_name().name()));
            }
            let vals = elements(av)?;
            if vals.is_empty() {
                return Err(format!("node {id}: empty attvalues"));
            }
            for v in vals {
                if v.tag_name().name() != "attvalue" {
                    return Err("attvalues may only hold <attvalue>".into());
                }
                only_attrs(v, &["for", "value", "start", "end"])?;
                let f = req(v, "for")?;
                let (title, ty) = node_attrs
                    .get(f)
                    .ok_or_else(|| format!("node {id}: attvalue for undeclared attribute {f}"))?;
                let value = req(v, "value")?;
                check_value(ty, value)?;
                values.insert(title.clone(), value.to_string());
            }
        }
        if summary.nodes.insert(id.clone(), (label, values)).is_some() {
            return Err(format!("duplicate node id {id}"));
        }
    }

    let mut edge_ids = BTreeSet::new();
    for e in elements(edges)? {
        if e.tag_name().name() != "edge" {
            return Err("edges may only hold <edge>".into());
        }
        only_attrs(e, &["id", "source", "target", "label", "type", "weight", "start", "end"])?;
        let id = req(e, "id")?;
        if !edge_ids.insert(id.to_string()) {
            return Err(format!("duplicate edge id {id}"));
        }
        if let Some(t) = e.attribute("type") {
            one_of(t, &["directed", "undirected", "mutual"], "edge type")?;
        }
        let (s, t) = (req(e, "source")?, req(e, "target")?);
        let label = |x: &str| -> Result<String, String> {
            summary
                .nodes
                .get(x)
                .map(|(l, _)| l.clone())
                .ok_or_else(|| format!("edge {id} references unknown node {x}"))
        };
        let w: f64 = match e.attribute("weight") {
            Some(w) => w.parse().map_err(|_| format!("edge {id}: bad weight {w:?}"))?,
            None => 1.0,
        };
        let (sl, tl) = (label(s)?, label(t)?);
        summary.edges.push((sl, tl, w));
    }
    Ok(summary)
}
