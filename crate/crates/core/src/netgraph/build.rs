use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::annot::{AnnotationSet, BioEvent, Role, TbId};
use crate::extract::Gazetteer;

use super::{EventGraph, Node};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildOptions {
    /// Count a mirrored Binding pair (Theme/Theme2 swapped, same trigger) as
    /// one event instance.
    pub collapse_mirrors: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildWarning {
    /// No gazetteer entry; the raw mention became the node key.
    RawKey { pmid: Option<u32>, id: TbId, key: String },
    /// A protein text-bound without surface text.
    NoSurface { pmid: Option<u32>, id: TbId },
}

impl fmt::Display for BuildWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let doc = |p: &Option<u32>| p.map_or_else(|| "?".to_string(), |p| p.to_string());
        match self {
            BuildWarning::RawKey { pmid, id, key } => {
                write!(f, "PMID {} {id}: no canonical form for {key:?}, using it verbatim", doc(pmid))
            }
            BuildWarning::NoSurface { pmid, id } => {
                write!(f, "PMID {} {id}: protein has no surface text, keyed by id", doc(pmid))
            }
        }
    }
}

fn swapped(args: &[(Role, crate::annot::Target)]) -> Vec<(Role, crate::annot::Target)> {
    let mut out: Vec<_> = args
        .iter()
        .map(|(r, t)| {
            let r = match r {
                Role::Theme => Role::Theme2,
                Role::Theme2 => Role::Theme,
                r => *r,
            };
            (r, *t)
        })
        .collect();
    out.sort();
    out
}

fn sorted(args: &[(Role, crate::annot::Target)]) -> Vec<(Role, crate::annot::Target)> {
    let mut a = args.to_vec();
    a.sort();
    a
}

/// Events of one document to count, skipping second halves of mirrored
/// pairs when requested.
fn counted_events(set: &AnnotationSet, collapse: bool) -> Vec<&BioEvent> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for ev in set.events.values() {
        if collapse {
            let key = (ev.event_type.clone(), ev.trigger, sorted(&ev.args));
            if seen.contains(&key) {
                continue;
            }
            seen.insert((ev.event_type.clone(), ev.trigger, swapped(&ev.args)));
            seen.insert(key);
        }
        out.push(ev);
    }
    out
}

/// Builds the event network.
///
/// Each event instance adds 1 to the edge between its type's hub and every
/// distinct canonical protein among its arguments; nested event arguments
/// contribute their (transitive) themes.
pub fn build_graph(
    corpus_events: &[(u32, AnnotationSet)],
    gazetteer: &Gazetteer,
    options: BuildOptions,
) -> (EventGraph, Vec<BuildWarning>) {
    let mut weights: BTreeMap<(String, String), u64> = BTreeMap::new();
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut warnings = Vec::new();
    let mut warned: BTreeSet<(Option<u32>, TbId)> = BTreeSet::new();

    for (pmid, set) in corpus_events {
        let pmid = Some(*pmid).or(set.doc_pmid);
        for ev in counted_events(set, options.collapse_mirrors) {
            let hub = ev.event_type.name().to_string();
            *counts.entry(hub.clone()).or_default() += 1;
            let mut keys = BTreeSet::new();
            for id in set.event_proteins(ev) {
                let tb = &set.textbounds[&id];
                let key = match tb.surface.as_deref().map(str::trim) {
                    Some(s) if !s.is_empty() => match gazetteer.canonicalize(s) {
                        Some(sym) => sym.to_string(),
                        None => {
                            if warned.insert((pmid, id)) {
                                warnings.push(BuildWarning::RawKey { pmid, id, key: s.to_string() });
                            }
                            s.to_string()
                        }
                    },
                    _ => {
                        if warned.insert((pmid, id)) {
                            warnings.push(BuildWarning::NoSurface { pmid, id });
                        }
                        format!("{}:{id}", pmid.map_or(0, |p| p))
                    }
                };
                keys.insert(key);
            }
            for key in keys {
                *weights.entry((key, hub.clone())).or_default() += 1;
            }
        }
    }
    for w in &warnings {
        log::warn!("{w}");
    }

    let nodes: Vec<Node> = weights
        .keys()
        .flat_map(|(p, h)| [Node::protein(p.clone()), Node::hub(h.clone())])
        .collect();
    let edges = weights
        .into_iter()
        .map(|((p, h), w)| (Node::protein(p), Node::hub(h), w));
    let g = EventGraph::from_parts(nodes, edges, counts).expect("construction is bipartite by design");
    (g, warnings)
}
