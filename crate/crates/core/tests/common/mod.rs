//! Shared fixtures and independent checkers for the integration and
//! acceptance tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use eventrank::annot::{parse_standoff_with, realign, AnnotationSet, EventTypes, Target};
use eventrank::corpus::{parse_medline_str, MedlineRecord};
use eventrank::extract::Gazetteer;

pub mod gexf_check;
pub mod oracle;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn read(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap()
}

/// The three example listings, verbatim.
pub const LISTINGS: [(&str, u32); 3] = [("example1.ann", 27482003), ("example2.ann", 27732943), ("example3.ann", 22595196)];

pub fn records() -> BTreeMap<u32, MedlineRecord> {
    let parsed = parse_medline_str(&read("examples.medline"));
    assert!(parsed.warnings.is_empty(), "{:?}", parsed.warnings);
    parsed.records.into_iter().map(|r| (r.pmid, r)).collect()
}

pub fn listing(name: &str) -> AnnotationSet {
    parse_standoff_with(&read(name), &EventTypes::default()).unwrap()
}

/// Protein text-bounds of a printed listing moved onto the fixture text.
pub fn gold_proteins(name: &str, doc_text: &str) -> AnnotationSet {
    let (aligned, missing) = realign(&listing(name).proteins_only(), doc_text);
    assert!(missing.is_empty(), "{name}: {missing:?} not found in text");
    aligned
}

pub fn bundled_gazetteer() -> Gazetteer {
    Gazetteer::parse(eventrank::extract::DEFAULT_GAZETTEER).unwrap()
}

/// Event signature: type plus sorted (role, canonical target) pairs.
pub type Signature = (String, Vec<(String, String)>);

pub fn canonical(set: &AnnotationSet, t: Target, g: &Gazetteer) -> String {
    match t {
        Target::Tb(id) => {
            let s = set.textbounds[&id].surface.clone().unwrap_or_default();
            g.canonicalize(&s).map(str::to_string).unwrap_or(s)
        }
        Target::Ev(id) => format!("event:{}", set.events[&id].event_type),
    }
}

pub fn signatures(set: &AnnotationSet, g: &Gazetteer) -> Vec<Signature> {
    set.events
        .values()
        .map(|e| {
            let mut args: Vec<(String, String)> =
                e.args.iter().map(|(r, t)| (r.to_string(), canonical(set, *t, g))).collect();
            args.sort();
            (e.event_type.name().to_string(), args)
        })
        .collect()
}

/// Printed signatures missing from `got`, counting multiplicity.
pub fn missing(expected: &[Signature], got: &[Signature]) -> Vec<Signature> {
    let mut pool: BTreeMap<&Signature, usize> = BTreeMap::new();
    for s in got {
        *pool.entry(s).or_default() += 1;
    }
    let mut out = Vec::new();
    for s in expected {
        match pool.get_mut(s) {
            Some(n) if *n > 0 => *n -= 1,
            _ => out.push(s.clone()),
        }
    }
    out
}

/// Collapses whitespace runs and sorts lines.
pub fn normalized_lines(text: &str) -> Vec<String> {
    let mut v: Vec<String> = text
        .lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
        .filter(|l| !l.is_empty())
        .collect();
    v.sort();
    v
}

/// Hand-enumerated edges of the combined Examples 1-3 graph under the
/// default counting rule.
pub fn expected_edges(collapse: bool) -> BTreeSet<(String, String, u64)> {
    [
        ("ADORA2B", "Phosphorylation", 1),
        ("AGTR1", "Binding", if collapse { 1 } else { 2 }),
        ("AMPK", "Phosphorylation", 1),
        ("AMPK", "Positive_regulation", 1),
        ("BPGM", "Phosphorylation", 1),
        ("EPAS1", "Binding", 1),
        ("hemoglobin", "Binding", 1),
    ]
    .into_iter()
    .map(|(p, h, w)| (p.to_string(), h.to_string(), w))
    .collect()
}
