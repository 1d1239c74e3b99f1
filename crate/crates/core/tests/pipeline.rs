mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::Command;

use common::gexf_check::validate_gexf;
use eventrank::export::pipeline::*;
use eventrank::export::{run_pipeline, PipelineConfig};

fn config(out: &Path) -> PipelineConfig {
    PipelineConfig {
        medline: vec![common::data("examples.medline")],
        ann: vec![common::data("examples.gold.ann")],
        out: out.to_path_buf(),
        ..Default::default()
    }
}

fn tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

fn text(files: &BTreeMap<String, Vec<u8>>, name: &str) -> String {
    String::from_utf8(files[name].clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn examples_run_produces_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let m = run_pipeline(&config(dir.path())).unwrap();
    let files = tree(dir.path());
    let expected: BTreeSet<&str> = [
        CORPUS_FILE, DEDUP_FILE, EVENTS_FILE, EDGES_FILE, EVENT_TYPES_FILE, NETWORK_STATS_FILE, RANKS_FILE,
        TOP_RANKED_FILE, CLUSTERS_FILE, NETWORK_GEXF, SUBNETWORK_GEXF, MANIFEST_FILE,
    ]
    .into_iter()
    .collect();
    assert_eq!(files.keys().map(String::as_str).collect::<BTreeSet<_>>(), expected);

    // Edge list matches the hand-enumerated network.
    let edges: BTreeSet<(String, String, u64)> = text(&files, EDGES_FILE)
        .lines()
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f[0].to_string(), f[1].to_string(), f[2].parse().unwrap())
        })
        .collect();
    assert_eq!(edges, common::expected_edges(false));

    assert_eq!(
        text(&files, EVENT_TYPES_FILE),
        "event_type,count\nBinding,4\nPhosphorylation,3\nPositive_regulation,1\n"
    );

    // Manifest counts agree with recounts of the artifacts.
    let ranks = rows(&text(&files, RANKS_FILE));
    let nodes: BTreeSet<&str> = edges.iter().flat_map(|(p, h, _)| [p.as_str(), h.as_str()]).collect();
    assert_eq!(m.count("nodes"), Some(nodes.len() as u64));
    assert_eq!(m.count("edges"), Some(edges.len() as u64));
    assert_eq!(ranks.len(), nodes.len());
    assert_eq!(m.count("records"), Some(3));
    assert_eq!(m.count("event_instances"), Some(8));
    let clusters = rows(&text(&files, CLUSTERS_FILE));
    let cluster_ids: BTreeSet<&str> = clusters.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(m.count("clusters"), Some(cluster_ids.len() as u64));
    assert_eq!(m.count("subnetwork_nodes"), Some(clusters.len() as u64));
    let stats = rows(&text(&files, NETWORK_STATS_FILE));
    assert_eq!(stats[0][0..2], [nodes.len().to_string(), edges.len().to_string()]);

    // Ranks: unit sum, both node kinds, sorted by score.
    let scores: Vec<f64> = ranks.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!((scores.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    assert!(scores.windows(2).all(|w| w[0] >= w[1]));
    let kinds: BTreeSet<&str> = ranks.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(kinds, ["EventHub", "GeneProtein"].into_iter().collect());
    let minmax: Vec<f64> = ranks.iter().map(|r| r[5].parse().unwrap()).collect();
    assert_eq!(minmax[0], 1.0);
    assert_eq!(*minmax.last().unwrap(), 0.0);

    // Manifest digests match the bytes on disk.
    let manifest = text(&files, MANIFEST_FILE);
    for (name, bytes) in &files {
        if name != MANIFEST_FILE {
            assert!(manifest.contains(&format!("output.{name}={}", sha256_hex(bytes))), "{name}");
        }
    }
}

#[test]
fn gexf_outputs_validate_and_carry_weights() {
    let dir = tempfile::tempdir().unwrap();
    run_pipeline(&config(dir.path())).unwrap();
    let files = tree(dir.path());
    let net = validate_gexf(&text(&files, NETWORK_GEXF)).unwrap();
    let got: BTreeSet<(String, String, u64)> =
        net.edges.iter().map(|(s, t, w)| (s.clone(), t.clone(), *w as u64)).collect();
    assert_eq!(got, common::expected_edges(false));
    assert_eq!(net.default_edge_type, "undirected");
    for (_, (_, attrs)) in &net.nodes {
        assert!(attrs.contains_key("pagerank") && attrs.contains_key("minmax_rank") && attrs.contains_key("kind"));
    }
    let sub = validate_gexf(&text(&files, SUBNETWORK_GEXF)).unwrap();
    for e in &sub.edges {
        assert!(net.edges.contains(e));
    }
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_pipeline(&config(a.path())).unwrap();
    run_pipeline(&config(b.path())).unwrap();
    assert_eq!(tree(a.path()), tree(b.path()));
}

#[test]
fn extraction_path_without_gold_events() {
    // Proteins only: events come from the extractor.
    let dir = tempfile::tempdir().unwrap();
    let recs = common::records();
    let sets: Vec<_> = common::LISTINGS
        .iter()
        .map(|(name, pmid)| {
            let mut set = common::gold_proteins(name, &recs[pmid].document_text());
            set.doc_pmid = Some(*pmid);
            set
        })
        .collect();
    let ann = eventrank::annot::serialize_standoff_stream(&sets, Default::default()).unwrap();
    let ann_path = dir.path().join("proteins.ann");
    std::fs::write(&ann_path, ann).unwrap();
    let out = dir.path().join("out");
    let cfg = PipelineConfig { ann: vec![ann_path], ..config(&out) };
    let m = run_pipeline(&cfg).unwrap();
    assert!(m.count("events").unwrap() >= 8);
    let files = tree(&out);
    let edges = text(&files, EDGES_FILE);
    for want in ["AGTR1\tBinding", "EPAS1\tBinding", "BPGM\tPhosphorylation", "AMPK\tPositive_regulation"] {
        assert!(edges.contains(want), "missing {want} in\n{edges}");
    }
}

#[test]
fn empty_corpus_gives_header_only_reports() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.medline");
    std::fs::write(&empty, "").unwrap();
    let out = dir.path().join("out");
    let cfg = PipelineConfig { medline: vec![empty], ann: vec![], ..config(&out) };
    let m = run_pipeline(&cfg).unwrap();
    assert_eq!(m.count("nodes"), Some(0));
    let files = tree(&out);
    for name in [EVENT_TYPES_FILE, NETWORK_STATS_FILE, RANKS_FILE, TOP_RANKED_FILE, CLUSTERS_FILE] {
        assert_eq!(text(&files, name).lines().count(), 1, "{name}");
    }
    validate_gexf(&text(&files, NETWORK_GEXF)).unwrap();
}

#[test]
fn failure_leaves_output_dir_untouched() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ann");
    std::fs::write(&bad, "#27482003\nT1\tProtein 0 5\tnope\nE1\tBinding:T9 Theme:T1\n").unwrap();
    let out = dir.path().join("out");
    let cfg = PipelineConfig { ann: vec![bad], ..config(&out) };
    let err = run_pipeline(&cfg).unwrap_err();
    assert_eq!(err.stage, "annotations");
    assert!(!out.exists() || std::fs::read_dir(&out).unwrap().next().is_none());
}

fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_eventrank"))
}

#[test]
fn cli_stages_match_run() {
    let dir = tempfile::tempdir().unwrap();
    let (medline, ann) = (common::data("examples.medline"), common::data("examples.gold.ann"));
    let run = |args: &[&str]| {
        let o = Command::new(bin()).args(args).output().unwrap();
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    };
    let d = |s: &str| dir.path().join(s).display().to_string();
    let (m, a) = (medline.display().to_string(), ann.display().to_string());
    run(&["run", "--medline", &m, "--ann", &a, "--out", &d("all")]);
    run(&["extract", "--medline", &m, "--ann", &a, "--out", &d("s")]);
    run(&["graph", "--events", &d("s/events.ann"), "--out", &d("s")]);
    run(&["rank", "--edges", &d("s/edges.tsv"), "--out", &d("s")]);
    run(&["subnet", "--edges", &d("s/edges.tsv"), "--out", &d("s")]);
    run(&["export", "--edges", &d("s/edges.tsv"), "--out", &d("s")]);
    let (all, staged) = (tree(&dir.path().join("all")), tree(&dir.path().join("s")));
    for name in [EDGES_FILE, RANKS_FILE, TOP_RANKED_FILE, CLUSTERS_FILE, NETWORK_GEXF, SUBNETWORK_GEXF] {
        assert_eq!(all[name], staged[name], "{name}");
    }
}

#[test]
fn cli_reports_bad_input() {
    let o = Command::new(bin()).args(["run", "--medline", "/no/such/file"]).output().unwrap();
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("does not exist"));
    let o = Command::new(bin()).args(["rank", "--edges", "/no/such", "--damping", "1.5"]).output().unwrap();
    assert!(!o.status.success());
}
