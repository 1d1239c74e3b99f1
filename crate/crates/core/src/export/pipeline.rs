//! Stage functions and the full `run` pipeline.
//!
//! Every stage produces named in-memory artifacts; [`write_outputs`] puts
//! them on disk through a staging directory so a failed run leaves nothing
//! half-written behind.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use sha2::{Digest, Sha256};

use crate::annot::{
    parse_standoff_stream, serialize_standoff_stream, validate, AnnotationSet, EventTypes, LabelStyle, Severity,
};
use crate::corpus::{dedup, parse_medline, write_medline, Corpus};
use crate::extract::{
    char_slice, parse_patterns, ArgPattern, Extractor, Gazetteer, TriggerLexicon, DEFAULT_GAZETTEER,
    DEFAULT_LEXICON, DEFAULT_PATTERNS,
};
use crate::netgraph::{build_graph, clusters, graph_stats, induced_subnetwork, write_edge_list, BuildOptions, EventGraph, Node};
use crate::rank::{rank_graph, RankResult};

use super::config::PipelineConfig;
use super::gexf::gexf_string;
use super::reports;

pub const CORPUS_FILE: &str = "corpus.medline";
pub const DEDUP_FILE: &str = "dedup.csv";
pub const EVENTS_FILE: &str = "events.ann";
pub const EDGES_FILE: &str = "edges.tsv";
pub const EVENT_TYPES_FILE: &str = "event_types.csv";
pub const NETWORK_STATS_FILE: &str = "network_stats.csv";
pub const RANKS_FILE: &str = "ranks.csv";
pub const TOP_RANKED_FILE: &str = "top_ranked.csv";
pub const CLUSTERS_FILE: &str = "clusters.csv";
pub const NETWORK_GEXF: &str = "network.gexf";
pub const SUBNETWORK_GEXF: &str = "subnetwork.gexf";
pub const MANIFEST_FILE: &str = "manifest.txt";

/// Named output files and their bytes.
pub type Outputs = BTreeMap<String, Vec<u8>>;

#[derive(Debug)]
pub struct PipelineError {
    pub stage: &'static str,
    pub source: anyhow::Error,
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} stage failed: {:#}", self.stage, self.source)
    }
}

impl std::error::Error for PipelineError {}

trait Stage<T> {
    fn stage(self, name: &'static str) -> Result<T, PipelineError>;
}

impl<T> Stage<T> for anyhow::Result<T> {
    fn stage(self, name: &'static str) -> Result<T, PipelineError> {
        self.map_err(|source| PipelineError { stage: name, source })
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read(path: &Path) -> anyhow::Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    String::from_utf8(read(path)?).with_context(|| format!("{} is not UTF-8", path.display()))
}

/// Lexicon, gazetteer and patterns, from files or the bundled defaults.
pub struct Resources {
    pub lexicon: TriggerLexicon,
    pub gazetteer: Gazetteer,
    pub patterns: Vec<ArgPattern>,
    /// (name, sha256) of each resource's text.
    pub digests: Vec<(String, String)>,
}

impl Resources {
    pub fn load(cfg: &PipelineConfig) -> anyhow::Result<Self> {
        let types = EventTypes::default();
        let text = |p: &Option<PathBuf>, bundled: &str| -> anyhow::Result<(String, String)> {
            match p {
                Some(p) => Ok((p.display().to_string(), read_text(p)?)),
                None => Ok(("<bundled>".to_string(), bundled.to_string())),
            }
        };
        let (ln, lt) = text(&cfg.lexicon, DEFAULT_LEXICON)?;
        let (gn, gt) = text(&cfg.gazetteer, DEFAULT_GAZETTEER)?;
        let (pn, pt) = text(&cfg.patterns, DEFAULT_PATTERNS)?;
        Ok(Resources {
            lexicon: TriggerLexicon::parse(&lt, &types)?,
            gazetteer: Gazetteer::parse(&gt)?,
            patterns: parse_patterns(&pt, &types)?,
            digests: vec![
                (format!("lexicon:{ln}"), sha256_hex(lt.as_bytes())),
                (format!("gazetteer:{gn}"), sha256_hex(gt.as_bytes())),
                (format!("patterns:{pn}"), sha256_hex(pt.as_bytes())),
            ],
        })
    }
}

/// Reads and de-duplicates the MEDLINE inputs; each file is one batch
/// labelled by its file name.
pub fn ingest(cfg: &PipelineConfig) -> anyhow::Result<Corpus> {
    let mut batches = Vec::new();
    for path in &cfg.medline {
        let parsed = parse_medline(&read(path)?);
        for w in &parsed.warnings {
            log::warn!("{}: {w}", path.display());
        }
        let label = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
        batches.push((label, parsed.records));
    }
    let mut corpus = dedup(batches);
    corpus.records.sort_by_key(|r| r.pmid);
    Ok(corpus)
}

pub fn ingest_outputs(corpus: &Corpus) -> Outputs {
    let mut out = Outputs::new();
    out.insert(CORPUS_FILE.into(), write_medline(&corpus.records).into_bytes());
    out.insert(DEDUP_FILE.into(), corpus.report.to_csv().into_bytes());
    out
}

/// Loads annotation files, keyed by PMID, and validates each set against its
/// document text when the corpus has it.
pub fn load_annotations(cfg: &PipelineConfig, corpus: &Corpus) -> anyhow::Result<BTreeMap<u32, AnnotationSet>> {
    let texts: BTreeMap<u32, String> = corpus.records.iter().map(|r| (r.pmid, r.document_text())).collect();
    let mut sets = BTreeMap::new();
    for path in &cfg.ann {
        let text = read_text(path)?;
        let parsed = parse_standoff_stream(&text, &EventTypes::default()).with_context(|| format!("parsing {}", path.display()))?;
        for set in parsed {
            let pmid = set
                .doc_pmid
                .ok_or_else(|| anyhow!("{}: annotations before the first #PMID line", path.display()))?;
            let report = validate(&set, texts.get(&pmid).map(String::as_str), cfg.validation);
            for f in &report.findings {
                match f.severity {
                    Severity::Warning => log::warn!("PMID {pmid}: {f}"),
                    Severity::Error => log::error!("PMID {pmid}: {f}"),
                }
            }
            if !report.passed() {
                let first = report.errors().next().expect("failed report has an error");
                bail!("{}: PMID {pmid} fails validation: {first}", path.display());
            }
            if sets.insert(pmid, set).is_some() {
                bail!("{}: PMID {pmid} annotated more than once", path.display());
            }
        }
    }
    Ok(sets)
}

/// Event annotations per document, ordered by PMID.
///
/// A supplied set that already holds events is used as is. A set with only
/// entities seeds extraction; documents without annotations go through
/// dictionary matching. Supplied event sets for documents outside the
/// corpus are kept as well.
pub fn extract_events(
    corpus: &Corpus,
    gold: &BTreeMap<u32, AnnotationSet>,
    res: &Resources,
    cfg: &PipelineConfig,
) -> anyhow::Result<Vec<(u32, AnnotationSet)>> {
    let mut extractor = Extractor::new(res.lexicon.clone(), res.gazetteer.clone(), res.patterns.clone());
    extractor.mode = cfg.entity_mode;

    let mut verbatim: BTreeMap<u32, AnnotationSet> = BTreeMap::new();
    let mut jobs = Vec::new();
    for r in &corpus.records {
        let text = r.document_text();
        match gold.get(&r.pmid) {
            Some(g) if !g.events.is_empty() => {
                verbatim.insert(r.pmid, with_surfaces(g, &text));
            }
            g => jobs.push((r.pmid, text, g)),
        }
    }
    let in_corpus: BTreeSet<u32> = corpus.records.iter().map(|r| r.pmid).collect();
    for (pmid, g) in gold {
        if in_corpus.contains(pmid) {
            continue;
        }
        if g.events.is_empty() {
            log::warn!("PMID {pmid}: annotated but not in the corpus and has no events; skipped");
        } else {
            verbatim.insert(*pmid, g.clone());
        }
    }

    let extracted = extractor.extract_all(&jobs);
    let mut all: BTreeMap<u32, AnnotationSet> = verbatim;
    for ((pmid, text, _), set) in jobs.iter().zip(extracted) {
        let report = validate(&set, Some(text), crate::annot::ValidationMode::Lenient);
        if !report.passed() {
            bail!("PMID {pmid}: extracted annotations fail validation: {}", report.errors().next().unwrap());
        }
        all.insert(*pmid, set);
    }
    Ok(all.into_iter().collect())
}

fn with_surfaces(set: &AnnotationSet, text: &str) -> AnnotationSet {
    let mut out = set.clone();
    for tb in out.textbounds.values_mut() {
        if tb.surface.is_none() {
            tb.surface = Some(char_slice(text, tb.start..tb.end));
        }
    }
    out
}

pub fn events_output(docs: &[(u32, AnnotationSet)]) -> anyhow::Result<Outputs> {
    let sets: Vec<AnnotationSet> = docs
        .iter()
        .map(|(pmid, s)| AnnotationSet {
            doc_pmid: Some(*pmid),
            ..s.clone()
        })
        .collect();
    let mut out = Outputs::new();
    out.insert(EVENTS_FILE.into(), serialize_standoff_stream(&sets, LabelStyle::Underscore)?.into_bytes());
    Ok(out)
}

/// Reads an events file written by the extract stage.
pub fn read_events(path: &Path) -> anyhow::Result<Vec<(u32, AnnotationSet)>> {
    let text = read_text(path)?;
    let sets = parse_standoff_stream(&text, &EventTypes::default()).with_context(|| format!("parsing {}", path.display()))?;
    sets.into_iter()
        .map(|s| {
            let pmid = s.doc_pmid.ok_or_else(|| anyhow!("{}: set without #PMID line", path.display()))?;
            Ok((pmid, s))
        })
        .collect()
}

pub fn graph_outputs(g: &EventGraph) -> Outputs {
    let stats = graph_stats(g);
    let mut out = Outputs::new();
    out.insert(EDGES_FILE.into(), write_edge_list(g).into_bytes());
    out.insert(EVENT_TYPES_FILE.into(), reports::event_types_csv(&stats).into_bytes());
    out.insert(
        NETWORK_STATS_FILE.into(),
        reports::network_stats_csv(&stats, clusters(g).len()).into_bytes(),
    );
    out
}

/// Ranks the graph; `None` for an empty graph.
pub fn rank(g: &EventGraph, cfg: &PipelineConfig) -> anyhow::Result<Option<RankResult>> {
    if g.is_empty() {
        return Ok(None);
    }
    Ok(Some(rank_graph(g, cfg.algorithm, &cfg.rank)?))
}

pub fn rank_outputs(r: Option<&RankResult>, cfg: &PipelineConfig) -> Outputs {
    let mut out = Outputs::new();
    out.insert(RANKS_FILE.into(), reports::ranks_csv(r).into_bytes());
    out.insert(TOP_RANKED_FILE.into(), reports::top_ranked_csv(r, cfg.top_k).into_bytes());
    out
}

/// Subnetwork around the `top_k` best-ranked nodes, thresholded at
/// `min_weight`, with its connected components.
pub fn subnetwork(g: &EventGraph, r: Option<&RankResult>, cfg: &PipelineConfig) -> anyhow::Result<(EventGraph, Vec<Vec<usize>>)> {
    let Some(r) = r else {
        return Ok((EventGraph::default(), Vec::new()));
    };
    let seeds: Vec<Node> = r.ranked().into_iter().take(cfg.top_k).map(|n| n.node.clone()).collect();
    let sub = induced_subnetwork(g, &seeds, cfg.min_weight)?;
    let cl = clusters(&sub);
    Ok((sub, cl))
}

/// Rank values of the full graph restricted to the nodes of `sub`.
fn restrict(r: &RankResult, full: &EventGraph, sub: &EventGraph) -> RankResult {
    let nodes = sub
        .nodes()
        .iter()
        .map(|n| r.nodes[full.index_of(n).expect("subgraph node")].clone())
        .collect();
    RankResult { nodes, ..r.clone() }
}

pub fn subnet_outputs(g: &EventGraph, r: Option<&RankResult>, sub: &EventGraph, cl: &[Vec<usize>]) -> Outputs {
    let mut out = Outputs::new();
    out.insert(CLUSTERS_FILE.into(), reports::clusters_csv(sub, cl).into_bytes());
    let sr = r.map(|r| restrict(r, g, sub));
    out.insert(SUBNETWORK_GEXF.into(), gexf_string(sub, sr.as_ref()).into_bytes());
    out
}

pub fn export_outputs(g: &EventGraph, r: Option<&RankResult>) -> Outputs {
    let mut out = Outputs::new();
    out.insert(NETWORK_GEXF.into(), gexf_string(g, r).into_bytes());
    out
}

/// Writes `files` into `dir`. Everything goes to a staging directory first
/// and is moved into place only once all files are written; on failure the
/// staging directory is removed and `dir` is left as it was.
pub fn write_outputs(dir: &Path, files: &Outputs) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let staging = dir.join(format!(".staging-{}", std::process::id()));
    let result = (|| -> anyhow::Result<()> {
        fs::create_dir_all(&staging).with_context(|| format!("creating {}", staging.display()))?;
        for (name, bytes) in files {
            let p = staging.join(name);
            fs::write(&p, bytes).with_context(|| format!("writing {}", p.display()))?;
        }
        for name in files.keys() {
            let to = dir.join(name);
            fs::rename(staging.join(name), &to).with_context(|| format!("moving output into {}", to.display()))?;
        }
        Ok(())
    })();
    let _ = fs::remove_dir_all(&staging);
    result
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunManifest {
    pub version: String,
    pub config: Vec<(String, String)>,
    pub inputs: Vec<(String, String)>,
    pub counts: Vec<(String, String)>,
    pub outputs: Vec<(String, String)>,
    /// Only recorded when `SOURCE_DATE_EPOCH` is set, so plain reruns stay
    /// byte-identical.
    pub timestamp: Option<String>,
}

impl RunManifest {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("tool=eventrank\nversion={}\n", self.version));
        if let Some(t) = &self.timestamp {
            s.push_str(&format!("source_date_epoch={t}\n"));
        }
        for (section, rows) in [
            ("config", &self.config),
            ("input", &self.inputs),
            ("count", &self.counts),
            ("output", &self.outputs),
        ] {
            for (k, v) in rows {
                s.push_str(&format!("{section}.{k}={v}\n"));
            }
        }
        s
    }

    /// Value of `count.<key>`.
    pub fn count(&self, key: &str) -> Option<u64> {
        self.counts.iter().find(|(k, _)| k == key).and_then(|(_, v)| v.parse().ok())
    }
}

/// Runs every stage and writes all outputs plus `manifest.txt` to
/// `cfg.out`.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunManifest, PipelineError> {
    cfg.validate().stage("config")?;
    let res = Resources::load(cfg).stage("resources")?;
    let corpus = ingest(cfg).stage("ingest")?;
    let gold = load_annotations(cfg, &corpus).stage("annotations")?;
    let docs = extract_events(&corpus, &gold, &res, cfg).stage("extract")?;
    let (g, warnings) = build_graph(
        &docs,
        &res.gazetteer,
        BuildOptions {
            collapse_mirrors: cfg.collapse_mirrors,
        },
    );
    let ranks = rank(&g, cfg).stage("rank")?;
    let (sub, cl) = subnetwork(&g, ranks.as_ref(), cfg).stage("subnet")?;

    let mut files = ingest_outputs(&corpus);
    files.extend(events_output(&docs).stage("extract")?);
    files.extend(graph_outputs(&g));
    files.extend(rank_outputs(ranks.as_ref(), cfg));
    files.extend(subnet_outputs(&g, ranks.as_ref(), &sub, &cl));
    files.extend(export_outputs(&g, ranks.as_ref()));

    let mut inputs = Vec::new();
    for p in cfg.medline.iter().chain(&cfg.ann) {
        let bytes = read(p).stage("manifest")?;
        inputs.push((p.display().to_string(), sha256_hex(&bytes)));
    }
    inputs.extend(res.digests.iter().cloned());

    let stats = graph_stats(&g);
    let events: usize = docs.iter().map(|(_, s)| s.events.len()).sum();
    let counts: Vec<(String, String)> = [
        ("records_in", corpus.report.total_in() as u64),
        ("duplicates_removed", corpus.report.duplicates_removed() as u64),
        ("records", corpus.records.len() as u64),
        ("annotated_documents", gold.len() as u64),
        ("event_documents", docs.len() as u64),
        ("events", events as u64),
        ("event_instances", stats.event_type_histogram.values().sum()),
        ("nodes", stats.node_count as u64),
        ("edges", stats.edge_count as u64),
        ("raw_key_warnings", warnings.len() as u64),
        ("subnetwork_nodes", sub.node_count() as u64),
        ("subnetwork_edges", sub.edge_count() as u64),
        ("clusters", cl.len() as u64),
        ("rank_iterations", ranks.as_ref().map_or(0, |r| r.iterations as u64)),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .chain(std::iter::once((
        "rank_converged".to_string(),
        ranks.as_ref().map_or(true, |r| r.converged).to_string(),
    )))
    .collect();

    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.snapshot(),
        inputs,
        counts,
        outputs: files.iter().map(|(k, v)| (k.clone(), sha256_hex(v))).collect(),
        timestamp: std::env::var("SOURCE_DATE_EPOCH").ok().filter(|s| !s.is_empty()),
    };
    files.insert(MANIFEST_FILE.into(), manifest.to_text().into_bytes());
    write_outputs(&cfg.out, &files).stage("write")?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn staging_is_cleaned_up() {
        let dir = tempfile::tempdir().unwrap();
        let mut files = Outputs::new();
        files.insert("a.txt".into(), b"x".to_vec());
        write_outputs(dir.path(), &files).unwrap();
        let names: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names, vec![std::ffi::OsString::from("a.txt")]);

        // A name that cannot be created fails and leaves no staging behind.
        files.insert("missing/sub/b.txt".into(), b"y".to_vec());
        assert!(write_outputs(dir.path(), &files).is_err());
        let names: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names.len(), 1);
    }

    #[test]
    fn empty_corpus_runs() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = PipelineConfig {
            out: dir.path().join("out"),
            ..Default::default()
        };
        let m = run_pipeline(&cfg).unwrap();
        assert_eq!(m.count("records"), Some(0));
        assert_eq!(m.count("nodes"), Some(0));
        let ranks = fs::read_to_string(cfg.out.join(RANKS_FILE)).unwrap();
        assert_eq!(ranks.lines().count(), 1);
    }

    #[test]
    fn stage_name_in_error() {
        let cfg = PipelineConfig {
            top_k: 0,
            ..Default::default()
        };
        let e = run_pipeline(&cfg).unwrap_err();
        assert_eq!(e.stage, "config");
        assert!(e.to_string().starts_with("config stage failed"));
    }
}
