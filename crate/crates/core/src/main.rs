use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use eventrank::corpus::{FetchConfig, PubmedClient};
use eventrank::export::pipeline::{self, Resources};
use eventrank::export::{run_pipeline, write_outputs, PipelineConfig};
use eventrank::netgraph::{build_graph, read_edge_list, BuildOptions, EventGraph};

#[derive(Parser)]
#[command(name = "eventrank", version, about = "Biomolecular event extraction and event-network ranking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Download MEDLINE records for a PubMed query.
    Fetch(FetchArgs),
    /// Parse and de-duplicate MEDLINE files.
    Ingest(Opts),
    /// Extract events (or load supplied ones) into a standoff stream.
    Extract(Opts),
    /// Build the event network from an events file.
    Graph(GraphArgs),
    /// Rank the nodes of an edge list.
    Rank(EdgesArgs),
    /// Extract the top-ranked subnetwork and its clusters.
    Subnet(EdgesArgs),
    /// Write the network as GEXF with rank attributes.
    Export(EdgesArgs),
    /// Run every stage and write a manifest.
    Run(Opts),
}

#[derive(Args)]
struct FetchArgs {
    #[arg(long)]
    query: String,
    #[arg(long, default_value_t = 10_000)]
    max_records: usize,
    #[arg(long)]
    api_key: Option<String>,
    #[arg(long)]
    base_url: Option<String>,
    /// MEDLINE output file.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args, Default)]
struct Opts {
    /// key=value configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, num_args = 1..)]
    medline: Vec<String>,
    #[arg(long, num_args = 1..)]
    ann: Vec<String>,
    #[arg(long)]
    lexicon: Option<String>,
    #[arg(long)]
    gazetteer: Option<String>,
    #[arg(long)]
    patterns: Option<String>,
    #[arg(long)]
    damping: Option<String>,
    /// Fixed normalization factor for the classic solver.
    #[arg(long = "norm-factor")]
    c: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    max_iters: Option<String>,
    #[arg(long)]
    sum_normalize: Option<String>,
    /// weighted | unweighted
    #[arg(long)]
    degree_mode: Option<String>,
    /// weighted | simple
    #[arg(long)]
    algorithm: Option<String>,
    #[arg(long)]
    top_k: Option<String>,
    #[arg(long)]
    min_weight: Option<String>,
    #[arg(long)]
    collapse_mirrors: bool,
    /// gold | gazetteer | gold+gazetteer
    #[arg(long)]
    entity_mode: Option<String>,
    /// Treat span/surface mismatches in supplied annotations as errors.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    out: Option<String>,
}

impl Opts {
    fn config(&self) -> anyhow::Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(p) => PipelineConfig::load(p)?,
            None => PipelineConfig::default(),
        };
        let here = Path::new("");
        if !self.medline.is_empty() {
            cfg.medline.clear();
        }
        if !self.ann.is_empty() {
            cfg.ann.clear();
        }
        for m in &self.medline {
            cfg.set("medline", m, here)?;
        }
        for a in &self.ann {
            cfg.set("ann", a, here)?;
        }
        let single = [
            ("lexicon", &self.lexicon),
            ("gazetteer", &self.gazetteer),
            ("patterns", &self.patterns),
            ("damping", &self.damping),
            ("c", &self.c),
            ("tol", &self.tol),
            ("max-iters", &self.max_iters),
            ("sum-normalize", &self.sum_normalize),
            ("degree-mode", &self.degree_mode),
            ("algorithm", &self.algorithm),
            ("top-k", &self.top_k),
            ("min-weight", &self.min_weight),
            ("entity-mode", &self.entity_mode),
            ("out", &self.out),
        ];
        for (k, v) in single {
            if let Some(v) = v {
                cfg.set(k, v, here)?;
            }
        }
        if self.collapse_mirrors {
            cfg.collapse_mirrors = true;
        }
        if self.strict {
            cfg.set("strict", "true", here)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct GraphArgs {
    /// Events file written by `extract`.
    #[arg(long)]
    events: PathBuf,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct EdgesArgs {
    /// Edge list written by `graph`.
    #[arg(long)]
    edges: PathBuf,
    #[command(flatten)]
    opts: Opts,
}

fn load_edges(path: &Path) -> anyhow::Result<EventGraph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_edge_list(&text).with_context(|| format!("parsing {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Fetch(a) => {
            let mut config = FetchConfig {
                api_key: a.api_key,
                ..Default::default()
            };
            if let Some(b) = a.base_url {
                config.base_url = b;
            }
            let bytes = PubmedClient::new(config).fetch(&a.query, a.max_records)?;
            std::fs::write(&a.output, bytes).with_context(|| format!("writing {}", a.output.display()))?;
        }
        Command::Ingest(o) => {
            let cfg = o.config()?;
            let corpus = pipeline::ingest(&cfg)?;
            write_outputs(&cfg.out, &pipeline::ingest_outputs(&corpus))?;
            log::info!("{} unique records", corpus.records.len());
        }
        Command::Extract(o) => {
            let cfg = o.config()?;
            let res = Resources::load(&cfg)?;
            let corpus = pipeline::ingest(&cfg)?;
            let gold = pipeline::load_annotations(&cfg, &corpus)?;
            let docs = pipeline::extract_events(&corpus, &gold, &res, &cfg)?;
            write_outputs(&cfg.out, &pipeline::events_output(&docs)?)?;
        }
        Command::Graph(a) => {
            let cfg = a.opts.config()?;
            let res = Resources::load(&cfg)?;
            let docs = pipeline::read_events(&a.events)?;
            let (g, _) = build_graph(
                &docs,
                &res.gazetteer,
                BuildOptions {
                    collapse_mirrors: cfg.collapse_mirrors,
                },
            );
            write_outputs(&cfg.out, &pipeline::graph_outputs(&g))?;
        }
        Command::Rank(a) => {
            let cfg = a.opts.config()?;
            let g = load_edges(&a.edges)?;
            let r = pipeline::rank(&g, &cfg)?;
            write_outputs(&cfg.out, &pipeline::rank_outputs(r.as_ref(), &cfg))?;
        }
        Command::Subnet(a) => {
            let cfg = a.opts.config()?;
            let g = load_edges(&a.edges)?;
            let r = pipeline::rank(&g, &cfg)?;
            let (sub, cl) = pipeline::subnetwork(&g, r.as_ref(), &cfg)?;
            write_outputs(&cfg.out, &pipeline::subnet_outputs(&g, r.as_ref(), &sub, &cl))?;
        }
        Command::Export(a) => {
            let cfg = a.opts.config()?;
            let g = load_edges(&a.edges)?;
            let r = pipeline::rank(&g, &cfg)?;
            write_outputs(&cfg.out, &pipeline::export_outputs(&g, r.as_ref()))?;
        }
        Command::Run(o) => {
            let cfg = o.config()?;
            let m = run_pipeline(&cfg)?;
            for (k, v) in &m.counts {
                log::info!("{k}={v}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
