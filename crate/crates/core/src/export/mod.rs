//! Pipeline orchestration and output writers (GEXF, CSV reports, manifest).

pub mod config;
pub mod gexf;
pub mod pipeline;
pub mod reports;

pub use config::PipelineConfig;
pub use gexf::{gexf_string, write_gexf, GEXF_NS};
pub use pipeline::{run_pipeline, write_outputs, Outputs, PipelineError, RunManifest};
