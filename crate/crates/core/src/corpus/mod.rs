//! PubMed corpus assembly: MEDLINE parsing, PMID de-duplication across query
//! batches, and E-utilities retrieval.

mod dedup;
mod fetch;
mod medline;

pub(crate) use dedup::csv_field;
pub use dedup::{dedup, BatchCounts, DedupReport};
pub use fetch::{fetch_offline, fetch_pubmed, FetchConfig, FetchError, PubmedClient, EUTILS_BASE};
pub use medline::{
    parse_medline, parse_medline_reader, parse_medline_str, write_medline, MedlineParse,
    ParseWarning,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MedlineRecord {
    pub pmid: u32,
    pub title: String,
    pub abstract_text: String,
    pub source_query: Option<String>,
}

impl MedlineRecord {
    /// Title and abstract joined by one space; annotation offsets index
    /// this string.
    pub fn document_text(&self) -> String {
        if self.abstract_text.is_empty() {
            self.title.clone()
        } else {
            format!("{} {}", self.title, self.abstract_text)
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub records: Vec<MedlineRecord>,
    pub report: DedupReport,
}

impl Corpus {
    pub fn pmids(&self) -> Vec<u32> {
        self.records.iter().map(|r| r.pmid).collect()
    }
}
