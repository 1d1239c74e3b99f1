use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{Corpus, MedlineRecord};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchCounts {
    pub label: String,
    pub total: usize,
    pub duplicates: usize,
    pub unique: usize,
    pub missing_abstract: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DedupReport {
    pub batches: Vec<BatchCounts>,
    /// PMIDs seen again with a different title or abstract.
    pub conflicts: Vec<u32>,
}

impl DedupReport {
    pub fn total_in(&self) -> usize {
        self.batches.iter().map(|b| b.total).sum()
    }

    pub fn duplicates_removed(&self) -> usize {
        self.batches.iter().map(|b| b.duplicates).sum()
    }

    pub fn unique_out(&self) -> usize {
        self.batches.iter().map(|b| b.unique).sum()
    }

    pub fn missing_abstract(&self) -> usize {
        self.batches.iter().map(|b| b.missing_abstract).sum()
    }

    /// `batch,total,duplicates,unique` with one row per batch and a final
    /// `TOTAL` row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("batch,total,duplicates,unique\n");
        for b in &self.batches {
            writeln!(
                out,
                "{},{},{},{}",
                csv_field(&b.label),
                b.total,
                b.duplicates,
                b.unique
            )
            .unwrap();
        }
        writeln!(
            out,
            "TOTAL,{},{},{}",
            self.total_in(),
            self.duplicates_removed(),
            self.unique_out()
        )
        .unwrap();
        out
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Merges labelled batches keeping the first occurrence of every PMID
/// (batch order, then record order).
pub fn dedup<L, I>(batches: I) -> Corpus
where
    L: Into<String>,
    I: IntoIterator<Item = (L, Vec<MedlineRecord>)>,
{
    let mut kept: Vec<MedlineRecord> = Vec::new();
    let mut index: BTreeMap<u32, usize> = BTreeMap::new();
    let mut report = DedupReport::default();

    for (label, records) in batches {
        let label = label.into();
        let mut counts = BatchCounts {
            label: label.clone(),
            total: records.len(),
            duplicates: 0,
            unique: 0,
            missing_abstract: 0,
        };
        for mut record in records {
            if let Some(&at) = index.get(&record.pmid) {
                counts.duplicates += 1;
                let first = &kept[at];
                if first.title != record.title || first.abstract_text != record.abstract_text {
                    log::warn!(
                        "PMID {} in batch {label:?} conflicts with an earlier copy; keeping the first",
                        record.pmid
                    );
                    report.conflicts.push(record.pmid);
                }
                continue;
            }
            if record.abstract_text.is_empty() {
                counts.missing_abstract += 1;
            }
            if record.source_query.is_none() {
                record.source_query = Some(label.clone());
            }
            counts.unique += 1;
            index.insert(record.pmid, kept.len());
            kept.push(record);
        }
        report.batches.push(counts);
    }

    Corpus {
        records: kept,
        report,
    }
}
