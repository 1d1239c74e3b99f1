//! PubMed retrieval through NCBI E-utilities (esearch for the PMID list,
//! efetch for MEDLINE text), plus an offline pass-through for saved exports.

use std::path::Path;
use std::thread;
use std::time::{Duration, Instant};

pub const EUTILS_BASE: &str = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils";

#[derive(Debug, thiserror::Error)]
pub enum FetchError {
    #[error("request to {url} failed after {attempts} attempts: {cause}")]
    Http {
        url: String,
        attempts: u32,
        cause: String,
    },
    #[error("unexpected esearch response: {0}")]
    BadResponse(String),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone)]
pub struct FetchConfig {
    pub base_url: String,
    /// Requests per second; NCBI allows 3 without an API key.
    pub rate_limit: f64,
    pub max_attempts: u32,
    pub initial_backoff: Duration,
    /// PMIDs requested per esearch page.
    pub search_page: usize,
    /// PMIDs per efetch request.
    pub fetch_batch: usize,
    pub api_key: Option<String>,
    pub timeout: Duration,
}

impl Default for FetchConfig {
    fn default() -> Self {
        FetchConfig {
            base_url: EUTILS_BASE.to_string(),
            rate_limit: 3.0,
            max_attempts: 4,
            initial_backoff: Duration::from_millis(500),
            search_page: 1000,
            fetch_batch: 200,
            api_key: None,
            timeout: Duration::from_secs(60),
        }
    }
}

pub struct PubmedClient {
    config: FetchConfig,
    agent: ureq::Agent,
    last_request: Option<Instant>,
}

impl PubmedClient {
    pub fn new(config: FetchConfig) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(config.timeout))
            .build()
            .new_agent();
        PubmedClient {
            config,
            agent,
            last_request: None,
        }
    }

    fn throttle(&mut self) {
        if self.config.rate_limit <= 0.0 {
            return;
        }
        let interval = Duration::from_secs_f64(1.0 / self.config.rate_limit);
        if let Some(last) = self.last_request {
            let elapsed = last.elapsed();
            if elapsed < interval {
                thread::sleep(interval - elapsed);
            }
        }
        self.last_request = Some(Instant::now());
    }

    fn get(&mut self, endpoint: &str, params: &[(&str, String)]) -> Result<String, FetchError> {
        let url = format!("{}/{endpoint}", self.config.base_url.trim_end_matches('/'));
        let mut backoff = self.config.initial_backoff;
        let mut last_err = String::new();
        for attempt in 1..=self.config.max_attempts.max(1) {
            self.throttle();
            let mut req = self.agent.get(&url);
            for (k, v) in params {
                req = req.query(*k, v);
            }
            if let Some(key) = &self.config.api_key {
                req = req.query("api_key", key);
            }
            match req.call().and_then(|mut r| r.body_mut().read_to_string()) {
                Ok(body) => return Ok(body),
                Err(e) => {
                    last_err = e.to_string();
                    log::warn!("{endpoint} attempt {attempt} failed: {last_err}");
                    if attempt < self.config.max_attempts {
                        thread::sleep(backoff);
                        backoff *= 2;
                    }
                }
            }
        }
        Err(FetchError::Http {
            url,
            attempts: self.config.max_attempts.max(1),
            cause: last_err,
        })
    }

    /// PMIDs matching `query`, at most `max_records`, in esearch order.
    pub fn search(&mut self, query: &str, max_records: usize) -> Result<Vec<u32>, FetchError> {
        let mut ids = Vec::new();
        while ids.len() < max_records {
            let page = self.config.search_page.min(max_records - ids.len()).max(1);
            let body = self.get(
                "esearch.fcgi",
                &[
                    ("db", "pubmed".into()),
                    ("term", query.into()),
                    ("retmode", "json".into()),
                    ("retstart", ids.len().to_string()),
                    ("retmax", page.to_string()),
                ],
            )?;
            let (count, page_ids) = parse_esearch(&body)?;
            let got = page_ids.len();
            ids.extend(page_ids);
            if got == 0 || ids.len() >= count {
                break;
            }
        }
        ids.truncate(max_records);
        Ok(ids)
    }

    /// MEDLINE text for `pmids`, concatenated in request order.
    pub fn fetch_medline(&mut self, pmids: &[u32]) -> Result<Vec<u8>, FetchError> {
        let mut out = Vec::new();
        for chunk in pmids.chunks(self.config.fetch_batch.max(1)) {
            let id_list = chunk
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let body = self.get(
                "efetch.fcgi",
                &[
                    ("db", "pubmed".into()),
                    ("id", id_list),
                    ("rettype", "medline".into()),
                    ("retmode", "text".into()),
                ],
            )?;
            if !out.is_empty() && !out.ends_with(b"\n\n") {
                out.extend_from_slice(if out.ends_with(b"\n") { b"\n" } else { b"\n\n" });
            }
            out.extend_from_slice(body.trim_start_matches('\n').as_bytes());
        }
        Ok(out)
    }

    /// esearch + efetch. An empty result set gives an empty stream.
    pub fn fetch(&mut self, query: &str, max_records: usize) -> Result<Vec<u8>, FetchError> {
        if max_records == 0 {
            return Ok(Vec::new());
        }
        let ids = self.search(query, max_records)?;
        if ids.is_empty() {
            return Ok(Vec::new());
        }
        self.fetch_medline(&ids)
    }
}

fn parse_esearch(body: &str) -> Result<(usize, Vec<u32>), FetchError> {
    let json: serde_json::Value =
        serde_json::from_str(body).map_err(|e| FetchError::BadResponse(e.to_string()))?;
    let result = json
        .get("esearchresult")
        .ok_or_else(|| FetchError::BadResponse("missing esearchresult".into()))?;
    let count = result
        .get("count")
        .and_then(|c| c.as_str().and_then(|s| s.parse().ok()).or_else(|| c.as_u64().map(|n| n as usize)))
        .unwrap_or(0);
    let ids = result
        .get("idlist")
        .and_then(|l| l.as_array())
        .ok_or_else(|| FetchError::BadResponse("missing idlist".into()))?
        .iter()
        .map(|v| {
            v.as_str()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| FetchError::BadResponse(format!("bad id {v}")))
        })
        .collect::<Result<Vec<u32>, _>>()?;
    Ok((count, ids))
}

/// Online fetch with the given configuration.
pub fn fetch_pubmed(query: &str, max_records: usize, config: FetchConfig) -> Result<Vec<u8>, FetchError> {
    PubmedClient::new(config).fetch(query, max_records)
}

/// Offline mode: the bytes of a previously saved export, unchanged.
pub fn fetch_offline(path: &Path) -> Result<Vec<u8>, FetchError> {
    std::fs::read(path).map_err(|source| FetchError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn esearch_json() {
        let body = r#"{"header":{},"esearchresult":{"count":"3","retmax":"3","idlist":["27732943","27482003","22595196"]}}"#;
        let (count, ids) = parse_esearch(body).unwrap();
        assert_eq!(count, 3);
        assert_eq!(ids, vec![27732943, 27482003, 22595196]);
        assert!(parse_esearch("{}").is_err());
    }

    #[test]
    fn zero_records_needs_no_network() {
        let config = FetchConfig {
            base_url: "http://127.0.0.1:9".into(),
            ..Default::default()
        };
        assert!(fetch_pubmed("High Altitude Illness", 0, config).unwrap().is_empty());
    }
}
