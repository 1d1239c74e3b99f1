use std::collections::HashMap;

use super::text::{tokenize, Token};
use super::ResourceError;

/// Dictionary of gene/protein mentions and their canonical symbols.
///
/// Lookups are case-insensitive and aligned to token boundaries; a mention is
/// keyed by its lowercase token sequence.
#[derive(Debug, Clone, Default)]
pub struct Gazetteer {
    entries: HashMap<Vec<String>, Entry>,
    max_tokens: usize,
}

#[derive(Debug, Clone)]
struct Entry {
    mention: String,
    symbol: String,
}

fn key_of(text: &str) -> Vec<String> {
    tokenize(text).into_iter().map(|t| t.lower).collect()
}

impl Gazetteer {
    pub fn new<I, M, S>(entries: I) -> Result<Self, ResourceError>
    where
        I: IntoIterator<Item = (M, S)>,
        M: Into<String>,
        S: Into<String>,
    {
        let mut g = Gazetteer::default();
        for (mention, symbol) in entries {
            g.insert(mention.into(), symbol.into(), 0)?;
        }
        Ok(g)
    }

    fn insert(&mut self, mention: String, symbol: String, line: usize) -> Result<(), ResourceError> {
        let key = key_of(&mention);
        if key.is_empty() || symbol.trim().is_empty() {
            return Err(ResourceError::invalid("gazetteer", line, "empty mention or symbol"));
        }
        if let Some(existing) = self.entries.get(&key) {
            return Err(ResourceError::invalid(
                "gazetteer",
                line,
                format!("mention {mention:?} duplicates {:?}", existing.mention),
            ));
        }
        self.max_tokens = self.max_tokens.max(key.len());
        self.entries.insert(
            key,
            Entry {
                mention,
                symbol: symbol.trim().to_string(),
            },
        );
        Ok(())
    }

    /// Parses `mention<TAB>SYMBOL` lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, ResourceError> {
        let mut g = Gazetteer::default();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (mention, symbol) = line.split_once('\t').ok_or_else(|| {
                ResourceError::invalid("gazetteer", idx + 1, "expected mention<TAB>SYMBOL")
            })?;
            g.insert(mention.trim().to_string(), symbol.to_string(), idx + 1)?;
        }
        Ok(g)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Longest entry starting at `tokens[at]`: (token count, symbol).
    fn longest_at(&self, tokens: &[Token], at: usize, limit: usize) -> Option<(usize, &str)> {
        let max = self.max_tokens.min(limit.saturating_sub(at));
        (1..=max).rev().find_map(|len| {
            let key: Vec<String> = tokens[at..at + len].iter().map(|t| t.lower.clone()).collect();
            self.entries.get(&key).map(|e| (len, e.symbol.as_str()))
        })
    }

    /// Leftmost-longest, non-overlapping matches over `tokens[range]`.
    /// Returns (first token, token count, symbol).
    pub(crate) fn scan<'a>(&'a self, tokens: &[Token], range: std::ops::Range<usize>) -> Vec<(usize, usize, &'a str)> {
        let mut out = Vec::new();
        let mut i = range.start;
        while i < range.end {
            match self.longest_at(tokens, i, range.end) {
                Some((len, sym)) => {
                    out.push((i, len, sym));
                    i += len;
                }
                None => i += 1,
            }
        }
        out
    }

    /// Canonical symbol for a mention: the exact entry if there is one,
    /// otherwise the longest entry contained in it (leftmost on ties).
    pub fn canonicalize(&self, surface: &str) -> Option<&str> {
        let tokens = tokenize(surface);
        let mut best: Option<(usize, usize, &str)> = None;
        for i in 0..tokens.len() {
            if let Some((len, sym)) = self.longest_at(&tokens, i, tokens.len()) {
                let chars = tokens[i + len - 1].end - tokens[i].start;
                let better = match best {
                    None => true,
                    Some((blen, bchars, _)) => (len, chars) > (blen, bchars),
                };
                if better {
                    best = Some((len, chars, sym));
                }
            }
        }
        best.map(|(_, _, s)| s)
    }
}
