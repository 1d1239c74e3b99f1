//! Character-offset tokenization and rule-based sentence splitting.

use std::ops::Range;

/// Words that end in a period without ending a sentence.
const ABBREVIATIONS: &[&str] = &[
    "vs", "e.g", "i.e", "fig", "figs", "al", "et al", "cf", "approx", "ca", "no", "nos", "ref",
    "refs", "eq", "eqs", "resp", "dr", "mr", "mrs", "ms", "prof", "st", "vol", "p", "pp", "sp",
    "spp", "ver", "min", "max", "tab", "suppl",
];

/// Splits `text` into sentence spans (character offsets) that partition it.
///
/// A sentence ends after `.`, `!` or `?` (plus any closing quotes or
/// brackets) when followed by whitespace and an uppercase letter, unless the
/// word before a period is a known abbreviation or a single letter.
/// Trailing whitespace stays with the preceding sentence.
pub fn split_sentences(text: &str) -> Vec<Range<usize>> {
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    if n == 0 {
        return Vec::new();
    }
    let mut spans = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < n {
        let c = chars[i];
        if matches!(c, '.' | '!' | '?') {
            let mut j = i + 1;
            while j < n && matches!(chars[j], '"' | '\'' | ')' | ']' | '”' | '’') {
                j += 1;
            }
            let mut k = j;
            while k < n && chars[k].is_whitespace() {
                k += 1;
            }
            let boundary = k > j && k < n && chars[k].is_uppercase() && !(c == '.' && is_abbreviation(&chars[start..i]));
            if boundary {
                spans.push(start..k);
                start = k;
                i = k;
                continue;
            }
        }
        i += 1;
    }
    spans.push(start..n);
    spans
}

fn is_abbreviation(before: &[char]) -> bool {
    // Word immediately before the period, including inner periods ("e.g").
    let mut s = before.len();
    while s > 0 && (before[s - 1].is_alphanumeric() || before[s - 1] == '.') {
        s -= 1;
    }
    let word: String = before[s..].iter().collect::<String>().to_lowercase();
    if word.is_empty() {
        return false;
    }
    if word.chars().count() == 1 && word.chars().all(char::is_alphabetic) {
        return true;
    }
    if ABBREVIATIONS.contains(&word.as_str()) {
        return true;
    }
    // "et al."
    let tail: String = before[before.len().saturating_sub(6)..]
        .iter()
        .collect::<String>()
        .to_lowercase();
    tail.ends_with("et al")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// Character offsets into the document.
    pub start: usize,
    pub end: usize,
    pub text: String,
    pub lower: String,
    pub sentence: usize,
}

impl Token {
    pub fn is_word(&self) -> bool {
        self.text.chars().any(char::is_alphanumeric)
    }
}

fn is_joiner(c: char) -> bool {
    matches!(c, '-' | '\'' | '/' | '.' | ',' | '’')
}

/// Tokens: maximal runs of alphanumerics, optionally joined by `- ' / . ,`
/// between two alphanumerics ("AMP-activated", "2,3-BPG"); any other
/// non-space character is a one-character token.
pub fn tokenize(text: &str) -> Vec<Token> {
    tokenize_with_sentences(text, &[])
}

/// Like [`tokenize`], tagging each token with the index of the sentence
/// span containing its start.
pub fn tokenize_with_sentences(text: &str, sentences: &[Range<usize>]) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut sent = 0;
    while i < n {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_alphanumeric() {
            i += 1;
            while i < n {
                if chars[i].is_alphanumeric() {
                    i += 1;
                } else if is_joiner(chars[i]) && i + 1 < n && chars[i + 1].is_alphanumeric() {
                    i += 2;
                } else {
                    break;
                }
            }
        } else {
            i += 1;
        }
        while sent + 1 < sentences.len() && sentences[sent].end <= start {
            sent += 1;
        }
        let text: String = chars[start..i].iter().collect();
        tokens.push(Token {
            start,
            end: i,
            lower: text.to_lowercase(),
            text,
            sentence: sent,
        });
    }
    tokens
}

/// Slice of `text` between two character offsets.
pub fn char_slice(text: &str, range: Range<usize>) -> String {
    text.chars()
        .skip(range.start)
        .take(range.end.saturating_sub(range.start))
        .collect()
}
