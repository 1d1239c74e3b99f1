//! NLM MEDLINE flat-file reader and writer, restricted to PMID, TI and AB.
//!
//! A field starts with a tag of up to four characters, left-justified and
//! padded to four columns, followed by `- `. Continuation lines are indented
//! six spaces. Records are separated by blank lines.

use std::fmt::Write as _;
use std::io::BufRead;

use super::MedlineRecord;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseWarning {
    /// A record block had no PMID line; it was skipped.
    MissingPmid { line: usize },
    /// A PMID block had no title; it was skipped.
    MissingTitle { pmid: u32 },
    /// A line that is neither a tag line nor a continuation was ignored.
    MalformedLine { line: usize, text: String },
    /// A PMID value that is not a positive integer.
    BadPmid { line: usize, value: String },
}

impl std::fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseWarning::MissingPmid { line } => {
                write!(f, "record ending at line {line} has no PMID; skipped")
            }
            ParseWarning::MissingTitle { pmid } => write!(f, "PMID {pmid} has no title; skipped"),
            ParseWarning::MalformedLine { line, text } => {
                write!(f, "line {line}: malformed tag line {text:?}; ignored")
            }
            ParseWarning::BadPmid { line, value } => {
                write!(f, "line {line}: invalid PMID {value:?}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MedlineParse {
    pub records: Vec<MedlineRecord>,
    pub warnings: Vec<ParseWarning>,
}

#[derive(Default)]
struct Block {
    pmid: Option<u32>,
    seen_pmid_line: bool,
    title: Option<String>,
    abstract_text: Option<String>,
    has_content: bool,
    // Field currently receiving continuation lines.
    current: Option<Field>,
}

#[derive(Clone, Copy, PartialEq)]
enum Field {
    Title,
    Abstract,
    Ignored,
}

fn append(slot: &mut Option<String>, text: &str) {
    let text = text.trim();
    match slot {
        Some(s) if !text.is_empty() => {
            if !s.is_empty() {
                s.push(' ');
            }
            s.push_str(text);
        }
        Some(_) => {}
        None => *slot = Some(text.to_string()),
    }
}

/// Splits a tag line into (tag, value). Tags are 1-4 uppercase letters or
/// digits, padded with spaces to column 4, then `-`.
fn split_tag_line(line: &str) -> Option<(&str, &str)> {
    if line.len() < 5 || !line.is_char_boundary(4) {
        return None;
    }
    let (head, rest) = line.split_at(4);
    let tag = head.trim_end();
    if tag.is_empty()
        || !tag
            .bytes()
            .all(|b| b.is_ascii_uppercase() || b.is_ascii_digit())
        || head[tag.len()..].bytes().any(|b| b != b' ')
    {
        return None;
    }
    let value = rest.strip_prefix('-')?;
    Some((tag, value.strip_prefix(' ').unwrap_or(value)))
}

impl Block {
    fn finish(self, line: usize, out: &mut MedlineParse) {
        if !self.has_content {
            return;
        }
        let Some(pmid) = self.pmid else {
            if !self.seen_pmid_line {
                out.warnings.push(ParseWarning::MissingPmid { line });
            }
            return;
        };
        let title = self.title.unwrap_or_default();
        if title.is_empty() {
            out.warnings.push(ParseWarning::MissingTitle { pmid });
            return;
        }
        out.records.push(MedlineRecord {
            pmid,
            title,
            abstract_text: self.abstract_text.unwrap_or_default(),
            source_query: None,
        });
    }
}

pub fn parse_medline(raw: &[u8]) -> MedlineParse {
    parse_medline_str(&String::from_utf8_lossy(raw))
}

pub fn parse_medline_reader<R: BufRead>(reader: R) -> std::io::Result<MedlineParse> {
    let mut buf = Vec::new();
    let mut reader = reader;
    reader.read_to_end(&mut buf)?;
    Ok(parse_medline(&buf))
}

pub fn parse_medline_str(text: &str) -> MedlineParse {
    let mut out = MedlineParse::default();
    let mut block = Block::default();
    let mut line_no = 0;
    for (idx, raw) in text.lines().enumerate() {
        line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            std::mem::take(&mut block).finish(line_no, &mut out);
            continue;
        }
        if line.starts_with("      ") || line.starts_with('\t') {
            match block.current {
                Some(Field::Title) => append(&mut block.title, line),
                Some(Field::Abstract) => append(&mut block.abstract_text, line),
                Some(Field::Ignored) => {}
                None => out.warnings.push(ParseWarning::MalformedLine {
                    line: line_no,
                    text: line.to_string(),
                }),
            }
            continue;
        }
        let Some((tag, value)) = split_tag_line(line) else {
            out.warnings.push(ParseWarning::MalformedLine {
                line: line_no,
                text: line.to_string(),
            });
            block.current = None;
            continue;
        };
        if tag == "PMID" && block.seen_pmid_line {
            // Records not separated by a blank line.
            std::mem::take(&mut block).finish(line_no, &mut out);
        }
        block.has_content = true;
        match tag {
            "PMID" => {
                block.seen_pmid_line = true;
                match value.trim().parse::<u32>() {
                    Ok(p) if p > 0 => block.pmid = Some(p),
                    _ => out.warnings.push(ParseWarning::BadPmid {
                        line: line_no,
                        value: value.trim().to_string(),
                    }),
                }
                block.current = Some(Field::Ignored);
            }
            "TI" => {
                append(&mut block.title, value);
                block.current = Some(Field::Title);
            }
            "AB" => {
                append(&mut block.abstract_text, value);
                block.current = Some(Field::Abstract);
            }
            _ => block.current = Some(Field::Ignored),
        }
    }
    block.finish(line_no + 1, &mut out);
    for w in &out.warnings {
        log::warn!("medline: {w}");
    }
    out
}

const WRAP: usize = 88;

fn write_field(out: &mut String, tag: &str, value: &str) {
    let mut line = String::new();
    let mut first = true;
    for word in value.split_whitespace() {
        if !line.is_empty() && line.len() + 1 + word.len() > WRAP {
            push_line(out, tag, &line, first);
            first = false;
            line.clear();
        }
        if !line.is_empty() {
            line.push(' ');
        }
        line.push_str(word);
    }
    if !line.is_empty() || first {
        push_line(out, tag, &line, first);
    }
}

fn push_line(out: &mut String, tag: &str, text: &str, first: bool) {
    if first {
        writeln!(out, "{tag:<4}- {text}").unwrap();
    } else {
        writeln!(out, "      {text}").unwrap();
    }
}

/// Writes records as MEDLINE text (PMID, TI, AB only), folding long values.
pub fn write_medline(records: &[MedlineRecord]) -> String {
    let mut out = String::new();
    for (i, r) in records.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        writeln!(out, "PMID- {}", r.pmid).unwrap();
        write_field(&mut out, "TI", &r.title);
        if !r.abstract_text.is_empty() {
            write_field(&mut out, "AB", &r.abstract_text);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE_2: &str = "PMID- 27732943
OWN - NLM
TI  - Angiotensin II Receptor 1 gene variants are associated with high-altitude pulmonary edema risk.
AB  - Previous studies demonstrated that Angiotensin II Receptor 1 (AGTR1) may play an
      important role in the development of high-altitude pulmonary edema.
FAU - Doe, Jane
";

    #[test]
    fn parses_three_fields() {
        let parsed = parse_medline(EXAMPLE_2.as_bytes());
        assert!(parsed.warnings.is_empty());
        assert_eq!(parsed.records.len(), 1);
        let r = &parsed.records[0];
        assert_eq!(r.pmid, 27732943);
        assert_eq!(
            r.title,
            "Angiotensin II Receptor 1 gene variants are associated with high-altitude pulmonary edema risk."
        );
        assert!(r.abstract_text.starts_with("Previous studies demonstrated"));
        assert!(r.abstract_text.contains("may play an important role"));
    }

    #[test]
    fn empty_input() {
        assert_eq!(parse_medline(b""), MedlineParse::default());
    }

    #[test]
    fn block_without_pmid_is_skipped() {
        let text = "TI  - orphan title\n\nPMID- 5\nTI  - kept\n";
        let parsed = parse_medline_str(text);
        assert_eq!(parsed.records.len(), 1);
        assert_eq!(parsed.records[0].pmid, 5);
        assert_eq!(parsed.warnings, vec![ParseWarning::MissingPmid { line: 2 }]);
    }

    #[test]
    fn malformed_line_is_ignored() {
        let text = "PMID- 7\nthis is not a tag line\nTI  - A title\n";
        let parsed = parse_medline_str(text);
        assert_eq!(parsed.records[0].title, "A title");
        assert!(matches!(
            parsed.warnings[..],
            [ParseWarning::MalformedLine { line: 2, .. }]
        ));
    }

    #[test]
    fn records_without_blank_separator() {
        let text = "PMID- 1\nTI  - one\nPMID- 2\nTI  - two\n";
        let parsed = parse_medline_str(text);
        assert_eq!(
            parsed.records.iter().map(|r| r.pmid).collect::<Vec<_>>(),
            vec![1, 2]
        );
    }

    #[test]
    fn missing_abstract_kept() {
        let parsed = parse_medline_str("PMID- 9\nTI  - Only a title.\n");
        assert_eq!(parsed.records[0].abstract_text, "");
    }

    #[test]
    fn crlf_input() {
        let parsed = parse_medline_str("PMID- 3\r\nTI  - first\r\n      second\r\n");
        assert_eq!(parsed.records[0].title, "first second");
    }

    #[test]
    fn write_then_parse() {
        let parsed = parse_medline(EXAMPLE_2.as_bytes());
        let text = write_medline(&parsed.records);
        assert!(text.lines().all(|l| l.len() <= WRAP + 6));
        assert_eq!(parse_medline_str(&text).records, parsed.records);
    }
}
