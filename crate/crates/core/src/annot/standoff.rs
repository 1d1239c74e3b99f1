//! Reading and writing the line-oriented standoff listing.
//!
//! ```text
//! T1 Protein 365 387 A2B adenosine receptor
//! T1038 Phosphorylation 390 405
//! E117 Phosphorylation: T1038 Theme: T1
//! ```
//!
//! Fields may be separated by any run of spaces or tabs. Type labels may
//! contain spaces (`Positive regulation`); they are stored in underscore form.

use std::fmt::Write as _;

use super::types::{
    normalize_label, AnnotationSet, BioEvent, EntityKind, EvId, EventType, EventTypes, Role,
    Target, TbId, TextBound,
};
use super::AnnotError;

/// Marker line introducing a document in a concatenated listing.
pub const PMID_MARKER: &str = "#PMID";

/// How event-type labels are written out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelStyle {
    /// `Positive_regulation`
    #[default]
    Underscore,
    /// `Positive regulation`
    Spaced,
}

impl LabelStyle {
    fn label(self, t: &EventType) -> String {
        match self {
            LabelStyle::Underscore => t.name().to_string(),
            LabelStyle::Spaced => t.spaced_name(),
        }
    }
}

pub fn parse_standoff(text: &str) -> Result<AnnotationSet, AnnotError> {
    parse_standoff_with(text, &EventTypes::default())
}

/// Parses a single-document listing. `#PMID <n>` lines set the document id;
/// other `#` lines and blank lines are skipped.
pub fn parse_standoff_with(text: &str, types: &EventTypes) -> Result<AnnotationSet, AnnotError> {
    let mut set = AnnotationSet::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some(pmid) = parse_pmid_marker(line, line_no)? {
            if set.doc_pmid.is_some() || !set.is_empty() {
                return Err(AnnotError::syntax(
                    line_no,
                    "second document marker in a single-document listing",
                ));
            }
            set.doc_pmid = Some(pmid);
            continue;
        }
        if line.trim_start().starts_with('#') {
            continue;
        }
        parse_line(line, line_no, types, &mut set)?;
    }
    Ok(set)
}

/// Parses a concatenated listing in which each document starts with a
/// `#PMID <n>` line.
pub fn parse_standoff_stream(
    text: &str,
    types: &EventTypes,
) -> Result<Vec<AnnotationSet>, AnnotError> {
    let mut sets: Vec<AnnotationSet> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some(pmid) = parse_pmid_marker(line, line_no)? {
            sets.push(AnnotationSet::new(Some(pmid)));
            continue;
        }
        if line.trim_start().starts_with('#') {
            continue;
        }
        if sets.is_empty() {
            sets.push(AnnotationSet::new(None));
        }
        let current = sets.last_mut().expect("pushed above");
        parse_line(line, line_no, types, current)?;
    }
    Ok(sets)
}

fn parse_pmid_marker(line: &str, line_no: usize) -> Result<Option<u32>, AnnotError> {
    let trimmed = line.trim();
    let Some(rest) = trimmed.strip_prefix(PMID_MARKER) else {
        return Ok(None);
    };
    if !rest.is_empty() && !rest.starts_with([' ', '\t']) {
        return Ok(None);
    }
    rest.trim()
        .parse::<u32>()
        .ok()
        .filter(|p| *p > 0)
        .map(Some)
        .ok_or_else(|| AnnotError::syntax(line_no, "malformed #PMID marker"))
}

fn parse_line(
    line: &str,
    line_no: usize,
    types: &EventTypes,
    set: &mut AnnotationSet,
) -> Result<(), AnnotError> {
    let trimmed = line.trim_start();
    match trimmed.chars().next() {
        Some('T') => {
            let tb = parse_textbound(trimmed, line_no, types)?;
            if set.textbounds.contains_key(&tb.id) {
                return Err(AnnotError::DuplicateId {
                    line: line_no,
                    id: tb.id.to_string(),
                });
            }
            set.textbounds.insert(tb.id, tb);
        }
        Some('E') => {
            let ev = parse_event(trimmed, line_no, types)?;
            if set.events.contains_key(&ev.id) {
                return Err(AnnotError::DuplicateId {
                    line: line_no,
                    id: ev.id.to_string(),
                });
            }
            set.events.insert(ev.id, ev);
        }
        _ => return Err(AnnotError::syntax(line_no, "expected a T or E line")),
    }
    Ok(())
}

/// Whitespace-separated fields with their byte offsets in `line`.
fn fields(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        let ws = c == ' ' || c == '\t';
        match (ws, start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out
}

fn parse_numeric_id(token: &str, prefix: char) -> Option<u32> {
    let digits = token.strip_prefix(prefix)?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

fn resolve_kind(label: &str, line_no: usize, types: &EventTypes) -> Result<EntityKind, AnnotError> {
    if label == "Protein" {
        return Ok(EntityKind::Protein);
    }
    types
        .resolve(label)
        .map(EntityKind::Trigger)
        .ok_or_else(|| AnnotError::UnknownType {
            line: line_no,
            label: label.to_string(),
        })
}

fn parse_textbound(line: &str, line_no: usize, types: &EventTypes) -> Result<TextBound, AnnotError> {
    let f = fields(line);
    let id = parse_numeric_id(f[0].1, 'T')
        .map(TbId)
        .ok_or_else(|| AnnotError::syntax(line_no, format!("bad text-bound id {:?}", f[0].1)))?;
    // The kind label runs until the first pair of consecutive integers.
    let pos = (2..f.len().saturating_sub(1))
        .find(|&i| f[i].1.parse::<usize>().is_ok() && f[i + 1].1.parse::<usize>().is_ok())
        .ok_or_else(|| AnnotError::syntax(line_no, "text-bound needs a kind and two offsets"))?;
    let label = normalize_label(
        &f[1..pos]
            .iter()
            .map(|(_, s)| *s)
            .collect::<Vec<_>>()
            .join(" "),
    );
    let kind = resolve_kind(&label, line_no, types)?;
    let start: usize = f[pos].1.parse().expect("checked above");
    let end: usize = f[pos + 1].1.parse().expect("checked above");
    if start >= end {
        return Err(AnnotError::syntax(
            line_no,
            format!("span start {start} is not before end {end}"),
        ));
    }
    let surface = f.get(pos + 2).map(|(off, _)| line[*off..].trim_end().to_string());
    Ok(TextBound {
        id,
        kind,
        start,
        end,
        surface,
    })
}

fn parse_target(token: &str) -> Option<Target> {
    parse_numeric_id(token, 'T')
        .map(|n| Target::Tb(TbId(n)))
        .or_else(|| parse_numeric_id(token, 'E').map(|n| Target::Ev(EvId(n))))
}

fn parse_event(line: &str, line_no: usize, types: &EventTypes) -> Result<BioEvent, AnnotError> {
    let f = fields(line);
    let id = parse_numeric_id(f[0].1, 'E')
        .map(EvId)
        .ok_or_else(|| AnnotError::syntax(line_no, format!("bad event id {:?}", f[0].1)))?;
    let body_start = f
        .get(1)
        .map(|(off, _)| *off)
        .ok_or_else(|| AnnotError::syntax(line_no, "event has no type"))?;
    let body = &line[body_start..];
    let colon = body
        .find(':')
        .ok_or_else(|| AnnotError::syntax(line_no, "event type must end with ':'"))?;
    let label = normalize_label(&body[..colon]);
    let event_type = types
        .resolve(&label)
        .ok_or_else(|| AnnotError::UnknownType {
            line: line_no,
            label: label.clone(),
        })?;

    // Remaining items: trigger id, then `role: target` pairs; the space after
    // a colon is optional.
    let rest = &body[colon + 1..];
    let mut items: Vec<String> = Vec::new();
    for (_, tok) in fields(rest) {
        match items.last_mut() {
            Some(prev) if prev.ends_with(':') => prev.push_str(tok),
            _ => items.push(tok.to_string()),
        }
    }
    let mut iter = items.into_iter();
    let trigger_tok = iter
        .next()
        .ok_or_else(|| AnnotError::syntax(line_no, "event has no trigger"))?;
    let trigger = parse_numeric_id(&trigger_tok, 'T')
        .map(TbId)
        .ok_or_else(|| AnnotError::syntax(line_no, format!("bad trigger id {trigger_tok:?}")))?;
    let mut args = Vec::new();
    for item in iter {
        let (role, target) = item
            .split_once(':')
            .ok_or_else(|| AnnotError::syntax(line_no, format!("expected role:target, got {item:?}")))?;
        let role = Role::parse(role)
            .ok_or_else(|| AnnotError::syntax(line_no, format!("unknown role {role:?}")))?;
        let target = parse_target(target)
            .ok_or_else(|| AnnotError::syntax(line_no, format!("bad argument target {target:?}")))?;
        args.push((role, target));
    }
    if args.is_empty() {
        return Err(AnnotError::syntax(line_no, "event has no arguments"));
    }
    Ok(BioEvent {
        id,
        event_type,
        trigger,
        args,
    })
}

pub fn serialize_standoff(set: &AnnotationSet) -> Result<String, AnnotError> {
    serialize_standoff_with(set, LabelStyle::Underscore)
}

/// Writes one line per record: text-bounds then events, each in ascending
/// numeric id order, single-space separated.
pub fn serialize_standoff_with(set: &AnnotationSet, style: LabelStyle) -> Result<String, AnnotError> {
    check_references(set)?;
    let mut out = String::new();
    for tb in set.textbounds.values() {
        let kind = match &tb.kind {
            EntityKind::Protein => "Protein".to_string(),
            EntityKind::Trigger(t) => style.label(t),
        };
        write!(out, "{} {} {} {}", tb.id, kind, tb.start, tb.end).unwrap();
        if let Some(s) = &tb.surface {
            write!(out, " {s}").unwrap();
        }
        out.push('\n');
    }
    for ev in set.events.values() {
        write!(out, "{} {}: {}", ev.id, style.label(&ev.event_type), ev.trigger).unwrap();
        for (role, target) in &ev.args {
            write!(out, " {role}: {target}").unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

/// Writes several documents, each preceded by its `#PMID` marker.
pub fn serialize_standoff_stream(sets: &[AnnotationSet], style: LabelStyle) -> Result<String, AnnotError> {
    let mut out = String::new();
    for set in sets {
        if let Some(pmid) = set.doc_pmid {
            writeln!(out, "{PMID_MARKER} {pmid}").unwrap();
        }
        out.push_str(&serialize_standoff_with(set, style)?);
    }
    Ok(out)
}

fn check_references(set: &AnnotationSet) -> Result<(), AnnotError> {
    for ev in set.events.values() {
        if !set.textbounds.contains_key(&ev.trigger) {
            return Err(AnnotError::Dangling {
                event: ev.id.to_string(),
                target: ev.trigger.to_string(),
            });
        }
        for (_, target) in &ev.args {
            let present = match target {
                Target::Tb(id) => set.textbounds.contains_key(id),
                Target::Ev(id) => set.events.contains_key(id),
            };
            if !present {
                return Err(AnnotError::Dangling {
                    event: ev.id.to_string(),
                    target: target.to_string(),
                });
            }
        }
    }
    Ok(())
}
