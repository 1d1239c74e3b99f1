use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::types::{AnnotationSet, EvId, Target, TbId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValidationMode {
    Strict,
    #[default]
    Lenient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FindingKind {
    DanglingReference { event: EvId, target: Target },
    DanglingTrigger { event: EvId, trigger: TbId },
    TriggerKindMismatch { event: EvId, trigger: TbId },
    EmptyArguments { event: EvId },
    EventCycle { events: Vec<EvId> },
    OffsetOutOfBounds { id: TbId, end: usize, text_len: usize },
    /// Span width differs from the surface length.
    SpanWidthMismatch { id: TbId, width: usize, surface_len: usize },
    /// Document text under the span differs from the surface.
    SpanTextMismatch { id: TbId, surface: String, found: String },
}

impl FindingKind {
    fn is_span_surface(&self) -> bool {
        matches!(
            self,
            FindingKind::SpanWidthMismatch { .. } | FindingKind::SpanTextMismatch { .. }
        )
    }
}

impl fmt::Display for FindingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FindingKind::DanglingReference { event, target } => {
                write!(f, "{event} references missing {target}")
            }
            FindingKind::DanglingTrigger { event, trigger } => {
                write!(f, "{event} has missing trigger {trigger}")
            }
            FindingKind::TriggerKindMismatch { event, trigger } => {
                write!(f, "{event} trigger {trigger} is not of the event's type")
            }
            FindingKind::EmptyArguments { event } => write!(f, "{event} has no arguments"),
            FindingKind::EventCycle { events } => {
                let ids: Vec<String> = events.iter().map(|e| e.to_string()).collect();
                write!(f, "event reference cycle through {}", ids.join(" -> "))
            }
            FindingKind::OffsetOutOfBounds { id, end, text_len } => {
                write!(f, "{id} ends at {end} beyond text length {text_len}")
            }
            FindingKind::SpanWidthMismatch {
                id,
                width,
                surface_len,
            } => write!(f, "{id} span width {width} vs surface length {surface_len}"),
            FindingKind::SpanTextMismatch { id, surface, found } => {
                write!(f, "{id} surface {surface:?} but text has {found:?}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub severity: Severity,
    pub kind: FindingKind,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{sev}: {}", self.kind)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }

    /// True when no finding has error severity.
    pub fn passed(&self) -> bool {
        self.findings.iter().all(|f| f.severity < Severity::Error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Warning)
    }
}

/// Checks references, trigger kinds, event cycles and, when the document text
/// is given, span bounds and surfaces. Span/surface disagreements are
/// warnings in lenient mode; everything else is an error.
pub fn validate(set: &AnnotationSet, doc_text: Option<&str>, mode: ValidationMode) -> ValidationReport {
    let mut kinds = Vec::new();

    for ev in set.events.values() {
        match set.textbounds.get(&ev.trigger) {
            None => kinds.push(FindingKind::DanglingTrigger {
                event: ev.id,
                trigger: ev.trigger,
            }),
            Some(tb) if tb.kind.event_type() != Some(&ev.event_type) => {
                kinds.push(FindingKind::TriggerKindMismatch {
                    event: ev.id,
                    trigger: ev.trigger,
                })
            }
            Some(_) => {}
        }
        if ev.args.is_empty() {
            kinds.push(FindingKind::EmptyArguments { event: ev.id });
        }
        for (_, target) in &ev.args {
            let present = match target {
                Target::Tb(id) => set.textbounds.contains_key(id),
                Target::Ev(id) => set.events.contains_key(id),
            };
            if !present {
                kinds.push(FindingKind::DanglingReference {
                    event: ev.id,
                    target: *target,
                });
            }
        }
    }

    if let Some(cycle) = find_cycle(set) {
        kinds.push(FindingKind::EventCycle { events: cycle });
    }

    let chars: Option<Vec<char>> = doc_text.map(|t| t.chars().collect());
    for tb in set.textbounds.values() {
        if let Some(chars) = &chars {
            if tb.end > chars.len() {
                kinds.push(FindingKind::OffsetOutOfBounds {
                    id: tb.id,
                    end: tb.end,
                    text_len: chars.len(),
                });
                continue;
            }
        }
        let Some(surface) = &tb.surface else { continue };
        let surface_len = surface.chars().count();
        if surface_len != tb.width() {
            kinds.push(FindingKind::SpanWidthMismatch {
                id: tb.id,
                width: tb.width(),
                surface_len,
            });
        } else if let Some(chars) = &chars {
            let found: String = chars[tb.start..tb.end].iter().collect();
            if &found != surface {
                kinds.push(FindingKind::SpanTextMismatch {
                    id: tb.id,
                    surface: surface.clone(),
                    found,
                });
            }
        }
    }

    let findings = kinds
        .into_iter()
        .map(|kind| {
            let severity = if mode == ValidationMode::Lenient && kind.is_span_surface() {
                Severity::Warning
            } else {
                Severity::Error
            };
            Finding { severity, kind }
        })
        .collect();
    ValidationReport { findings }
}

/// First cycle among event-to-event references, in id order.
fn find_cycle(set: &AnnotationSet) -> Option<Vec<EvId>> {
    let edges: BTreeMap<EvId, Vec<EvId>> = set
        .events
        .values()
        .map(|ev| {
            let nested = ev
                .args
                .iter()
                .filter_map(|(_, t)| match t {
                    Target::Ev(id) if set.events.contains_key(id) => Some(*id),
                    _ => None,
                })
                .collect();
            (ev.id, nested)
        })
        .collect();

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    let mut marks: BTreeMap<EvId, Mark> = BTreeMap::new();
    let mut done: BTreeSet<EvId> = BTreeSet::new();

    for &root in edges.keys() {
        if done.contains(&root) {
            continue;
        }
        // Iterative DFS keeping the current path.
        let mut path: Vec<(EvId, usize)> = vec![(root, 0)];
        marks.insert(root, Mark::Open);
        while let Some((node, next)) = path.last().copied() {
            let children = &edges[&node];
            if next < children.len() {
                path.last_mut().unwrap().1 += 1;
                let child = children[next];
                match marks.get(&child) {
                    Some(Mark::Open) => {
                        let pos = path.iter().position(|(n, _)| *n == child).unwrap();
                        let mut cycle: Vec<EvId> = path[pos..].iter().map(|(n, _)| *n).collect();
                        cycle.push(child);
                        return Some(cycle);
                    }
                    Some(Mark::Done) => {}
                    None => {
                        marks.insert(child, Mark::Open);
                        path.push((child, 0));
                    }
                }
            } else {
                marks.insert(node, Mark::Done);
                done.insert(node);
                path.pop();
            }
        }
    }
    None
}

/// Moves every text-bound that carries a surface onto the occurrence of that
/// surface in `doc_text` closest to its recorded start. Returns the adjusted
/// set and the ids whose surface does not occur in the text (left untouched).
pub fn realign(set: &AnnotationSet, doc_text: &str) -> (AnnotationSet, Vec<TbId>) {
    let chars: Vec<char> = doc_text.chars().collect();
    let mut out = set.clone();
    let mut missing = Vec::new();
    for tb in out.textbounds.values_mut() {
        let Some(surface) = &tb.surface else { continue };
        let needle: Vec<char> = surface.chars().collect();
        if needle.is_empty() || needle.len() > chars.len() {
            missing.push(tb.id);
            continue;
        }
        let best = (0..=chars.len() - needle.len())
            .filter(|&i| chars[i..i + needle.len()] == needle[..])
            .min_by_key(|&i| (i.abs_diff(tb.start), i));
        match best {
            Some(i) => {
                tb.start = i;
                tb.end = i + needle.len();
            }
            None => missing.push(tb.id),
        }
    }
    (out, missing)
}
