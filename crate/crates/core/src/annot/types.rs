use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Identifier of a text-bound annotation (`T` + digits).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TbId(pub u32);

/// Identifier of an event annotation (`E` + digits).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EvId(pub u32);

impl fmt::Display for TbId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.0)
    }
}

impl fmt::Display for EvId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{}", self.0)
    }
}

/// Biomolecular event types. The nine built-in types follow the GENIA event
/// ontology; additional labels can be admitted through [`EventTypes`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventType {
    GeneExpression,
    Transcription,
    ProteinCatabolism,
    Phosphorylation,
    Localization,
    Binding,
    Regulation,
    PositiveRegulation,
    NegativeRegulation,
    Other(String),
}

impl EventType {
    pub const BUILTIN: [EventType; 9] = [
        EventType::GeneExpression,
        EventType::Transcription,
        EventType::ProteinCatabolism,
        EventType::Phosphorylation,
        EventType::Localization,
        EventType::Binding,
        EventType::Regulation,
        EventType::PositiveRegulation,
        EventType::NegativeRegulation,
    ];

    /// Canonical label, words joined by underscores (`Positive_regulation`).
    pub fn name(&self) -> &str {
        match self {
            EventType::GeneExpression => "Gene_expression",
            EventType::Transcription => "Transcription",
            EventType::ProteinCatabolism => "Protein_catabolism",
            EventType::Phosphorylation => "Phosphorylation",
            EventType::Localization => "Localization",
            EventType::Binding => "Binding",
            EventType::Regulation => "Regulation",
            EventType::PositiveRegulation => "Positive_regulation",
            EventType::NegativeRegulation => "Negative_regulation",
            EventType::Other(s) => s,
        }
    }

    /// Label with words separated by spaces (`Positive regulation`).
    pub fn spaced_name(&self) -> String {
        self.name().replace('_', " ")
    }

    pub fn builtin(label: &str) -> Option<EventType> {
        let norm = normalize_label(label);
        EventType::BUILTIN
            .iter()
            .find(|t| t.name().eq_ignore_ascii_case(&norm))
            .cloned()
    }
}

impl fmt::Display for EventType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Joins whitespace-separated words with `_`.
pub(crate) fn normalize_label(label: &str) -> String {
    label.split_whitespace().collect::<Vec<_>>().join("_")
}

/// The set of event-type labels a parser accepts: the built-in types plus any
/// configured extras.
#[derive(Debug, Clone, Default)]
pub struct EventTypes {
    extra: BTreeSet<String>,
}

impl EventTypes {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_extra<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let extra = labels
            .into_iter()
            .map(|s| normalize_label(s.as_ref()))
            .filter(|s| !s.is_empty() && EventType::builtin(s).is_none())
            .collect();
        EventTypes { extra }
    }

    pub fn resolve(&self, label: &str) -> Option<EventType> {
        if let Some(t) = EventType::builtin(label) {
            return Some(t);
        }
        let norm = normalize_label(label);
        self.extra.get(&norm).map(|s| EventType::Other(s.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityKind {
    Protein,
    Trigger(EventType),
}

impl EntityKind {
    pub fn event_type(&self) -> Option<&EventType> {
        match self {
            EntityKind::Protein => None,
            EntityKind::Trigger(t) => Some(t),
        }
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntityKind::Protein => f.write_str("Protein"),
            EntityKind::Trigger(t) => f.write_str(t.name()),
        }
    }
}

/// A `T` line: a typed character span of the document.
///
/// Offsets count Unicode scalar values, not bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextBound {
    pub id: TbId,
    pub kind: EntityKind,
    pub start: usize,
    pub end: usize,
    pub surface: Option<String>,
}

impl TextBound {
    pub fn width(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_protein(&self) -> bool {
        self.kind == EntityKind::Protein
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Theme,
    Theme2,
    Cause,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Theme => "Theme",
            Role::Theme2 => "Theme2",
            Role::Cause => "Cause",
        }
    }

    pub fn parse(s: &str) -> Option<Role> {
        match s {
            "Theme" => Some(Role::Theme),
            "Theme2" => Some(Role::Theme2),
            "Cause" => Some(Role::Cause),
            _ => None,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Event argument target: an entity or a nested event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Tb(TbId),
    Ev(EvId),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Tb(id) => id.fmt(f),
            Target::Ev(id) => id.fmt(f),
        }
    }
}

/// An `E` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BioEvent {
    pub id: EvId,
    pub event_type: EventType,
    pub trigger: TbId,
    pub args: Vec<(Role, Target)>,
}

impl BioEvent {
    pub fn targets(&self, role: Role) -> impl Iterator<Item = Target> + '_ {
        self.args
            .iter()
            .filter(move |(r, _)| *r == role)
            .map(|(_, t)| *t)
    }
}

/// All annotations of one document.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnnotationSet {
    pub doc_pmid: Option<u32>,
    pub textbounds: BTreeMap<TbId, TextBound>,
    pub events: BTreeMap<EvId, BioEvent>,
}

impl AnnotationSet {
    pub fn new(doc_pmid: Option<u32>) -> Self {
        AnnotationSet {
            doc_pmid,
            ..Default::default()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.textbounds.is_empty() && self.events.is_empty()
    }

    pub fn proteins(&self) -> impl Iterator<Item = &TextBound> {
        self.textbounds.values().filter(|t| t.is_protein())
    }

    pub fn next_tb_id(&self) -> u32 {
        self.textbounds.keys().next_back().map_or(0, |id| id.0 + 1)
    }

    pub fn next_ev_id(&self) -> u32 {
        self.events.keys().next_back().map_or(1, |id| id.0 + 1)
    }

    /// Copy of the set restricted to its Protein text-bounds.
    pub fn proteins_only(&self) -> AnnotationSet {
        AnnotationSet {
            doc_pmid: self.doc_pmid,
            textbounds: self
                .textbounds
                .iter()
                .filter(|(_, t)| t.is_protein())
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
            events: BTreeMap::new(),
        }
    }

    /// Every Protein text-bound reachable from `event` through Theme/Theme2
    /// arguments, following nested events. Cause arguments of the top-level
    /// event are included; nested events contribute only their themes.
    pub fn event_proteins(&self, event: &BioEvent) -> Vec<TbId> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for (_, target) in &event.args {
            self.collect_target(*target, &mut out, &mut seen);
        }
        out
    }

    fn collect_target(&self, target: Target, out: &mut Vec<TbId>, seen: &mut BTreeSet<EvId>) {
        match target {
            Target::Tb(id) => {
                if self.textbounds.get(&id).is_some_and(|t| t.is_protein()) {
                    out.push(id);
                }
            }
            Target::Ev(eid) => {
                if !seen.insert(eid) {
                    return;
                }
                if let Some(nested) = self.events.get(&eid) {
                    for (role, t) in &nested.args {
                        if matches!(role, Role::Theme | Role::Theme2) {
                            self.collect_target(*t, out, seen);
                        }
                    }
                }
            }
        }
    }
}
