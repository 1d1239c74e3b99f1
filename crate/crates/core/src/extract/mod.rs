//! Deterministic event extraction: sentence splitting, dictionary entity
//! matching, trigger lexicon lookup and argument patterns.

mod engine;
mod gazetteer;
mod lexicon;
mod patterns;
mod text;

use std::collections::BTreeMap;
use std::ops::Range;

use rayon::prelude::*;

use crate::annot::{AnnotationSet, BioEvent, EntityKind, EvId, EventTypes, Target, TbId, TextBound};

pub use engine::{apply_patterns, ProtoEvent};
pub use gazetteer::Gazetteer;
pub use lexicon::TriggerLexicon;
pub use patterns::{parse_pattern_line, parse_patterns, ArgPattern, Slot};
pub use text::{char_slice, split_sentences, tokenize, tokenize_with_sentences, Token};

pub const DEFAULT_LEXICON: &str = include_str!("../../resources/lexicon.tsv");
pub const DEFAULT_GAZETTEER: &str = include_str!("../../resources/gazetteer.tsv");
pub const DEFAULT_PATTERNS: &str = include_str!("../../resources/patterns.txt");

#[derive(Debug, thiserror::Error)]
pub enum ResourceError {
    #[error("{resource} line {line}: {message}")]
    Invalid {
        resource: String,
        line: usize,
        message: String,
    },
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl ResourceError {
    pub fn invalid(resource: &str, line: usize, message: impl Into<String>) -> Self {
        ResourceError::Invalid {
            resource: resource.to_string(),
            line,
            message: message.into(),
        }
    }
}

/// A typed span found in a document (character offsets).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mention {
    pub start: usize,
    pub end: usize,
    pub kind: EntityKind,
    pub surface: String,
    /// Gazetteer symbol, for dictionary-matched proteins.
    pub canonical: Option<String>,
}

impl Mention {
    fn overlaps(&self, other: &Mention) -> bool {
        self.start < other.end && other.start < self.end
    }
}

fn tokens_in(tokens: &[Token], range: &Range<usize>) -> Range<usize> {
    let a = tokens.partition_point(|t| t.start < range.start);
    let b = tokens.partition_point(|t| t.start < range.end);
    a..b
}

fn trigger_hits(tokens: &[Token], range: Range<usize>, lexicon: &TriggerLexicon) -> Vec<Mention> {
    tokens[range]
        .iter()
        .filter_map(|t| {
            lexicon.lookup(&t.lower).map(|ty| Mention {
                start: t.start,
                end: t.end,
                kind: EntityKind::Trigger(ty.clone()),
                surface: t.text.clone(),
                canonical: None,
            })
        })
        .collect()
}

fn entity_hits(tokens: &[Token], range: Range<usize>, doc_text: &str, gazetteer: &Gazetteer) -> Vec<Mention> {
    gazetteer
        .scan(tokens, range)
        .into_iter()
        .map(|(first, len, symbol)| {
            let (start, end) = (tokens[first].start, tokens[first + len - 1].end);
            Mention {
                start,
                end,
                kind: EntityKind::Protein,
                surface: char_slice(doc_text, start..end),
                canonical: Some(symbol.to_string()),
            }
        })
        .collect()
}

/// Trigger mentions in one sentence span of `doc_text`: every token whose
/// lowercase form starts with a lexicon pattern. Offsets are document
/// offsets.
pub fn match_triggers(doc_text: &str, sentence: Range<usize>, lexicon: &TriggerLexicon) -> Vec<Mention> {
    let tokens = tokenize(doc_text);
    let r = tokens_in(&tokens, &sentence);
    trigger_hits(&tokens, r, lexicon)
}

/// Protein mentions in one sentence span: leftmost-longest, non-overlapping,
/// case-insensitive dictionary matches carrying their canonical symbol.
pub fn match_entities(doc_text: &str, sentence: Range<usize>, gazetteer: &Gazetteer) -> Vec<Mention> {
    let tokens = tokenize(doc_text);
    let r = tokens_in(&tokens, &sentence);
    entity_hits(&tokens, r, doc_text, gazetteer)
}

/// Seam for trigger detection; the lexicon detector is the shipped one.
pub trait TriggerDetector: Send + Sync {
    fn detect(&self, doc_text: &str, tokens: &[Token], sentence: Range<usize>) -> Vec<Mention>;
}

pub struct LexiconDetector(pub TriggerLexicon);

impl TriggerDetector for LexiconDetector {
    fn detect(&self, _doc_text: &str, tokens: &[Token], sentence: Range<usize>) -> Vec<Mention> {
        let r = tokens_in(tokens, &sentence);
        trigger_hits(tokens, r, &self.0)
    }
}

/// Where protein entities come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EntityMode {
    /// Supplied Protein annotations only.
    Gold,
    /// Dictionary matches only; supplied annotations are ignored.
    Gazetteer,
    /// Supplied annotations plus dictionary matches that do not overlap them.
    #[default]
    GoldPlusGazetteer,
}

impl std::str::FromStr for EntityMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gold" => Ok(EntityMode::Gold),
            "gazetteer" => Ok(EntityMode::Gazetteer),
            "gold+gazetteer" | "gold-plus-gazetteer" => Ok(EntityMode::GoldPlusGazetteer),
            _ => Err(format!("unknown entity mode {s:?}")),
        }
    }
}

pub struct Extractor {
    pub detector: Box<dyn TriggerDetector>,
    pub gazetteer: Gazetteer,
    pub patterns: Vec<ArgPattern>,
    pub mode: EntityMode,
}

impl Extractor {
    pub fn new(lexicon: TriggerLexicon, gazetteer: Gazetteer, patterns: Vec<ArgPattern>) -> Self {
        Extractor {
            detector: Box::new(LexiconDetector(lexicon)),
            gazetteer,
            patterns,
            mode: EntityMode::default(),
        }
    }

    /// Extractor over the bundled lexicon, gazetteer and patterns.
    pub fn with_defaults() -> Result<Self, ResourceError> {
        let types = EventTypes::default();
        Ok(Self::new(
            TriggerLexicon::parse(DEFAULT_LEXICON, &types)?,
            Gazetteer::parse(DEFAULT_GAZETTEER)?,
            parse_patterns(DEFAULT_PATTERNS, &types)?,
        ))
    }

    /// Extracts events from one document.
    ///
    /// The result holds every protein entity (supplied ones keep their ids),
    /// the triggers used by some event, and the events. New ids continue
    /// after the largest supplied id.
    pub fn extract(&self, pmid: Option<u32>, doc_text: &str, gold: Option<&AnnotationSet>) -> AnnotationSet {
        let sentences = split_sentences(doc_text);
        let tokens = tokenize_with_sentences(doc_text, &sentences);
        let all = 0..doc_text.chars().count();

        // (existing id, mention)
        let mut entities: Vec<(Option<TbId>, Mention)> = Vec::new();
        let use_gold = matches!(self.mode, EntityMode::Gold | EntityMode::GoldPlusGazetteer);
        if let (true, Some(g)) = (use_gold, gold) {
            for tb in g.proteins() {
                entities.push((
                    Some(tb.id),
                    Mention {
                        start: tb.start,
                        end: tb.end,
                        kind: EntityKind::Protein,
                        surface: tb.surface.clone().unwrap_or_else(|| char_slice(doc_text, tb.start..tb.end)),
                        canonical: None,
                    },
                ));
            }
        }
        let gold_present = use_gold && gold.is_some();
        if self.mode != EntityMode::Gold || !gold_present {
            for m in entity_hits(&tokens, 0..tokens.len(), doc_text, &self.gazetteer) {
                if !entities.iter().any(|(_, e)| e.overlaps(&m)) {
                    entities.push((None, m));
                }
            }
        }
        entities.sort_by_key(|(id, m)| (m.start, m.end, *id));

        let triggers: Vec<Mention> = self
            .detector
            .detect(doc_text, &tokens, all)
            .into_iter()
            .filter(|t| !entities.iter().any(|(_, e)| e.overlaps(t)))
            .collect();

        let mentions: Vec<Mention> = entities.iter().map(|(_, m)| m.clone()).collect();
        let proto = apply_patterns(&tokens, &triggers, &mentions, &self.patterns);

        let mut set = AnnotationSet::new(pmid.or(gold.and_then(|g| g.doc_pmid)));
        let mut next_tb = gold.map_or(0, |g| g.next_tb_id());
        let mut entity_ids = Vec::with_capacity(entities.len());
        for (id, m) in &entities {
            let id = id.unwrap_or_else(|| {
                let id = TbId(next_tb);
                next_tb += 1;
                id
            });
            entity_ids.push(id);
            set.textbounds.insert(
                id,
                TextBound {
                    id,
                    kind: EntityKind::Protein,
                    start: m.start,
                    end: m.end,
                    surface: Some(m.surface.clone()),
                },
            );
        }

        let mut trigger_ids: BTreeMap<usize, TbId> = BTreeMap::new();
        let mut used: Vec<usize> = proto.iter().map(|p| p.trigger).collect();
        used.sort_by_key(|&i| (triggers[i].start, triggers[i].end, i));
        used.dedup();
        for i in used {
            let id = TbId(next_tb);
            next_tb += 1;
            trigger_ids.insert(i, id);
            let t = &triggers[i];
            set.textbounds.insert(
                id,
                TextBound {
                    id,
                    kind: t.kind.clone(),
                    start: t.start,
                    end: t.end,
                    surface: Some(t.surface.clone()),
                },
            );
        }

        let mut next_ev = gold.map_or(1, |g| g.next_ev_id());
        for p in proto {
            let id = EvId(next_ev);
            next_ev += 1;
            set.events.insert(
                id,
                BioEvent {
                    id,
                    event_type: p.event_type,
                    trigger: trigger_ids[&p.trigger],
                    args: p.args.iter().map(|(r, e)| (*r, Target::Tb(entity_ids[*e]))).collect(),
                },
            );
        }
        set
    }

    /// Extracts many documents in parallel; output order follows input order.
    pub fn extract_all(&self, docs: &[(u32, String, Option<&AnnotationSet>)]) -> Vec<AnnotationSet> {
        docs.par_iter()
            .map(|(pmid, text, gold)| self.extract(Some(*pmid), text, *gold))
            .collect()
    }
}
