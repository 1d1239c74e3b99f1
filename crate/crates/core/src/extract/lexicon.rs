use std::collections::BTreeMap;

use crate::annot::{EventType, EventTypes};

use super::ResourceError;

/// Lowercase token prefixes mapped to event types. Prefix matching stands in
/// for lemmatization: "phosphorylat" covers phosphorylates, phosphorylating
/// and phosphorylation.
#[derive(Debug, Clone, Default)]
pub struct TriggerLexicon {
    // Longest prefix first.
    entries: Vec<(String, EventType)>,
}

impl TriggerLexicon {
    pub fn new<I, S>(entries: I) -> Result<Self, ResourceError>
    where
        I: IntoIterator<Item = (S, EventType)>,
        S: Into<String>,
    {
        let mut map: BTreeMap<String, EventType> = BTreeMap::new();
        for (pattern, ty) in entries {
            let pattern = pattern.into();
            if pattern.is_empty() {
                return Err(ResourceError::invalid("lexicon", 0, "empty pattern"));
            }
            if pattern.to_lowercase() != pattern {
                return Err(ResourceError::invalid(
                    "lexicon",
                    0,
                    format!("pattern {pattern:?} is not lowercase"),
                ));
            }
            match map.get(&pattern) {
                Some(existing) if *existing != ty => {
                    return Err(ResourceError::invalid(
                        "lexicon",
                        0,
                        format!("pattern {pattern:?} maps to both {existing} and {ty}"),
                    ))
                }
                _ => {
                    map.insert(pattern, ty);
                }
            }
        }
        let mut entries: Vec<(String, EventType)> = map.into_iter().collect();
        entries.sort_by(|a, b| b.0.chars().count().cmp(&a.0.chars().count()).then(a.0.cmp(&b.0)));
        Ok(TriggerLexicon { entries })
    }

    /// Parses `pattern<TAB>EventType` lines; `#` starts a comment line.
    pub fn parse(text: &str, types: &EventTypes) -> Result<Self, ResourceError> {
        let mut entries = Vec::new();
        let mut seen: BTreeMap<String, (usize, EventType)> = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (pattern, label) = line
                .split_once('\t')
                .ok_or_else(|| ResourceError::invalid("lexicon", line_no, "expected pattern<TAB>EventType"))?;
            let pattern = pattern.trim();
            let ty = types.resolve(label.trim()).ok_or_else(|| {
                ResourceError::invalid("lexicon", line_no, format!("unknown event type {:?}", label.trim()))
            })?;
            if pattern.is_empty() || pattern.to_lowercase() != pattern {
                return Err(ResourceError::invalid(
                    "lexicon",
                    line_no,
                    format!("pattern {pattern:?} must be non-empty lowercase"),
                ));
            }
            if let Some((first, other)) = seen.get(pattern) {
                if *other != ty {
                    return Err(ResourceError::invalid(
                        "lexicon",
                        line_no,
                        format!("pattern {pattern:?} already maps to {other} (line {first})"),
                    ));
                }
            }
            seen.insert(pattern.to_string(), (line_no, ty.clone()));
            entries.push((pattern.to_string(), ty));
        }
        Self::new(entries)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Event type of the longest pattern that prefixes `lower_token`.
    pub fn lookup(&self, lower_token: &str) -> Option<&EventType> {
        self.entries
            .iter()
            .find(|(p, _)| lower_token.starts_with(p.as_str()))
            .map(|(_, t)| t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn longest_prefix_wins() {
        let lex = TriggerLexicon::new([
            ("regulat", EventType::Regulation),
            ("upregulat", EventType::PositiveRegulation),
            ("express", EventType::GeneExpression),
        ])
        .unwrap();
        assert_eq!(lex.lookup("upregulates"), Some(&EventType::PositiveRegulation));
        assert_eq!(lex.lookup("regulation"), Some(&EventType::Regulation));
        assert_eq!(lex.lookup("kinase"), None);
    }

    #[test]
    fn rejects_conflicts_and_uppercase() {
        let text = "bind\tBinding\nbind\tRegulation\n";
        assert!(TriggerLexicon::parse(text, &EventTypes::default()).is_err());
        assert!(TriggerLexicon::parse("Bind\tBinding\n", &EventTypes::default()).is_err());
        assert!(TriggerLexicon::parse("bind\tNope\n", &EventTypes::default()).is_err());
        assert!(TriggerLexicon::parse("bind Binding\n", &EventTypes::default()).is_err());
    }

    #[test]
    fn repeated_identical_entry_is_fine() {
        let lex = TriggerLexicon::parse("# c\nbind\tBinding\nbind\tBinding\n", &EventTypes::default()).unwrap();
        assert_eq!(lex.len(), 1);
    }
}
