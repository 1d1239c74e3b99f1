//! Argument pattern mini-language.
//!
//! ```text
//! binding-pair: ENTITY GAP(2) TRIGGER(Binding) XGAP(12) ENTITY => Theme=1,Theme2=5
//! ```
//!
//! Slots are matched against consecutive tokens. `GAP(n)` skips up to `n`
//! tokens of the same sentence, `XGAP(n)` may also cross sentence ends.
//! Role bindings refer to 1-based slot positions, which must be `ENTITY`
//! slots.

use std::fmt;

use crate::annot::{EventType, EventTypes, Role};

use super::ResourceError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slot {
    Entity,
    /// `None` accepts any trigger type (`TRIGGER(*)`).
    Trigger(Option<EventType>),
    Gap(usize),
    CrossGap(usize),
    /// Lowercase word matched case-insensitively against one token.
    Literal(String),
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Entity => f.write_str("ENTITY"),
            Slot::Trigger(None) => f.write_str("TRIGGER(*)"),
            Slot::Trigger(Some(t)) => write!(f, "TRIGGER({t})"),
            Slot::Gap(n) => write!(f, "GAP({n})"),
            Slot::CrossGap(n) => write!(f, "XGAP({n})"),
            Slot::Literal(w) => write!(f, "LITERAL({w})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgPattern {
    pub name: String,
    pub slots: Vec<Slot>,
    /// Role and 0-based slot index.
    pub roles: Vec<(Role, usize)>,
}

impl ArgPattern {
    pub fn new(name: impl Into<String>, slots: Vec<Slot>, roles: Vec<(Role, usize)>) -> Result<Self, ResourceError> {
        let p = ArgPattern {
            name: name.into(),
            slots,
            roles,
        };
        p.check().map_err(|m| ResourceError::invalid("patterns", 0, m))?;
        Ok(p)
    }

    fn check(&self) -> Result<(), String> {
        let triggers = self.slots.iter().filter(|s| matches!(s, Slot::Trigger(_))).count();
        if triggers != 1 {
            return Err(format!("{}: needs exactly one TRIGGER slot, found {triggers}", self.name));
        }
        if !self.slots.iter().any(|s| *s == Slot::Entity) {
            return Err(format!("{}: needs at least one ENTITY slot", self.name));
        }
        let gap = |s: Option<&Slot>| matches!(s, Some(Slot::Gap(_) | Slot::CrossGap(_)));
        if gap(self.slots.first()) || gap(self.slots.last()) {
            return Err(format!("{}: a pattern cannot start or end with a gap", self.name));
        }
        if self.roles.is_empty() {
            return Err(format!("{}: no role bindings", self.name));
        }
        for (role, idx) in &self.roles {
            if self.slots.get(*idx) != Some(&Slot::Entity) {
                return Err(format!("{}: {role} must bind an ENTITY slot (slot {})", self.name, idx + 1));
            }
        }
        Ok(())
    }

    pub fn trigger_slot(&self) -> usize {
        self.slots
            .iter()
            .position(|s| matches!(s, Slot::Trigger(_)))
            .expect("validated")
    }

    pub fn accepts(&self, ty: &EventType) -> bool {
        match &self.slots[self.trigger_slot()] {
            Slot::Trigger(None) => true,
            Slot::Trigger(Some(t)) => t == ty,
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for ArgPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.name)?;
        for s in &self.slots {
            write!(f, " {s}")?;
        }
        f.write_str(" =>")?;
        let roles: Vec<String> = self.roles.iter().map(|(r, i)| format!("{r}={}", i + 1)).collect();
        write!(f, " {}", roles.join(","))
    }
}

fn parse_slot(tok: &str, types: &EventTypes) -> Result<Slot, String> {
    let (head, arg) = match tok.split_once('(') {
        Some((h, rest)) => {
            let arg = rest.strip_suffix(')').ok_or_else(|| format!("unclosed slot {tok:?}"))?;
            (h, Some(arg))
        }
        None => (tok, None),
    };
    let count = |a: Option<&str>| -> Result<usize, String> {
        a.and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| format!("slot {tok:?} needs a non-negative token count"))
    };
    match head {
        "ENTITY" if arg.is_none() => Ok(Slot::Entity),
        "TRIGGER" => match arg.map(str::trim) {
            None | Some("*") => Ok(Slot::Trigger(None)),
            Some(label) => types
                .resolve(label)
                .map(|t| Slot::Trigger(Some(t)))
                .ok_or_else(|| format!("unknown event type {label:?}")),
        },
        "GAP" => Ok(Slot::Gap(count(arg)?)),
        "XGAP" => Ok(Slot::CrossGap(count(arg)?)),
        "LITERAL" => match arg.map(str::trim) {
            Some(w) if !w.is_empty() && !w.contains(char::is_whitespace) => Ok(Slot::Literal(w.to_lowercase())),
            _ => Err(format!("slot {tok:?} needs a single word")),
        },
        _ => Err(format!("unknown slot {tok:?}")),
    }
}

pub fn parse_pattern_line(line: &str, types: &EventTypes) -> Result<ArgPattern, String> {
    let (name, body) = line.split_once(':').ok_or("expected `name: SLOTS => roles`")?;
    let name = name.trim();
    if name.is_empty() {
        return Err("empty pattern name".into());
    }
    let (slots_text, roles_text) = body.split_once("=>").ok_or("missing `=>`")?;
    let slots = slots_text
        .split_whitespace()
        .map(|t| parse_slot(t, types))
        .collect::<Result<Vec<_>, _>>()?;
    let mut roles = Vec::new();
    for item in roles_text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (role, idx) = item.split_once('=').ok_or_else(|| format!("bad role binding {item:?}"))?;
        let role = Role::parse(role.trim()).ok_or_else(|| format!("unknown role {:?}", role.trim()))?;
        let idx: usize = idx
            .trim()
            .parse()
            .ok()
            .filter(|i| *i >= 1)
            .ok_or_else(|| format!("bad slot number in {item:?}"))?;
        roles.push((role, idx - 1));
    }
    let p = ArgPattern {
        name: name.to_string(),
        slots,
        roles,
    };
    p.check()?;
    Ok(p)
}

/// Parses a pattern file: one pattern per line, `#` comments.
pub fn parse_patterns(text: &str, types: &EventTypes) -> Result<Vec<ArgPattern>, ResourceError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let p = parse_pattern_line(line, types).map_err(|m| ResourceError::invalid("patterns", idx + 1, m))?;
        out.push(p);
    }
    Ok(out)
}
