//! Trigger-anchored pattern matching over a tokenized document.

use std::collections::{BTreeSet, HashMap};

use crate::annot::{EventType, Role};

use super::patterns::{ArgPattern, Slot};
use super::text::Token;
use super::Mention;

/// An event found by [`apply_patterns`], referring to mentions by index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ProtoEvent {
    pub event_type: EventType,
    /// Index into the trigger list.
    pub trigger: usize,
    /// Role and index into the entity list, in role-binding order.
    pub args: Vec<(Role, usize)>,
    /// Index of the pattern that produced it.
    pub pattern: usize,
}

impl ProtoEvent {
    fn signature(&self) -> (EventType, usize, Vec<(Role, usize)>) {
        let mut args = self.args.clone();
        args.sort();
        args.dedup();
        (self.event_type.clone(), self.trigger, args)
    }
}

/// Token index range `[first, last]` a character span covers.
fn token_cover(tokens: &[Token], start: usize, end: usize) -> Option<(usize, usize)> {
    let first = tokens.partition_point(|t| t.end <= start);
    if first >= tokens.len() || tokens[first].start >= end {
        return None;
    }
    let last = tokens.partition_point(|t| t.start < end) - 1;
    Some((first, last))
}

struct Index<'a> {
    tokens: &'a [Token],
    // Token position -> entities starting / ending there.
    starts: HashMap<usize, Vec<usize>>,
    ends: HashMap<usize, Vec<usize>>,
    covers: Vec<Option<(usize, usize)>>,
}

impl<'a> Index<'a> {
    fn new(tokens: &'a [Token], entities: &'a [Mention]) -> Self {
        let mut starts: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut ends: HashMap<usize, Vec<usize>> = HashMap::new();
        let covers: Vec<_> = entities.iter().map(|e| token_cover(tokens, e.start, e.end)).collect();
        for (i, c) in covers.iter().enumerate() {
            if let Some((a, b)) = c {
                starts.entry(*a).or_default().push(i);
                ends.entry(*b).or_default().push(i);
            }
        }
        Index {
            tokens,
            starts,
            ends,
            covers,
        }
    }

    fn sentence(&self, tok: usize) -> usize {
        self.tokens[tok].sentence
    }
}

type Binding = Vec<(usize, usize)>; // (slot, entity)

/// Matches `slots[k..]` forward, the next element starting at token `pos`.
/// `sent` is the sentence of the last consumed token; `free` lifts the
/// same-sentence requirement after a cross-sentence gap.
fn match_right(ix: &Index, slots: &[Slot], k: usize, pos: usize, sent: usize, free: bool, acc: &mut Binding, out: &mut Vec<Binding>) {
    if k == slots.len() {
        out.push(acc.clone());
        return;
    }
    let n = ix.tokens.len();
    match &slots[k] {
        Slot::Gap(g) | Slot::CrossGap(g) => {
            let cross = matches!(slots[k], Slot::CrossGap(_));
            for skip in 0..=*g {
                let p = pos + skip;
                if p >= n {
                    break;
                }
                if !cross && !free && ix.sentence(p) != sent {
                    break;
                }
                match_right(ix, slots, k + 1, p, sent, free || cross, acc, out);
            }
        }
        slot => {
            if pos >= n || (!free && ix.sentence(pos) != sent) {
                return;
            }
            match slot {
                Slot::Entity => {
                    for &e in ix.starts.get(&pos).map(Vec::as_slice).unwrap_or(&[]) {
                        let (_, last) = ix.covers[e].expect("indexed");
                        acc.push((k, e));
                        match_right(ix, slots, k + 1, last + 1, ix.sentence(last), false, acc, out);
                        acc.pop();
                    }
                }
                Slot::Literal(w) => {
                    if ix.tokens[pos].lower == *w {
                        match_right(ix, slots, k + 1, pos + 1, ix.sentence(pos), false, acc, out);
                    }
                }
                _ => {}
            }
        }
    }
}

/// Mirror image of [`match_right`]: matches `slots[..=k]` backwards, the
/// element at `k` ending at token `pos`.
fn match_left(ix: &Index, slots: &[Slot], k: Option<usize>, pos: Option<usize>, sent: usize, free: bool, acc: &mut Binding, out: &mut Vec<Binding>) {
    let Some(k) = k else {
        out.push(acc.clone());
        return;
    };
    let prev = k.checked_sub(1);
    match &slots[k] {
        Slot::Gap(g) | Slot::CrossGap(g) => {
            let cross = matches!(slots[k], Slot::CrossGap(_));
            let Some(pos) = pos else { return };
            for skip in 0..=*g {
                let Some(p) = pos.checked_sub(skip) else { break };
                if !cross && !free && ix.sentence(p) != sent {
                    break;
                }
                match_left(ix, slots, prev, Some(p), sent, free || cross, acc, out);
            }
        }
        slot => {
            let Some(pos) = pos else { return };
            if !free && ix.sentence(pos) != sent {
                return;
            }
            match slot {
                Slot::Entity => {
                    for &e in ix.ends.get(&pos).map(Vec::as_slice).unwrap_or(&[]) {
                        let (first, _) = ix.covers[e].expect("indexed");
                        acc.push((k, e));
                        match_left(ix, slots, prev, first.checked_sub(1), ix.sentence(first), false, acc, out);
                        acc.pop();
                    }
                }
                Slot::Literal(w) => {
                    if ix.tokens[pos].lower == *w {
                        match_left(ix, slots, prev, pos.checked_sub(1), ix.sentence(pos), false, acc, out);
                    }
                }
                _ => {}
            }
        }
    }
}

/// Applies every pattern around every trigger.
///
/// Each pattern instantiation yields one event. Binding events that carry
/// both Theme and Theme2 are followed by their mirror with the two swapped.
/// Events identical in type, trigger and argument set are emitted once.
/// Output order: trigger position, then pattern order, then match order.
pub fn apply_patterns(tokens: &[Token], triggers: &[Mention], entities: &[Mention], patterns: &[ArgPattern]) -> Vec<ProtoEvent> {
    let ix = Index::new(tokens, entities);
    let mut order: Vec<usize> = (0..triggers.len()).collect();
    order.sort_by_key(|&i| (triggers[i].start, triggers[i].end, i));

    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut emit = |ev: ProtoEvent, out: &mut Vec<ProtoEvent>| {
        if seen.insert(ev.signature()) {
            out.push(ev);
        }
    };

    for ti in order {
        let trig = &triggers[ti];
        let Some(ty) = trig.kind.event_type() else { continue };
        let Some((first, last)) = token_cover(tokens, trig.start, trig.end) else { continue };
        for (pi, pat) in patterns.iter().enumerate() {
            if !pat.accepts(ty) {
                continue;
            }
            let at = pat.trigger_slot();
            let mut lefts = Vec::new();
            match_left(&ix, &pat.slots, at.checked_sub(1), first.checked_sub(1), tokens[first].sentence, false, &mut Vec::new(), &mut lefts);
            if lefts.is_empty() {
                continue;
            }
            let mut rights = Vec::new();
            match_right(&ix, &pat.slots, at + 1, last + 1, tokens[last].sentence, false, &mut Vec::new(), &mut rights);
            for l in &lefts {
                for r in &rights {
                    let bound: HashMap<usize, usize> = l.iter().chain(r.iter()).copied().collect();
                    let args: Vec<(Role, usize)> = pat.roles.iter().map(|(role, slot)| (*role, bound[slot])).collect();
                    let ev = ProtoEvent {
                        event_type: ty.clone(),
                        trigger: ti,
                        args,
                        pattern: pi,
                    };
                    let mirror = mirror_of(&ev);
                    emit(ev, &mut out);
                    if let Some(m) = mirror {
                        emit(m, &mut out);
                    }
                }
            }
        }
    }
    out
}

fn mirror_of(ev: &ProtoEvent) -> Option<ProtoEvent> {
    if ev.event_type != EventType::Binding {
        return None;
    }
    let has = |r| ev.args.iter().any(|(role, _)| *role == r);
    if !has(Role::Theme) || !has(Role::Theme2) {
        return None;
    }
    let args = ev
        .args
        .iter()
        .map(|(role, e)| {
            let role = match role {
                Role::Theme => Role::Theme2,
                Role::Theme2 => Role::Theme,
                r => *r,
            };
            (role, *e)
        })
        .collect();
    Some(ProtoEvent { args, ..ev.clone() })
}
