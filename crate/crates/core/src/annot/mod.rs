//! Standoff annotations: text-bound entities and triggers (`T` lines) and
//! events (`E` lines).

mod standoff;
mod types;
mod validate;

pub use standoff::{
    parse_standoff, parse_standoff_stream, parse_standoff_with, serialize_standoff,
    serialize_standoff_stream, serialize_standoff_with, LabelStyle, PMID_MARKER,
};
pub use types::{
    AnnotationSet, BioEvent, EntityKind, EvId, EventType, EventTypes, Role, Target, TbId,
    TextBound,
};
pub use validate::{
    realign, validate, Finding, FindingKind, Severity, ValidationMode, ValidationReport,
};

#[derive(Debug, thiserror::Error)]
pub enum AnnotError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate id {id}")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: unknown type {label:?}")]
    UnknownType { line: usize, label: String },
    #[error("{event} references missing {target}")]
    Dangling { event: String, target: String },
}

impl AnnotError {
    fn syntax(line: usize, message: impl Into<String>) -> Self {
        AnnotError::Syntax {
            line,
            message: message.into(),
        }
    }
}
