//! Domain types shared by every stage of the toolkit.
//!
//! All offsets are character (Unicode scalar value) offsets into the owning
//! sentence text, start inclusive and end exclusive. Token positions are never
//! stored; they are derived from the text when needed.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("frame name {0:?} is empty or contains whitespace")]
    BadFrameName(String),
    #[error("frame {frame}: element name {element:?} is empty or contains whitespace")]
    BadElementName { frame: String, element: String },
    #[error("frame {frame}: duplicate element {element}")]
    DuplicateElement { frame: String, element: String },
    #[error("frame {frame}: lexical unit {lu:?} is not of the form <lemma>.<pos>")]
    BadLexicalUnit { frame: String, lu: String },
    #[error("duplicate frame {0}")]
    DuplicateFrame(String),
    #[error("span [{start}, {end}) is empty or outside text of length {len}")]
    SpanOutOfBounds { start: usize, end: usize, len: usize },
    #[error("two annotations share trigger offset {0}")]
    DuplicateTrigger(usize),
    #[error("exemplar sentence has {0} annotations, expected exactly one")]
    ExemplarAnnotationCount(usize),
    #[error("unknown frame {0}")]
    UnknownFrame(String),
    #[error("frame {frame} has no element {element}")]
    UnknownElement { frame: String, element: String },
}

/// A FrameNet frame: its name, ordered frame element names and lexical units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameDef {
    pub name: String,
    pub elements: Vec<String>,
    pub lexical_units: Vec<String>,
}

fn is_bare_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(char::is_whitespace)
}

/// Splits a lexical unit such as `"try out.v"` into lemma and POS tag.
pub fn split_lexical_unit(lu: &str) -> Option<(&str, &str)> {
    let (lemma, pos) = lu.rsplit_once('.')?;
    if lemma.trim().is_empty() || pos.is_empty() || !pos.chars().all(|c| c.is_ascii_alphabetic()) {
        return None;
    }
    Some((lemma, pos))
}

impl FrameDef {
    pub fn new(
        name: impl Into<String>,
        elements: impl IntoIterator<Item = impl Into<String>>,
        lexical_units: impl IntoIterator<Item = impl Into<String>>,
    ) -> Self {
        FrameDef {
            name: name.into(),
            elements: elements.into_iter().map(Into::into).collect(),
            lexical_units: lexical_units.into_iter().map(Into::into).collect(),
        }
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        if !is_bare_name(&self.name) {
            return Err(ValidationError::BadFrameName(self.name.clone()));
        }
        let mut seen = BTreeSet::new();
        for element in &self.elements {
            if !is_bare_name(element) {
                return Err(ValidationError::BadElementName {
                    frame: self.name.clone(),
                    element: element.clone(),
                });
            }
            if !seen.insert(element.as_str()) {
                return Err(ValidationError::DuplicateElement {
                    frame: self.name.clone(),
                    element: element.clone(),
                });
            }
        }
        for lu in &self.lexical_units {
            if split_lexical_unit(lu).is_none() {
                return Err(ValidationError::BadLexicalUnit {
                    frame: self.name.clone(),
                    lu: lu.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn has_element(&self, element: &str) -> bool {
        self.elements.iter().any(|e| e == element)
    }
}

/// All known frames keyed by (case-sensitive) name.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<FrameDef>", into = "Vec<FrameDef>")]
pub struct FrameCatalog {
    frames: BTreeMap<String, FrameDef>,
    #[serde(skip)]
    lowercase: HashMap<String, Vec<String>>,
}

impl FrameCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a catalog, validating every frame and rejecting duplicate names.
    pub fn from_frames(frames: impl IntoIterator<Item = FrameDef>) -> Result<Self, ValidationError> {
        let mut catalog = FrameCatalog::new();
        for frame in frames {
            catalog.insert(frame)?;
        }
        Ok(catalog)
    }

    pub fn insert(&mut self, frame: FrameDef) -> Result<(), ValidationError> {
        frame.validate()?;
        if self.frames.contains_key(&frame.name) {
            return Err(ValidationError::DuplicateFrame(frame.name));
        }
        self.lowercase
            .entry(frame.name.to_lowercase())
            .or_default()
            .push(frame.name.clone());
        self.frames.insert(frame.name.clone(), frame);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&FrameDef> {
        self.frames.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.frames.contains_key(name)
    }

    /// Names matching `name` case-insensitively.
    pub fn lookup_case_insensitive(&self, name: &str) -> &[String] {
        self.lowercase
            .get(&name.to_lowercase())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Frames in name order.
    pub fn iter(&self) -> impl Iterator<Item = &FrameDef> {
        self.frames.values()
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }
}

impl TryFrom<Vec<FrameDef>> for FrameCatalog {
    type Error = ValidationError;

    fn try_from(frames: Vec<FrameDef>) -> Result<Self, Self::Error> {
        FrameCatalog::from_frames(frames)
    }
}

impl From<FrameCatalog> for Vec<FrameDef> {
    fn from(catalog: FrameCatalog) -> Self {
        catalog.frames.into_values().collect()
    }
}

/// Half-open character range, serialized as `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn check_bounds(&self, text_len: usize) -> Result<(), ValidationError> {
        if self.start < self.end && self.end <= text_len {
            Ok(())
        } else {
            Err(ValidationError::SpanOutOfBounds {
                start: self.start,
                end: self.end,
                len: text_len,
            })
        }
    }
}

impl From<[usize; 2]> for Span {
    fn from([start, end]: [usize; 2]) -> Self {
        Span { start, end }
    }
}

impl From<Span> for [usize; 2] {
    fn from(span: Span) -> Self {
        [span.start, span.end]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ElementSpan {
    #[serde(rename = "name")]
    pub element: String,
    pub start: usize,
    pub end: usize,
}

impl ElementSpan {
    pub fn new(element: impl Into<String>, start: usize, end: usize) -> Self {
        ElementSpan {
            element: element.into(),
            start,
            end,
        }
    }

    pub fn span(&self) -> Span {
        Span::new(self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameAnnotation {
    pub frame: String,
    pub trigger: Span,
    #[serde(default)]
    pub elements: Vec<ElementSpan>,
}

impl FrameAnnotation {
    pub fn new(frame: impl Into<String>, trigger: Span, elements: Vec<ElementSpan>) -> Self {
        FrameAnnotation {
            frame: frame.into(),
            trigger,
            elements,
        }
    }

    pub fn trigger_start(&self) -> usize {
        self.trigger.start
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Fulltext,
    Exemplar,
    Propbank,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Fulltext => "fulltext",
            Source::Exemplar => "exemplar",
            Source::Propbank => "propbank",
        })
    }
}

fn default_source() -> Source {
    Source::Propbank
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedSentence {
    pub text: String,
    pub doc_id: String,
    pub sentence_id: String,
    #[serde(default = "default_source")]
    pub source: Source,
    #[serde(default)]
    pub annotations: Vec<FrameAnnotation>,
}

impl AnnotatedSentence {
    pub fn new(
        text: impl Into<String>,
        doc_id: impl Into<String>,
        sentence_id: impl Into<String>,
        source: Source,
        annotations: Vec<FrameAnnotation>,
    ) -> Self {
        AnnotatedSentence {
            text: text.into(),
            doc_id: doc_id.into(),
            sentence_id: sentence_id.into(),
            source,
            annotations,
        }
    }

    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }

    /// Checks span bounds, trigger uniqueness and the exemplar single-frame
    /// rule. With a catalog, frames and element names are checked as well.
    pub fn validate(&self, catalog: Option<&FrameCatalog>) -> Result<(), ValidationError> {
        let len = self.char_len();
        if self.source == Source::Exemplar && self.annotations.len() != 1 {
            return Err(ValidationError::ExemplarAnnotationCount(self.annotations.len()));
        }
        let mut triggers = BTreeSet::new();
        for annotation in &self.annotations {
            annotation.trigger.check_bounds(len)?;
            if !triggers.insert(annotation.trigger.start) {
                return Err(ValidationError::DuplicateTrigger(annotation.trigger.start));
            }
            let frame = match catalog {
                Some(catalog) => Some(
                    catalog
                        .get(&annotation.frame)
                        .ok_or_else(|| ValidationError::UnknownFrame(annotation.frame.clone()))?,
                ),
                None => None,
            };
            for element in &annotation.elements {
                element.span().check_bounds(len)?;
                if let Some(frame) = frame {
                    if !frame.has_element(&element.element) {
                        return Err(ValidationError::UnknownElement {
                            frame: frame.name.clone(),
                            element: element.element.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn annotation_at(&self, trigger_start: usize) -> Option<&FrameAnnotation> {
        self.annotations
            .iter()
            .find(|a| a.trigger.start == trigger_start)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    TriggerId,
    FrameClassification,
    ArgExtraction,
}

impl TaskKind {
    pub const ALL: [TaskKind; 3] = [
        TaskKind::TriggerId,
        TaskKind::FrameClassification,
        TaskKind::ArgExtraction,
    ];

    /// Leading word of every prompt of this kind.
    pub fn prompt_name(self) -> &'static str {
        match self {
            TaskKind::TriggerId => "TRIGGER",
            TaskKind::FrameClassification => "FRAME",
            TaskKind::ArgExtraction => "ARGS",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TaskKind::TriggerId => "trigger_id",
            TaskKind::FrameClassification => "frame_classification",
            TaskKind::ArgExtraction => "arg_extraction",
        }
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub doc_id: String,
    pub sentence_id: String,
    pub source: Source,
    pub augmented: bool,
}

impl Provenance {
    pub fn of(sentence: &AnnotatedSentence, augmented: bool) -> Self {
        Provenance {
            doc_id: sentence.doc_id.clone(),
            sentence_id: sentence.sentence_id.clone(),
            source: sentence.source,
            augmented,
        }
    }
}

/// One prompt/target pair. Serialized as a flat JSON object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskRecord {
    pub kind: TaskKind,
    pub input: String,
    pub target: String,
    #[serde(flatten)]
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Trigger,
    Frame,
    Args,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub stage: Stage,
    pub message: String,
}

impl Diagnostic {
    pub fn new(stage: Stage, message: impl Into<String>) -> Self {
        Diagnostic {
            stage,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedFrame {
    pub trigger_start: usize,
    pub trigger_end: usize,
    pub frame_name: String,
    pub elements: Vec<ElementSpan>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseResult {
    pub text: String,
    /// Every trigger offset decoded in the first stage, including those whose
    /// frame was later rejected.
    #[serde(default)]
    pub triggers: Vec<usize>,
    pub frames: Vec<ParsedFrame>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseResult {
    pub fn empty(text: impl Into<String>) -> Self {
        ParseResult {
            text: text.into(),
            ..Default::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn attack() -> FrameDef {
        FrameDef::new("Attack", ["Assailant", "Victim"], ["attack.v", "ambush.n"])
    }

    #[test]
    fn frame_validation() {
        assert!(attack().validate().is_ok());
        let mut bad = attack();
        bad.name = "Bad name".into();
        assert!(matches!(bad.validate(), Err(ValidationError::BadFrameName(_))));
        let mut dup = attack();
        dup.elements.push("Victim".into());
        assert!(matches!(
            dup.validate(),
            Err(ValidationError::DuplicateElement { .. })
        ));
        let mut lu = attack();
        lu.lexical_units.push("attack".into());
        assert!(matches!(
            lu.validate(),
            Err(ValidationError::BadLexicalUnit { .. })
        ));
    }

    #[test]
    fn lexical_unit_split_keeps_spaces_in_lemma() {
        assert_eq!(split_lexical_unit("try out.v"), Some(("try out", "v")));
        assert_eq!(split_lexical_unit("a.m..adv"), Some(("a.m.", "adv")));
        assert_eq!(split_lexical_unit("noperiod"), None);
        assert_eq!(split_lexical_unit(".v"), None);
    }

    #[test]
    fn catalog_lookup() {
        let catalog = FrameCatalog::from_frames([attack()]).unwrap();
        assert!(catalog.contains("Attack"));
        assert!(!catalog.contains("attack"));
        assert_eq!(catalog.lookup_case_insensitive("ATTACK"), ["Attack".to_string()]);
        assert!(FrameCatalog::from_frames([attack(), attack()]).is_err());
    }

    #[test]
    fn exemplar_needs_exactly_one_annotation() {
        let s = AnnotatedSentence::new("Hi there.", "d", "1", Source::Exemplar, vec![]);
        assert_eq!(
            s.validate(None),
            Err(ValidationError::ExemplarAnnotationCount(0))
        );
    }

    #[test]
    fn sentence_json_shape() {
        let s = AnnotatedSentence::new(
            "He sold the car.",
            "doc",
            "1",
            Source::Propbank,
            vec![FrameAnnotation::new(
                "sell.01",
                Span::new(3, 7),
                vec![ElementSpan::new("ARG0", 0, 2), ElementSpan::new("ARG1", 8, 15)],
            )],
        );
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(
            json,
            r#"{"text":"He sold the car.","doc_id":"doc","sentence_id":"1","source":"propbank","annotations":[{"frame":"sell.01","trigger":[3,7],"elements":[{"name":"ARG0","start":0,"end":2},{"name":"ARG1","start":8,"end":15}]}]}"#
        );
    }

    #[test]
    fn task_record_json_is_flat() {
        let record = TaskRecord {
            kind: TaskKind::TriggerId,
            input: "TRIGGER: Hi.".into(),
            target: "*Hi.".into(),
            provenance: Provenance {
                doc_id: "d".into(),
                sentence_id: "s".into(),
                source: Source::Fulltext,
                augmented: false,
            },
        };
        let json = serde_json::to_string(&record).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"trigger_id","input":"TRIGGER: Hi.","target":"*Hi.","doc_id":"d","sentence_id":"s","source":"fulltext","augmented":false}"#
        );
        let back: TaskRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, record);
    }

    fn arb_sentence() -> impl Strategy<Value = AnnotatedSentence> {
        ("[a-zA-Z ,.é\"]{1,40}", proptest::collection::vec((0usize..50, 0usize..50, "[A-Z][a-z_]{0,8}"), 0..4))
            .prop_map(|(text, raw)| {
                let annotations = raw
                    .into_iter()
                    .enumerate()
                    .map(|(i, (a, b, name))| {
                        FrameAnnotation::new(
                            name.clone(),
                            Span::new(a.min(b) + i * 51, a.max(b) + i * 51),
                            vec![ElementSpan::new(name, a, b)],
                        )
                    })
                    .collect();
                AnnotatedSentence::new(text, "doc", "1", Source::Fulltext, annotations)
            })
    }

    proptest! {
        #[test]
        fn json_round_trip_is_identity(s in arb_sentence()) {
            let json = serde_json::to_string(&s).unwrap();
            let back: AnnotatedSentence = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(&back, &s);
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), json);
        }

        #[test]
        fn validation_accepts_exactly_in_bound_spans(s in arb_sentence()) {
            let len = s.char_len();
            let in_bounds = s.annotations.iter().all(|a| {
                a.trigger.start < a.trigger.end && a.trigger.end <= len
                    && a.elements.iter().all(|e| e.start < e.end && e.end <= len)
            });
            prop_assert_eq!(s.validate(None).is_ok(), in_bounds);
        }
    }
}
