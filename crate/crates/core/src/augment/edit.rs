//! Edit plans over character offsets and span remapping.

use serde::{Deserialize, Serialize};

use crate::model::{AnnotatedSentence, ElementSpan, FrameAnnotation, Span};

/// Replace characters `[start, end)` of the source text with `replacement`.
/// `start == end` is an insertion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edit {
    pub start: usize,
    pub end: usize,
    pub replacement: String,
}

impl Edit {
    pub fn new(start: usize, end: usize, replacement: impl Into<String>) -> Self {
        Edit {
            start,
            end,
            replacement: replacement.into(),
        }
    }

    pub fn replacement_len(&self) -> usize {
        self.replacement.chars().count()
    }

    /// Change in text length caused by this edit.
    pub fn delta(&self) -> isize {
        self.replacement_len() as isize - (self.end - self.start) as isize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlanError {
    #[error("edit [{start}, {end}) is outside text of length {len}")]
    OutOfBounds { start: usize, end: usize, len: usize },
    #[error("edit at {0} overlaps or precedes the previous edit")]
    Overlap(usize),
}

/// Edits must be in bounds, sorted and non-overlapping. Two edits may touch,
/// but only one may sit at any given start offset.
pub fn validate_plan(plan: &[Edit], text_len: usize) -> Result<(), PlanError> {
    let mut prev: Option<&Edit> = None;
    for e in plan {
        if e.start > e.end || e.end > text_len {
            return Err(PlanError::OutOfBounds {
                start: e.start,
                end: e.end,
                len: text_len,
            });
        }
        if let Some(p) = prev {
            if e.start < p.end || e.start == p.start {
                return Err(PlanError::Overlap(e.start));
            }
        }
        prev = Some(e);
    }
    Ok(())
}

/// Result of applying a plan. `dropped` lists spans that became empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Applied {
    pub sentence: AnnotatedSentence,
    pub dropped: Vec<String>,
}

enum Boundary {
    Start,
    End,
}

/// New position of an old offset. Offsets inside a replaced region move to
/// the same relative position in the replacement, clamped to its end. Text
/// inserted exactly at a boundary lands outside the span.
fn remap(plan: &[Edit], offset: usize, boundary: Boundary) -> usize {
    let mut shift: isize = 0;
    for e in plan {
        let inside = match boundary {
            Boundary::Start => e.start <= offset && offset < e.end,
            Boundary::End => e.start < offset && offset < e.end,
        };
        if inside {
            let at = e.start as isize + shift;
            return (at + (offset - e.start).min(e.replacement_len()) as isize) as usize;
        }
        let after = match boundary {
            Boundary::Start => offset >= e.end,
            Boundary::End => offset >= e.end && !(e.start == e.end && offset == e.start),
        };
        if after {
            shift += e.delta();
        } else {
            break;
        }
    }
    (offset as isize + shift) as usize
}

fn remap_span(plan: &[Edit], span: Span) -> Span {
    Span::new(
        remap(plan, span.start, Boundary::Start),
        remap(plan, span.end, Boundary::End),
    )
}

/// Applies `plan` to the text and remaps every trigger and element offset.
/// A span that collapses to nothing is removed (an annotation whose trigger
/// collapses goes with all its elements) and reported in `dropped`.
pub fn apply_edits(sentence: &AnnotatedSentence, plan: &[Edit]) -> Result<Applied, PlanError> {
    let chars: Vec<char> = sentence.text.chars().collect();
    validate_plan(plan, chars.len())?;

    let mut text = String::with_capacity(sentence.text.len());
    let mut cursor = 0;
    for e in plan {
        text.extend(&chars[cursor..e.start]);
        text.push_str(&e.replacement);
        cursor = e.end;
    }
    text.extend(&chars[cursor..]);

    let mut dropped = Vec::new();
    let mut annotations = Vec::with_capacity(sentence.annotations.len());
    for a in &sentence.annotations {
        let trigger = remap_span(plan, a.trigger);
        if trigger.is_empty() {
            dropped.push(format!("trigger of {} at {}", a.frame, a.trigger.start));
            continue;
        }
        let mut elements = Vec::with_capacity(a.elements.len());
        for el in &a.elements {
            let span = remap_span(plan, el.span());
            if span.is_empty() {
                dropped.push(format!("{} element {} at {}", a.frame, el.element, el.start));
            } else {
                elements.push(ElementSpan::new(el.element.clone(), span.start, span.end));
            }
        }
        annotations.push(FrameAnnotation::new(a.frame.clone(), trigger, elements));
    }
    for d in &dropped {
        log::warn!("{}/{}: edit removed {d}", sentence.doc_id, sentence.sentence_id);
    }
    Ok(Applied {
        sentence: AnnotatedSentence {
            text,
            annotations,
            ..sentence.clone()
        },
        dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Source;

    fn sentence(text: &str, trigger: (usize, usize), el: (usize, usize)) -> AnnotatedSentence {
        AnnotatedSentence::new(
            text,
            "d",
            "1",
            Source::Fulltext,
            vec![FrameAnnotation::new(
                "F",
                Span::new(trigger.0, trigger.1),
                vec![ElementSpan::new("E", el.0, el.1)],
            )],
        )
    }

    #[test]
    fn deletion_shifts_later_offsets() {
        let s = sentence("Well then, we shall go.", (15, 18), (11, 13));
        let out = apply_edits(&s, &[Edit::new(9, 10, "")]).unwrap();
        assert_eq!(out.sentence.text, "Well then we shall go.");
        assert_eq!(out.sentence.annotations[0].trigger, Span::new(14, 17));
        assert_eq!(out.sentence.annotations[0].elements[0].span(), Span::new(10, 12));
    }

    #[test]
    fn replacement_inside_span_stretches_it() {
        let s = sentence("my car is red", (7, 9), (0, 6));
        let out = apply_edits(&s, &[Edit::new(3, 6, "automobile")]).unwrap();
        assert_eq!(out.sentence.annotations[0].elements[0].span(), Span::new(0, 13));
        assert_eq!(out.sentence.annotations[0].trigger, Span::new(14, 16));
    }

    #[test]
    fn deleted_span_is_reported() {
        let s = sentence("a , b", (4, 5), (2, 3));
        let out = apply_edits(&s, &[Edit::new(2, 3, "")]).unwrap();
        assert!(out.sentence.annotations[0].elements.is_empty());
        assert_eq!(out.dropped.len(), 1);
    }

    #[test]
    fn insertion_at_span_start_stays_outside() {
        let s = sentence("ab cd", (3, 5), (0, 2));
        let out = apply_edits(&s, &[Edit::new(3, 3, "x")]).unwrap();
        assert_eq!(out.sentence.text, "ab xcd");
        assert_eq!(out.sentence.annotations[0].trigger, Span::new(4, 6));
    }

    #[test]
    fn overlapping_plan_rejected() {
        let s = sentence("abcdef", (0, 1), (2, 3));
        let plan = [Edit::new(1, 3, ""), Edit::new(2, 4, "")];
        assert_eq!(apply_edits(&s, &plan), Err(PlanError::Overlap(2)));
    }
}
