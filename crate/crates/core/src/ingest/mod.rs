//! Corpus readers: FrameNet 1.7 XML, normalized PropBank JSONL, and the
//! document-level train/dev/test split.

pub mod framenet;
pub mod propbank;
pub mod split;

use std::cmp::Ordering;

use serde::Serialize;

use crate::model::AnnotatedSentence;

pub use framenet::{load_exemplars, load_frame_catalog, load_fulltext};
pub use propbank::{load_propbank_records, propbank_catalog};
pub use split::{split_sentences, Split, SplitConfig};

/// What ingest kept, dropped and why.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub files: usize,
    pub sentences: usize,
    pub annotations: usize,
    pub rejected_sentences: usize,
    pub dropped_annotations: usize,
    pub dropped_elements: usize,
    pub warnings: Vec<String>,
}

impl IngestReport {
    pub(crate) fn warn(&mut self, message: String) {
        log::warn!("{message}");
        self.warnings.push(message);
    }

    pub fn merge(&mut self, other: IngestReport) {
        self.files += other.files;
        self.sentences += other.sentences;
        self.annotations += other.annotations;
        self.rejected_sentences += other.rejected_sentences;
        self.dropped_annotations += other.dropped_annotations;
        self.dropped_elements += other.dropped_elements;
        self.warnings.extend(other.warnings);
    }
}

/// Numbers compare numerically and sort before other ids.
fn compare_ids(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

/// Canonical corpus order: document id, then sentence id.
pub fn sort_sentences(sentences: &mut [AnnotatedSentence]) {
    sentences.sort_by(|a, b| {
        a.doc_id
            .cmp(&b.doc_id)
            .then_with(|| compare_ids(&a.sentence_id, &b.sentence_id))
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Source;

    #[test]
    fn numeric_aware_order() {
        let mk = |d: &str, s: &str| AnnotatedSentence::new("x", d, s, Source::Fulltext, vec![]);
        let mut v = vec![mk("b", "1"), mk("a", "10"), mk("a", "9"), mk("a", "x"), mk("a", "09")];
        sort_sentences(&mut v);
        let ids: Vec<(&str, &str)> = v.iter().map(|s| (s.doc_id.as_str(), s.sentence_id.as_str())).collect();
        assert_eq!(ids, [("a", "09"), ("a", "9"), ("a", "10"), ("a", "x"), ("b", "1")]);
    }
}
