//! Document-level split of full-text sentences. Exemplar and PropBank
//! sentences always train.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::model::{AnnotatedSentence, Source};

const DEFAULT_SPLIT: &str = include_str!("../../config/open_sesame_split.json");

/// Document ids held out for dev and test. A trailing `.xml` is ignored so
/// lists can name either files or document ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitConfig {
    pub dev_docs: Vec<String>,
    pub test_docs: Vec<String>,
}

impl Default for SplitConfig {
    fn default() -> Self {
        serde_json::from_str::<SplitConfig>(DEFAULT_SPLIT)
            .expect("bundled split list parses")
            .normalized()
    }
}

impl SplitConfig {
    pub fn normalized(self) -> Self {
        let strip = |v: Vec<String>| -> Vec<String> {
            v.into_iter()
                .map(|d| d.trim().trim_end_matches(".xml").to_string())
                .collect()
        };
        SplitConfig {
            dev_docs: strip(self.dev_docs),
            test_docs: strip(self.test_docs),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Split {
    pub train: Vec<AnnotatedSentence>,
    pub dev: Vec<AnnotatedSentence>,
    pub test: Vec<AnnotatedSentence>,
    /// Listed documents that matched no sentence.
    pub missing_docs: Vec<String>,
}

/// Partitions sentences preserving input order within each part. A document
/// listed under both dev and test goes to test.
pub fn split_sentences(sentences: Vec<AnnotatedSentence>, config: &SplitConfig) -> Split {
    let config = config.clone().normalized();
    let dev: BTreeSet<&str> = config.dev_docs.iter().map(String::as_str).collect();
    let test: BTreeSet<&str> = config.test_docs.iter().map(String::as_str).collect();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut out = Split::default();
    for s in sentences {
        if s.source != Source::Fulltext {
            out.train.push(s);
            continue;
        }
        let doc = s.doc_id.as_str();
        if test.contains(doc) {
            seen.insert(s.doc_id.clone());
            out.test.push(s);
        } else if dev.contains(doc) {
            seen.insert(s.doc_id.clone());
            out.dev.push(s);
        } else {
            out.train.push(s);
        }
    }
    out.missing_docs = dev
        .union(&test)
        .filter(|d| !seen.contains(**d))
        .map(|d| d.to_string())
        .collect();
    if !out.missing_docs.is_empty() {
        log::warn!(
            "{} listed dev/test documents have no full-text sentences",
            out.missing_docs.len()
        );
        for d in &out.missing_docs {
            log::debug!("no sentences for listed document {d}");
        }
    }
    out
}
