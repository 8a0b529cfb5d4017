//! PropBank-style records in the normalized JSONL sentence format. Rolesets
//! act as frames and argument labels as frame elements.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use super::{sort_sentences, IngestReport};
use crate::error::{Error, Result};
use crate::model::{AnnotatedSentence, FrameCatalog, FrameDef, Source};

/// Reads records, forcing `source = propbank`. Malformed or invalid lines are
/// skipped with a line-numbered warning.
pub fn load_propbank_records(path: &Path) -> Result<(Vec<AnnotatedSentence>, IngestReport)> {
    let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut report = IngestReport {
        files: 1,
        ..Default::default()
    };
    let mut out = Vec::new();
    for (i, text) in raw.lines().enumerate() {
        let line = i + 1;
        if text.trim().is_empty() {
            continue;
        }
        let mut sentence: AnnotatedSentence = match serde_json::from_str(text) {
            Ok(s) => s,
            Err(e) => {
                report.rejected_sentences += 1;
                report.warn(format!("{}:{line}: malformed record: {e}", path.display()));
                continue;
            }
        };
        sentence.source = Source::Propbank;
        if let Err(e) = sentence.validate(None) {
            report.rejected_sentences += 1;
            report.warn(format!("{}:{line}: invalid record: {e}", path.display()));
            continue;
        }
        if let Some(a) = sentence.annotations.iter().find(|a| !is_frame_name(&a.frame)) {
            report.rejected_sentences += 1;
            report.warn(format!("{}:{line}: invalid roleset {:?}", path.display(), a.frame));
            continue;
        }
        report.sentences += 1;
        report.annotations += sentence.annotations.len();
        out.push(sentence);
    }
    sort_sentences(&mut out);
    Ok((out, report))
}

fn is_frame_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(char::is_whitespace)
}

/// One frame per roleset with the sorted union of its observed argument
/// labels, and a single verb lexical unit from the roleset lemma
/// (`"take_off.01"` gives `"take off.v"`).
pub fn propbank_catalog(sentences: &[AnnotatedSentence]) -> FrameCatalog {
    let mut roles: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for s in sentences {
        for a in &s.annotations {
            let entry = roles.entry(a.frame.as_str()).or_default();
            entry.extend(a.elements.iter().map(|e| e.element.as_str()));
        }
    }
    let frames = roles.into_iter().filter_map(|(roleset, labels)| {
        let lemma = roleset.split('.').next().unwrap_or(roleset).replace('_', " ");
        let lus = if lemma.trim().is_empty() {
            vec![]
        } else {
            vec![format!("{lemma}.v")]
        };
        let frame = FrameDef::new(roleset, labels, lus);
        frame.validate().ok().map(|_| frame)
    });
    FrameCatalog::from_frames(frames).expect("roleset names are unique map keys")
}
