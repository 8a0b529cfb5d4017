//! Precision, recall and F1 for the three subtasks, and split reports.
//!
//! Triggers match by token-start offset. A frame counts only at a matching
//! trigger with the same name; a wrong name is both a false positive and a
//! false negative. Arguments match on (trigger, frame, element, span) with
//! spans compared after whitespace trimming.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::ops::{Add, AddAssign};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::model::{AnnotatedSentence, ParseResult};
use crate::pipeline::{Pipeline, Start};
use crate::text::{snap_to_token_start, trim_span};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Counts {
    pub fn new(tp: usize, fp: usize, fn_: usize) -> Self {
        Counts { tp, fp, fn_ }
    }

    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn f1(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

impl Add for Counts {
    type Output = Counts;
    fn add(self, o: Counts) -> Counts {
        Counts::new(self.tp + o.tp, self.fp + o.fp, self.fn_ + o.fn_)
    }
}

impl AddAssign for Counts {
    fn add_assign(&mut self, o: Counts) {
        *self = *self + o;
    }
}

pub fn score_triggers(gold: &BTreeSet<usize>, pred: &BTreeSet<usize>) -> Counts {
    let tp = gold.intersection(pred).count();
    Counts::new(tp, pred.len() - tp, gold.len() - tp)
}

pub fn score_frames(gold: &BTreeMap<usize, String>, pred: &BTreeMap<usize, String>) -> Counts {
    let mut c = Counts::default();
    for (offset, frame) in pred {
        match gold.get(offset) {
            Some(g) if g == frame => c.tp += 1,
            Some(_) => {
                c.fp += 1;
                c.fn_ += 1;
            }
            None => c.fp += 1,
        }
    }
    c.fn_ += gold.keys().filter(|o| !pred.contains_key(o)).count();
    c
}

/// One labelled argument: trigger offset, frame, element and trimmed span.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ArgTuple {
    pub trigger: usize,
    pub frame: String,
    pub element: String,
    pub start: usize,
    pub end: usize,
}

/// Exact matches are true positives. Every other prediction is a false
/// positive and every unmatched gold argument a false negative; pairing a
/// wrong prediction with the gold argument it overlaps most yields the same
/// totals, so no pairing is needed. Duplicates count separately.
pub fn score_args(gold: &[ArgTuple], pred: &[ArgTuple]) -> Counts {
    let mut remaining: BTreeMap<&ArgTuple, usize> = BTreeMap::new();
    for g in gold {
        *remaining.entry(g).or_default() += 1;
    }
    let mut tp = 0;
    for p in pred {
        if let Some(n) = remaining.get_mut(p).filter(|n| **n > 0) {
            *n -= 1;
            tp += 1;
        }
    }
    Counts::new(tp, pred.len() - tp, gold.len() - tp)
}

/// Counts for one sentence or a whole split.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskCounts {
    pub triggers: Counts,
    pub frames: Counts,
    pub args: Counts,
}

impl AddAssign for TaskCounts {
    fn add_assign(&mut self, o: TaskCounts) {
        self.triggers += o.triggers;
        self.frames += o.frames;
        self.args += o.args;
    }
}

fn arg_tuples(chars: &[char], trigger: usize, frame: &str, elements: &[crate::model::ElementSpan]) -> Vec<ArgTuple> {
    elements
        .iter()
        .map(|e| {
            let (start, end) = trim_span(chars, e.start, e.end);
            ArgTuple {
                trigger,
                frame: frame.to_string(),
                element: e.element.clone(),
                start,
                end,
            }
        })
        .collect()
}

/// How a gold trigger location is compared with a predicted one.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriggerMatch {
    /// Gold offsets are moved to the start of their token first. Predicted
    /// offsets are token starts already.
    #[default]
    TokenStart,
    /// Raw character offsets.
    Char,
}

/// Gold view of a sentence. When two annotations share a location the first
/// wins.
pub struct GoldView {
    pub triggers: BTreeSet<usize>,
    pub frames: BTreeMap<usize, String>,
    pub args: Vec<ArgTuple>,
}

impl GoldView {
    pub fn of(sentence: &AnnotatedSentence) -> Self {
        Self::with(sentence, TriggerMatch::TokenStart)
    }

    pub fn with(sentence: &AnnotatedSentence, matching: TriggerMatch) -> Self {
        let chars: Vec<char> = sentence.text.chars().collect();
        let mut view = GoldView {
            triggers: BTreeSet::new(),
            frames: BTreeMap::new(),
            args: Vec::new(),
        };
        for a in &sentence.annotations {
            let t = match matching {
                TriggerMatch::TokenStart => snap_to_token_start(&chars, a.trigger.start),
                TriggerMatch::Char => Some(a.trigger.start),
            };
            let Some(t) = t else {
                continue;
            };
            if !view.triggers.insert(t) {
                continue;
            }
            view.frames.insert(t, a.frame.clone());
            view.args.extend(arg_tuples(&chars, t, &a.frame, &a.elements));
        }
        view
    }
}

pub fn score_sentence(gold: &AnnotatedSentence, pred: &ParseResult) -> TaskCounts {
    score_sentence_with(gold, pred, TriggerMatch::TokenStart)
}

pub fn score_sentence_with(gold: &AnnotatedSentence, pred: &ParseResult, matching: TriggerMatch) -> TaskCounts {
    let g = GoldView::with(gold, matching);
    let chars: Vec<char> = gold.text.chars().collect();
    let pred_triggers: BTreeSet<usize> = pred.triggers.iter().copied().collect();
    let mut pred_frames = BTreeMap::new();
    let mut pred_args = Vec::new();
    for f in &pred.frames {
        if pred_frames.insert(f.trigger_start, f.frame_name.clone()).is_none() {
            pred_args.extend(arg_tuples(&chars, f.trigger_start, &f.frame_name, &f.elements));
        }
    }
    TaskCounts {
        triggers: score_triggers(&g.triggers, &pred_triggers),
        frames: score_frames(&g.frames, &pred_frames),
        args: score_args(&g.args, &pred_args),
    }
}

/// Which stages see gold input instead of upstream predictions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    /// Each stage runs on the previous stage's predictions.
    #[default]
    EndToEnd,
    /// Frames are classified at gold triggers.
    GoldTriggers,
    /// Arguments are extracted for gold frames.
    GoldFrames,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitScores {
    pub sentences: usize,
    /// Sentences whose backend calls failed; their missing predictions count
    /// as false negatives.
    pub backend_failures: usize,
    pub counts: TaskCounts,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Metrics {
    pub fn of(c: Counts) -> Self {
        Metrics {
            precision: c.precision(),
            recall: c.recall(),
            f1: c.f1(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub mode: EvalMode,
    pub trigger_match: TriggerMatch,
}

/// Parses every sentence through `pipeline` and scores the result.
pub fn evaluate_split(pipeline: &Pipeline<'_>, sentences: &[AnnotatedSentence], options: EvalOptions) -> SplitScores {
    let texts: Vec<String> = sentences.iter().map(|s| s.text.clone()).collect();
    let results = match options.mode {
        EvalMode::EndToEnd => pipeline.detect_frames_bulk(&texts),
        EvalMode::GoldTriggers => {
            let triggers: Vec<Vec<usize>> = sentences.iter().map(|s| GoldView::of(s).triggers.into_iter().collect()).collect();
            pipeline.run_from(&texts, Start::Triggers(&triggers))
        }
        EvalMode::GoldFrames => {
            let frames: Vec<Vec<(usize, String)>> = sentences.iter().map(|s| GoldView::of(s).frames.into_iter().collect()).collect();
            pipeline.run_from(&texts, Start::Frames(&frames))
        }
    };
    let mut parsed = Vec::with_capacity(results.len());
    let mut backend_failures = 0;
    for (s, r) in sentences.iter().zip(results) {
        parsed.push(match r {
            Ok(p) => p,
            Err(e) => {
                log::warn!("{}/{}: {e}", s.doc_id, s.sentence_id);
                backend_failures += 1;
                e.partial
            }
        });
    }
    let per_sentence: Vec<TaskCounts> = sentences
        .par_iter()
        .zip(parsed.par_iter())
        .map(|(s, p)| score_sentence_with(s, p, options.trigger_match))
        .collect();
    let mut counts = TaskCounts::default();
    for c in per_sentence {
        counts += c;
    }
    SplitScores {
        sentences: sentences.len(),
        backend_failures,
        counts,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub toolkit: String,
    /// SHA-256 of the evaluation settings as canonical JSON.
    pub config_sha256: String,
    pub settings: serde_json::Value,
}

impl Fingerprint {
    pub fn new(settings: serde_json::Value) -> Self {
        let canonical = serde_json::to_string(&settings).expect("serializable");
        let digest = Sha256::digest(canonical.as_bytes());
        Fingerprint {
            toolkit: format!("frameparse {}", env!("CARGO_PKG_VERSION")),
            config_sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
            settings,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub options: EvalOptions,
    pub splits: BTreeMap<String, SplitReport>,
    pub fingerprint: Fingerprint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitReport {
    pub scores: SplitScores,
    pub trigger_id: Metrics,
    pub frame_id: Metrics,
    pub args_id: Metrics,
}

impl SplitReport {
    pub fn new(scores: SplitScores) -> Self {
        SplitReport {
            trigger_id: Metrics::of(scores.counts.triggers),
            frame_id: Metrics::of(scores.counts.frames),
            args_id: Metrics::of(scores.counts.args),
            scores,
        }
    }
}

impl Report {
    pub fn new(options: EvalOptions, fingerprint: Fingerprint) -> Self {
        Report {
            options,
            splits: BTreeMap::new(),
            fingerprint,
        }
    }

    pub fn insert(&mut self, split: &str, scores: SplitScores) {
        self.splits.insert(split.to_string(), SplitReport::new(scores));
    }

    /// Aligned table: one row per split and metric, one column per task.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<6} {:<8} {:>10} {:>10} {:>10}", "split", "metric", "Trigger ID", "Frame ID", "Args ID");
        // dev before test, anything else after.
        let mut names: Vec<&String> = self.splits.keys().collect();
        names.sort_by_key(|n| (n.as_str() != "dev", n.as_str() != "test", n.as_str()));
        for name in names {
            let r = &self.splits[name];
            let rows: [(&str, fn(&Metrics) -> f64); 3] =
                [("P", |m| m.precision), ("R", |m| m.recall), ("F1", |m| m.f1)];
            for (label, get) in rows {
                let _ = writeln!(
                    out,
                    "{:<6} {:<8} {:>10.3} {:>10.3} {:>10.3}",
                    name,
                    label,
                    get(&r.trigger_id),
                    get(&r.frame_id),
                    get(&r.args_id)
                );
            }
            let c = &r.scores.counts;
            let _ = writeln!(
                out,
                "{:<6} {:<8} {:>10} {:>10} {:>10}",
                name,
                "tp/fp/fn",
                format!("{}/{}/{}", c.triggers.tp, c.triggers.fp, c.triggers.fn_),
                format!("{}/{}/{}", c.frames.tp, c.frames.fp, c.frames.fn_),
                format!("{}/{}/{}", c.args.tp, c.args.fp, c.args.fn_),
            );
        }
        out
    }
}
