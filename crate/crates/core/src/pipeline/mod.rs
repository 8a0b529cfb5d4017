//! Inference: trigger identification, then frame classification per trigger,
//! then argument extraction per classified frame, each stage one backend
//! batch.

mod backend;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

pub use backend::{BackendError, Exchange, HttpBackend, ScriptedBackend, Seq2SeqBackend};

use crate::codec::{
    decode_args_output, decode_frame_output, decode_trigger_output, encode_args_prompt, encode_frame_prompt,
    encode_trigger_prompt,
};
use crate::lu_index::LuIndex;
use crate::model::{Diagnostic, FrameCatalog, ParseResult, ParsedFrame, Stage};
use crate::text::token_end;

/// A sentence whose backend call failed. `partial` holds what earlier stages
/// produced: decoded triggers, and classified frames without elements when
/// argument extraction failed.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{stage:?} stage failed: {source}")]
pub struct PipelineError {
    pub stage: Stage,
    pub partial: ParseResult,
    #[source]
    pub source: BackendError,
}

pub type SentenceResult = std::result::Result<ParseResult, PipelineError>;

/// Where a run starts. Later starting points take upstream predictions as
/// given, which is how gold-input evaluation feeds gold triggers or frames.
#[derive(Debug, Clone, Copy)]
pub enum Start<'a> {
    Text,
    Triggers(&'a [Vec<usize>]),
    Frames(&'a [Vec<(usize, String)>]),
}

#[derive(Clone, Copy)]
pub struct Pipeline<'a> {
    pub backend: &'a dyn Seq2SeqBackend,
    pub catalog: &'a FrameCatalog,
    pub index: &'a LuIndex,
    /// Prompts per backend call in bulk mode.
    pub batch_size: usize,
    /// Backend calls allowed in flight at once.
    pub max_in_flight: usize,
}

struct Work {
    result: ParseResult,
    failed: Option<(Stage, BackendError)>,
}

impl<'a> Pipeline<'a> {
    pub fn new(backend: &'a dyn Seq2SeqBackend, catalog: &'a FrameCatalog, index: &'a LuIndex) -> Self {
        Pipeline {
            backend,
            catalog,
            index,
            batch_size: 32,
            max_in_flight: 4,
        }
    }

    pub fn with_batching(mut self, batch_size: usize, max_in_flight: usize) -> Self {
        self.batch_size = batch_size.max(1);
        self.max_in_flight = max_in_flight.max(1);
        self
    }

    /// One sentence, one backend call per stage that has work.
    pub fn detect_frames(&self, text: &str) -> SentenceResult {
        self.run(&[text.to_string()], Start::Text, false)
            .pop()
            .expect("one result per text")
    }

    /// Many sentences, with prompts of one stage pooled across sentences into
    /// batches of `batch_size`. A failed batch is retried one sentence at a
    /// time so a failure only affects the sentence that caused it.
    pub fn detect_frames_bulk(&self, texts: &[String]) -> Vec<SentenceResult> {
        self.run(texts, Start::Text, true)
    }

    pub fn run_from(&self, texts: &[String], start: Start<'_>) -> Vec<SentenceResult> {
        self.run(texts, start, true)
    }

    fn run(&self, texts: &[String], start: Start<'_>, chunked: bool) -> Vec<SentenceResult> {
        let mut work: Vec<Work> = texts
            .iter()
            .map(|t| Work {
                result: ParseResult::empty(t.clone()),
                failed: None,
            })
            .collect();

        // Stage 1: triggers.
        let mut triggers: Vec<Vec<usize>> = match start {
            Start::Text => {
                let requests: Vec<(usize, String)> = texts
                    .iter()
                    .enumerate()
                    .map(|(i, t)| (i, encode_trigger_prompt(t)))
                    .collect();
                let outputs = self.call(&requests, chunked);
                let mut found = vec![Vec::new(); texts.len()];
                for ((i, _), out) in requests.iter().zip(outputs) {
                    match out {
                        Ok(out) => {
                            let decoded = decode_trigger_output(&texts[*i], &out);
                            work[*i].result.diagnostics.extend(decoded.diagnostics);
                            found[*i] = decoded.value;
                        }
                        Err(e) => work[*i].failed = Some((Stage::Trigger, e)),
                    }
                }
                found
            }
            Start::Triggers(given) => given.to_vec(),
            Start::Frames(given) => given
                .iter()
                .map(|fs| fs.iter().map(|(t, _)| *t).collect())
                .collect(),
        };
        triggers.resize(texts.len(), Vec::new());
        for (w, t) in work.iter_mut().zip(&triggers) {
            w.result.triggers = t.clone();
        }

        // Stage 2: one frame prompt per trigger.
        let frames: Vec<Vec<(usize, String)>> = match start {
            Start::Frames(given) => {
                let mut v = given.to_vec();
                v.resize(texts.len(), Vec::new());
                v
            }
            _ => {
                let mut requests = Vec::new();
                let mut meta = Vec::new();
                for (i, offsets) in triggers.iter().enumerate() {
                    if work[i].failed.is_some() {
                        continue;
                    }
                    for &t in offsets {
                        let candidates = self.index.candidates_in_text(&texts[i], t);
                        requests.push((i, encode_frame_prompt(&texts[i], t, &candidates)));
                        meta.push(t);
                    }
                }
                let outputs = self.call(&requests, chunked);
                let mut classified = vec![Vec::new(); texts.len()];
                for (((i, _), t), out) in requests.iter().zip(meta).zip(outputs) {
                    let w = &mut work[*i];
                    match out {
                        Ok(out) => {
                            let decoded = decode_frame_output(&out, self.catalog);
                            for d in decoded.diagnostics {
                                w.result
                                    .diagnostics
                                    .push(Diagnostic::new(d.stage, format!("trigger at {t}: {}", d.message)));
                            }
                            if let Some(frame) = decoded.value {
                                classified[*i].push((t, frame));
                            }
                        }
                        Err(e) => {
                            if w.failed.is_none() {
                                w.failed = Some((Stage::Frame, e));
                            }
                        }
                    }
                }
                classified
            }
        };

        // Stage 3: one args prompt per classified frame.
        let mut requests = Vec::new();
        let mut meta = Vec::new();
        for (i, fs) in frames.iter().enumerate() {
            let chars: Vec<char> = texts[i].chars().collect();
            for (t, name) in fs {
                let parsed = ParsedFrame {
                    trigger_start: *t,
                    trigger_end: token_end(&chars, *t),
                    frame_name: name.clone(),
                    elements: Vec::new(),
                };
                let w = &mut work[i];
                if w.failed.is_some() {
                    // Keep what stage 2 produced for the partial result.
                    w.result.frames.push(parsed);
                    continue;
                }
                let Some(def) = self.catalog.get(name) else {
                    w.result
                        .diagnostics
                        .push(Diagnostic::new(Stage::Args, format!("unknown frame {name} at {t}; skipped")));
                    continue;
                };
                requests.push((i, encode_args_prompt(&texts[i], *t, def)));
                meta.push((w.result.frames.len(), def));
                w.result.frames.push(parsed);
            }
        }
        let outputs = self.call(&requests, chunked);
        for (((i, _), (slot, def)), out) in requests.iter().zip(meta).zip(outputs) {
            let w = &mut work[*i];
            match out {
                Ok(out) => {
                    let frame = &mut w.result.frames[slot];
                    let decoded = decode_args_output(&out, def, &texts[*i], frame.trigger_start);
                    frame.elements = decoded.value;
                    w.result.diagnostics.extend(decoded.diagnostics);
                }
                Err(e) => {
                    if w.failed.is_none() {
                        w.failed = Some((Stage::Args, e));
                    }
                }
            }
        }

        work.into_iter()
            .map(|w| match w.failed {
                None => Ok(w.result),
                Some((stage, source)) => Err(PipelineError {
                    stage,
                    partial: w.result,
                    source,
                }),
            })
            .collect()
    }

    /// Sends `(sentence, prompt)` requests and returns one output per
    /// request, in order.
    fn call(&self, requests: &[(usize, String)], chunked: bool) -> Vec<Result<String, BackendError>> {
        if requests.is_empty() {
            return Vec::new();
        }
        let size = if chunked { self.batch_size.max(1) } else { requests.len() };
        let batches: Vec<&[(usize, String)]> = requests.chunks(size).collect();
        let results: Vec<Mutex<Option<Vec<Result<String, BackendError>>>>> =
            batches.iter().map(|_| Mutex::new(None)).collect();
        let next = AtomicUsize::new(0);
        let workers = self.max_in_flight.max(1).min(batches.len());
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let b = next.fetch_add(1, Ordering::SeqCst);
                    let Some(batch) = batches.get(b) else {
                        break;
                    };
                    let out = self.call_isolated(batch);
                    *results[b].lock().expect("not poisoned") = Some(out);
                });
            }
        });
        results
            .into_iter()
            .flat_map(|m| m.into_inner().expect("not poisoned").expect("every batch ran"))
            .collect()
    }

    fn call_once(&self, batch: &[(usize, String)]) -> Result<Vec<String>, BackendError> {
        let inputs: Vec<String> = batch.iter().map(|(_, p)| p.clone()).collect();
        let outputs = self.backend.generate_batch(&inputs)?;
        if outputs.len() != inputs.len() {
            return Err(BackendError::Protocol(format!(
                "sent {} inputs, got {} outputs",
                inputs.len(),
                outputs.len()
            )));
        }
        Ok(outputs)
    }

    /// One call for the batch; on failure, one call per sentence in it.
    fn call_isolated(&self, batch: &[(usize, String)]) -> Vec<Result<String, BackendError>> {
        let err = match self.call_once(batch) {
            Ok(outputs) => return outputs.into_iter().map(Ok).collect(),
            Err(e) => e,
        };
        let mut sentences: Vec<usize> = batch.iter().map(|(i, _)| *i).collect();
        sentences.dedup();
        if sentences.len() == 1 {
            return batch.iter().map(|_| Err(err.clone())).collect();
        }
        log::warn!("batch of {} prompts failed ({err}); retrying per sentence", batch.len());
        let mut out = Vec::with_capacity(batch.len());
        let mut rest = batch;
        while let Some((first, _)) = rest.first() {
            let n = rest.iter().take_while(|(i, _)| i == first).count();
            let (group, tail) = rest.split_at(n);
            match self.call_once(group) {
                Ok(outputs) => out.extend(outputs.into_iter().map(Ok)),
                Err(e) => out.extend(group.iter().map(|_| Err(e.clone()))),
            }
            rest = tail;
        }
        out
    }
}

/// Parses one sentence with default batching settings.
pub fn detect_frames(
    text: &str,
    backend: &dyn Seq2SeqBackend,
    catalog: &FrameCatalog,
    index: &LuIndex,
) -> SentenceResult {
    Pipeline::new(backend, catalog, index).detect_frames(text)
}

pub fn detect_frames_bulk(
    texts: &[String],
    backend: &dyn Seq2SeqBackend,
    catalog: &FrameCatalog,
    index: &LuIndex,
    batch_size: usize,
) -> Vec<SentenceResult> {
    Pipeline::new(backend, catalog, index)
        .with_batching(batch_size, 4)
        .detect_frames_bulk(texts)
}
