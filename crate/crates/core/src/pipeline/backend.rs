//! The text-to-text model boundary and its two implementations.

use std::collections::HashMap;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::codec::{encode_args_task, encode_frame_task, encode_trigger_task, prompt_text};
use crate::error::{Error, Result};
use crate::jsonl;
use crate::lu_index::LuIndex;
use crate::model::{AnnotatedSentence, FrameCatalog};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BackendError {
    #[error("backend unreachable: {0}")]
    Unreachable(String),
    #[error("backend timed out: {0}")]
    Timeout(String),
    #[error("backend returned HTTP {status}: {body}")]
    Status { status: u16, body: String },
    #[error("backend protocol error: {0}")]
    Protocol(String),
}

impl BackendError {
    /// Connection-level failures, as opposed to a misbehaving server.
    pub fn is_unreachable(&self) -> bool {
        matches!(self, BackendError::Unreachable(_) | BackendError::Timeout(_))
    }
}

/// A batch text-to-text model. Outputs must match inputs in length and order.
pub trait Seq2SeqBackend: Send + Sync {
    fn generate_batch(&self, inputs: &[String]) -> std::result::Result<Vec<String>, BackendError>;
}

/// One scripted exchange, as stored in script files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exchange {
    pub input: String,
    pub output: String,
}

/// Deterministic test double: known prompts get their canned output, anything
/// else gets the text part of its prompt echoed back.
#[derive(Debug, Default)]
pub struct ScriptedBackend {
    script: HashMap<String, String>,
    calls: AtomicUsize,
    batch_sizes: Mutex<Vec<usize>>,
}

impl ScriptedBackend {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_exchanges(exchanges: impl IntoIterator<Item = Exchange>) -> Self {
        let mut b = Self::new();
        for e in exchanges {
            b.insert(e.input, e.output);
        }
        b
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(Self::from_exchanges(jsonl::read::<Exchange>(path)?))
    }

    /// Answers every prompt the pipeline would issue for `sentences` with
    /// the gold output, so parsing reproduces the gold annotations. Frame
    /// prompts use candidates from `index` exactly as the pipeline does.
    pub fn from_gold(sentences: &[AnnotatedSentence], catalog: &FrameCatalog, index: &LuIndex) -> Self {
        let mut b = Self::new();
        for s in sentences {
            let t = encode_trigger_task(s);
            b.insert(t.input, t.target);
            for a in &s.annotations {
                let candidates = index.candidates_in_text(&s.text, a.trigger.start);
                let f = encode_frame_task(s, a, &candidates);
                b.insert(f.input, f.target);
                if let Some(frame) = catalog.get(&a.frame) {
                    let r = encode_args_task(s, a, frame);
                    b.insert(r.input, r.target);
                }
            }
        }
        b
    }

    pub fn insert(&mut self, input: impl Into<String>, output: impl Into<String>) {
        self.script.insert(input.into(), output.into());
    }

    pub fn len(&self) -> usize {
        self.script.len()
    }

    pub fn is_empty(&self) -> bool {
        self.script.is_empty()
    }

    /// Script entries sorted by input, for writing to a file.
    pub fn exchanges(&self) -> Vec<Exchange> {
        let mut v: Vec<Exchange> = self
            .script
            .iter()
            .map(|(i, o)| Exchange {
                input: i.clone(),
                output: o.clone(),
            })
            .collect();
        v.sort_by(|a, b| a.input.cmp(&b.input));
        v
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        jsonl::write(path, &self.exchanges())
    }

    pub fn respond(&self, input: &str) -> String {
        match self.script.get(input) {
            Some(out) => out.clone(),
            None => prompt_text(input).unwrap_or(input).to_string(),
        }
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }

    /// Size of every batch received so far, in arrival order.
    pub fn batch_sizes(&self) -> Vec<usize> {
        self.batch_sizes.lock().expect("not poisoned").clone()
    }
}

impl Seq2SeqBackend for ScriptedBackend {
    fn generate_batch(&self, inputs: &[String]) -> std::result::Result<Vec<String>, BackendError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.batch_sizes.lock().expect("not poisoned").push(inputs.len());
        Ok(inputs.iter().map(|i| self.respond(i)).collect())
    }
}

#[derive(Serialize)]
struct GenerateRequest<'a> {
    inputs: &'a [String],
    max_new_tokens: usize,
}

#[derive(Deserialize)]
struct GenerateResponse {
    outputs: Vec<String>,
}

/// Client for the `/generate` wire protocol.
#[derive(Debug, Clone)]
pub struct HttpBackend {
    base: String,
    client: reqwest::blocking::Client,
    pub max_new_tokens: usize,
}

impl HttpBackend {
    pub const DEFAULT_MAX_NEW_TOKENS: usize = 512;

    pub fn new(base_url: &str, timeout: Duration) -> Result<Self> {
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| Error::Config(format!("http client: {e}")))?;
        Ok(HttpBackend {
            base: base_url.trim_end_matches('/').to_string(),
            client,
            max_new_tokens: Self::DEFAULT_MAX_NEW_TOKENS,
        })
    }

    fn classify(&self, e: reqwest::Error) -> BackendError {
        if e.is_timeout() {
            BackendError::Timeout(format!("{}: {e}", self.base))
        } else if e.is_connect() || e.is_request() {
            BackendError::Unreachable(format!("{}: {e}", self.base))
        } else {
            BackendError::Protocol(e.to_string())
        }
    }

    /// `GET /healthz` must answer 200.
    pub fn health(&self) -> std::result::Result<(), BackendError> {
        let resp = self
            .client
            .get(format!("{}/healthz", self.base))
            .send()
            .map_err(|e| self.classify(e))?;
        match resp.status().as_u16() {
            200 => Ok(()),
            status => Err(BackendError::Status {
                status,
                body: resp.text().unwrap_or_default(),
            }),
        }
    }
}

impl Seq2SeqBackend for HttpBackend {
    fn generate_batch(&self, inputs: &[String]) -> std::result::Result<Vec<String>, BackendError> {
        let resp = self
            .client
            .post(format!("{}/generate", self.base))
            .json(&GenerateRequest {
                inputs,
                max_new_tokens: self.max_new_tokens,
            })
            .send()
            .map_err(|e| self.classify(e))?;
        let status = resp.status().as_u16();
        if status != 200 {
            return Err(BackendError::Status {
                status,
                body: resp.text().unwrap_or_default(),
            });
        }
        let body: GenerateResponse = resp
            .json()
            .map_err(|e| BackendError::Protocol(format!("bad response body: {e}")))?;
        if body.outputs.len() != inputs.len() {
            return Err(BackendError::Protocol(format!(
                "sent {} inputs, got {} outputs",
                inputs.len(),
                body.outputs.len()
            )));
        }
        Ok(body.outputs)
    }
}
