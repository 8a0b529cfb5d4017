//! Frame semantic parsing as three chained text-to-text tasks.
//!
//! A sentence is parsed by first marking the words that evoke a frame
//! (`TRIGGER: ...`), then classifying each marked trigger against a short
//! list of candidate frames drawn from lexical units (`FRAME ...: ...`), and
//! finally extracting the frame elements of each classified frame
//! (`ARGS ...: ...`). The model that answers those prompts lives behind the
//! [`pipeline::Seq2SeqBackend`] trait; everything else, from corpus ingest to
//! training data generation and scoring, is implemented here.

pub mod augment;
pub mod codec;
pub mod dataset;
pub mod error;
pub mod evaluate;
pub mod ingest;
pub mod jsonl;
pub mod lu_index;
pub mod model;
pub mod normalize;
pub mod pipeline;
pub mod text;

pub use error::{Error, Result};
pub use model::{
    AnnotatedSentence, Diagnostic, ElementSpan, FrameAnnotation, FrameCatalog, FrameDef,
    ParseResult, ParsedFrame, Source, Span, Stage, TaskKind, TaskRecord,
};
