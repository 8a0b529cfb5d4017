//! Prompt encoders for the three tasks and the matching output decoders.
//!
//! Prompts are `NAME hints: text`. The trigger task marks every trigger with
//! `*`; frame and argument prompts mark only the trigger they are about.
//! Decoders never fail: anything they cannot use is dropped and reported as
//! a [`Diagnostic`].

mod args;
mod frame;
mod trigger;

pub use args::{decode_args_output, encode_args_prompt, encode_args_target, encode_args_task};
pub use frame::{decode_frame_output, encode_frame_prompt, encode_frame_task};
pub use trigger::{
    align, decode_trigger_output, encode_trigger_prompt, encode_trigger_task, mark_triggers, Alignment, RESYNC_WINDOW,
};

use crate::model::{Diagnostic, TaskKind};

pub const MARKER: char = '*';

/// Separator between the task name/hints and the sentence.
pub const TEXT_SEPARATOR: &str = ": ";

/// A decoded value plus whatever went wrong while decoding it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded<T> {
    pub value: T,
    pub diagnostics: Vec<Diagnostic>,
}

impl<T> Decoded<T> {
    pub fn clean(value: T) -> Self {
        Decoded {
            value,
            diagnostics: Vec::new(),
        }
    }
}

/// `text` with a marker inserted before character `trigger_start`.
pub fn mark_trigger(text: &str, trigger_start: usize) -> String {
    mark_triggers(text, &[trigger_start])
}

/// Sentence part of a prompt (everything after the first `": "`), or `None`
/// when `input` does not look like a prompt.
pub fn prompt_text(input: &str) -> Option<&str> {
    input.split_once(TEXT_SEPARATOR).map(|(_, text)| text)
}

/// Task kind named by the leading word of a prompt.
pub fn prompt_kind(input: &str) -> Option<TaskKind> {
    let head = input.split([' ', ':']).next()?;
    TaskKind::ALL.into_iter().find(|k| k.prompt_name() == head)
}
