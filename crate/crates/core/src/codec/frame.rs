use super::{mark_trigger, Decoded, TEXT_SEPARATOR};
use crate::model::{
    AnnotatedSentence, Diagnostic, FrameAnnotation, FrameCatalog, Provenance, Stage, TaskKind,
    TaskRecord,
};

/// `FRAME <candidates>: <text with the trigger marked>`.
pub fn encode_frame_prompt(text: &str, trigger_start: usize, candidates: &[String]) -> String {
    format!(
        "{} {}{TEXT_SEPARATOR}{}",
        TaskKind::FrameClassification.prompt_name(),
        candidates.join(" "),
        mark_trigger(text, trigger_start)
    )
}

pub fn encode_frame_task(
    s: &AnnotatedSentence,
    annotation: &FrameAnnotation,
    candidates: &[String],
) -> TaskRecord {
    TaskRecord {
        kind: TaskKind::FrameClassification,
        input: encode_frame_prompt(&s.text, annotation.trigger.start, candidates),
        target: annotation.frame.clone(),
        provenance: Provenance::of(s, false),
    }
}

/// Exact frame name after trimming, else a unique case-insensitive match
/// (flagged), else `None`.
pub fn decode_frame_output(output: &str, catalog: &FrameCatalog) -> Decoded<Option<String>> {
    let name = output.trim();
    if catalog.contains(name) {
        return Decoded::clean(Some(name.to_string()));
    }
    let diag = |m: String| vec![Diagnostic::new(Stage::Frame, m)];
    match catalog.lookup_case_insensitive(name) {
        [only] => Decoded {
            value: Some(only.clone()),
            diagnostics: diag(format!("frame {name:?} matched {only} ignoring case")),
        },
        [] => Decoded {
            value: None,
            diagnostics: diag(format!("unknown frame {name:?}")),
        },
        many => Decoded {
            value: None,
            diagnostics: diag(format!("frame {name:?} is ambiguous: {}", many.join(", "))),
        },
    }
}
