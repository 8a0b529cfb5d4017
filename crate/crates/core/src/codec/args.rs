use super::{mark_trigger, Decoded, TEXT_SEPARATOR};
use crate::model::{
    AnnotatedSentence, Diagnostic, ElementSpan, FrameAnnotation, FrameDef, Provenance, Stage,
    TaskKind, TaskRecord,
};
use crate::text::{char_slice, find_all};

pub const ITEM_SEPARATOR: &str = " | ";

/// `ARGS <Frame> | <elements>: <text with the trigger marked>`.
pub fn encode_args_prompt(text: &str, trigger_start: usize, frame: &FrameDef) -> String {
    format!(
        "{} {}{ITEM_SEPARATOR}{}{TEXT_SEPARATOR}{}",
        TaskKind::ArgExtraction.prompt_name(),
        frame.name,
        frame.elements.join(" "),
        mark_trigger(text, trigger_start)
    )
}

/// `Element="text" | ...` in span order.
pub fn encode_args_target(text: &str, elements: &[ElementSpan]) -> String {
    let mut sorted: Vec<&ElementSpan> = elements.iter().collect();
    sorted.sort_by(|a, b| (a.start, a.end, &a.element).cmp(&(b.start, b.end, &b.element)));
    sorted
        .iter()
        .map(|e| format!("{}=\"{}\"", e.element, char_slice(text, e.start, e.end)))
        .collect::<Vec<_>>()
        .join(ITEM_SEPARATOR)
}

pub fn encode_args_task(
    s: &AnnotatedSentence,
    annotation: &FrameAnnotation,
    frame: &FrameDef,
) -> TaskRecord {
    TaskRecord {
        kind: TaskKind::ArgExtraction,
        input: encode_args_prompt(&s.text, annotation.trigger.start, frame),
        target: encode_args_target(&s.text, &annotation.elements),
        provenance: Provenance::of(s, false),
    }
}

/// True when `rest` starts with optional spaces, an element-like name and `=`.
fn starts_item(rest: &str) -> bool {
    let rest = rest.trim_start();
    let name_len = rest
        .find(|c: char| c.is_whitespace() || c == '=' || c == '"' || c == '|')
        .unwrap_or(rest.len());
    name_len > 0 && rest[name_len..].trim_start().starts_with('=')
}

/// Splits on `|` only where the next item begins, so that argument text may
/// itself contain a bar.
fn split_items(output: &str) -> Vec<&str> {
    let mut items = Vec::new();
    let mut begin = 0;
    for (i, _) in output.match_indices('|') {
        if starts_item(&output[i + 1..]) {
            items.push(&output[begin..i]);
            begin = i + 1;
        }
    }
    items.push(&output[begin..]);
    items
}

/// Strips one pair of outermost double quotes; inner quotes are kept.
fn unquote(value: &str) -> (&str, bool) {
    let v = value.trim();
    match (v.strip_prefix('"'), v.len() >= 2 && v.ends_with('"')) {
        (Some(inner), true) => (&inner[..inner.len() - 1], true),
        (Some(inner), false) => (inner, false),
        (None, true) => (&v[..v.len() - 1], false),
        (None, false) => (v, false),
    }
}

/// Parses `Element="text" | ...` into spans of `original`, placing each
/// argument at its occurrence nearest the trigger (leftmost on ties).
pub fn decode_args_output(
    output: &str,
    frame: &FrameDef,
    original: &str,
    trigger_start: usize,
) -> Decoded<Vec<ElementSpan>> {
    let mut diagnostics = Vec::new();
    let mut spans: Vec<ElementSpan> = Vec::new();
    if output.trim().is_empty() {
        return Decoded::clean(spans);
    }
    let mut diag = |m: String| diagnostics.push(Diagnostic::new(Stage::Args, m));
    let chars: Vec<char> = original.chars().collect();
    for item in split_items(output) {
        let item = item.trim();
        let Some((name, value)) = item.split_once('=') else {
            diag(format!("unparseable argument {item:?}"));
            continue;
        };
        let name = name.trim();
        if !frame.has_element(name) {
            diag(format!("{} has no element {name:?}", frame.name));
            continue;
        }
        if spans.iter().any(|s| s.element == name) {
            diag(format!("element {name} repeated; later value ignored"));
            continue;
        }
        let (text, quoted) = unquote(value);
        if !quoted {
            diag(format!("argument {name} is not properly quoted"));
        }
        let needle: Vec<char> = text.chars().collect();
        let nearest = find_all(&chars, &needle)
            .into_iter()
            .min_by_key(|&start| (start.abs_diff(trigger_start), start));
        match nearest {
            Some(start) => spans.push(ElementSpan::new(name, start, start + needle.len())),
            None => diag(format!("argument {name}={text:?} not found in the sentence")),
        }
    }
    Decoded {
        value: spans,
        diagnostics,
    }
}
