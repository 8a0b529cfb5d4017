use std::collections::BTreeSet;

use super::{Decoded, MARKER, TEXT_SEPARATOR};
use crate::model::{AnnotatedSentence, Diagnostic, Provenance, Stage, TaskKind, TaskRecord};
use crate::text::snap_to_token_start;

/// Number of consecutive equal characters needed to resynchronize after a
/// copy error in the model output.
pub const RESYNC_WINDOW: usize = 8;

/// How far ahead (in each string) resynchronization looks.
const MAX_SKIP: usize = 24;

/// More than this fraction of unmatched characters and the output is
/// considered unrelated to the sentence.
const MAX_UNALIGNED: f64 = 0.3;

/// Inserts a marker before each character offset in `offsets` (duplicates
/// and out-of-range offsets ignored).
pub fn mark_triggers(text: &str, offsets: &[usize]) -> String {
    let wanted: BTreeSet<usize> = offsets.iter().copied().collect();
    let mut out = String::with_capacity(text.len() + wanted.len());
    for (i, c) in text.chars().enumerate() {
        if wanted.contains(&i) {
            out.push(MARKER);
        }
        out.push(c);
    }
    out
}

pub fn encode_trigger_prompt(text: &str) -> String {
    format!("{}{TEXT_SEPARATOR}{text}", TaskKind::TriggerId.prompt_name())
}

pub fn encode_trigger_task(s: &AnnotatedSentence) -> TaskRecord {
    let starts: Vec<usize> = s.annotations.iter().map(|a| a.trigger.start).collect();
    TaskRecord {
        kind: TaskKind::TriggerId,
        input: encode_trigger_prompt(&s.text),
        target: mark_triggers(&s.text, &starts),
        provenance: Provenance::of(s, false),
    }
}

/// Character correspondence from a model output back to the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    /// For each output character, the source character it was copied from
    /// (or substituted for). `None` for inserted characters.
    pub map: Vec<Option<usize>>,
    /// Output characters equal to the source character they map to.
    pub matched: usize,
}

fn windows_agree(o: &[char], i: usize, q: &[char], j: usize) -> bool {
    let (ro, rq) = (o.len() - i, q.len() - j);
    let k = RESYNC_WINDOW.min(ro).min(rq);
    if k == 0 {
        return ro == rq;
    }
    if k < RESYNC_WINDOW && ro != rq {
        return false;
    }
    o[i..i + k] == q[j..j + k]
}

/// Greedy lockstep alignment of `output` against `source`. On a mismatch the
/// smallest pair of skips (source, output), by total length, after which
/// both strings agree for [`RESYNC_WINDOW`] characters is taken, pairing the
/// skipped runs position by position as far as they overlap; if there is none
/// within reach the two characters are treated as a substitution.
pub fn align(source: &[char], output: &[char]) -> Alignment {
    let mut map = vec![None; output.len()];
    let (mut i, mut j, mut matched) = (0, 0, 0);
    while j < output.len() && i < source.len() {
        if source[i] == output[j] {
            map[j] = Some(i);
            matched += 1;
            i += 1;
            j += 1;
            continue;
        }
        let mut skip = None;
        'search: for total in 1..=2 * MAX_SKIP {
            for a in total.saturating_sub(MAX_SKIP)..=total.min(MAX_SKIP) {
                let b = total - a;
                if i + a <= source.len()
                    && j + b <= output.len()
                    && windows_agree(source, i + a, output, j + b)
                {
                    skip = Some((a, b));
                    break 'search;
                }
            }
        }
        match skip {
            Some((a, b)) => {
                // The common prefix of both skipped runs is substitutions.
                for t in 0..a.min(b) {
                    map[j + t] = Some(i + t);
                }
                i += a;
                j += b;
            }
            None => {
                map[j] = Some(i);
                i += 1;
                j += 1;
            }
        }
    }
    Alignment { map, matched }
}

/// Recovers trigger start offsets (sorted, unique, on token starts) from a
/// marked copy of `original`.
pub fn decode_trigger_output(original: &str, output: &str) -> Decoded<Vec<usize>> {
    let diag = |m: String| Diagnostic::new(Stage::Trigger, m);
    let chars: Vec<char> = original.chars().collect();
    // Markers that happen to be part of the sentence are not trigger marks;
    // align against the sentence without them.
    let back: Vec<usize> = (0..chars.len()).filter(|&i| chars[i] != MARKER).collect();
    let source: Vec<char> = back.iter().map(|&i| chars[i]).collect();

    let mut stripped = Vec::new();
    let mut markers = Vec::new();
    for c in output.chars() {
        if c == MARKER {
            markers.push(stripped.len());
        } else {
            stripped.push(c);
        }
    }
    if markers.is_empty() {
        return Decoded::clean(Vec::new());
    }

    let mut diagnostics = Vec::new();
    let alignment = if source == stripped {
        Alignment {
            map: (0..source.len()).map(Some).collect(),
            matched: source.len(),
        }
    } else {
        let alignment = align(&source, &stripped);
        let denom = source.len().max(stripped.len());
        let unaligned = (denom - alignment.matched) as f64 / denom as f64;
        if unaligned > MAX_UNALIGNED {
            return Decoded {
                value: Vec::new(),
                diagnostics: vec![diag(format!(
                    "output does not match the sentence ({:.0}% unaligned); no triggers decoded",
                    unaligned * 100.0
                ))],
            };
        }
        diagnostics.push(diag("output differs from the sentence; realigned".to_string()));
        alignment
    };

    let mut offsets = BTreeSet::new();
    for p in markers {
        let Some(src) = alignment.map[p..].iter().find_map(|m| *m) else {
            diagnostics.push(diag(format!("marker at output position {p} has no following text; dropped")));
            continue;
        };
        let at = back[src];
        if at > 0 && chars[at - 1] == MARKER {
            // The sentence's own asterisk.
            continue;
        }
        match snap_to_token_start(&chars, at) {
            Some(start) => {
                if start != at {
                    diagnostics.push(diag(format!(
                        "marker at offset {at} is not at a token start; snapped to {start}"
                    )));
                }
                offsets.insert(start);
            }
            None => diagnostics.push(diag(format!("marker at offset {at} precedes no token; dropped"))),
        }
    }
    Decoded {
        value: offsets.into_iter().collect(),
        diagnostics,
    }
}
