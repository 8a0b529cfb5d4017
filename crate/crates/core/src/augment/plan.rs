//! Edit planners, one per augmenter.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::Rng;

use super::edit::Edit;
use super::{AugmentConfig, AugmenterKind, CaseMode, SynonymSource};
use crate::model::FrameAnnotation;

/// Characters the punctuation augmenter may delete.
pub const PUNCTUATION: &[char] = &['.', ',', ';', ':', '!', '?', '\'', '"', '(', ')', '-'];

const KEYBOARD_ROWS: [&str; 3] = ["qwertyuiop", "asdfghjkl", "zxcvbnm"];

/// Letters physically adjacent on a QWERTY layout (same row, plus the two
/// touching keys in each neighbouring row).
pub fn keyboard_neighbors(c: char) -> &'static [char] {
    static TABLE: OnceLock<Vec<Vec<char>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let rows: Vec<Vec<char>> = KEYBOARD_ROWS.iter().map(|r| r.chars().collect()).collect();
        let at = |r: isize, c: isize| -> Option<char> {
            if r < 0 || c < 0 {
                return None;
            }
            rows.get(r as usize)?.get(c as usize).copied()
        };
        let mut table = vec![Vec::new(); 26];
        for (r, row) in rows.iter().enumerate() {
            for (c, &key) in row.iter().enumerate() {
                let (r, c) = (r as isize, c as isize);
                let near = [(r, c - 1), (r, c + 1), (r - 1, c), (r - 1, c + 1), (r + 1, c - 1), (r + 1, c)];
                table[(key as u8 - b'a') as usize] =
                    near.iter().filter_map(|&(r, c)| at(r, c)).collect();
            }
        }
        table
    });
    match c.to_ascii_lowercase() {
        l @ 'a'..='z' => &table[(l as u8 - b'a') as usize],
        _ => &[],
    }
}

/// What planners must not disturb.
pub(crate) struct Protected {
    trigger_starts: BTreeSet<usize>,
    triggers: Vec<(usize, usize)>,
    /// Every span boundary (start and exclusive end).
    boundaries: BTreeSet<usize>,
    /// First and last character of every element span.
    element_edges: BTreeSet<usize>,
}

impl Protected {
    pub(crate) fn new(annotations: &[FrameAnnotation]) -> Self {
        let mut p = Protected {
            trigger_starts: BTreeSet::new(),
            triggers: Vec::new(),
            boundaries: BTreeSet::new(),
            element_edges: BTreeSet::new(),
        };
        for a in annotations {
            p.trigger_starts.insert(a.trigger.start);
            p.triggers.push((a.trigger.start, a.trigger.end));
            p.boundaries.extend([a.trigger.start, a.trigger.end]);
            for e in &a.elements {
                p.boundaries.extend([e.start, e.end]);
                p.element_edges.extend([e.start, e.end.saturating_sub(1)]);
            }
        }
        p
    }

    fn in_trigger(&self, i: usize) -> bool {
        self.triggers.iter().any(|&(s, e)| s <= i && i < e)
    }

    fn overlaps_trigger(&self, start: usize, end: usize) -> bool {
        self.triggers.iter().any(|&(s, e)| s < end && start < e)
    }

    fn boundary_strictly_inside(&self, start: usize, end: usize) -> bool {
        self.boundaries.range(start + 1..end).next().is_some()
    }
}

/// Whitespace-delimited words as (start, end) character offsets.
fn words(chars: &[char]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && !chars[i].is_whitespace() {
            i += 1;
        }
        out.push((start, i));
    }
    out
}

/// Alphabetic core of a word with surrounding punctuation trimmed.
fn word_core(chars: &[char], (start, end): (usize, usize)) -> (usize, usize) {
    let mut s = start;
    let mut e = end;
    while s < e && !chars[s].is_alphanumeric() {
        s += 1;
    }
    while e > s && !chars[e - 1].is_alphanumeric() {
        e -= 1;
    }
    (s, e)
}

pub(crate) fn plan(
    kind: AugmenterKind,
    chars: &[char],
    protected: &Protected,
    config: &AugmentConfig,
    synonyms: Option<&dyn SynonymSource>,
    rng: &mut impl Rng,
) -> Vec<Edit> {
    match kind {
        AugmenterKind::Quotes => quotes(chars),
        AugmenterKind::Synonyms => match synonyms {
            Some(source) => synonym(chars, protected, source, rng),
            None => Vec::new(),
        },
        AugmenterKind::Misspelling => misspell(chars, protected, config.char_edit_rate, rng, |c, rng| {
            let letter = loop {
                let l = char::from(b'a' + rng.gen_range(0..26u8));
                if l != c.to_ascii_lowercase() {
                    break l;
                }
            };
            Some(letter)
        }),
        AugmenterKind::Keyboard => misspell(chars, protected, config.char_edit_rate, rng, |c, rng| {
            keyboard_neighbors(c).choose(rng).copied()
        }),
        AugmenterKind::Punctuation => punctuation(chars, protected, config.punctuation_delete_rate, rng),
        AugmenterKind::Case => case(chars, config.case_mode, rng),
    }
}

/// LaTeX-style and typographic double quotes become straight quotes; when a
/// text has only straight quotes they become alternating `` and ''.
fn quotes(chars: &[char]) -> Vec<Edit> {
    let mut fancy = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let pair = chars.get(i + 1).copied();
        match (chars[i], pair) {
            ('`', Some('`')) | ('\'', Some('\'')) => {
                fancy.push(Edit::new(i, i + 2, "\""));
                i += 2;
                continue;
            }
            ('\u{201C}' | '\u{201D}' | '\u{201E}', _) => fancy.push(Edit::new(i, i + 1, "\"")),
            _ => {}
        }
        i += 1;
    }
    if !fancy.is_empty() {
        return fancy;
    }
    chars
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == '"')
        .enumerate()
        .map(|(n, (i, _))| Edit::new(i, i + 1, if n % 2 == 0 { "``" } else { "''" }))
        .collect()
}

/// Swaps one content word outside every trigger for a synonym. Words that a
/// span boundary cuts through are left alone.
fn synonym(chars: &[char], protected: &Protected, source: &dyn SynonymSource, rng: &mut impl Rng) -> Vec<Edit> {
    let mut sites = Vec::new();
    for w in words(chars) {
        let (s, e) = word_core(chars, w);
        if s == e
            || !chars[s..e].iter().all(|c| c.is_alphabetic())
            || protected.overlaps_trigger(s, e)
            || protected.boundary_strictly_inside(s, e)
        {
            continue;
        }
        let word: String = chars[s..e].iter().collect();
        let options = source.synonyms(&word.to_lowercase());
        if !options.is_empty() {
            sites.push((s, e, word, options));
        }
    }
    let Some((s, e, word, options)) = sites.choose(rng) else {
        return Vec::new();
    };
    let mut replacement = options.choose(rng).expect("non-empty").clone();
    if word.chars().all(|c| c.is_uppercase()) && word.chars().count() > 1 {
        replacement = replacement.to_uppercase();
    } else if word.chars().next().is_some_and(char::is_uppercase) {
        let mut cs = replacement.chars();
        if let Some(first) = cs.next() {
            replacement = first.to_uppercase().chain(cs).collect();
        }
    }
    vec![Edit::new(*s, *e, replacement)]
}

/// Each word is misspelled with probability `rate` by substituting one of its
/// ASCII letters. The first character of a trigger is never touched.
fn misspell<R: Rng>(
    chars: &[char],
    protected: &Protected,
    rate: f64,
    rng: &mut R,
    substitute: impl Fn(char, &mut R) -> Option<char>,
) -> Vec<Edit> {
    let mut out = Vec::new();
    for (s, e) in words(chars) {
        if !rng.gen_bool(rate) {
            continue;
        }
        let letters: Vec<usize> = (s..e)
            .filter(|&i| chars[i].is_ascii_alphabetic() && !protected.trigger_starts.contains(&i))
            .collect();
        let Some(&at) = letters.choose(rng) else {
            continue;
        };
        let Some(mut c) = substitute(chars[at], rng) else {
            continue;
        };
        if chars[at].is_ascii_uppercase() {
            c = c.to_ascii_uppercase();
        }
        out.push(Edit::new(at, at + 1, c.to_string()));
    }
    out
}

/// Deletes each eligible punctuation character with probability `rate`.
/// Characters inside triggers, right before a trigger, or at either edge of
/// an element span are kept so no token merges into a trigger and no span
/// loses its delimiting character.
fn punctuation(chars: &[char], protected: &Protected, rate: f64, rng: &mut impl Rng) -> Vec<Edit> {
    let mut out = Vec::new();
    for (i, &c) in chars.iter().enumerate() {
        if !PUNCTUATION.contains(&c)
            || protected.in_trigger(i)
            || protected.trigger_starts.contains(&(i + 1))
            || protected.element_edges.contains(&i)
        {
            continue;
        }
        if rng.gen_bool(rate) {
            out.push(Edit::new(i, i + 1, ""));
        }
    }
    out
}

/// Upper- or lowercases the whole text as one edit, only when that keeps the
/// character count.
fn case(chars: &[char], mode: CaseMode, rng: &mut impl Rng) -> Vec<Edit> {
    let text: String = chars.iter().collect();
    let upper = match mode {
        CaseMode::Random => rng.gen_bool(0.5),
        CaseMode::Lower => false,
        CaseMode::Upper => true,
    };
    let changed = if upper {
        text.to_uppercase()
    } else {
        text.to_lowercase()
    };
    if changed == text || changed.chars().count() != chars.len() {
        return Vec::new();
    }
    vec![Edit::new(0, chars.len(), changed)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbors_are_adjacent_keys() {
        let mut s = keyboard_neighbors('s').to_vec();
        s.sort();
        assert_eq!(s, ['a', 'd', 'e', 'w', 'x', 'z']);
        assert_eq!(keyboard_neighbors('Q'), ['w', 'a']);
        assert!(keyboard_neighbors('1').is_empty());
    }

    #[test]
    fn latex_quotes_become_straight() {
        let chars: Vec<char> = "``hello'' ".chars().collect();
        assert_eq!(quotes(&chars), [Edit::new(0, 2, "\""), Edit::new(7, 9, "\"")]);
        let chars: Vec<char> = "say \"hi\" now".chars().collect();
        assert_eq!(quotes(&chars), [Edit::new(4, 5, "``"), Edit::new(7, 8, "''")]);
    }
}
