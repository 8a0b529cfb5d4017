//! Character-offset helpers and the two tokenizations used by the toolkit.
//!
//! *Trigger tokens* are maximal runs of alphanumeric characters plus every
//! other non-whitespace character on its own; trigger locations are compared
//! at the start of these tokens. *Lookup tokens* are whitespace-separated
//! words with surrounding punctuation stripped; they feed lexical-unit lookup.

/// Byte offset of the character at `char_idx` (or `text.len()` past the end).
pub fn byte_offset(text: &str, char_idx: usize) -> usize {
    text.char_indices()
        .nth(char_idx)
        .map(|(b, _)| b)
        .unwrap_or(text.len())
}

/// Substring by character offsets, clamped to the text.
pub fn char_slice(text: &str, start: usize, end: usize) -> &str {
    let begin = byte_offset(text, start);
    let finish = byte_offset(text, end.max(start));
    &text[begin..finish]
}

pub fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn starts_token(chars: &[char], i: usize) -> bool {
    let c = chars[i];
    if c.is_whitespace() {
        return false;
    }
    if i == 0 {
        return true;
    }
    let prev = chars[i - 1];
    prev.is_whitespace() || !is_word_char(c) || !is_word_char(prev)
}

/// Character offsets at which a trigger token starts.
pub fn token_starts(text: &str) -> Vec<usize> {
    let chars: Vec<char> = text.chars().collect();
    (0..chars.len()).filter(|&i| starts_token(&chars, i)).collect()
}

pub fn is_token_start(chars: &[char], offset: usize) -> bool {
    offset < chars.len() && starts_token(chars, offset)
}

/// Exclusive end of the trigger token beginning at `start`.
pub fn token_end(chars: &[char], start: usize) -> usize {
    match chars.get(start) {
        Some(&c) if is_word_char(c) => {
            let mut end = start + 1;
            while end < chars.len() && is_word_char(chars[end]) {
                end += 1;
            }
            end
        }
        Some(_) => start + 1,
        None => start,
    }
}

/// Moves `offset` to the start of the trigger token containing it, or to the
/// next token start when it points at whitespace. `None` past the last token.
pub fn snap_to_token_start(chars: &[char], offset: usize) -> Option<usize> {
    if offset >= chars.len() {
        return None;
    }
    if chars[offset].is_whitespace() {
        return (offset..chars.len()).find(|&i| starts_token(chars, i));
    }
    let mut i = offset;
    while !starts_token(chars, i) {
        i -= 1;
    }
    Some(i)
}

/// Trims leading and trailing non-alphanumeric characters.
pub fn strip_punctuation(token: &str) -> &str {
    token.trim_matches(|c: char| !c.is_alphanumeric())
}

/// Neighbourhood of a trigger for lexical-unit lookup: the previous
/// whitespace word, the word starting at the trigger, and the next word, each
/// stripped of surrounding punctuation. Returns the tokens and the trigger's
/// position among them.
pub fn lookup_tokens(text: &str, trigger_start: usize) -> (Vec<String>, usize) {
    let split = byte_offset(text, trigger_start);
    let (before, after) = text.split_at(split);
    let mut tokens = Vec::with_capacity(3);
    if let Some(prev) = before.split_whitespace().last() {
        tokens.push(strip_punctuation(prev).to_string());
    }
    let trigger_index = tokens.len();
    let mut rest = after.split_whitespace();
    tokens.push(rest.next().map(strip_punctuation).unwrap_or("").to_string());
    if let Some(next) = rest.next() {
        tokens.push(strip_punctuation(next).to_string());
    }
    (tokens, trigger_index)
}

/// Character offsets of every (possibly overlapping) occurrence of `needle`.
pub fn find_all(haystack: &[char], needle: &[char]) -> Vec<usize> {
    if needle.is_empty() || needle.len() > haystack.len() {
        return Vec::new();
    }
    haystack
        .windows(needle.len())
        .enumerate()
        .filter(|(_, w)| *w == needle)
        .map(|(i, _)| i)
        .collect()
}

/// Shrinks `[start, end)` so it neither begins nor ends with whitespace.
pub fn trim_span(chars: &[char], start: usize, end: usize) -> (usize, usize) {
    let end = end.min(chars.len());
    let mut s = start.min(end);
    let mut e = end;
    while s < e && chars[s].is_whitespace() {
        s += 1;
    }
    while e > s && chars[e - 1].is_whitespace() {
        e -= 1;
    }
    (s, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    #[test]
    fn token_starts_split_words_and_punctuation() {
        let text = "It was no use *trying.";
        let starts = token_starts(text);
        assert_eq!(starts, vec![0, 3, 7, 10, 14, 15, 21]);
        assert_eq!(token_starts("state-of-the-art"), vec![0, 5, 6, 8, 9, 12, 13]);
    }

    #[test]
    fn snapping() {
        let c = chars("It was no use trying the lift.");
        assert_eq!(snap_to_token_start(&c, 16), Some(14));
        assert_eq!(snap_to_token_start(&c, 14), Some(14));
        assert_eq!(snap_to_token_start(&c, 13), Some(14));
        assert_eq!(snap_to_token_start(&c, 29), Some(29));
        assert_eq!(snap_to_token_start(&c, 30), None);
        assert_eq!(token_end(&c, 14), 20);
        assert_eq!(token_end(&c, 29), 30);
    }

    #[test]
    fn lookup_context() {
        let text = "It was no use trying the lift.";
        assert_eq!(
            lookup_tokens(text, 14),
            (vec!["use".into(), "trying".into(), "the".into()], 1)
        );
        assert_eq!(
            lookup_tokens(text, 25),
            (vec!["the".into(), "lift".into()], 1)
        );
        assert_eq!(lookup_tokens(text, 0), (vec!["It".into(), "was".into()], 0));
    }

    #[test]
    fn char_offsets_are_not_bytes() {
        let text = "Café au lait";
        assert_eq!(char_slice(text, 5, 7), "au");
        assert_eq!(find_all(&chars(text), &chars("a")), vec![1, 5, 9]);
        assert_eq!(trim_span(&chars(" ab "), 0, 4), (1, 3));
    }
}
