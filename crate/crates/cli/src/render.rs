//! Plain-text view of a parse: the sentence, then each frame with carets
//! under its trigger and its elements.

use std::fmt::Write;

use frameparse::ParseResult;

fn underline(width: usize, start: usize, end: usize, mark: char, label: &str) -> String {
    let mut line: String = " ".repeat(start.min(width));
    line.extend(std::iter::repeat(mark).take(end.saturating_sub(start).max(1)));
    format!("{line} {label}")
}

pub fn tree(p: &ParseResult) -> String {
    let width = p.text.chars().count();
    let mut out = String::new();
    let _ = writeln!(out, "{}", p.text);
    for f in &p.frames {
        let _ = writeln!(out, "{}", underline(width, f.trigger_start, f.trigger_end, '^', &f.frame_name));
        for e in &f.elements {
            let _ = writeln!(out, "{}", underline(width, e.start, e.end, '-', &e.element));
        }
    }
    for d in &p.diagnostics {
        let _ = writeln!(out, "! {:?}: {}", d.stage, d.message);
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use frameparse::{ElementSpan, ParsedFrame};

    #[test]
    fn carets_sit_under_the_trigger() {
        let p = ParseResult {
            text: "It was no use trying the lift.".into(),
            triggers: vec![14],
            frames: vec![ParsedFrame {
                trigger_start: 14,
                trigger_end: 20,
                frame_name: "Attempt_means".into(),
                elements: vec![ElementSpan::new("Means", 21, 29)],
            }],
            diagnostics: vec![],
        };
        let lines: Vec<String> = tree(&p).lines().map(String::from).collect();
        assert_eq!(lines[1], format!("{}^^^^^^ Attempt_means", " ".repeat(14)));
        assert_eq!(lines[2], format!("{}-------- Means", " ".repeat(21)));
    }
}
