//! Twenty gold/prediction pairs with tp/fp/fn counted by hand, one line of
//! reasoning per case. Texts are ASCII so byte and char offsets agree.

use frameparse::evaluate::Counts;
use frameparse::{AnnotatedSentence, ElementSpan, FrameAnnotation, FrameCatalog, FrameDef, ParseResult, ParsedFrame, Source, Span};

pub struct MetricCase {
    pub gold: AnnotatedSentence,
    pub pred: ParseResult,
    /// Triggers, frames, args.
    pub expected: [Counts; 3],
}

pub fn metric_catalog() -> FrameCatalog {
    FrameCatalog::from_frames([
        FrameDef::new("Motion", ["Theme", "Goal", "Source"], ["run.v", "fly.v", "come.v", "fall.v", "leave.v"]),
        FrameDef::new("Ingestion", ["Ingestor", "Ingestibles"], ["eat.v"]),
        FrameDef::new("Giving", ["Donor", "Recipient", "Theme"], ["give.v", "gift.n"]),
    ])
    .unwrap()
}

fn find(text: &str, needle: &str) -> (usize, usize) {
    let s = text.find(needle).unwrap_or_else(|| panic!("{needle:?} not in {text:?}"));
    (s, s + needle.len())
}

fn elems(text: &str, items: &[(&str, &str)]) -> Vec<ElementSpan> {
    items
        .iter()
        .map(|(e, phrase)| {
            let (s, t) = find(text, phrase);
            ElementSpan::new(*e, s, t)
        })
        .collect()
}

fn g(text: &str, frame: &str, trigger: &str, items: &[(&str, &str)]) -> FrameAnnotation {
    let (s, e) = find(text, trigger);
    FrameAnnotation::new(frame, Span::new(s, e), elems(text, items))
}

fn p(text: &str, frame: &str, trigger: &str, items: &[(&str, &str)]) -> ParsedFrame {
    let (s, e) = find(text, trigger);
    ParsedFrame {
        trigger_start: s,
        trigger_end: e,
        frame_name: frame.into(),
        elements: elems(text, items),
    }
}

fn c(tp: usize, fp: usize, fn_: usize) -> Counts {
    Counts::new(tp, fp, fn_)
}

fn case(
    n: usize,
    text: &str,
    gold: Vec<FrameAnnotation>,
    triggers: &[&str],
    frames: Vec<ParsedFrame>,
    expected: [Counts; 3],
) -> MetricCase {
    let mut t: Vec<usize> = triggers.iter().map(|w| find(text, w).0).collect();
    t.sort_unstable();
    MetricCase {
        gold: AnnotatedSentence::new(text, "metric", n.to_string(), Source::Fulltext, gold),
        pred: ParseResult {
            text: text.into(),
            triggers: t,
            frames,
            diagnostics: Vec::new(),
        },
        expected,
    }
}

pub fn metric_cases() -> Vec<MetricCase> {
    let mut v = Vec::new();

    // Everything right.
    let t = "The dog ran home.";
    let gold = vec![g(t, "Motion", "ran", &[("Theme", "The dog"), ("Goal", "home")])];
    let pred = vec![p(t, "Motion", "ran", &[("Theme", "The dog"), ("Goal", "home")])];
    v.push(case(1, t, gold, &["ran"], pred, [c(1, 0, 0), c(1, 0, 0), c(2, 0, 0)]));

    // One argument span too short: wrong span is fp and fn.
    let t = "She ate an apple.";
    let gold = vec![g(t, "Ingestion", "ate", &[("Ingestor", "She"), ("Ingestibles", "an apple")])];
    let pred = vec![p(t, "Ingestion", "ate", &[("Ingestor", "She"), ("Ingestibles", "apple")])];
    v.push(case(2, t, gold, &["ate"], pred, [c(1, 0, 0), c(1, 0, 0), c(1, 1, 1)]));

    // Wrong frame: frame fp+fn, its argument fp, all three gold arguments fn.
    let t = "He gave her a book.";
    let gold = vec![g(t, "Giving", "gave", &[("Donor", "He"), ("Recipient", "her"), ("Theme", "a book")])];
    let pred = vec![p(t, "Motion", "gave", &[("Theme", "a book")])];
    v.push(case(3, t, gold, &["gave"], pred, [c(1, 0, 0), c(0, 1, 1), c(0, 1, 3)]));

    // Trigger missed: everything below it is fn.
    let t = "Birds flew south.";
    let gold = vec![g(t, "Motion", "flew", &[("Theme", "Birds"), ("Goal", "south")])];
    v.push(case(4, t, gold, &[], vec![], [c(0, 0, 1), c(0, 0, 1), c(0, 0, 2)]));

    // Spurious trigger on a sentence without annotations.
    let t = "Nothing happened here.";
    let pred = vec![p(t, "Motion", "happened", &[("Theme", "Nothing")])];
    v.push(case(5, t, vec![], &["happened"], pred, [c(0, 1, 0), c(0, 1, 0), c(0, 1, 0)]));

    // Two frames, both right.
    let t = "They ate and ran.";
    let gold = vec![g(t, "Ingestion", "ate", &[("Ingestor", "They")]), g(t, "Motion", "ran", &[("Theme", "They")])];
    let pred = vec![p(t, "Ingestion", "ate", &[("Ingestor", "They")]), p(t, "Motion", "ran", &[("Theme", "They")])];
    v.push(case(6, t, gold, &["ate", "ran"], pred, [c(2, 0, 0), c(2, 0, 0), c(2, 0, 0)]));

    // Second of two triggers missed.
    let t = "We ate and left.";
    let gold = vec![g(t, "Ingestion", "ate", &[("Ingestor", "We")]), g(t, "Motion", "left", &[("Theme", "We")])];
    let pred = vec![p(t, "Ingestion", "ate", &[("Ingestor", "We")])];
    v.push(case(7, t, gold, &["ate"], pred, [c(1, 0, 1), c(1, 0, 1), c(1, 0, 1)]));

    // Labels swapped on correct spans: two fp and two fn.
    let t = "The cat ate fish.";
    let gold = vec![g(t, "Ingestion", "ate", &[("Ingestor", "The cat"), ("Ingestibles", "fish")])];
    let pred = vec![p(t, "Ingestion", "ate", &[("Ingestibles", "The cat"), ("Ingestor", "fish")])];
    v.push(case(8, t, gold, &["ate"], pred, [c(1, 0, 0), c(1, 0, 0), c(0, 2, 2)]));

    // One extra argument.
    let t = "Kids ran to school.";
    let gold = vec![g(t, "Motion", "ran", &[("Theme", "Kids"), ("Goal", "to school")])];
    let pred = vec![p(t, "Motion", "ran", &[("Theme", "Kids"), ("Goal", "to school"), ("Source", "school")])];
    v.push(case(9, t, gold, &["ran"], pred, [c(1, 0, 0), c(1, 0, 0), c(2, 1, 0)]));

    // Gold trigger starts inside its token; matching is on the token start.
    let t = "They were running late.";
    let (s, e) = find(t, "running");
    let gold = vec![FrameAnnotation::new("Motion", Span::new(s + 3, e), elems(t, &[("Theme", "They")]))];
    let pred = vec![p(t, "Motion", "running", &[("Theme", "They")])];
    v.push(case(10, t, gold, &["running"], pred, [c(1, 0, 0), c(1, 0, 0), c(1, 0, 0)]));

    // Trailing space on a predicted span is trimmed away.
    let t = "A bus came .";
    let gold = vec![g(t, "Motion", "came", &[("Theme", "A bus")])];
    let pred = vec![p(t, "Motion", "came", &[("Theme", "A bus ")])];
    v.push(case(11, t, gold, &["came"], pred, [c(1, 0, 0), c(1, 0, 0), c(1, 0, 0)]));

    // The same argument predicted twice: the copy is fp.
    let t = "Dogs ate bones.";
    let gold = vec![g(t, "Ingestion", "ate", &[("Ingestor", "Dogs")])];
    let pred = vec![p(t, "Ingestion", "ate", &[("Ingestor", "Dogs"), ("Ingestor", "Dogs")])];
    v.push(case(12, t, gold, &["ate"], pred, [c(1, 0, 0), c(1, 0, 0), c(1, 1, 0)]));

    // Trigger on the wrong word: one fp and one fn at every level.
    let t = "The boy gave up.";
    let gold = vec![g(t, "Giving", "gave", &[("Donor", "The boy")])];
    let pred = vec![p(t, "Giving", "up", &[("Donor", "The boy")])];
    v.push(case(13, t, gold, &["up"], pred, [c(0, 1, 1), c(0, 1, 1), c(0, 1, 1)]));

    // Nothing gold, nothing predicted.
    v.push(case(14, "Quiet night.", vec![], &[], vec![], [c(0, 0, 0), c(0, 0, 0), c(0, 0, 0)]));

    // Second frame right but its argument missing.
    let t = "Ann gave Bob food and ate.";
    let gold = vec![
        g(t, "Giving", "gave", &[("Donor", "Ann"), ("Recipient", "Bob"), ("Theme", "food")]),
        g(t, "Ingestion", "ate", &[("Ingestor", "Ann")]),
    ];
    let pred = vec![
        p(t, "Giving", "gave", &[("Donor", "Ann"), ("Recipient", "Bob"), ("Theme", "food")]),
        p(t, "Ingestion", "ate", &[]),
    ];
    v.push(case(15, t, gold, &["gave", "ate"], pred, [c(2, 0, 0), c(2, 0, 0), c(3, 0, 1)]));

    // Trigger found but its frame was rejected, so no frame at all.
    let t = "Rain fell hard.";
    let gold = vec![g(t, "Motion", "fell", &[("Theme", "Rain")])];
    v.push(case(16, t, gold, &["fell"], vec![], [c(1, 0, 0), c(0, 0, 1), c(0, 0, 1)]));

    // Overlapping but wider span.
    let t = "Tom ran off.";
    let gold = vec![g(t, "Motion", "ran", &[("Theme", "Tom")])];
    let pred = vec![p(t, "Motion", "ran", &[("Theme", "Tom ran")])];
    v.push(case(17, t, gold, &["ran"], pred, [c(1, 0, 0), c(1, 0, 0), c(0, 1, 1)]));

    // Two gold arguments merged into one prediction.
    let t = "Sue and Max ate.";
    let gold = vec![g(t, "Ingestion", "ate", &[("Ingestor", "Sue"), ("Ingestor", "Max")])];
    let pred = vec![p(t, "Ingestion", "ate", &[("Ingestor", "Sue and Max")])];
    v.push(case(18, t, gold, &["ate"], pred, [c(1, 0, 0), c(1, 0, 0), c(0, 1, 2)]));

    // Extra trigger with its own frame and argument.
    let t = "Jo gave gifts.";
    let gold = vec![g(t, "Giving", "gave", &[("Donor", "Jo"), ("Theme", "gifts")])];
    let pred = vec![
        p(t, "Giving", "gave", &[("Donor", "Jo"), ("Theme", "gifts")]),
        p(t, "Giving", "gifts", &[("Theme", "gifts")]),
    ];
    v.push(case(19, t, gold, &["gave", "gifts"], pred, [c(1, 1, 0), c(1, 1, 0), c(2, 1, 0)]));

    // Wrong frame that happens to share the element name.
    let t = "Cars came fast.";
    let gold = vec![g(t, "Motion", "came", &[("Theme", "Cars")])];
    let pred = vec![p(t, "Giving", "came", &[("Theme", "Cars")])];
    v.push(case(20, t, gold, &["came"], pred, [c(1, 0, 0), c(0, 1, 1), c(0, 1, 1)]));

    v
}

/// Column sums of the per-case counts above, also added up by hand.
pub const METRIC_TOTALS: [(usize, usize, usize); 3] = [(18, 3, 3), (15, 5, 6), (16, 12, 16)];
