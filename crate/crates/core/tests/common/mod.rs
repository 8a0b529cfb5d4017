//! Fixtures shared by the integration tests.
#![allow(dead_code)]

pub mod metrics;

use std::collections::BTreeSet;

use frameparse::{AnnotatedSentence, ElementSpan, FrameAnnotation, FrameCatalog, FrameDef, Source, Span};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EXAMPLE: &str = "It was no use trying the lift.";

pub fn attempt_means() -> FrameDef {
    FrameDef::new(
        "Attempt_means",
        [
            "Agent", "Means", "Goal", "Circumstances", "Degree", "Depictive", "Domain",
            "Duration", "Frequency", "Manner", "Outcome", "Particular_iteration", "Place",
            "Purpose", "Time",
        ],
        ["try.v", "attempt.v", "means.n"],
    )
}

pub fn connecting_architecture() -> FrameDef {
    FrameDef::new(
        "Connecting_architecture",
        [
            "Part", "Connected_locations", "Creator", "Descriptor", "Direction", "Goal",
            "Material", "Orientation", "Source", "Whole",
        ],
        ["lift.n", "elevator.n", "staircase.n"],
    )
}

/// The two-frame worked example: Attempt_means at "trying" and
/// Connecting_architecture at "lift", both with "the lift" as argument.
pub fn example_sentence() -> AnnotatedSentence {
    AnnotatedSentence::new(
        EXAMPLE,
        "example",
        "1",
        Source::Fulltext,
        vec![
            FrameAnnotation::new(
                "Attempt_means",
                Span::new(14, 20),
                vec![ElementSpan::new("Means", 21, 29)],
            ),
            FrameAnnotation::new(
                "Connecting_architecture",
                Span::new(25, 29),
                vec![ElementSpan::new("Part", 21, 29)],
            ),
        ],
    )
}

pub fn example_catalog() -> FrameCatalog {
    FrameCatalog::from_frames([attempt_means(), connecting_architecture()]).unwrap()
}

pub fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

const VOCAB: &[&str] = &[
    "alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel", "india",
    "juliet", "kilo", "lima", "mike", "november", "oscar", "papa", "quebec", "romeo",
    "sierra", "tango", "uniform", "victor", "whiskey", "xray", "yankee", "zulu", "amber",
    "basil", "cedar", "dune", "ember", "fern", "grove", "harbor", "iris", "jade", "kelp",
    "lotus", "maple", "nectar", "onyx", "pearl", "quartz", "raven", "sage", "thistle",
    "umber", "violet", "willow", "yarrow",
];

/// A random catalog plus `n` gold sentences with distinct texts, built so
/// that every task encoding decodes back to the gold annotation: triggers sit
/// on word starts, trigger offsets are distinct, and each argument's text
/// occurs nearest the trigger exactly at its gold position.
pub fn synthetic_corpus(n: usize, seed: u64) -> (FrameCatalog, Vec<AnnotatedSentence>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let frames: Vec<FrameDef> = (0..12)
        .map(|f| {
            let elements: Vec<String> = (0..rng.gen_range(2..=6)).map(|e| format!("Role{e}_{f}")).collect();
            let lus: Vec<String> = (0..3)
                .map(|_| format!("{}.v", VOCAB.choose(&mut rng).unwrap()))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            FrameDef::new(format!("Frame_{f}"), elements, lus)
        })
        .collect();
    let catalog = FrameCatalog::from_frames(frames.clone()).unwrap();

    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut serial = 0;
    while out.len() < n {
        serial += 1;
        let len = rng.gen_range(4..=14);
        let words: Vec<&str> = (0..len).map(|_| *VOCAB.choose(&mut rng).unwrap()).collect();
        let mut text = words.join(" ");
        if rng.gen_bool(0.7) {
            text.push('.');
        }
        if !seen.insert(text.clone()) {
            continue;
        }
        let mut starts = Vec::with_capacity(words.len());
        let mut pos = 0;
        for w in &words {
            starts.push(pos);
            pos += w.chars().count() + 1;
        }
        let chars: Vec<char> = text.chars().collect();
        let n_ann = rng.gen_range(0..=3.min(words.len()));
        let mut trigger_words: Vec<usize> = (0..words.len()).collect();
        trigger_words.shuffle(&mut rng);
        trigger_words.truncate(n_ann);
        trigger_words.sort_unstable();

        let mut annotations = Vec::new();
        for &tw in &trigger_words {
            let frame = frames.choose(&mut rng).unwrap();
            let trigger = Span::new(starts[tw], starts[tw] + words[tw].len());
            let mut elements: Vec<ElementSpan> = Vec::new();
            let mut roles: Vec<&String> = frame.elements.iter().collect();
            roles.shuffle(&mut rng);
            for role in roles.into_iter().take(rng.gen_range(0..=3)) {
                let first = rng.gen_range(0..words.len());
                let last = (first + rng.gen_range(0..3)).min(words.len() - 1);
                let span = ElementSpan::new(
                    role.clone(),
                    starts[first],
                    starts[last] + words[last].len(),
                );
                let needle = &chars[span.start..span.end];
                let nearest = chars
                    .windows(needle.len())
                    .enumerate()
                    .filter(|(_, w)| *w == needle)
                    .map(|(i, _)| i)
                    .min_by_key(|&i| (i.abs_diff(trigger.start), i));
                if nearest == Some(span.start) {
                    elements.push(span);
                }
            }
            annotations.push(FrameAnnotation::new(frame.name.clone(), trigger, elements));
        }
        out.push(AnnotatedSentence::new(
            text,
            format!("doc{}", serial % 7),
            serial.to_string(),
            Source::Fulltext,
            annotations,
        ));
    }
    (catalog, out)
}

const NOISY_WORDS: &[&str] = &[
    "car", "Car", "big", "house", "quick", "ran", "the", "a", "Straße", "café", "naïve", "İstanbul",
    "``", "''", "\"", "\u{201C}quoted\u{201D}", "(aside)", "well,", "end.", "re-elect", "don't",
    "NASA", "x", "42", "?!", "-", "mother-in-law", "it's", "lift", "trying",
];

/// A messy sentence (mixed case, quotes, punctuation, non-ASCII letters)
/// with up to three annotations on word starts and word-aligned elements.
pub fn noisy_sentence(rng: &mut impl Rng) -> AnnotatedSentence {
    let len = rng.gen_range(1..=16);
    let words: Vec<&str> = (0..len).map(|_| *NOISY_WORDS.choose(rng).unwrap()).collect();
    let text = words.join(" ");
    let mut starts = Vec::new();
    let mut pos = 0;
    for w in &words {
        starts.push(pos);
        pos += w.chars().count() + 1;
    }
    let ends: Vec<usize> = words.iter().zip(&starts).map(|(w, s)| s + w.chars().count()).collect();
    let mut candidates: Vec<usize> = (0..len)
        .filter(|&i| words[i].chars().next().unwrap().is_alphanumeric())
        .collect();
    candidates.shuffle(rng);
    candidates.truncate(rng.gen_range(0..=3));
    let annotations = candidates
        .into_iter()
        .map(|w| {
            let elements = (0..rng.gen_range(0..=3))
                .map(|e| {
                    let first = rng.gen_range(0..len);
                    let last = (first + rng.gen_range(0..3)).min(len - 1);
                    ElementSpan::new(format!("E{e}"), starts[first], ends[last])
                })
                .collect();
            FrameAnnotation::new("F", Span::new(starts[w], ends[w]), elements)
        })
        .collect();
    AnnotatedSentence::new(text, "noisy", "1", Source::Fulltext, annotations)
}

pub fn fixture_dir(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// Normalizer backed by the bundled WordNet subset.
pub fn fixture_normalizer() -> std::sync::Arc<frameparse::normalize::Normalizer> {
    let wn = frameparse::normalize::wordnet::WordNet::load(&fixture_dir("wordnet")).unwrap();
    std::sync::Arc::new(frameparse::normalize::Normalizer::new(Some(std::sync::Arc::new(wn))))
}

pub fn fixture_catalog() -> FrameCatalog {
    frameparse::ingest::load_frame_catalog(&fixture_dir("framenet")).unwrap().0
}
