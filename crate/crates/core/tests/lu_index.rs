mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::*;
use frameparse::lu_index::{lookup_set, LuIndex};
use frameparse::normalize::Normalizer;
use frameparse::text::lookup_tokens;
use frameparse::{FrameCatalog, FrameDef};
use proptest::prelude::*;

const WORDS: &[&str] = &[
    "try", "trying", "tried", "trial", "lift", "lifted", "use", "used", "the", "out", "take", "took",
    "off", "run", "running", "runner", "give", "up", "attack", "ambush", "car", "cars",
];

/// Scans every lexical unit of every frame directly.
fn brute_force(normalizer: &Normalizer, catalog: &FrameCatalog, tokens: &[String], at: usize) -> Vec<String> {
    let wanted = lookup_set(normalizer, tokens, at);
    let mut out = BTreeSet::new();
    for frame in catalog.iter() {
        if frame.lexical_units.iter().any(|lu| !normalizer.normalize_lu(lu).is_disjoint(&wanted)) {
            out.insert(frame.name.clone());
        }
    }
    out.into_iter().collect()
}

fn arb_lu() -> impl Strategy<Value = String> {
    (
        proptest::sample::select(WORDS),
        proptest::option::of(proptest::sample::select(WORDS)),
        proptest::sample::select(&["v", "n", "a"][..]),
    )
        .prop_map(|(a, b, pos)| match b {
            Some(b) => format!("{a} {b}.{pos}"),
            None => format!("{a}.{pos}"),
        })
}

fn arb_catalog() -> impl Strategy<Value = Vec<FrameDef>> {
    proptest::collection::vec(proptest::collection::vec(arb_lu(), 1..4), 1..8).prop_map(|frames| {
        frames
            .into_iter()
            .enumerate()
            .map(|(i, lus)| FrameDef::new(format!("F{i}"), ["E"], lus))
            .collect()
    })
}

fn arb_tokens() -> impl Strategy<Value = (Vec<String>, usize)> {
    proptest::collection::vec(proptest::sample::select(WORDS), 1..4)
        .prop_flat_map(|t| {
            let n = t.len();
            (Just(t.into_iter().map(String::from).collect::<Vec<_>>()), 0..n)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn index_equals_brute_force((frames, (tokens, at)) in (arb_catalog(), arb_tokens())) {
        let normalizer = Arc::new(Normalizer::new(None));
        let catalog = FrameCatalog::from_frames(frames).unwrap();
        let index = LuIndex::build(&catalog, normalizer.clone());
        let got = index.candidate_frames(&tokens, at);
        prop_assert_eq!(&got, &brute_force(&normalizer, &catalog, &tokens, at));
        let mut sorted = got.clone();
        sorted.sort();
        prop_assert_eq!(got, sorted);

        let back = LuIndex::from_tsv(&index.to_tsv(), normalizer).unwrap();
        prop_assert_eq!(back.candidate_frames(&tokens, at), index.candidate_frames(&tokens, at));
    }

    #[test]
    fn candidates_are_sound((frames, (tokens, at)) in (arb_catalog(), arb_tokens())) {
        let normalizer = Arc::new(Normalizer::new(None));
        let catalog = FrameCatalog::from_frames(frames).unwrap();
        let index = LuIndex::build(&catalog, normalizer.clone());
        let wanted = lookup_set(&normalizer, &tokens, at);
        for name in index.candidate_frames(&tokens, at) {
            let frame = catalog.get(&name).unwrap();
            prop_assert!(frame.lexical_units.iter().any(|lu| !normalizer.normalize_lu(lu).is_disjoint(&wanted)));
        }
    }

    #[test]
    fn adding_a_lexical_unit_never_removes_candidates(
        (frames, (tokens, at)) in (arb_catalog(), arb_tokens()),
        extra in arb_lu(),
        target in any::<prop::sample::Index>(),
    ) {
        let normalizer = Arc::new(Normalizer::new(None));
        let catalog = FrameCatalog::from_frames(frames.clone()).unwrap();
        let before = LuIndex::build(&catalog, normalizer.clone()).candidate_frames(&tokens, at);
        let mut grown = frames;
        let i = target.index(grown.len());
        grown[i].lexical_units.push(extra);
        let after = LuIndex::build(&FrameCatalog::from_frames(grown).unwrap(), normalizer).candidate_frames(&tokens, at);
        for name in &before {
            prop_assert!(after.contains(name));
        }
    }
}

#[test]
fn worked_example_candidates_from_fixture_corpus() {
    let catalog = fixture_catalog();
    let index = LuIndex::build(&catalog, fixture_normalizer());
    assert_eq!(
        index.candidates_in_text(EXAMPLE, 14),
        strings(&["Attempt", "Attempt_means", "Operational_testing", "Tasting", "Trial", "Try_defendant", "Trying_out"])
    );
    let lift = index.candidates_in_text(EXAMPLE, 25);
    for frame in ["Body_movement", "Building_subparts", "Cause_motion", "Cause_to_end", "Connecting_architecture", "Theft"] {
        assert!(lift.contains(&frame.to_string()), "{frame} missing from {lift:?}");
    }
}

#[test]
fn multiword_lexical_units_match_bigrams() {
    let catalog = FrameCatalog::from_frames([FrameDef::new("Giving_up", ["Agent"], ["give up.v"])]).unwrap();
    let index = LuIndex::build(&catalog, fixture_normalizer());
    let text = "They finally gave up hope.";
    assert_eq!(index.candidates_in_text(text, 13), ["Giving_up"]);
    let (tokens, at) = lookup_tokens(text, 13);
    assert_eq!((tokens, at), (strings(&["finally", "gave", "up"]), 1));
    assert!(index.candidates_in_text(text, 0).is_empty());
}

#[test]
fn unknown_trigger_has_no_candidates() {
    let catalog = fixture_catalog();
    let index = LuIndex::build(&catalog, fixture_normalizer());
    assert!(index.candidates_in_text("Zebras graze quietly.", 7).is_empty());
}
