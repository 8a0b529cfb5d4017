mod common;

use common::*;
use frameparse::codec::{
    decode_args_output, decode_frame_output, decode_trigger_output, encode_args_task,
    encode_frame_task, encode_trigger_task, prompt_kind, MARKER,
};
use frameparse::text::{char_slice, snap_to_token_start};
use frameparse::{ElementSpan, TaskKind};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn trying_candidates() -> Vec<String> {
    strings(&[
        "Attempt", "Attempt_means", "Operational_testing", "Tasting", "Trial", "Try_defendant",
        "Trying_out",
    ])
}

fn lift_candidates() -> Vec<String> {
    strings(&[
        "Body_movement", "Building_subparts", "Cause_motion", "Cause_to_end",
        "Connecting_architecture", "Theft",
    ])
}

#[test]
fn worked_example_prompts_are_exact() {
    let s = example_sentence();
    let trig = encode_trigger_task(&s);
    assert_eq!(trig.input, "TRIGGER: It was no use trying the lift.");
    assert_eq!(trig.target, "It was no use *trying the *lift.");

    let [am, ca] = [&s.annotations[0], &s.annotations[1]];
    let f1 = encode_frame_task(&s, am, &trying_candidates());
    assert_eq!(
        f1.input,
        "FRAME Attempt Attempt_means Operational_testing Tasting Trial Try_defendant Trying_out: It was no use *trying the lift."
    );
    assert_eq!(f1.target, "Attempt_means");
    let f2 = encode_frame_task(&s, ca, &lift_candidates());
    assert_eq!(
        f2.input,
        "FRAME Body_movement Building_subparts Cause_motion Cause_to_end Connecting_architecture Theft: It was no use trying the *lift."
    );
    assert_eq!(f2.target, "Connecting_architecture");

    let a1 = encode_args_task(&s, am, &attempt_means());
    assert_eq!(
        a1.input,
        "ARGS Attempt_means | Agent Means Goal Circumstances Degree Depictive Domain Duration Frequency Manner Outcome Particular_iteration Place Purpose Time: It was no use *trying the lift."
    );
    assert_eq!(a1.target, "Means=\"the lift\"");
    let a2 = encode_args_task(&s, ca, &connecting_architecture());
    assert_eq!(
        a2.input,
        "ARGS Connecting_architecture | Part Connected_locations Creator Descriptor Direction Goal Material Orientation Source Whole: It was no use trying the *lift."
    );
    assert_eq!(a2.target, "Part=\"the lift\"");
}

#[test]
fn worked_example_outputs_decode() {
    let catalog = example_catalog();
    assert_eq!(
        decode_trigger_output(EXAMPLE, "It was no use *trying the *lift.").value,
        vec![14, 25]
    );
    assert_eq!(
        decode_frame_output("Attempt_means", &catalog).value.as_deref(),
        Some("Attempt_means")
    );
    assert_eq!(
        decode_frame_output(" Connecting_architecture\n", &catalog).value.as_deref(),
        Some("Connecting_architecture")
    );
    let means = decode_args_output("Means=\"the lift\"", &attempt_means(), EXAMPLE, 14);
    assert_eq!(means.value, vec![ElementSpan::new("Means", 21, 29)]);
    let part = decode_args_output("Part=\"the lift\"", &connecting_architecture(), EXAMPLE, 25);
    assert_eq!(part.value, vec![ElementSpan::new("Part", 21, 29)]);
}

#[test]
fn empty_annotation_sentence_has_unmarked_target() {
    let mut s = example_sentence();
    s.annotations.clear();
    assert_eq!(encode_trigger_task(&s).target, EXAMPLE);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn codec_round_trip_is_lossless(seed in any::<u64>()) {
        let (catalog, sentences) = synthetic_corpus(20, seed);
        for s in &sentences {
            let trig = encode_trigger_task(s);
            let mut gold: Vec<usize> = s.annotations.iter().map(|a| a.trigger.start).collect();
            gold.sort_unstable();
            prop_assert_eq!(decode_trigger_output(&s.text, &trig.target).value, gold);
            for a in &s.annotations {
                let frame = catalog.get(&a.frame).unwrap();
                let f = encode_frame_task(s, a, &[]);
                let frame_name = decode_frame_output(&f.target, &catalog).value;
                prop_assert_eq!(frame_name.as_deref(), Some(a.frame.as_str()));
                let args = encode_args_task(s, a, frame);
                let decoded = decode_args_output(&args.target, frame, &s.text, a.trigger.start);
                prop_assert!(decoded.diagnostics.is_empty());
                let mut got = decoded.value;
                let mut want = a.elements.clone();
                got.sort();
                want.sort();
                prop_assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn prompts_follow_grammar_and_strip_to_text(seed in any::<u64>()) {
        let (catalog, sentences) = synthetic_corpus(10, seed);
        for s in &sentences {
            let mut records = vec![encode_trigger_task(s)];
            for a in &s.annotations {
                records.push(encode_frame_task(s, a, &strings(&["X", "Y"])));
                records.push(encode_args_task(s, a, catalog.get(&a.frame).unwrap()));
            }
            for r in &records {
                prop_assert_eq!(prompt_kind(&r.input), Some(r.kind));
                let (head, text) = r.input.split_once(": ").unwrap();
                prop_assert!(head.starts_with(r.kind.prompt_name()));
                let stripped: String = text.chars().filter(|&c| c != MARKER).collect();
                prop_assert_eq!(&stripped, &s.text);
            }
            let target = &records[0].target;
            prop_assert_eq!(&target.replace(MARKER, ""), &s.text);
            prop_assert_eq!(records[0].kind, TaskKind::TriggerId);
        }
    }

    #[test]
    fn decoders_are_total(text in "[a-z ,.\"|=*]{0,40}", output in "[a-zA-Z ,.\"|=*]{0,60}", trig in 0usize..40) {
        let chars = text.chars().count();
        for off in decode_trigger_output(&text, &output).value {
            prop_assert!(off < chars);
        }
        let frame = attempt_means();
        for e in decode_args_output(&output, &frame, &text, trig).value {
            prop_assert!(e.start < e.end && e.end <= chars);
            prop_assert!(frame.has_element(&e.element));
        }
        let _ = decode_frame_output(&output, &example_catalog());
    }
}

/// Minimum-edit-distance alignment of `output` to `source`, mapping each
/// output character that is kept or substituted to its source position.
fn levenshtein_map(source: &[char], output: &[char]) -> Vec<Option<usize>> {
    let (n, m) = (source.len(), output.len());
    let mut d = vec![vec![0usize; m + 1]; n + 1];
    for i in 0..=n {
        d[i][0] = i;
    }
    for j in 0..=m {
        d[0][j] = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let sub = d[i - 1][j - 1] + usize::from(source[i - 1] != output[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    let mut map = vec![None; m];
    let (mut i, mut j) = (n, m);
    while i > 0 && j > 0 {
        let sub = d[i - 1][j - 1] + usize::from(source[i - 1] != output[j - 1]);
        if d[i][j] == sub {
            map[j - 1] = Some(i - 1);
            i -= 1;
            j -= 1;
        } else if d[i][j] == d[i - 1][j] + 1 {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    map
}

fn decode_with_levenshtein(original: &str, output: &str) -> Vec<usize> {
    let source: Vec<char> = original.chars().collect();
    let mut stripped = Vec::new();
    let mut markers = Vec::new();
    for c in output.chars() {
        if c == MARKER {
            markers.push(stripped.len());
        } else {
            stripped.push(c);
        }
    }
    let map = levenshtein_map(&source, &stripped);
    let mut out: Vec<usize> = markers
        .into_iter()
        .filter_map(|p| map[p..].iter().find_map(|m| *m))
        .filter_map(|at| snap_to_token_start(&source, at))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Applies up to three letter-level copy errors (substitution, insertion,
/// deletion), kept well apart from each other and from the markers.
fn mutate(marked: &str, rng: &mut ChaCha8Rng) -> String {
    let mut chars: Vec<char> = marked.chars().collect();
    let mut touched: Vec<usize> = Vec::new();
    for _ in 0..rng.gen_range(0..=3) {
        let at = rng.gen_range(0..chars.len());
        let near_marker = chars[at.saturating_sub(2)..(at + 3).min(chars.len())].contains(&MARKER);
        let near_edit = touched.iter().any(|&t| t.abs_diff(at) < 12);
        if near_marker || near_edit || !chars[at].is_ascii_lowercase() {
            continue;
        }
        let letter = char::from(b'a' + rng.gen_range(0..26u8));
        match rng.gen_range(0..3) {
            0 if letter != chars[at] => chars[at] = letter,
            1 => chars.insert(at, letter),
            2 => {
                chars.remove(at);
            }
            _ => continue,
        }
        touched.push(at);
    }
    chars.into_iter().collect()
}

#[test]
fn greedy_alignment_agrees_with_edit_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut compared = 0;
    for seed in 0..60 {
        let (_, sentences) = synthetic_corpus(25, seed);
        for s in sentences.iter().filter(|s| s.char_len() >= 30) {
            let marked = encode_trigger_task(s).target;
            let noisy = mutate(&marked, &mut rng);
            let greedy = decode_trigger_output(&s.text, &noisy).value;
            let oracle = decode_with_levenshtein(&s.text, &noisy);
            assert_eq!(greedy, oracle, "text {:?} output {noisy:?}", s.text);
            compared += 1;
        }
    }
    assert!(compared > 500);
}

#[test]
fn argument_text_is_copied_verbatim() {
    let s = example_sentence();
    let a = &s.annotations[0];
    let target = encode_args_task(&s, a, &attempt_means()).target;
    let e = &a.elements[0];
    assert_eq!(target, format!("Means=\"{}\"", char_slice(&s.text, e.start, e.end)));
}
