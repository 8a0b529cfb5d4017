//! Porter stemmer with the NLTK extensions (NLTK's default mode).
//!
//! Differences from the 1980 algorithm: a small table of irregular forms,
//! words of length <= 2 are returned as-is, `ies`/`ied` on four-letter words
//! become `ie`, step 1c only turns `y` into `i` after a consonant that is not
//! the first letter, and step 2 has the extra `alli`, `bli`, `fulli` and
//! `logi` rules.

fn consonant_flags(word: &[char]) -> Vec<bool> {
    let mut flags: Vec<bool> = Vec::with_capacity(word.len());
    for (i, &c) in word.iter().enumerate() {
        let consonant = match c {
            'a' | 'e' | 'i' | 'o' | 'u' => false,
            'y' => i == 0 || !flags[i - 1],
            _ => true,
        };
        flags.push(consonant);
    }
    flags
}

fn chars(s: &str) -> Vec<char> {
    s.chars().collect()
}

fn is_consonant(word: &str, i: usize) -> bool {
    consonant_flags(&chars(word))[i]
}

fn measure(stem: &str) -> usize {
    let flags = consonant_flags(&chars(stem));
    flags.windows(2).filter(|w| !w[0] && w[1]).count()
}

fn has_positive_measure(stem: &str) -> bool {
    measure(stem) > 0
}

fn contains_vowel(stem: &str) -> bool {
    consonant_flags(&chars(stem)).iter().any(|c| !c)
}

fn ends_double_consonant(word: &str) -> bool {
    let c = chars(word);
    let n = c.len();
    n >= 2 && c[n - 1] == c[n - 2] && consonant_flags(&c)[n - 1]
}

fn ends_cvc(word: &str) -> bool {
    let c = chars(word);
    let n = c.len();
    let flags = consonant_flags(&c);
    (n >= 3
        && flags[n - 3]
        && !flags[n - 2]
        && flags[n - 1]
        && !matches!(c[n - 1], 'w' | 'x' | 'y'))
        || (n == 2 && !flags[0] && flags[1])
}

fn strip_suffix<'a>(word: &'a str, suffix: &str) -> &'a str {
    &word[..word.len() - suffix.len()]
}

enum Cond<'a> {
    Always,
    If(&'a dyn Fn(&str) -> bool),
}

impl Cond<'_> {
    fn holds(&self, stem: &str) -> bool {
        match self {
            Cond::Always => true,
            Cond::If(f) => f(stem),
        }
    }
}

/// `suffix == None` stands for the "ends in a double consonant" pseudo-rule.
struct Rule<'a> {
    suffix: Option<&'a str>,
    replacement: String,
    cond: Cond<'a>,
}

impl<'a> Rule<'a> {
    fn new(suffix: &'a str, replacement: &str, cond: Cond<'a>) -> Self {
        Rule {
            suffix: Some(suffix),
            replacement: replacement.to_string(),
            cond,
        }
    }
}

/// Applies the first rule whose suffix matches; a failed condition on that
/// rule still stops the search.
fn apply_rules(word: &str, rules: &[Rule<'_>]) -> String {
    for rule in rules {
        match rule.suffix {
            None => {
                if ends_double_consonant(word) {
                    let stem = &word[..word.len() - 2 * last_char_len(word)];
                    return if rule.cond.holds(stem) {
                        format!("{stem}{}", rule.replacement)
                    } else {
                        word.to_string()
                    };
                }
            }
            Some(suffix) => {
                if word.ends_with(suffix) {
                    let stem = strip_suffix(word, suffix);
                    return if rule.cond.holds(stem) {
                        format!("{stem}{}", rule.replacement)
                    } else {
                        word.to_string()
                    };
                }
            }
        }
    }
    word.to_string()
}

fn last_char_len(word: &str) -> usize {
    word.chars().last().map(char::len_utf8).unwrap_or(0)
}

fn step1a(word: &str) -> String {
    if word.ends_with("ies") && word.chars().count() == 4 {
        return format!("{}ie", strip_suffix(word, "ies"));
    }
    apply_rules(
        word,
        &[
            Rule::new("sses", "ss", Cond::Always),
            Rule::new("ies", "i", Cond::Always),
            Rule::new("ss", "ss", Cond::Always),
            Rule::new("s", "", Cond::Always),
        ],
    )
}

fn step1b(word: &str) -> String {
    if word.ends_with("ied") {
        let replacement = if word.chars().count() == 4 { "ie" } else { "i" };
        return format!("{}{replacement}", strip_suffix(word, "ied"));
    }
    if word.ends_with("eed") {
        let stem = strip_suffix(word, "eed");
        return if measure(stem) > 0 {
            format!("{stem}ee")
        } else {
            word.to_string()
        };
    }
    let mut intermediate = None;
    for suffix in ["ed", "ing"] {
        if word.ends_with(suffix) {
            let stem = strip_suffix(word, suffix);
            if contains_vowel(stem) {
                intermediate = Some(stem);
                break;
            }
        }
    }
    let Some(stem) = intermediate else {
        return word.to_string();
    };
    let last = stem.chars().last();
    let not_lsz = |_: &str| !matches!(last, Some('l' | 's' | 'z'));
    let m1_cvc = |s: &str| measure(s) == 1 && ends_cvc(s);
    apply_rules(
        stem,
        &[
            Rule::new("at", "ate", Cond::Always),
            Rule::new("bl", "ble", Cond::Always),
            Rule::new("iz", "ize", Cond::Always),
            Rule {
                suffix: None,
                replacement: last.map(String::from).unwrap_or_default(),
                cond: Cond::If(&not_lsz),
            },
            Rule::new("", "e", Cond::If(&m1_cvc)),
        ],
    )
}

fn step1c(word: &str) -> String {
    let cond = |stem: &str| {
        let n = stem.chars().count();
        n > 1 && is_consonant(stem, n - 1)
    };
    apply_rules(word, &[Rule::new("y", "i", Cond::If(&cond))])
}

fn step2(word: &str) -> String {
    if word.ends_with("alli") && has_positive_measure(strip_suffix(word, "alli")) {
        return step2(&format!("{}al", strip_suffix(word, "alli")));
    }
    let logi_cond = |_: &str| has_positive_measure(&word[..word.len() - 3]);
    let table: [(&str, &str); 22] = [
        ("ational", "ate"),
        ("tional", "tion"),
        ("enci", "ence"),
        ("anci", "ance"),
        ("izer", "ize"),
        ("bli", "ble"),
        ("alli", "al"),
        ("entli", "ent"),
        ("eli", "e"),
        ("ousli", "ous"),
        ("ization", "ize"),
        ("ation", "ate"),
        ("ator", "ate"),
        ("alism", "al"),
        ("iveness", "ive"),
        ("fulness", "ful"),
        ("ousness", "ous"),
        ("aliti", "al"),
        ("iviti", "ive"),
        ("biliti", "ble"),
        ("fulli", "ful"),
        ("logi", "log"),
    ];
    let rules: Vec<Rule<'_>> = table
        .iter()
        .map(|&(suffix, replacement)| {
            let cond = if suffix == "logi" {
                Cond::If(&logi_cond)
            } else {
                Cond::If(&has_positive_measure)
            };
            Rule::new(suffix, replacement, cond)
        })
        .collect();
    apply_rules(word, &rules)
}

fn step3(word: &str) -> String {
    let rules: Vec<Rule<'_>> = [
        ("icate", "ic"),
        ("ative", ""),
        ("alize", "al"),
        ("iciti", "ic"),
        ("ical", "ic"),
        ("ful", ""),
        ("ness", ""),
    ]
    .iter()
    .map(|&(s, r)| Rule::new(s, r, Cond::If(&has_positive_measure)))
    .collect();
    apply_rules(word, &rules)
}

fn step4(word: &str) -> String {
    let gt1 = |stem: &str| measure(stem) > 1;
    let ion = |stem: &str| measure(stem) > 1 && matches!(stem.chars().last(), Some('s' | 't'));
    let rules: Vec<Rule<'_>> = [
        "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment", "ent", "ion",
        "ou", "ism", "ate", "iti", "ous", "ive", "ize",
    ]
    .iter()
    .map(|&s| {
        if s == "ion" {
            Rule::new(s, "", Cond::If(&ion))
        } else {
            Rule::new(s, "", Cond::If(&gt1))
        }
    })
    .collect();
    apply_rules(word, &rules)
}

fn step5a(word: &str) -> String {
    if let Some(stem) = word.strip_suffix('e') {
        let m = measure(stem);
        if m > 1 || (m == 1 && !ends_cvc(stem)) {
            return stem.to_string();
        }
    }
    word.to_string()
}

fn step5b(word: &str) -> String {
    let cond = |_: &str| measure(&word[..word.len() - 1]) > 1;
    apply_rules(word, &[Rule::new("ll", "l", Cond::If(&cond))])
}

fn irregular(word: &str) -> Option<&'static str> {
    Some(match word {
        "sky" | "skies" => "sky",
        "dying" => "die",
        "lying" => "lie",
        "tying" => "tie",
        "news" => "news",
        "innings" | "inning" => "inning",
        "outings" | "outing" => "outing",
        "cannings" | "canning" => "canning",
        "howe" => "howe",
        "proceed" => "proceed",
        "exceed" => "exceed",
        "succeed" => "succeed",
        _ => return None,
    })
}

/// Stems `word` (lowercased first).
pub fn stem(word: &str) -> String {
    let lower = word.to_lowercase();
    if let Some(form) = irregular(&lower) {
        return form.to_string();
    }
    if word.chars().count() <= 2 {
        return lower;
    }
    let s = step1a(&lower);
    let s = step1b(&s);
    let s = step1c(&s);
    let s = step2(&s);
    let s = step3(&s);
    let s = step4(&s);
    let s = step5a(&s);
    step5b(&s)
}
