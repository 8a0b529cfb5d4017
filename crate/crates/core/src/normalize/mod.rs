//! Word normalization for lexical-unit matching: three stemmers plus a
//! WordNet lemmatizer, applied together so that differently inflected forms
//! share at least one normal form.

pub mod lancaster;
pub mod porter;
pub mod wordnet;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rust_stemmers::{Algorithm, Stemmer};
use serde::{Deserialize, Serialize};

use crate::model::split_lexical_unit;
use crate::text::strip_punctuation;
pub use wordnet::{Pos, WordNet};

/// Distinct lowercase normal forms; bigram forms join two words with `_`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NormalFormSet(BTreeSet<String>);

impl NormalFormSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, form: String) {
        if !form.is_empty() {
            self.0.insert(form);
        }
    }

    pub fn extend(&mut self, other: NormalFormSet) {
        self.0.extend(other.0);
    }

    pub fn contains(&self, form: &str) -> bool {
        self.0.contains(form)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_disjoint(&self, other: &NormalFormSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    /// `{a_b | a in left, b in right}`.
    pub fn join(left: &NormalFormSet, right: &NormalFormSet) -> NormalFormSet {
        let mut out = NormalFormSet::new();
        for a in left.iter() {
            for b in right.iter() {
                out.insert(format!("{a}_{b}"));
            }
        }
        out
    }
}

impl<S: Into<String>> FromIterator<S> for NormalFormSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut set = NormalFormSet::new();
        for s in iter {
            set.insert(s.into());
        }
        set
    }
}

/// Porter, Lancaster and Snowball-English stems plus the noun and verb
/// WordNet lemmas. Without a WordNet database the lemmatizer is the identity,
/// which matches NLTK's behaviour for out-of-vocabulary words.
pub struct Normalizer {
    snowball: Stemmer,
    wordnet: Option<Arc<WordNet>>,
}

impl fmt::Debug for Normalizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Normalizer")
            .field("wordnet", &self.wordnet.is_some())
            .finish()
    }
}

impl Normalizer {
    pub fn new(wordnet: Option<Arc<WordNet>>) -> Self {
        Normalizer {
            snowball: Stemmer::create(Algorithm::English),
            wordnet,
        }
    }

    pub fn wordnet(&self) -> Option<&Arc<WordNet>> {
        self.wordnet.as_ref()
    }

    pub fn snowball(&self, word: &str) -> String {
        self.snowball.stem(word).into_owned()
    }

    pub fn lemma(&self, word: &str, pos: Pos) -> String {
        match &self.wordnet {
            Some(wn) => wn.lemmatize(word, pos),
            None => word.to_string(),
        }
    }

    pub fn normalize_word(&self, word: &str) -> NormalFormSet {
        let word = word.trim().to_lowercase();
        if word.is_empty() {
            return NormalFormSet::new();
        }
        [
            self.snowball(&word),
            lancaster::stem(&word),
            porter::stem(&word),
            self.lemma(&word, Pos::Noun),
            self.lemma(&word, Pos::Verb),
        ]
        .into_iter()
        .collect()
    }

    /// Forms of a lexical unit such as `"try out.v"`: the POS tag is dropped,
    /// each word is punctuation-stripped and normalized, and multi-word
    /// lemmas become the `_`-joined cross product of the per-word forms.
    pub fn normalize_lu(&self, lu: &str) -> NormalFormSet {
        let lemma = split_lexical_unit(lu)
            .map(|(lemma, _)| lemma)
            .unwrap_or(lu);
        let mut words = lemma
            .split_whitespace()
            .map(strip_punctuation)
            .filter(|w| !w.is_empty())
            .map(|w| self.normalize_word(w));
        let Some(mut acc) = words.next() else {
            return NormalFormSet::new();
        };
        for forms in words {
            acc = NormalFormSet::join(&acc, &forms);
        }
        acc
    }
}
