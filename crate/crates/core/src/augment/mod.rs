//! Span-safe text augmentation. Each augmenter plans a list of character
//! edits; [`apply_edits`] applies a plan and moves every trigger and element
//! offset along with the text.

mod edit;
mod plan;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use edit::{apply_edits, validate_plan, Applied, Edit, PlanError};
pub use plan::{keyboard_neighbors, PUNCTUATION};

use crate::model::{AnnotatedSentence, FrameAnnotation};
use crate::normalize::wordnet::WordNet;

/// Augmenters in the order they are applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AugmenterKind {
    Quotes,
    Synonyms,
    Misspelling,
    Keyboard,
    Punctuation,
    Case,
}

impl AugmenterKind {
    pub const ALL: [AugmenterKind; 6] = [
        AugmenterKind::Quotes,
        AugmenterKind::Synonyms,
        AugmenterKind::Misspelling,
        AugmenterKind::Keyboard,
        AugmenterKind::Punctuation,
        AugmenterKind::Case,
    ];
}

/// Direction of the case augmenter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseMode {
    Random,
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AugmenterSetting {
    pub enabled: bool,
    /// Chance that this augmenter fires on a given sentence.
    pub probability: f64,
}

impl Default for AugmenterSetting {
    fn default() -> Self {
        AugmenterSetting {
            enabled: true,
            probability: 0.15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AugmentConfig {
    pub quotes: AugmenterSetting,
    pub synonyms: AugmenterSetting,
    pub misspelling: AugmenterSetting,
    pub keyboard: AugmenterSetting,
    pub punctuation: AugmenterSetting,
    pub case: AugmenterSetting,
    /// Per-word chance that a misspeller substitutes one letter.
    pub char_edit_rate: f64,
    /// Per-character chance that the punctuation augmenter deletes an
    /// eligible character once it fires.
    pub punctuation_delete_rate: f64,
    pub case_mode: CaseMode,
    /// Floor on every enabled augmenter's probability for trigger
    /// identification records.
    pub trigger_task_probability: f64,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        AugmentConfig {
            quotes: AugmenterSetting::default(),
            synonyms: AugmenterSetting::default(),
            misspelling: AugmenterSetting::default(),
            keyboard: AugmenterSetting::default(),
            punctuation: AugmenterSetting::default(),
            case: AugmenterSetting::default(),
            char_edit_rate: 0.05,
            punctuation_delete_rate: 0.5,
            case_mode: CaseMode::Random,
            trigger_task_probability: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("augment config: {0}")]
pub struct ConfigError(pub String);

impl AugmentConfig {
    /// Every augmenter switched off.
    pub fn disabled() -> Self {
        let mut c = AugmentConfig::default();
        for kind in AugmenterKind::ALL {
            c.setting_mut(kind).enabled = false;
        }
        c
    }

    /// Only `kind` enabled, firing with `probability`.
    pub fn only(kind: AugmenterKind, probability: f64) -> Self {
        let mut c = AugmentConfig::disabled();
        *c.setting_mut(kind) = AugmenterSetting {
            enabled: true,
            probability,
        };
        c
    }

    pub fn setting(&self, kind: AugmenterKind) -> AugmenterSetting {
        match kind {
            AugmenterKind::Quotes => self.quotes,
            AugmenterKind::Synonyms => self.synonyms,
            AugmenterKind::Misspelling => self.misspelling,
            AugmenterKind::Keyboard => self.keyboard,
            AugmenterKind::Punctuation => self.punctuation,
            AugmenterKind::Case => self.case,
        }
    }

    pub fn setting_mut(&mut self, kind: AugmenterKind) -> &mut AugmenterSetting {
        match kind {
            AugmenterKind::Quotes => &mut self.quotes,
            AugmenterKind::Synonyms => &mut self.synonyms,
            AugmenterKind::Misspelling => &mut self.misspelling,
            AugmenterKind::Keyboard => &mut self.keyboard,
            AugmenterKind::Punctuation => &mut self.punctuation,
            AugmenterKind::Case => &mut self.case,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let unit = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(ConfigError(format!("{name} must be in [0, 1], got {p}")))
            }
        };
        for kind in AugmenterKind::ALL {
            unit(&format!("{kind:?} probability"), self.setting(kind).probability)?;
        }
        unit("trigger_task_probability", self.trigger_task_probability)?;
        for (name, rate) in [
            ("char_edit_rate", self.char_edit_rate),
            ("punctuation_delete_rate", self.punctuation_delete_rate),
        ] {
            if !(rate > 0.0 && rate <= 1.0) {
                return Err(ConfigError(format!("{name} must be in (0, 1], got {rate}")));
            }
        }
        Ok(())
    }

    /// The config used for trigger identification records: enabled
    /// augmenters fire at least `trigger_task_probability` of the time.
    pub fn for_trigger_task(&self) -> AugmentConfig {
        let mut c = self.clone();
        for kind in AugmenterKind::ALL {
            let s = c.setting_mut(kind);
            if s.enabled {
                s.probability = s.probability.max(self.trigger_task_probability);
            }
        }
        c
    }
}

/// Supplies replacement words for the synonym augmenter.
pub trait SynonymSource: Send + Sync {
    /// Synonyms of a lowercase word; empty when the word must not be swapped.
    fn synonyms(&self, word: &str) -> Vec<String>;
}

/// Closed-class words the synonym augmenter never swaps.
const FUNCTION_WORDS: &[&str] = &[
    "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any", "are",
    "as", "at", "be", "because", "been", "before", "being", "below", "between", "both", "but",
    "by", "can", "could", "did", "do", "does", "doing", "down", "during", "each", "few", "for",
    "from", "further", "had", "has", "have", "having", "he", "her", "here", "hers", "herself",
    "him", "himself", "his", "how", "i", "if", "in", "into", "is", "it", "its", "itself", "just",
    "may", "me", "might", "more", "most", "must", "my", "myself", "no", "nor", "not", "now", "of",
    "off", "on", "once", "only", "or", "other", "our", "ours", "ourselves", "out", "over", "own",
    "same", "shall", "she", "should", "so", "some", "such", "than", "that", "the", "their",
    "theirs", "them", "themselves", "then", "there", "these", "they", "this", "those", "through",
    "to", "too", "under", "until", "up", "very", "was", "we", "were", "what", "when", "where",
    "which", "while", "who", "whom", "why", "will", "with", "would", "you", "your", "yours",
    "yourself", "yourselves",
];

/// First-sense WordNet synonyms of content words.
#[derive(Debug, Clone)]
pub struct WordNetSynonyms {
    wordnet: Arc<WordNet>,
}

impl WordNetSynonyms {
    pub fn new(wordnet: Arc<WordNet>) -> Self {
        WordNetSynonyms { wordnet }
    }
}

impl SynonymSource for WordNetSynonyms {
    fn synonyms(&self, word: &str) -> Vec<String> {
        if word.chars().count() < 3 || FUNCTION_WORDS.binary_search(&word).is_ok() {
            return Vec::new();
        }
        self.wordnet.first_sense_synonyms(word)
    }
}

/// Plans one augmenter's edits against `text`.
pub fn plan_edits(
    kind: AugmenterKind,
    text: &str,
    annotations: &[FrameAnnotation],
    config: &AugmentConfig,
    synonyms: Option<&dyn SynonymSource>,
    rng: &mut impl Rng,
) -> Vec<Edit> {
    let chars: Vec<char> = text.chars().collect();
    if chars.is_empty() {
        return Vec::new();
    }
    let protected = plan::Protected::new(annotations);
    plan::plan(kind, &chars, &protected, config, synonyms, rng)
}

/// An augmentation with the plans that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Augmentation {
    pub sentence: AnnotatedSentence,
    /// Non-empty plans in application order, each relative to the text left
    /// by the previous one.
    pub applied: Vec<(AugmenterKind, Vec<Edit>)>,
    /// True when a plan emptied a span and the original was kept instead.
    pub discarded: bool,
}

impl Augmentation {
    pub fn changed(&self) -> bool {
        !self.discarded && !self.applied.is_empty()
    }
}

/// Runs every enabled augmenter in [`AugmenterKind::ALL`] order, each firing
/// with its probability. Deterministic in `(sentence, config, seed)`.
pub fn augment_traced(
    sentence: &AnnotatedSentence,
    config: &AugmentConfig,
    synonyms: Option<&dyn SynonymSource>,
    seed: u64,
) -> Augmentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = sentence.clone();
    let mut applied = Vec::new();
    for kind in AugmenterKind::ALL {
        let setting = config.setting(kind);
        // Draw even for disabled augmenters so toggling one does not reshuffle
        // the others.
        let fires = rng.gen::<f64>() < setting.probability;
        if !setting.enabled || !fires {
            continue;
        }
        let plan = plan_edits(kind, &current.text, &current.annotations, config, synonyms, &mut rng);
        if plan.is_empty() {
            continue;
        }
        match apply_edits(&current, &plan) {
            Ok(out) if out.dropped.is_empty() && out.sentence.validate(None).is_ok() => {
                current = out.sentence;
                applied.push((kind, plan));
            }
            Ok(_) | Err(_) => {
                log::debug!(
                    "{}/{}: {kind:?} augmentation discarded",
                    sentence.doc_id,
                    sentence.sentence_id
                );
                return Augmentation {
                    sentence: sentence.clone(),
                    applied: Vec::new(),
                    discarded: true,
                };
            }
        }
    }
    Augmentation {
        sentence: current,
        applied,
        discarded: false,
    }
}

pub fn augment_sentence(
    sentence: &AnnotatedSentence,
    config: &AugmentConfig,
    synonyms: Option<&dyn SynonymSource>,
    seed: u64,
) -> AnnotatedSentence {
    augment_traced(sentence, config, synonyms, seed).sentence
}

/// Per-record seed from the global seed and the record's identity, so results
/// do not depend on scheduling.
pub fn derive_seed(global: u64, doc_id: &str, sentence_id: &str, epoch: u32, stream: &str, replica: u32) -> u64 {
    let mut h = Sha256::new();
    h.update(global.to_le_bytes());
    for part in [doc_id, sentence_id, stream] {
        h.update((part.len() as u64).to_le_bytes());
        h.update(part.as_bytes());
    }
    h.update(epoch.to_le_bytes());
    h.update(replica.to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}
