//! Inverted index from normalized lexical-unit forms to frame names, and the
//! candidate-frame lookup used to build FRAME prompts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::FrameCatalog;
use crate::normalize::{NormalFormSet, Normalizer};
use crate::text::lookup_tokens;

#[derive(Debug, Clone)]
pub struct LuIndex {
    forms: BTreeMap<String, BTreeSet<String>>,
    normalizer: Arc<Normalizer>,
}

/// Monogram forms of the trigger plus the bigram forms it makes with its
/// left and right neighbours.
pub fn lookup_set(normalizer: &Normalizer, tokens: &[String], trigger_index: usize) -> NormalFormSet {
    let Some(trigger) = tokens.get(trigger_index) else {
        return NormalFormSet::new();
    };
    let trigger_forms = normalizer.normalize_word(trigger);
    let mut set = trigger_forms.clone();
    if trigger_index > 0 {
        let left = normalizer.normalize_word(&tokens[trigger_index - 1]);
        set.extend(NormalFormSet::join(&left, &trigger_forms));
    }
    if let Some(right) = tokens.get(trigger_index + 1) {
        let right = normalizer.normalize_word(right);
        set.extend(NormalFormSet::join(&trigger_forms, &right));
    }
    set
}

impl LuIndex {
    pub fn build(catalog: &FrameCatalog, normalizer: Arc<Normalizer>) -> LuIndex {
        let mut forms: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for frame in catalog.iter() {
            for lu in &frame.lexical_units {
                for form in normalizer.normalize_lu(lu).iter() {
                    forms
                        .entry(form.to_string())
                        .or_default()
                        .insert(frame.name.clone());
                }
            }
        }
        LuIndex { forms, normalizer }
    }

    pub fn normalizer(&self) -> &Arc<Normalizer> {
        &self.normalizer
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn get(&self, form: &str) -> Option<&BTreeSet<String>> {
        self.forms.get(form)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BTreeSet<String>)> {
        self.forms.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Sorted, deduplicated frames hit by any form of `set`.
    pub fn frames_for(&self, set: &NormalFormSet) -> Vec<String> {
        let mut hits: BTreeSet<&str> = BTreeSet::new();
        for form in set.iter() {
            if let Some(frames) = self.forms.get(form) {
                hits.extend(frames.iter().map(String::as_str));
            }
        }
        hits.into_iter().map(String::from).collect()
    }

    pub fn candidate_frames(&self, tokens: &[String], trigger_index: usize) -> Vec<String> {
        self.frames_for(&lookup_set(&self.normalizer, tokens, trigger_index))
    }

    /// Candidates for the trigger starting at character `trigger_start`.
    pub fn candidates_in_text(&self, text: &str, trigger_start: usize) -> Vec<String> {
        let (tokens, at) = lookup_tokens(text, trigger_start);
        self.candidate_frames(&tokens, at)
    }

    /// `form<TAB>Frame1,Frame2` lines in sorted order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (form, frames) in &self.forms {
            let joined: Vec<&str> = frames.iter().map(String::as_str).collect();
            let _ = writeln!(out, "{form}\t{}", joined.join(","));
        }
        out
    }

    pub fn from_tsv(tsv: &str, normalizer: Arc<Normalizer>) -> Result<LuIndex> {
        let mut forms = BTreeMap::new();
        for (i, line) in tsv.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (form, frames) = line.split_once('\t').ok_or_else(|| {
                Error::Config(format!("index line {}: expected form<TAB>frames", i + 1))
            })?;
            let frames: BTreeSet<String> = frames
                .split(',')
                .filter(|f| !f.is_empty())
                .map(String::from)
                .collect();
            forms.insert(form.to_string(), frames);
        }
        Ok(LuIndex { forms, normalizer })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FrameDef;

    fn index(frames: Vec<FrameDef>) -> LuIndex {
        let catalog = FrameCatalog::from_frames(frames).unwrap();
        LuIndex::build(&catalog, Arc::new(Normalizer::new(None)))
    }

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn single_entry_index() {
        let idx = index(vec![FrameDef::new("Attack", ["Assailant"], ["attack.v"])]);
        assert_eq!(idx.len(), 1);
        assert_eq!(idx.to_tsv(), "attack\tAttack\n");
    }

    #[test]
    fn bigram_lus_match_neighbours() {
        let idx = index(vec![
            FrameDef::new("Trying_out", ["Agent"], ["try out.v"]),
            FrameDef::new("Attempt", ["Agent"], ["try.v"]),
        ]);
        let tokens = toks(&["I", "tried", "out", "skiing"]);
        assert_eq!(idx.candidate_frames(&tokens, 1), ["Attempt", "Trying_out"]);
        // Without a left neighbour only the right bigram is formed.
        let tokens = toks(&["tries", "out"]);
        assert_eq!(idx.candidate_frames(&tokens, 0), ["Attempt", "Trying_out"]);
        assert!(idx.candidate_frames(&toks(&["nothing"]), 0).is_empty());
    }

    #[test]
    fn tsv_round_trip() {
        let idx = index(vec![
            FrameDef::new("A", ["X"], ["run.v", "race.n"]),
            FrameDef::new("B", ["X"], ["running.n"]),
        ]);
        let back = LuIndex::from_tsv(&idx.to_tsv(), idx.normalizer().clone()).unwrap();
        assert_eq!(back.to_tsv(), idx.to_tsv());
        assert!(LuIndex::from_tsv("no tab here", idx.normalizer().clone()).is_err());
    }
}
