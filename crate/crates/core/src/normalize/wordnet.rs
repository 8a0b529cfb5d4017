//! Minimal reader for the WordNet 3.0 database files.
//!
//! Loads `index.*`, `*.exc` and (optionally) `data.*`, which is enough for
//! NLTK-compatible morphy lemmatization and first-sense synonym lookup.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pos {
    Noun,
    Verb,
    Adj,
    Adv,
}

impl Pos {
    pub const ALL: [Pos; 4] = [Pos::Noun, Pos::Verb, Pos::Adj, Pos::Adv];

    fn file_suffix(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adj => "adj",
            Pos::Adv => "adv",
        }
    }

    fn substitutions(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Pos::Noun => &[
                ("s", ""),
                ("ses", "s"),
                ("ves", "f"),
                ("xes", "x"),
                ("zes", "z"),
                ("ches", "ch"),
                ("shes", "sh"),
                ("men", "man"),
                ("ies", "y"),
            ],
            Pos::Verb => &[
                ("s", ""),
                ("ies", "y"),
                ("es", "e"),
                ("es", ""),
                ("ed", "e"),
                ("ed", ""),
                ("ing", "e"),
                ("ing", ""),
            ],
            Pos::Adj => &[("er", ""), ("est", ""), ("er", "e"), ("est", "e")],
            Pos::Adv => &[],
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Default)]
struct PosTables {
    /// lemma -> synset offsets, in sense order
    lemmas: HashMap<String, Vec<u64>>,
    exceptions: HashMap<String, Vec<String>>,
    /// synset offset -> member words
    synsets: HashMap<u64, Vec<String>>,
}

#[derive(Debug, Default)]
pub struct WordNet {
    tables: [PosTables; 4],
}

fn read_optional(path: &Path) -> Result<Option<String>> {
    match fs::read_to_string(path) {
        Ok(s) => Ok(Some(s)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(Error::io(path, e)),
    }
}

fn parse_index_line(line: &str) -> Option<(String, Vec<u64>)> {
    let mut fields = line.split_whitespace();
    let lemma = fields.next()?.to_string();
    let _pos = fields.next()?;
    let n_synsets: usize = fields.next()?.parse().ok()?;
    let n_pointers: usize = fields.next()?.parse().ok()?;
    let mut fields = fields.skip(n_pointers + 2);
    let offsets = (0..n_synsets)
        .map(|_| fields.next()?.parse().ok())
        .collect::<Option<Vec<u64>>>()?;
    Some((lemma, offsets))
}

fn parse_data_line(line: &str) -> Option<(u64, Vec<String>)> {
    let mut fields = line.split_whitespace();
    let offset: u64 = fields.next()?.parse().ok()?;
    let _lex_filenum = fields.next()?;
    let _ss_type = fields.next()?;
    let w_cnt = usize::from_str_radix(fields.next()?, 16).ok()?;
    let mut words = Vec::with_capacity(w_cnt);
    for _ in 0..w_cnt {
        let word = fields.next()?;
        let _lex_id = fields.next()?;
        // Adjective markers such as "(a)" or "(ip)" are not part of the lemma.
        let word = match word.find('(') {
            Some(i) if word.ends_with(')') => &word[..i],
            _ => word,
        };
        words.push(word.to_string());
    }
    Some((offset, words))
}

impl WordNet {
    /// Loads a WordNet dictionary directory. Index and exception files are
    /// required; data files are optional and only needed for synonyms.
    pub fn load(dir: &Path) -> Result<WordNet> {
        if !dir.is_dir() {
            return Err(Error::Config(format!(
                "WordNet directory not found: {}",
                dir.display()
            )));
        }
        let mut wn = WordNet::default();
        for pos in Pos::ALL {
            let table = &mut wn.tables[pos.index()];
            let index_path = dir.join(format!("index.{}", pos.file_suffix()));
            let index = fs::read_to_string(&index_path).map_err(|e| Error::io(&index_path, e))?;
            for line in index.lines().filter(|l| !l.starts_with(' ')) {
                if let Some((lemma, offsets)) = parse_index_line(line) {
                    table.lemmas.insert(lemma, offsets);
                }
            }
            let exc_path = dir.join(format!("{}.exc", pos.file_suffix()));
            if let Some(exc) = read_optional(&exc_path)? {
                for line in exc.lines() {
                    let mut terms = line.split_whitespace().map(str::to_string);
                    if let Some(form) = terms.next() {
                        table.exceptions.insert(form, terms.collect());
                    }
                }
            }
            let data_path = dir.join(format!("data.{}", pos.file_suffix()));
            if let Some(data) = read_optional(&data_path)? {
                for line in data.lines().filter(|l| !l.starts_with(' ')) {
                    if let Some((offset, words)) = parse_data_line(line) {
                        table.synsets.insert(offset, words);
                    }
                }
            }
        }
        Ok(wn)
    }

    pub fn contains(&self, lemma: &str, pos: Pos) -> bool {
        self.tables[pos.index()].lemmas.contains_key(lemma)
    }

    /// Every lemma `form` may be an inflection of, original form first.
    pub fn morphy(&self, form: &str, pos: Pos) -> Vec<String> {
        let table = &self.tables[pos.index()];
        let mut candidates = vec![form.to_string()];
        match table.exceptions.get(form) {
            Some(targets) => candidates.extend(targets.iter().cloned()),
            None => {
                for (old, new) in pos.substitutions() {
                    if let Some(stem) = form.strip_suffix(old) {
                        candidates.push(format!("{stem}{new}"));
                    }
                }
            }
        }
        let mut out: Vec<String> = Vec::new();
        for c in candidates {
            if table.lemmas.contains_key(&c) && !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }

    /// Shortest morphy lemma (first on ties), or the word itself.
    pub fn lemmatize(&self, word: &str, pos: Pos) -> String {
        let lemmas = self.morphy(word, pos);
        let mut best: Option<&String> = None;
        for lemma in &lemmas {
            if best.map_or(true, |b| lemma.chars().count() < b.chars().count()) {
                best = Some(lemma);
            }
        }
        best.cloned().unwrap_or_else(|| word.to_string())
    }

    /// Other members of the first synset of `word` in the first POS (noun,
    /// verb, adjective, adverb) that lists it. Underscores become spaces.
    pub fn first_sense_synonyms(&self, word: &str) -> Vec<String> {
        let key = word.to_lowercase();
        for pos in Pos::ALL {
            let table = &self.tables[pos.index()];
            let Some(first) = table.lemmas.get(&key).and_then(|o| o.first()) else {
                continue;
            };
            let Some(members) = table.synsets.get(first) else {
                return Vec::new();
            };
            let mut out: Vec<String> = Vec::new();
            for member in members {
                let member = member.replace('_', " ");
                if !member.eq_ignore_ascii_case(&key) && !out.contains(&member) {
                    out.push(member);
                }
            }
            return out;
        }
        Vec::new()
    }
}
