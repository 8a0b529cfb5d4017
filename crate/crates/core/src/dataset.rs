//! Training data generation: staged task-record datasets with per-kind
//! sampling weights and augmentation.
//!
//! Stages are meant to be trained in order: PropBank, then exemplars, then
//! the full-text training split. Each stage is written to its own file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::augment::{augment_traced, derive_seed, AugmentConfig, SynonymSource};
use crate::codec::{encode_args_task, encode_frame_task, encode_trigger_task, prompt_kind};
use crate::error::{Error, Result};
use crate::jsonl;
use crate::lu_index::LuIndex;
use crate::model::{AnnotatedSentence, FrameCatalog, TaskKind, TaskRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageId {
    Propbank,
    Exemplar,
    Finetune,
}

impl StageId {
    pub const ORDER: [StageId; 3] = [StageId::Propbank, StageId::Exemplar, StageId::Finetune];

    pub fn as_str(self) -> &'static str {
        match self {
            StageId::Propbank => "propbank",
            StageId::Exemplar => "exemplar",
            StageId::Finetune => "finetune",
        }
    }

    pub fn is_pretraining(self) -> bool {
        self != StageId::Finetune
    }
}

/// Emissions per record of each kind per epoch. The integer part replicates;
/// the fractional part is a Bernoulli draw for one more copy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KindWeights {
    pub trigger_id: f64,
    pub frame_classification: f64,
    pub arg_extraction: f64,
}

impl Default for KindWeights {
    fn default() -> Self {
        KindWeights {
            trigger_id: 3.0,
            frame_classification: 1.0,
            arg_extraction: 1.0,
        }
    }
}

impl KindWeights {
    pub fn get(&self, kind: TaskKind) -> f64 {
        match kind {
            TaskKind::TriggerId => self.trigger_id,
            TaskKind::FrameClassification => self.frame_classification,
            TaskKind::ArgExtraction => self.arg_extraction,
        }
    }
}

/// How many copies a record with weight `w` gets.
pub fn replica_count(weight: f64, rng: &mut impl Rng) -> u32 {
    let whole = weight.floor();
    let frac = weight - whole;
    whole as u32 + u32::from(frac > 0.0 && rng.gen_bool(frac))
}

/// Replicates each record by its kind's weight and shuffles.
pub fn balance_sample(records: &[TaskRecord], weights: &KindWeights, rng: &mut impl Rng) -> Vec<TaskRecord> {
    let mut out = Vec::new();
    for r in records {
        for _ in 0..replica_count(weights.get(r.kind), rng) {
            out.push(r.clone());
        }
    }
    out.shuffle(rng);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StagePlan {
    pub stage: StageId,
    pub tasks: Vec<TaskKind>,
    #[serde(default)]
    pub weights: KindWeights,
    /// `None` disables augmentation for the stage.
    #[serde(default)]
    pub augment: Option<AugmentConfig>,
    #[serde(default = "one")]
    pub epochs: u32,
}

fn one() -> u32 {
    1
}

impl StagePlan {
    /// Trigger identification only in the fine-tuning stage; pretraining
    /// corpora annotate a single frame per sentence.
    pub fn default_for(stage: StageId) -> Self {
        let tasks = if stage.is_pretraining() {
            vec![TaskKind::FrameClassification, TaskKind::ArgExtraction]
        } else {
            TaskKind::ALL.to_vec()
        };
        StagePlan {
            stage,
            tasks,
            weights: KindWeights::default(),
            augment: Some(AugmentConfig::default()),
            epochs: 1,
        }
    }

    pub fn enables(&self, kind: TaskKind) -> bool {
        self.tasks.contains(&kind)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(format!("{} stage: {m}", self.stage.as_str())));
        if self.stage.is_pretraining() && self.enables(TaskKind::TriggerId) {
            return fail("trigger identification is only generated for the finetune stage".into());
        }
        if self.epochs == 0 {
            return fail("epochs must be at least 1".into());
        }
        for &kind in &self.tasks {
            let w = self.weights.get(kind);
            if !(w.is_finite() && w > 0.0) {
                return fail(format!("weight for {kind} must be positive, got {w}"));
            }
        }
        if let Some(a) = &self.augment {
            a.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }
}

/// The dataset configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetConfig {
    pub seed: u64,
    pub stages: Vec<StagePlan>,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        DatasetConfig {
            seed: 0,
            stages: StageId::ORDER.into_iter().map(StagePlan::default_for).collect(),
        }
    }
}

impl DatasetConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let config: DatasetConfig = serde_json::from_str(&raw).map_err(|e| Error::Json {
            path: path.to_path_buf(),
            line: e.line(),
            message: e.to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = Vec::new();
        for plan in &self.stages {
            plan.validate()?;
            if seen.contains(&plan.stage) {
                return Err(Error::Config(format!("stage {} listed twice", plan.stage.as_str())));
            }
            seen.push(plan.stage);
        }
        Ok(())
    }

    pub fn without_augmentation(mut self) -> Self {
        for plan in &mut self.stages {
            plan.augment = None;
        }
        self
    }

    pub fn without_pretraining(mut self) -> Self {
        self.stages.retain(|p| !p.stage.is_pretraining());
        self
    }
}

/// Record counts for one stage.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounts {
    pub sentences: usize,
    pub annotations: usize,
    pub skipped_sentences: usize,
    pub skipped_annotations: usize,
    /// Emitted records per kind, summed over epochs.
    pub emitted: BTreeMap<TaskKind, usize>,
    pub augmented: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageOutput {
    pub stage: StageId,
    pub records: Vec<TaskRecord>,
    pub counts: StageCounts,
    pub diagnostics: Vec<String>,
}

/// Shared inputs for task encoding.
#[derive(Clone, Copy)]
pub struct Resources<'a> {
    pub catalog: &'a FrameCatalog,
    pub index: &'a LuIndex,
    pub synonyms: Option<&'a dyn SynonymSource>,
}

struct SentenceOutput {
    records: Vec<TaskRecord>,
    skipped_annotations: usize,
    augmented: usize,
    diagnostics: Vec<String>,
}

fn sentence_records(
    plan: &StagePlan,
    s: &AnnotatedSentence,
    res: Resources<'_>,
    seed: u64,
    epoch: u32,
) -> SentenceOutput {
    let mut out = SentenceOutput {
        records: Vec::new(),
        skipped_annotations: 0,
        augmented: 0,
        diagnostics: Vec::new(),
    };
    let key = (s.doc_id.as_str(), s.sentence_id.as_str());
    let mut sample_rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, key.0, key.1, epoch, "sample", 0));

    let augment = |config: &AugmentConfig, stream: &str, replica: u32| {
        let seed = derive_seed(seed, key.0, key.1, epoch, stream, replica);
        augment_traced(s, config, res.synonyms, seed)
    };

    if plan.enables(TaskKind::TriggerId) {
        let trigger_config = plan.augment.as_ref().map(AugmentConfig::for_trigger_task);
        for replica in 0..replica_count(plan.weights.trigger_id, &mut sample_rng) {
            let (sentence, augmented) = match &trigger_config {
                Some(c) => {
                    let a = augment(c, "trigger", replica);
                    let changed = a.changed();
                    (a.sentence, changed)
                }
                None => (s.clone(), false),
            };
            let mut record = encode_trigger_task(&sentence);
            record.provenance.augmented = augmented;
            out.augmented += usize::from(augmented);
            out.records.push(record);
        }
    }

    // Per annotation: frame copies, args copies, and the frame definition
    // when the args task can be encoded.
    let frame_on = plan.enables(TaskKind::FrameClassification);
    let args_on = plan.enables(TaskKind::ArgExtraction);
    let mut copies = Vec::with_capacity(s.annotations.len());
    for a in &s.annotations {
        let frame_n = if frame_on { replica_count(plan.weights.frame_classification, &mut sample_rng) } else { 0 };
        let args_n = if args_on { replica_count(plan.weights.arg_extraction, &mut sample_rng) } else { 0 };
        let def = res.catalog.get(&a.frame);
        if def.is_none() && (frame_on || args_on) {
            out.skipped_annotations += 1;
            out.diagnostics.push(format!(
                "{}/{}: frame {} not in catalog; annotation skipped",
                key.0, key.1, a.frame
            ));
            copies.push((0, 0, None));
            continue;
        }
        copies.push((frame_n, args_n, def));
    }

    let replicas = copies.iter().map(|&(f, a, _)| f.max(a)).max().unwrap_or(0);
    for replica in 0..replicas {
        // Frame and args records of one replica see the same augmented text.
        let (sentence, augmented) = match &plan.augment {
            Some(c) => {
                let a = augment(c, "annotation", replica);
                let changed = a.changed();
                (a.sentence, changed)
            }
            None => (s.clone(), false),
        };
        for (a, &(frame_n, args_n, def)) in sentence.annotations.iter().zip(&copies) {
            if replica < frame_n {
                let candidates = res.index.candidates_in_text(&sentence.text, a.trigger.start);
                let mut record = encode_frame_task(&sentence, a, &candidates);
                record.provenance.augmented = augmented;
                out.records.push(record);
            }
            if replica < args_n {
                let mut record = encode_args_task(&sentence, a, def.expect("checked above"));
                record.provenance.augmented = augmented;
                out.records.push(record);
            }
            out.augmented += usize::from(augmented) * (usize::from(replica < frame_n) + usize::from(replica < args_n));
        }
    }
    out
}

/// Generates every epoch of one stage. Sentences that fail validation against
/// the catalog are skipped with a diagnostic. Output is deterministic in
/// `(plan, sentences, seed)` regardless of thread scheduling.
pub fn build_stage(
    plan: &StagePlan,
    sentences: &[AnnotatedSentence],
    res: Resources<'_>,
    seed: u64,
) -> Result<StageOutput> {
    plan.validate()?;
    let mut counts = StageCounts::default();
    let mut diagnostics = Vec::new();
    let mut valid = Vec::with_capacity(sentences.len());
    for s in sentences {
        let mut s = s.clone();
        if plan.stage.is_pretraining() && s.annotations.is_empty() {
            counts.skipped_sentences += 1;
            diagnostics.push(format!("{}/{}: no annotation; skipped", s.doc_id, s.sentence_id));
            continue;
        }
        // Element names the catalog does not know cannot be prompted for.
        for a in &mut s.annotations {
            if let Some(def) = res.catalog.get(&a.frame) {
                a.elements.retain(|e| def.has_element(&e.element));
            }
        }
        match s.validate(None) {
            Ok(()) => valid.push(s),
            Err(e) => {
                counts.skipped_sentences += 1;
                diagnostics.push(format!("{}/{}: {e}; skipped", s.doc_id, s.sentence_id));
            }
        }
    }
    counts.sentences = valid.len();
    counts.annotations = valid.iter().map(|s| s.annotations.len()).sum();

    let mut records = Vec::new();
    for epoch in 0..plan.epochs {
        let per_sentence: Vec<SentenceOutput> = valid
            .par_iter()
            .map(|s| sentence_records(plan, s, res, seed, epoch))
            .collect();
        let mut epoch_records = Vec::new();
        for o in per_sentence {
            if epoch == 0 {
                counts.skipped_annotations += o.skipped_annotations;
                diagnostics.extend(o.diagnostics);
            }
            counts.augmented += o.augmented;
            epoch_records.extend(o.records);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "", "", epoch, plan.stage.as_str(), 0));
        epoch_records.shuffle(&mut rng);
        records.extend(epoch_records);
    }
    for r in &records {
        *counts.emitted.entry(r.kind).or_default() += 1;
    }
    self_validate(&records)?;
    for d in &diagnostics {
        log::warn!("{} stage: {d}", plan.stage.as_str());
    }
    Ok(StageOutput {
        stage: plan.stage,
        records,
        counts,
        diagnostics,
    })
}

/// Every record must serialize, parse back unchanged and carry a prompt of
/// its own kind.
fn self_validate(records: &[TaskRecord]) -> Result<()> {
    for r in records {
        let line = serde_json::to_string(r).expect("serializable");
        let back: TaskRecord = serde_json::from_str(&line).map_err(|e| Error::Config(format!("record fails to parse back: {e}")))?;
        if &back != r || prompt_kind(&r.input) != Some(r.kind) {
            return Err(Error::Config(format!("malformed {} record: {:?}", r.kind, r.input)));
        }
    }
    Ok(())
}

/// File name for a stage, prefixed with its position in training order.
pub fn stage_file_name(stage: StageId) -> String {
    let n = StageId::ORDER.iter().position(|&s| s == stage).expect("listed") + 1;
    format!("{n:02}_{}.jsonl", stage.as_str())
}

/// Summary written next to the stage files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    /// Stage files in training order.
    pub stages: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub stage: StageId,
    pub file: String,
    pub records: usize,
    pub counts: StageCounts,
}

/// Writes each stage's records to `dir` and a `manifest.json`.
pub fn write_stages(dir: &Path, seed: u64, outputs: &[StageOutput]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    let mut entries = Vec::new();
    let mut ordered: Vec<&StageOutput> = outputs.iter().collect();
    ordered.sort_by_key(|o| o.stage);
    for o in ordered {
        let file = stage_file_name(o.stage);
        let path = dir.join(&file);
        jsonl::write(&path, &o.records)?;
        written.push(path);
        entries.push(ManifestEntry {
            stage: o.stage,
            file,
            records: o.records.len(),
            counts: o.counts.clone(),
        });
    }
    let manifest = Manifest { seed, stages: entries };
    let path = dir.join("manifest.json");
    let body = serde_json::to_string_pretty(&manifest).expect("serializable") + "\n";
    std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
    written.push(path);
    Ok(written)
}
