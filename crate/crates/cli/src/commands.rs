use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use frameparse::augment::{SynonymSource, WordNetSynonyms};
use frameparse::dataset::{build_stage, write_stages, DatasetConfig, Resources, StageId, StageOutput};
use frameparse::evaluate::{evaluate_split, EvalMode, EvalOptions, Fingerprint, Report, TriggerMatch};
use frameparse::ingest::{
    load_exemplars, load_frame_catalog, load_fulltext, load_propbank_records, propbank_catalog, split_sentences,
    IngestReport, Split, SplitConfig,
};
use frameparse::lu_index::LuIndex;
use frameparse::normalize::wordnet::WordNet;
use frameparse::normalize::Normalizer;
use frameparse::pipeline::{BackendError, HttpBackend, Pipeline, PipelineError, ScriptedBackend, Seq2SeqBackend};
use frameparse::{jsonl, AnnotatedSentence, FrameCatalog};
use serde::Serialize;

use crate::{render, serve, BackendArgs, Cli, Command, ModeArg, ParseFormat, ReportFormat, SplitArg, TriggerMatchArg};

/// A request the arguments cannot express.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<Usage>() {
            return 1;
        }
        if cause.is::<BackendError>() || cause.is::<PipelineError>() {
            return 3;
        }
        if let Some(frameparse::Error::Backend(_)) = cause.downcast_ref::<frameparse::Error>() {
            return 3;
        }
    }
    2
}

pub fn run(cli: Cli) -> Result<()> {
    let ctx = Sources::new(&cli);
    match cli.command {
        Command::Ingest { ref out, ref propbank } => ingest(&ctx, out, propbank.as_deref()),
        Command::BuildIndex { ref out } => build_index(&ctx, out.as_deref()),
        Command::GenData {
            ref config,
            seed,
            ref out,
            ref propbank,
            no_augment,
            no_pretrain,
        } => {
            let mut config = match config {
                Some(path) => DatasetConfig::load(path)?,
                None => DatasetConfig::default(),
            };
            if let Some(seed) = seed {
                config.seed = seed;
            }
            if no_augment {
                config = config.without_augmentation();
            }
            if no_pretrain {
                config = config.without_pretraining();
            }
            gen_data(&ctx, &config, out, propbank.as_deref())
        }
        Command::Parse {
            ref text,
            ref file,
            format,
            ref backend,
        } => parse(&ctx, text.as_deref(), file.as_deref(), format, backend),
        Command::Evaluate {
            split,
            mode,
            trigger_match,
            format,
            limit,
            ref backend,
        } => {
            let options = EvalOptions {
                mode: match mode {
                    ModeArg::EndToEnd => EvalMode::EndToEnd,
                    ModeArg::GoldTriggers => EvalMode::GoldTriggers,
                    ModeArg::GoldFrames => EvalMode::GoldFrames,
                },
                trigger_match: match trigger_match {
                    TriggerMatchArg::Token => TriggerMatch::TokenStart,
                    TriggerMatchArg::Char => TriggerMatch::Char,
                },
            };
            evaluate(&ctx, split, options, format, limit, backend)
        }
        Command::MockServe { ref script, ref host, port } => {
            let backend = ScriptedBackend::load(script)?;
            serve::serve(backend, host, port)
        }
        Command::GoldScript { split, ref out, limit } => gold_script(&ctx, split, out, limit),
    }
}

/// Paths shared by every subcommand, with loaders for what they point at.
struct Sources {
    framenet: Option<PathBuf>,
    wordnet: Option<PathBuf>,
    split_config: Option<PathBuf>,
}

impl Sources {
    fn new(cli: &Cli) -> Self {
        Sources {
            framenet: cli.framenet.clone(),
            wordnet: cli.wordnet.clone(),
            split_config: cli.split_config.clone(),
        }
    }

    fn framenet(&self) -> Result<&Path> {
        self.framenet
            .as_deref()
            .ok_or_else(|| anyhow!("no FrameNet directory: pass --framenet or set FRAMENET_DATA_DIR"))
    }

    fn wordnet(&self) -> Result<Option<Arc<WordNet>>> {
        match &self.wordnet {
            Some(dir) => Ok(Some(Arc::new(WordNet::load(dir)?))),
            None => {
                log::warn!("no WordNet directory given; lemmas fall back to the word itself");
                Ok(None)
            }
        }
    }

    fn catalog(&self) -> Result<FrameCatalog> {
        let (catalog, report) = load_frame_catalog(self.framenet()?)?;
        if catalog.is_empty() {
            bail!("no frames found under {}", self.framenet()?.display());
        }
        log::info!("{} frames, {} warnings", catalog.len(), report.warnings.len());
        Ok(catalog)
    }

    fn split_config(&self) -> Result<SplitConfig> {
        match &self.split_config {
            None => Ok(SplitConfig::default()),
            Some(path) => {
                let raw = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let config: SplitConfig =
                    serde_json::from_str(&raw).with_context(|| format!("parsing {}", path.display()))?;
                Ok(config.normalized())
            }
        }
    }

    fn split(&self, catalog: &FrameCatalog) -> Result<(Split, IngestReport)> {
        let (sentences, report) = load_fulltext(self.framenet()?, catalog)?;
        Ok((split_sentences(sentences, &self.split_config()?), report))
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct IngestSummary {
    frames: usize,
    train: usize,
    dev: usize,
    test: usize,
    exemplars: usize,
    propbank: usize,
    missing_docs: Vec<String>,
    catalog: IngestReport,
    fulltext: IngestReport,
    exemplar: IngestReport,
    propbank_report: Option<IngestReport>,
}

fn ingest(ctx: &Sources, out: &Path, propbank: Option<&Path>) -> Result<()> {
    let dir = ctx.framenet()?;
    let (catalog, catalog_report) = load_frame_catalog(dir)?;
    let (split, fulltext_report) = ctx.split(&catalog)?;
    let (exemplars, exemplar_report) = load_exemplars(dir, &catalog)?;
    let (pb, pb_report) = match propbank {
        Some(path) => {
            let (s, r) = load_propbank_records(path)?;
            (s, Some(r))
        }
        None => (Vec::new(), None),
    };
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    std::fs::write(out.join("frames.json"), serde_json::to_string_pretty(&catalog)? + "\n")?;
    jsonl::write(&out.join("train.jsonl"), &split.train)?;
    jsonl::write(&out.join("dev.jsonl"), &split.dev)?;
    jsonl::write(&out.join("test.jsonl"), &split.test)?;
    jsonl::write(&out.join("exemplars.jsonl"), &exemplars)?;
    if propbank.is_some() {
        jsonl::write(&out.join("propbank.jsonl"), &pb)?;
    }
    let summary = IngestSummary {
        frames: catalog.len(),
        train: split.train.len(),
        dev: split.dev.len(),
        test: split.test.len(),
        exemplars: exemplars.len(),
        propbank: pb.len(),
        missing_docs: split.missing_docs,
        catalog: catalog_report,
        fulltext: fulltext_report,
        exemplar: exemplar_report,
        propbank_report: pb_report,
    };
    std::fs::write(out.join("ingest_report.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
    print_json(&summary)
}

fn build_index(ctx: &Sources, out: Option<&Path>) -> Result<()> {
    let catalog = ctx.catalog()?;
    let index = LuIndex::build(&catalog, Arc::new(Normalizer::new(ctx.wordnet()?)));
    let tsv = index.to_tsv();
    match out {
        Some(path) => std::fs::write(path, tsv).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().lock().write_all(tsv.as_bytes())?,
    }
    Ok(())
}

fn gen_data(ctx: &Sources, config: &DatasetConfig, out: &Path, propbank: Option<&Path>) -> Result<()> {
    config.validate()?;
    let wordnet = ctx.wordnet()?;
    let normalizer = Arc::new(Normalizer::new(wordnet.clone()));
    let synonyms: Option<Box<dyn SynonymSource>> =
        wordnet.map(|wn| Box::new(WordNetSynonyms::new(wn)) as Box<dyn SynonymSource>);
    let catalog = ctx.catalog()?;
    let index = LuIndex::build(&catalog, normalizer.clone());
    let res = Resources {
        catalog: &catalog,
        index: &index,
        synonyms: synonyms.as_deref(),
    };

    let mut outputs: Vec<StageOutput> = Vec::new();
    for plan in &config.stages {
        let output = match plan.stage {
            StageId::Propbank => {
                let Some(path) = propbank else {
                    log::warn!("no --propbank file; skipping the propbank stage");
                    continue;
                };
                let (records, _) = load_propbank_records(path)?;
                let pb_catalog = propbank_catalog(&records);
                let pb_index = LuIndex::build(&pb_catalog, normalizer.clone());
                let pb_res = Resources {
                    catalog: &pb_catalog,
                    index: &pb_index,
                    ..res
                };
                build_stage(plan, &records, pb_res, config.seed)?
            }
            StageId::Exemplar => {
                let (sentences, _) = load_exemplars(ctx.framenet()?, &catalog)?;
                build_stage(plan, &sentences, res, config.seed)?
            }
            StageId::Finetune => {
                let (split, _) = ctx.split(&catalog)?;
                build_stage(plan, &split.train, res, config.seed)?
            }
        };
        for d in &output.diagnostics {
            log::warn!("{}: {d}", plan.stage.as_str());
        }
        outputs.push(output);
    }
    write_stages(out, config.seed, &outputs)?;
    let manifest = std::fs::read_to_string(out.join("manifest.json"))?;
    print!("{manifest}");
    Ok(())
}

fn open_backend(args: &BackendArgs) -> Result<Box<dyn Seq2SeqBackend>> {
    match (&args.backend_url, &args.script) {
        (Some(url), _) => {
            let mut backend = HttpBackend::new(url, Duration::from_secs(args.timeout_secs))?;
            backend.max_new_tokens = args.max_new_tokens;
            backend.health().with_context(|| format!("health check of {url}"))?;
            Ok(Box::new(backend))
        }
        (None, Some(path)) => Ok(Box::new(ScriptedBackend::load(path)?)),
        (None, None) => Err(Usage("either --backend-url or --script is required".into()).into()),
    }
}

fn backend_description(args: &BackendArgs) -> String {
    match (&args.backend_url, &args.script) {
        (Some(url), _) => url.clone(),
        (None, Some(path)) => format!("script:{}", path.display()),
        (None, None) => String::new(),
    }
}

fn parse(ctx: &Sources, text: Option<&str>, file: Option<&Path>, format: ParseFormat, args: &BackendArgs) -> Result<()> {
    let texts: Vec<String> = match (text, file) {
        (Some(t), _) => vec![t.to_string()],
        (None, Some(path)) => std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(str::to_string)
            .collect(),
        (None, None) => return Err(Usage("either --text or --file is required".into()).into()),
    };
    let catalog = ctx.catalog()?;
    let index = LuIndex::build(&catalog, Arc::new(Normalizer::new(ctx.wordnet()?)));
    let backend = open_backend(args)?;
    let pipeline = Pipeline::new(backend.as_ref(), &catalog, &index).with_batching(args.batch_size, args.max_in_flight);
    let results = if texts.len() == 1 {
        vec![pipeline.detect_frames(&texts[0])]
    } else {
        pipeline.detect_frames_bulk(&texts)
    };

    let mut first_error = None;
    let mut parsed = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(p) => parsed.push(p),
            Err(e) => {
                parsed.push(e.partial.clone());
                first_error.get_or_insert(e);
            }
        }
    }
    match format {
        ParseFormat::Json if text.is_some() => print_json(&parsed[0])?,
        ParseFormat::Json => print_json(&parsed)?,
        ParseFormat::Tree => {
            let mut out = std::io::stdout().lock();
            for p in &parsed {
                write!(out, "{}", render::tree(p))?;
            }
        }
    }
    match first_error {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn selected<'a>(split: &'a Split, which: SplitArg, limit: Option<usize>) -> Vec<(&'static str, &'a [AnnotatedSentence])> {
    let cut = |v: &'a [AnnotatedSentence]| &v[..limit.unwrap_or(v.len()).min(v.len())];
    match which {
        SplitArg::Dev => vec![("dev", cut(&split.dev))],
        SplitArg::Test => vec![("test", cut(&split.test))],
        SplitArg::Both => vec![("dev", cut(&split.dev)), ("test", cut(&split.test))],
    }
}

fn evaluate(
    ctx: &Sources,
    which: SplitArg,
    options: EvalOptions,
    format: ReportFormat,
    limit: Option<usize>,
    args: &BackendArgs,
) -> Result<()> {
    let catalog = ctx.catalog()?;
    let wordnet = ctx.wordnet()?;
    let index = LuIndex::build(&catalog, Arc::new(Normalizer::new(wordnet.clone())));
    let (split, _) = ctx.split(&catalog)?;
    let backend = open_backend(args)?;
    let pipeline = Pipeline::new(backend.as_ref(), &catalog, &index).with_batching(args.batch_size, args.max_in_flight);
    let split_config = ctx.split_config()?;
    let fingerprint = Fingerprint::new(serde_json::json!({
        "backend": backend_description(args),
        "options": options,
        "frames": catalog.len(),
        "index_forms": index.len(),
        "wordnet": wordnet.is_some(),
        "dev_docs": split_config.dev_docs,
        "test_docs": split_config.test_docs,
        "limit": limit,
    }));
    let mut report = Report::new(options, fingerprint);
    for (name, sentences) in selected(&split, which, limit) {
        if sentences.is_empty() {
            log::warn!("the {name} split is empty");
        }
        report.insert(name, evaluate_split(&pipeline, sentences, options));
    }
    match format {
        ReportFormat::Json => print_json(&report),
        ReportFormat::Table => {
            print!("{}", report.to_table());
            Ok(())
        }
    }
}

fn gold_script(ctx: &Sources, which: SplitArg, out: &Path, limit: Option<usize>) -> Result<()> {
    let catalog = ctx.catalog()?;
    let index = LuIndex::build(&catalog, Arc::new(Normalizer::new(ctx.wordnet()?)));
    let (split, _) = ctx.split(&catalog)?;
    let sentences: Vec<AnnotatedSentence> = selected(&split, which, limit)
        .into_iter()
        .flat_map(|(_, s)| s.iter().cloned())
        .collect();
    let script = ScriptedBackend::from_gold(&sentences, &catalog, &index);
    script.save(out)?;
    eprintln!("wrote {} exchanges for {} sentences to {}", script.len(), sentences.len(), out.display());
    Ok(())
}
