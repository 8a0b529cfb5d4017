//! `frameparse` command line.
//!
//! Exit codes: 0 success, 1 usage, 2 data or configuration error,
//! 3 backend unreachable or failing.

mod commands;
mod render;
mod serve;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "frameparse", version, about = "Frame semantic parsing with a text-to-text model")]
pub struct Cli {
    /// FrameNet 1.7 root (the directory holding frame/, fulltext/ and lu/).
    #[arg(long, global = true, env = "FRAMENET_DATA_DIR")]
    pub framenet: Option<PathBuf>,
    /// WordNet dictionary directory. Without it lemmas are the words themselves.
    #[arg(long, global = true, env = "WORDNET_DATA_DIR")]
    pub wordnet: Option<PathBuf>,
    /// Dev/test document lists as JSON; the bundled lists are used otherwise.
    #[arg(long, global = true)]
    pub split_config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate the corpora and write normalized JSONL plus an ingest report.
    Ingest {
        #[arg(long)]
        out: PathBuf,
        /// PropBank records in the normalized JSONL format.
        #[arg(long)]
        propbank: Option<PathBuf>,
    },
    /// Write the lexical-unit index as TSV.
    BuildIndex {
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate the staged training files.
    GenData {
        /// Dataset configuration JSON; built-in defaults when absent.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the seed in the configuration.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        propbank: Option<PathBuf>,
        #[arg(long)]
        no_augment: bool,
        #[arg(long)]
        no_pretrain: bool,
    },
    /// Parse sentences.
    Parse {
        #[arg(long, conflicts_with = "file", required_unless_present = "file")]
        text: Option<String>,
        /// One sentence per line.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ParseFormat::Json)]
        format: ParseFormat,
        #[command(flatten)]
        backend: BackendArgs,
    },
    /// Score the parser on a held-out split.
    Evaluate {
        #[arg(long, value_enum, default_value_t = SplitArg::Test)]
        split: SplitArg,
        #[arg(long, value_enum, default_value_t = ModeArg::EndToEnd)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = TriggerMatchArg::Token)]
        trigger_match: TriggerMatchArg,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
        /// Score at most this many sentences per split.
        #[arg(long)]
        limit: Option<usize>,
        #[command(flatten)]
        backend: BackendArgs,
    },
    /// Serve a scripted backend over the /generate protocol.
    MockServe {
        #[arg(long)]
        script: PathBuf,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// 0 picks a free port; the bound address is printed on stdout.
        #[arg(long, default_value_t = 0)]
        port: u16,
    },
    /// Write a script that answers every prompt of a split with its gold output.
    GoldScript {
        #[arg(long, value_enum, default_value_t = SplitArg::Test)]
        split: SplitArg,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        limit: Option<usize>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct BackendArgs {
    /// Base URL of a model server.
    #[arg(long, conflicts_with = "script", required_unless_present = "script")]
    pub backend_url: Option<String>,
    /// Scripted backend JSONL, run in process.
    #[arg(long)]
    pub script: Option<PathBuf>,
    #[arg(long, default_value_t = 120)]
    pub timeout_secs: u64,
    #[arg(long, default_value_t = 32)]
    pub batch_size: usize,
    #[arg(long, default_value_t = 4)]
    pub max_in_flight: usize,
    #[arg(long, default_value_t = 512)]
    pub max_new_tokens: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseFormat {
    Json,
    Tree,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Table,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitArg {
    Dev,
    Test,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    EndToEnd,
    GoldTriggers,
    GoldFrames,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriggerMatchArg {
    Token,
    Char,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // Library errors already name their cause, so skip repeats.
            let mut message = e.to_string();
            for cause in e.chain().skip(1) {
                let c = cause.to_string();
                if !message.contains(&c) {
                    message = format!("{message}: {c}");
                }
            }
            eprintln!("error: {message}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
