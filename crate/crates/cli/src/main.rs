mod commands;
mod config;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use commands::{Failure, Outcome};
use config::RunConfig;

/// Paraproduct words on spaces of analytic functions: exact rewriting,
/// norms, operator-norm lower bounds and dilation scans.
#[derive(Parser)]
#[command(name = "paraword", version)]
struct Cli {
    /// Cap on worker threads [default: all cores]
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// JSON file with any of the subcommand options
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Print the JSON report envelope instead of text
    #[arg(long, global = true)]
    json: bool,

    /// More log output (repeat for debug)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of a word as S^a T^b terms
    Stform {
        /// The word, e.g. "S M T"
        #[arg(id = "word_text", value_name = "WORD")]
        text: Option<String>,
        #[command(flatten)]
        cfg: RunConfig,
    },
    /// Check every normal form exactly on random polynomials
    Verify {
        #[command(flatten)]
        cfg: RunConfig,
    },
    /// Evaluate a norm or seminorm of a symbol
    Seminorm {
        #[command(flatten)]
        cfg: RunConfig,
    },
    /// Lower bound for the operator norm of a word on A^p_alpha
    Opnorm {
        #[command(flatten)]
        cfg: RunConfig,
    },
    /// Lower bound for the norm of f -> |g|^(tau l) T^l f
    Qnorm {
        #[command(flatten)]
        cfg: RunConfig,
    },
    /// Operator norm against seminorm power along dilations (CSV)
    Scan {
        #[command(flatten)]
        cfg: RunConfig,
    },
    /// The bounded and unbounded S T^2 scans side by side
    Counterexample {
        #[command(flatten)]
        cfg: RunConfig,
    },
    /// Band of the square-function ratio over random polynomials
    Calderon {
        #[command(flatten)]
        cfg: RunConfig,
    },
    /// Hardy-Stein identity residuals
    Hardystein {
        #[command(flatten)]
        cfg: RunConfig,
    },
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool_version: &'static str,
    subcommand: &'a str,
    config: &'a RunConfig,
    results: &'a [serde_json::Value],
    timings: BTreeMap<&'static str, f64>,
}

fn diagnostic(kind: &str, message: &str) {
    eprintln!("{}", json!({ "status": "error", "kind": kind, "message": message }));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            diagnostic("usage", e.to_string().trim());
            return ExitCode::from(1);
        }
    };
    let level = ["warn", "info", "debug"][usize::from(cli.verbose.min(2))];
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    if let Some(n) = cli.threads {
        if n == 0 || rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            diagnostic("usage", "--threads must be a positive integer");
            return ExitCode::from(1);
        }
    }

    let (name, run, flags, word): (
        &str,
        fn(&RunConfig) -> Result<Outcome, Failure>,
        RunConfig,
        Option<String>,
    ) = match cli.command {
        Command::Stform { text, cfg } => ("stform", commands::stform, cfg, text),
        Command::Verify { cfg } => ("verify", commands::verify, cfg, None),
        Command::Seminorm { cfg } => ("seminorm", commands::seminorm, cfg, None),
        Command::Opnorm { cfg } => ("opnorm", commands::opnorm, cfg, None),
        Command::Qnorm { cfg } => ("qnorm", commands::qnorm, cfg, None),
        Command::Scan { cfg } => ("scan", commands::scan, cfg, None),
        Command::Counterexample { cfg } => ("counterexample", commands::counterexample, cfg, None),
        Command::Calderon { cfg } => ("calderon", commands::calderon, cfg, None),
        Command::Hardystein { cfg } => ("hardystein", commands::hardystein, cfg, None),
    };
    let base = match &cli.config {
        Some(path) => match RunConfig::load(path) {
            Ok(c) => c,
            Err(e) => {
                diagnostic("usage", &format!("config {}: {e}", path.display()));
                return ExitCode::from(1);
            }
        },
        None => RunConfig::default(),
    };
    let mut cfg = base.merged(&flags);
    if word.is_some() {
        cfg.word = word;
    }

    let start = Instant::now();
    let out = match run(&cfg) {
        Ok(out) => out,
        Err(f) => {
            diagnostic(f.kind(), f.message());
            return ExitCode::from(1);
        }
    };
    let timings = BTreeMap::from([("total_s", start.elapsed().as_secs_f64())]);
    let envelope = Envelope {
        tool_version: env!("CARGO_PKG_VERSION"),
        subcommand: name,
        config: &cfg,
        results: &out.results,
        timings,
    };
    let envelope = serde_json::to_string_pretty(&envelope).expect("envelope serialises");

    if let Some(path) = &cfg.output {
        let body = match (&out.csv, path.extension().and_then(|e| e.to_str())) {
            (Some(csv), Some("csv")) => csv.clone(),
            _ => envelope.clone() + "\n",
        };
        if let Err(e) = std::fs::write(path, body) {
            diagnostic("io", &format!("{}: {e}", path.display()));
            return ExitCode::from(1);
        }
    }
    if cli.json {
        println!("{envelope}");
    } else {
        print!("{}", out.text);
    }
    match out.violation {
        Some(msg) => {
            diagnostic("assertion", &msg);
            ExitCode::from(2)
        }
        None => ExitCode::SUCCESS,
    }
}
