//! `gsc`: fold, check, construct and experiment from the command line.
//!
//! Exit codes: 0 pass/success, 1 fail, 2 degenerate or precondition
//! failure, 3 I/O or parse error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gsc_core::{Alpha, Variant};
use serde::Serialize;

use report::{document, Failure, EXIT_IO};

#[derive(Parser)]
#[command(name = "gsc", version, about = "Graphical small cancellation toolkit")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct Global {
    /// Seed for randomized commands (overrides a config file's seed).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    pub json_out: Option<PathBuf>,
    /// Suppress the human-readable summary.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "verb")]
pub enum Command {
    /// Stallings-fold a graph.
    Fold {
        graph: PathBuf,
        /// Write the folded graph here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Vertex/edge counts, girth, diameter and spectral gap.
    Metrics { graph: PathBuf },
    /// Check Gr'(α) for a folded graph.
    CheckGr {
        graph: PathBuf,
        #[arg(long)]
        alpha: Alpha,
        #[arg(long, default_value = "cycle")]
        variant: Variant,
    },
    /// Check C'(α) for the word relators of a presentation file.
    CheckCprime {
        presentation: PathBuf,
        #[arg(long)]
        alpha: Alpha,
    },
    /// Find a shortest reduced word that lifts nowhere.
    MissingWord {
        graph: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
    /// Add cycles to a folded graph along a missing word.
    AddCycles(AddCyclesArgs),
    /// Rips construction over a quotient presentation.
    BuildRips {
        /// Presentation file of the quotient Q.
        #[arg(long)]
        quotient: PathBuf,
        /// Base graph Γ over two generators.
        #[arg(long)]
        gamma: PathBuf,
        /// Cycle words, one per line.
        #[arg(long)]
        cycles: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value = "rips")]
        stem: String,
    },
    /// CoHopfian HNN-type presentation from Γ and the images of a, b.
    BuildCohopf {
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long)]
        phi_a: String,
        #[arg(long)]
        phi_b: String,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value = "cohopf")]
        stem: String,
    },
    /// Non-Hopfian presentation from Γ and three cycle words.
    BuildNonhopf {
        #[arg(long)]
        gamma: PathBuf,
        /// Three cycle words, one per line.
        #[arg(long)]
        words: PathBuf,
        #[arg(long)]
        alpha: Alpha,
        /// Exponent of z ↦ zⁿ; defaults to one more than the longest homogeneous run.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        i_max: usize,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value = "nonhopf")]
        stem: String,
    },
    /// Check the lemmas for the substitution z ↦ zⁿ on a graph.
    VerifyPhi {
        graph: PathBuf,
        #[arg(long)]
        alpha: Alpha,
        /// Defaults to one more than the longest homogeneous run.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 2)]
        k_max: usize,
    },
    /// Run a random-labelling experiment from a TOML config.
    LabRun {
        config: PathBuf,
        /// Writes `trials.jsonl` and `summary.json` here.
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Exact norm tails against the two closed-form bounds.
    WordBounds {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        max_len: usize,
    },
}

#[derive(Args, Debug, Serialize)]
pub struct AddCyclesArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub alpha: Alpha,
    /// Number of cycles to add.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Blocks per cycle word.
    #[arg(long, default_value_t = 64)]
    pub block_count: usize,
    /// Exponent base of the blocks; defaults to the smallest admissible one.
    #[arg(long)]
    pub block_base: Option<usize>,
    /// Longest missing word to search for; defaults to the precondition limit.
    #[arg(long)]
    pub max_len: Option<usize>,
    #[arg(long)]
    pub out_dir: PathBuf,
}

impl Command {
    fn verb(&self) -> &'static str {
        match self {
            Command::Fold { .. } => "fold",
            Command::Metrics { .. } => "metrics",
            Command::CheckGr { .. } => "check-gr",
            Command::CheckCprime { .. } => "check-cprime",
            Command::MissingWord { .. } => "missing-word",
            Command::AddCycles(_) => "add-cycles",
            Command::BuildRips { .. } => "build-rips",
            Command::BuildCohopf { .. } => "build-cohopf",
            Command::BuildNonhopf { .. } => "build-nonhopf",
            Command::VerifyPhi { .. } => "verify-phi",
            Command::LabRun { .. } => "lab-run",
            Command::WordBounds { .. } => "word-bounds",
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_IO as u8 } else { 0 });
        }
    };
    let (global, command) = (cli.global, cli.command);
    let mut seed = global.seed;
    let outcome = commands::run(&command, &mut seed);
    let config = serde_json::to_value(&command).unwrap_or_default();
    let doc = document(command.verb(), &config, seed, &outcome);
    let mut code = match &outcome {
        Ok(o) => o.code,
        Err(f) => f.code,
    };
    match &outcome {
        Ok(o) if !global.quiet => println!("{}", o.summary.trim_end()),
        Err(f) => eprintln!("error: {}", f.message),
        _ => {}
    }
    if let Some(path) = &global.json_out {
        let text = serde_json::to_string_pretty(&doc).expect("JSON values serialize") + "\n";
        let written = if path.as_os_str() == "-" {
            print!("{text}");
            Ok(())
        } else {
            gsc_core::presentation::write_atomic(path, &text).map_err(|e| Failure::io(path, e))
        };
        if let Err(f) = written {
            eprintln!("error: {}", f.message);
            code = EXIT_IO;
        }
    }
    ExitCode::from(code as u8)
}
