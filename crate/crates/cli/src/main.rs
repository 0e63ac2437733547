use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pin4_cli::{cmd_analyze, cmd_corpus_run, cmd_corpus_verify, cmd_lemma_tables, corpus_dir, Format, Outcome};

/// Spin, Pin+ and Pin- structures of flat and infrasolv 4-manifolds.
///
/// Exit status: 0 when every check passes, 1 on a verdict mismatch, 2 on bad input.
#[derive(Parser)]
#[command(name = "pin4", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze the records in a JSON file.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run the corpus and compare against expected verdicts.
    CorpusRun {
        /// key=value, with key geometry or name; repeat to narrow further.
        #[arg(long = "filter", value_name = "K=V")]
        filters: Vec<String>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check every corpus record, printing only mismatches.
    CorpusVerify,
    /// Pin preimages of the elementary abelian holonomy subgroups.
    LemmaTables,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { file, format } => cmd_analyze(&file, format),
        Command::CorpusRun { filters, format } => cmd_corpus_run(&corpus_dir(), &filters, format),
        Command::CorpusVerify => cmd_corpus_verify(&corpus_dir()),
        Command::LemmaTables => Ok(cmd_lemma_tables()),
    };
    match result {
        Ok(Outcome { output, ok }) => {
            print!("{output}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
