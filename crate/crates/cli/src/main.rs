//! `beldef`: nonmonotonic entailment over propositional default bases.

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use beldef::prop::LoadError;
use beldef::KnowledgeBase;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use beldef_cli::analyze::Analysis;
use beldef_cli::error::CliError;
use beldef_cli::oracle::{self, OracleRun};
use beldef_cli::query::{self, Comparison, Engine, Prepared};

#[derive(Debug, Parser)]
#[command(name = "beldef", version, about = "Default reasoning with epsilon belief functions")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Largest vocabulary accepted, counting atoms introduced by queries.
    #[arg(long, default_value_t = 16, global = true)]
    max_atoms: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decides `alpha |~ beta` with one engine.
    Entail {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, value_enum)]
        engine: Engine,
    },
    /// Dumps strata, the LC chain, the LCD solution and a world table.
    Analyze {
        #[arg(long)]
        kb: PathBuf,
    },
    /// Decides one query with every engine.
    Compare {
        #[command(flatten)]
        query: QueryArgs,
    },
    /// Checks the LCD model numerically with exact rational arithmetic.
    Oracle {
        #[arg(long, required_unless_present = "random", conflicts_with = "random")]
        kb: Option<PathBuf>,
        /// Base epsilons, comma separated.
        #[arg(long, default_value = oracle::DEFAULT_EPS)]
        eps: String,
        /// Checks this many random consistent bases instead of a file.
        #[arg(long)]
        random: Option<usize>,
        /// Seed of the random bases.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct QueryArgs {
    #[arg(long)]
    kb: PathBuf,
    /// Antecedent formula.
    alpha: String,
    /// Consequent formula.
    beta: String,
}

fn load(path: &Path, capacity: usize) -> Result<KnowledgeBase, CliError> {
    KnowledgeBase::load(path, capacity).map_err(|e| match e {
        LoadError::Io(io) => CliError::Usage(format!("{}: {io}", path.display())),
        LoadError::Parse(p) => CliError::Parse(format!("{}: {p}", path.display())),
    })
}

/// Writes one document to standard output; a closed pipe is not an error.
fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce(&T) -> String) -> Result<(), CliError> {
    let doc = match format {
        Format::Text => text(value),
        Format::Json => {
            let json = serde_json::to_string_pretty(value).map_err(|e| CliError::Engine(e.to_string()))?;
            format!("{json}\n")
        }
    };
    let mut out = io::stdout().lock();
    match out.write_all(doc.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::Usage(format!("cannot write output: {e}"))),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let format = cli.format;
    match cli.command {
        Command::Entail { query, engine } => {
            let kb = load(&query.kb, cli.max_atoms)?;
            let prepared = Prepared::new(kb, &query.alpha, &query.beta)?;
            let result = prepared.run(engine)?;
            emit(format, &result, |r| r.render_text())
        }
        Command::Compare { query } => {
            let kb = load(&query.kb, cli.max_atoms)?;
            let prepared = Prepared::new(kb, &query.alpha, &query.beta)?;
            let comparison = Comparison::run(&prepared)?;
            emit(format, &comparison, |c| c.render_text())
        }
        Command::Analyze { kb } => {
            let kb = load(&kb, cli.max_atoms)?;
            let analysis = Analysis::new(&kb);
            emit(format, &analysis, |a| a.render_text())?;
            if analysis.consistent {
                Ok(())
            } else {
                Err(CliError::Inconsistent(query::id_list(&analysis.residue)))
            }
        }
        Command::Oracle { kb, eps, random, seed } => {
            let ladder = oracle::parse_eps(&eps)?;
            let bases = match (kb, random) {
                (Some(path), _) => vec![oracle::check(&load(&path, cli.max_atoms)?, &ladder)?],
                (None, Some(n)) => oracle::random(n, seed, &ladder)?,
                (None, None) => return Err(CliError::Usage("either --kb or --random is required".into())),
            };
            let report = OracleRun::new(&ladder, bases);
            emit(format, &report, |r| r.render_text())?;
            if report.passed {
                Ok(())
            } else {
                Err(CliError::CheckFailed)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("beldef: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
