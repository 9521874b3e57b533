//! The `igdep` command line.
//!
//! Exit codes: 0 success, 1 I/O or parse error, 2 usage error (including
//! unknown words and empty sentences), 3 no model, 4 extraction errors,
//! 5 invalid graph or grammar.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::extract::{extract_dependencies, Extraction};
use crate::format::{parse_graph, render, write_dap, write_graph, OutputFormat};
use crate::grammar::{load_grammar, select_and_compose, Grammar, GrammarError, DEFAULT_COMBINATION_CAP};
use crate::graph::InterpretationGraph;
use crate::patterns::{match_pattern, parse_patterns};
use crate::saturation::check_interpretation;
use crate::solver::{find_models, SolverConfig, SolverStatus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_MODEL: i32 = 3;
pub const EXIT_EXTRACTION: i32 = 4;
pub const EXIT_INVALID: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "igdep", version, about = "Dependency graphs from interaction grammar parses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a whitespace-tokenized sentence and print its dependencies.
    Analyze {
        sentence: String,
        #[command(flatten)]
        grammar: GrammarArg,
        #[command(flatten)]
        format: FormatArg,
        #[arg(long, default_value_t = 16)]
        max_models: usize,
        #[arg(long, default_value_t = 30_000)]
        timeout_ms: u64,
        /// Print every model instead of the first one that extracts cleanly.
        #[arg(long)]
        all_models: bool,
    },
    /// Check an interpretation graph file.
    Check { path: PathBuf },
    /// Extract the dependencies of an interpretation graph file.
    Extract {
        path: PathBuf,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Print the descriptions composed for a sentence.
    Compose {
        sentence: String,
        #[command(flatten)]
        grammar: GrammarArg,
    },
    /// Print the matches of a pattern file in an interpretation graph file.
    Match { patterns: PathBuf, graph: PathBuf },
    #[command(subcommand)]
    Grammar(GrammarCommand),
}

#[derive(Debug, Subcommand)]
enum GrammarCommand {
    /// Validate every entry of a grammar file.
    Validate { path: PathBuf },
}

#[derive(Debug, Args)]
struct GrammarArg {
    /// Grammar file; the bundled toy French grammar by default.
    #[arg(long)]
    grammar: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FormatArg {
    #[arg(long, default_value = "tsv")]
    format: OutputFormat,
}

/// A failed command: an exit code and a message for stderr.
struct Failure(i32, String);

type Outcome = Result<i32, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(EXIT_IO, format!("{}: {}", path.display(), e)))
}

fn grammar_failure(e: GrammarError) -> Failure {
    let code = match e {
        GrammarError::Syntax(_) => EXIT_IO,
        GrammarError::Invalid(_) => EXIT_INVALID,
        GrammarError::UnknownToken { .. } | GrammarError::EmptySentence => EXIT_USAGE,
        GrammarError::TooManyCombinations { .. } => EXIT_NO_MODEL,
    };
    Failure(code, e.to_string())
}

fn load(arg: &GrammarArg) -> Result<Grammar, Failure> {
    match &arg.grammar {
        None => Ok(Grammar::toy_french()),
        Some(p) => load_grammar(&read(p)?).map_err(grammar_failure),
    }
}

fn read_graph(path: &Path) -> Result<InterpretationGraph, Failure> {
    parse_graph(&read(path)?).map_err(|e| Failure(EXIT_IO, format!("{}: {}", path.display(), e)))
}

fn tokens(sentence: &str) -> Vec<&str> {
    sentence.split_whitespace().collect()
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure(EXIT_IO, e.to_string()))
}

fn render_extraction(graph: &InterpretationGraph, ex: &Extraction, format: OutputFormat) -> String {
    match format {
        OutputFormat::Ig => write_graph(graph),
        f => render(&ex.graph, f),
    }
}

fn report_errors(err: &mut dyn Write, ex: &Extraction) {
    for e in &ex.errors {
        let _ = writeln!(err, "extraction error: {}", e);
    }
}

#[allow(clippy::too_many_arguments)]
fn analyze(
    sentence: &str,
    grammar: &GrammarArg,
    format: OutputFormat,
    max_models: usize,
    timeout_ms: u64,
    all_models: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let grammar = load(grammar)?;
    let daps = select_and_compose(&tokens(sentence), &grammar, DEFAULT_COMBINATION_CAP).map_err(grammar_failure)?;
    let cfg = SolverConfig {
        max_models,
        timeout_ms,
        ..SolverConfig::default()
    };
    let mut models = Vec::new();
    let mut timed_out = false;
    for dap in &daps {
        let outcome = find_models(dap, &cfg);
        timed_out |= outcome.status == SolverStatus::TimedOut;
        models.extend(outcome.models);
    }
    if models.is_empty() {
        let why = if timed_out { " (search timed out)" } else { "" };
        return Err(Failure(EXIT_NO_MODEL, format!("no model for `{}`{}", sentence, why)));
    }
    let extractions: Vec<Extraction> = models.iter().map(extract_dependencies).collect();
    if all_models {
        for (k, (m, ex)) in models.iter().zip(&extractions).enumerate() {
            emit(out, &format!("# model {}\n", k + 1))?;
            emit(out, &render_extraction(m, ex, format))?;
            report_errors(err, ex);
        }
        let ok = extractions.iter().any(Extraction::is_ok);
        return Ok(if ok { EXIT_OK } else { EXIT_EXTRACTION });
    }
    match extractions.iter().position(Extraction::is_ok) {
        Some(k) => {
            emit(out, &render_extraction(&models[k], &extractions[k], format))?;
            Ok(EXIT_OK)
        }
        None => {
            emit(out, &render_extraction(&models[0], &extractions[0], format))?;
            report_errors(err, &extractions[0]);
            Ok(EXIT_EXTRACTION)
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cli.command {
        Command::Analyze {
            sentence,
            grammar,
            format,
            max_models,
            timeout_ms,
            all_models,
        } => analyze(
            &sentence,
            &grammar,
            format.format,
            max_models,
            timeout_ms,
            all_models,
            out,
            err,
        ),
        Command::Check { path } => {
            let report = check_interpretation(&read_graph(&path)?);
            emit(out, &report.render())?;
            Ok(if report.ok() { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Extract { path, format } => {
            let graph = read_graph(&path)?;
            let report = check_interpretation(&graph);
            if !report.ok() {
                emit(err, &report.render())?;
                return Ok(EXIT_INVALID);
            }
            let ex = extract_dependencies(&graph);
            emit(out, &render_extraction(&graph, &ex, format.format))?;
            report_errors(err, &ex);
            Ok(if ex.is_ok() { EXIT_OK } else { EXIT_EXTRACTION })
        }
        Command::Compose { sentence, grammar } => {
            let grammar = load(&grammar)?;
            let daps =
                select_and_compose(&tokens(&sentence), &grammar, DEFAULT_COMBINATION_CAP).map_err(grammar_failure)?;
            for (k, dap) in daps.iter().enumerate() {
                if daps.len() > 1 {
                    emit(out, &format!("# combination {}\n", k + 1))?;
                }
                emit(out, &write_dap(dap))?;
            }
            Ok(EXIT_OK)
        }
        Command::Match { patterns, graph } => {
            let patterns = parse_patterns(&read(&patterns)?).map_err(|e| Failure(EXIT_IO, e.to_string()))?;
            let graph = read_graph(&graph)?;
            for p in &patterns {
                let matches = match_pattern(p, &graph).map_err(|e| Failure(EXIT_IO, e.to_string()))?;
                for m in matches {
                    emit(out, &format!("{}: {}\n", p.name, m.render(p, &graph)))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Grammar(GrammarCommand::Validate { path }) => {
            let g = load_grammar(&read(&path)?).map_err(grammar_failure)?;
            emit(out, &format!("ok: {} {}, {} entries\n", g.name, g.version, g.len()))?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(Failure(code, message)) => {
            let _ = writeln!(err, "error: {}", message);
            code
        }
    }
}
