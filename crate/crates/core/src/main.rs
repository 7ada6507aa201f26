//! Command line front end: `match` runs the full pipeline, `eval` scores a
//! system alignment against a reference, `dump` prints the parsed entity
//! graph of one input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ontomatch::evaluation::{render_records, render_table, EvalReport};
use ontomatch::matching::mappings_from_assignment;
use ontomatch::metrics::{MetricId, DEFAULT_QGRAM_SIZE};
use ontomatch::{build_score_matrix, kuhn_munkres, parse_bytes, read_alignment, write_alignment};

const EXIT_PARSE: u8 = 1;
const EXIT_EMPTY: u8 = 2;
const EXIT_WRITE: u8 = 3;

#[derive(Parser)]
#[command(name = "ontomatch", version, about = "Align two ontologies by graph matching")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, score and align two ontologies, writing an alignment file.
    Match(MatchArgs),
    /// Score a system alignment against a reference alignment.
    Eval(EvalArgs),
    /// Parse one ontology and print its entity graph dump.
    Dump(DumpArgs),
}

#[derive(Args)]
struct MatchArgs {
    /// Source ontology (OWL/RDF/XML).
    #[arg(long)]
    source: PathBuf,
    /// Target ontology (OWL/RDF/XML).
    #[arg(long)]
    target: PathBuf,
    /// Similarity metric: levenshtein, qgrams, smithwaterman or jaccard.
    #[arg(long, default_value = "levenshtein")]
    metric: MetricId,
    /// Minimum similarity an assigned pair needs to be kept.
    #[arg(long, default_value_t = 0.5, value_parser = parse_threshold)]
    threshold: f64,
    /// q-gram length for the qgrams metric.
    #[arg(long, default_value_t = DEFAULT_QGRAM_SIZE, value_parser = parse_qgram_size)]
    qgram_size: usize,
    /// Where to write the alignment XML.
    #[arg(long)]
    output: PathBuf,
    /// Directory for debug dumps of both entity graphs.
    #[arg(long)]
    debug_dump: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// System-produced alignment file.
    #[arg(long)]
    system: PathBuf,
    /// Human reference alignment file.
    #[arg(long)]
    reference: PathBuf,
    /// Count a mapping as correct only when its relation also agrees.
    #[arg(long)]
    strict_relation: bool,
    /// Print the machine-readable record instead of the table.
    #[arg(long)]
    machine: bool,
}

#[derive(Args)]
struct DumpArgs {
    /// Ontology to parse.
    #[arg(long)]
    source: PathBuf,
    /// Write the dump here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_threshold(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err("threshold must lie in [0, 1]".to_string())
    }
}

fn parse_qgram_size(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|_| format!("{s:?} is not an integer"))?;
    if v >= 1 {
        Ok(v)
    } else {
        Err("q-gram size must be at least 1".to_string())
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Match(args) => run_match(args),
        Command::Eval(args) => run_eval(args),
        Command::Dump(args) => run_dump(args),
    }
}

fn load_graph(path: &Path) -> Result<ontomatch::EntityGraph, ExitCode> {
    let bytes = fs::read(path).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(EXIT_PARSE)
    })?;
    let (_, graph) = parse_bytes(&bytes).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(EXIT_PARSE)
    })?;
    Ok(graph)
}

fn write_file(path: &Path, contents: &str) -> Result<(), ExitCode> {
    fs::write(path, contents).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        ExitCode::from(EXIT_WRITE)
    })
}

fn run_match(args: MatchArgs) -> ExitCode {
    let source = match load_graph(&args.source) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let target = match load_graph(&args.target) {
        Ok(g) => g,
        Err(code) => return code,
    };

    if let Some(dir) = &args.debug_dump {
        if let Err(e) = fs::create_dir_all(dir) {
            eprintln!("error: cannot create {}: {e}", dir.display());
            return ExitCode::from(EXIT_WRITE);
        }
        if write_file(&dir.join("source_graph.txt"), &source.dump_debug()).is_err()
            || write_file(&dir.join("target_graph.txt"), &target.dump_debug()).is_err()
        {
            return ExitCode::from(EXIT_WRITE);
        }
    }

    let matrix = match build_score_matrix(&source, &target, args.metric, args.qgram_size) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_EMPTY);
        }
    };
    let assignment = match kuhn_munkres(matrix.values()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_EMPTY);
        }
    };
    let mappings = mappings_from_assignment(&matrix, &assignment, args.threshold);

    let uri1 = non_empty_or(source.ontology_uri(), &args.source);
    let uri2 = non_empty_or(target.ontology_uri(), &args.target);
    let document = write_alignment(&mappings, &uri1, &uri2);
    if write_file(&args.output, &document).is_err() {
        return ExitCode::from(EXIT_WRITE);
    }
    println!(
        "{} mappings written to {} ({} x {} entities, metric {}, threshold {})",
        mappings.len(),
        args.output.display(),
        matrix.dims().0,
        matrix.dims().1,
        args.metric,
        args.threshold,
    );
    ExitCode::SUCCESS
}

fn non_empty_or(uri: &str, path: &Path) -> String {
    if uri.is_empty() {
        path.display().to_string()
    } else {
        uri.to_string()
    }
}

fn run_eval(args: EvalArgs) -> ExitCode {
    let load = |path: &Path| -> Result<ontomatch::Alignment, ExitCode> {
        let bytes = fs::read(path).map_err(|e| {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(EXIT_PARSE)
        })?;
        read_alignment(&bytes).map_err(|e| {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(EXIT_PARSE)
        })
    };
    let system = match load(&args.system) {
        Ok(a) => a,
        Err(code) => return code,
    };
    let reference = match load(&args.reference) {
        Ok(a) => a,
        Err(code) => return code,
    };

    let report = match EvalReport::evaluate(&system, &reference, args.strict_relation) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_EMPTY);
        }
    };
    let id = args
        .system
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| args.system.display().to_string());
    let rows = vec![(id, report)];
    if args.machine {
        print!("{}", render_records(&rows));
    } else {
        print!("{}", render_table(&rows));
    }
    ExitCode::SUCCESS
}

fn run_dump(args: DumpArgs) -> ExitCode {
    let graph = match load_graph(&args.source) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let dump = graph.dump_debug();
    match &args.output {
        Some(path) => {
            if write_file(path, &dump).is_err() {
                return ExitCode::from(EXIT_WRITE);
            }
        }
        None => print!("{dump}"),
    }
    ExitCode::SUCCESS
}
