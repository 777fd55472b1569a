use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use ciro_core::bench::{run_benchmark_from, stress, verify_suite, Source, DEFAULT_SEED};
use ciro_core::datagen::{
    build_demo_dataset, canonical_specs, generate_dataset, suite_vocabulary, write_dataset, CANONICAL_SIZES,
};
use ciro_core::query::{
    co_attendees, co_attendees_to_csv, find_intersections, intersections_to_csv, neighborhood, DEFAULT_FANOUT,
};
use ciro_core::rdf::{parse_turtle, serialize_turtle, Graph, Layers};
use ciro_core::reasoner::classify_all;
use ciro_core::vocab::{lint, load_vocabulary, Vocabulary};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::api::{reason_summary, router, IntersectionParams};
use crate::error::ApiError;
use crate::names;
use crate::state::AppState;

#[derive(Debug, Parser)]
#[command(name = "ciro", version, about = "Contact-tracing knowledge graph: import, classify Three-Cs risk, query")]
pub struct Cli {
    /// Asserted graph, read and written as Turtle.
    #[arg(long, global = true, default_value = "ciro-store.ttl", env = "CIRO_STORE")]
    pub store: PathBuf,
    /// Vocabulary document (TOML) layered over the core ontology; defaults to the standard one.
    #[arg(long, global = true)]
    pub vocab: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Merge a Turtle file into the store. Drops any inference layer.
    Import { file: PathBuf },
    /// Classify the store and write the inference layer next to it.
    Reason,
    /// Intersections, co-attendees and neighborhoods over the store.
    #[command(subcommand)]
    Query(QueryCommand),
    /// Write the canonical benchmark suites or the demo dataset.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Time classification over canonical suites, verifying every dataset first.
    Bench(BenchArgs),
    /// Check the vocabulary's invariants.
    Lint,
    /// Serve the HTTP API.
    Serve {
        #[arg(long, env = "CIRO_BIND", default_value = "127.0.0.1:8080")]
        bind: String,
        /// Built explorer bundle.
        #[arg(long, env = "CIRO_UI_DIR")]
        ui_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum QueryCommand {
    /// Pairs of events at the same or nested places with overlapping times.
    Intersect {
        #[arg(long)]
        place: Option<String>,
        #[arg(long)]
        city: Option<String>,
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
        /// `reliable` or `possible` bounds.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// People who shared events with a person at places of a risk class.
    Contacts {
        #[arg(long)]
        person: String,
        #[arg(long, default_value = "ClosedSpace")]
        risk: String,
        #[arg(long)]
        json: bool,
    },
    /// Nodes and edges around an entity.
    Neighborhood {
        #[arg(long)]
        center: String,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_FANOUT)]
        limit: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Write the canonical datasets with their ground truth.
    Suite {
        #[arg(long, value_delimiter = ',', default_values_t = CANONICAL_SIZES)]
        sizes: Vec<usize>,
        #[arg(long, default_value = "suite")]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Write the demo dataset.
    Demo {
        #[arg(long, default_value = "demo.ttl")]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = CANONICAL_SIZES)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    repetitions: usize,
    /// Read datasets written by `gen suite` instead of generating them.
    #[arg(long)]
    suite: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    /// Verify only, in parallel, without timing.
    #[arg(long)]
    verify_only: bool,
    /// Time one mixed dataset of this many events instead of the suites.
    #[arg(long)]
    stress: Option<usize>,
}

fn file_error(path: &Path, e: impl std::fmt::Display) -> ApiError {
    ApiError::bad_request("file-error", format!("{}: {e}", path.display()))
}

fn inferred_path(store: &Path) -> PathBuf {
    let mut s = store.as_os_str().to_owned();
    s.push(".inferred.ttl");
    PathBuf::from(s)
}

fn read_graph(path: &Path) -> Result<Graph, ApiError> {
    let text = fs::read_to_string(path).map_err(|e| file_error(path, e))?;
    parse_turtle(&text).map_err(|e| file_error(path, e))
}

fn load_store(path: &Path) -> Result<Graph, ApiError> {
    if path.exists() {
        read_graph(path)
    } else {
        Ok(Graph::new())
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), ApiError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| file_error(dir, e))?;
    }
    fs::write(path, text).map_err(|e| file_error(path, e))
}

fn vocabulary(path: Option<&Path>) -> Result<Vocabulary, ApiError> {
    match path {
        None => Ok(Vocabulary::standard()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| file_error(p, e))?;
            load_vocabulary(&text).map_err(|e| ApiError::bad_request("invalid-vocabulary", e.to_string()))
        }
    }
}

/// Runs one command, writing results to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), ApiError> {
    let io = |e: std::io::Error| ApiError::internal(e.to_string());
    match cli.command {
        Command::Import { file } => {
            let parsed = read_graph(&file)?;
            let mut store = load_store(&cli.store)?;
            let added = store.merge(&parsed);
            write_file(&cli.store, &serialize_turtle(&store))?;
            let _ = fs::remove_file(inferred_path(&cli.store));
            writeln!(out, "imported {added} new triples; store holds {}", store.len()).map_err(io)?;
        }
        Command::Reason => {
            let store = load_store(&cli.store)?;
            if store.is_empty() {
                return Err(ApiError::conflict("empty-store", "nothing to reason over; import data first"));
            }
            let c = classify_all(&store, &vocabulary(cli.vocab.as_deref())?);
            write_file(&inferred_path(&cli.store), &serialize_turtle(&c.inferred))?;
            writeln!(out, "{}", serde_json::to_string_pretty(&reason_summary(&c)).unwrap()).map_err(io)?;
        }
        Command::Query(q) => {
            let store = load_store(&cli.store)?;
            let inferred_file = inferred_path(&cli.store);
            let inferred = if inferred_file.exists() { Some(read_graph(&inferred_file)?) } else { None };
            let layers = Layers::new(&store, inferred.as_ref());
            match q {
                QueryCommand::Intersect { place, city, from, to, mode, json } => {
                    let scope = IntersectionParams { place, city, from, to, mode }.scope()?;
                    let rows = find_intersections(&store, &scope);
                    if json {
                        writeln!(out, "{}", serde_json::to_string_pretty(&rows).unwrap()).map_err(io)?;
                    } else {
                        write!(out, "{}", intersections_to_csv(&rows)).map_err(io)?;
                    }
                }
                QueryCommand::Contacts { person, risk, json } => {
                    let vocab = vocabulary(cli.vocab.as_deref())?;
                    let person = names::person(&store, &person)?;
                    let res = co_attendees(&layers, &vocab, &person, &names::term(&risk)?)?;
                    if json {
                        writeln!(out, "{}", serde_json::to_string_pretty(&res).unwrap()).map_err(io)?;
                    } else {
                        write!(out, "{}", co_attendees_to_csv(&res.rows)).map_err(io)?;
                    }
                }
                QueryCommand::Neighborhood { center, depth, limit } => {
                    // Badges come from a fresh classification when the store has been reasoned.
                    let c = match &inferred {
                        Some(_) => Some(classify_all(&store, &vocabulary(cli.vocab.as_deref())?)),
                        None => None,
                    };
                    let n = neighborhood(&layers, c.as_ref(), &names::entity(&center)?, depth, limit)?;
                    writeln!(out, "{}", serde_json::to_string_pretty(&n).unwrap()).map_err(io)?;
                }
            }
        }
        Command::Gen(GenCommand::Suite { sizes, out: dir, seed }) => {
            let vocab = suite_vocabulary();
            let mut n = 0;
            for size in sizes {
                for spec in canonical_specs(size, seed) {
                    let ds = generate_dataset(&spec, &vocab).map_err(|e| ApiError::bad_request("datagen", e.to_string()))?;
                    write_dataset(&dir, &ds).map_err(|e| file_error(&dir, e))?;
                    n += 1;
                }
            }
            writeln!(out, "wrote {n} datasets under {}", dir.display()).map_err(io)?;
        }
        Command::Gen(GenCommand::Demo { out: path }) => {
            let g = build_demo_dataset();
            write_file(&path, &serialize_turtle(&g))?;
            writeln!(out, "wrote {} triples to {}", g.len(), path.display()).map_err(io)?;
        }
        Command::Bench(args) => bench(args, out)?,
        Command::Lint => {
            let vocab = vocabulary(cli.vocab.as_deref());
            let diags = match &vocab {
                Ok(v) => lint(v.registry()),
                // Loading already rejects an invalid registry; report that one finding.
                Err(e) => return Err(e.clone()),
            };
            for d in &diags {
                writeln!(out, "{d}").map_err(io)?;
            }
            writeln!(out, "{} diagnostics", diags.len()).map_err(io)?;
            if !diags.is_empty() {
                return Err(ApiError::bad_request("lint", format!("{} diagnostics", diags.len())));
            }
        }
        Command::Serve { bind, ui_dir } => {
            let store = load_store(&cli.store)?;
            let mut state = AppState::new(store, vocabulary(cli.vocab.as_deref())?);
            state.store_path = Some(cli.store.clone());
            state.ui_dir = ui_dir;
            let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build().map_err(io)?;
            rt.block_on(async {
                let listener = tokio::net::TcpListener::bind(&bind).await.map_err(io)?;
                writeln!(out, "listening on {}", listener.local_addr().map_err(io)?).map_err(io)?;
                axum::serve(listener, router(Arc::new(state))).await.map_err(io)
            })?;
        }
    }
    Ok(())
}

fn bench(args: BenchArgs, out: &mut dyn Write) -> Result<(), ApiError> {
    let io = |e: std::io::Error| ApiError::internal(e.to_string());
    let fail = |e: ciro_core::bench::BenchError| {
        let detail = match &e {
            ciro_core::bench::BenchError::Verification { verdict, .. } => serde_json::to_value(verdict).ok(),
            _ => None,
        };
        let err = ApiError::bad_request("bench", e.to_string());
        match detail {
            Some(d) => err.with_detail(d),
            None => err,
        }
    };
    if let Some(size) = args.stress {
        let r = stress(size).map_err(fail)?;
        writeln!(out, "{}", serde_json::to_string_pretty(&r).unwrap()).map_err(io)?;
        return Ok(());
    }
    let source = match args.suite {
        Some(dir) => Source::Dir(dir),
        None => Source::Generate { seed: args.seed },
    };
    if args.verify_only {
        let mut failed = 0;
        for size in &args.sizes {
            let verdicts = verify_suite(&source, *size).map_err(fail)?;
            let bad: Vec<_> = verdicts.iter().filter(|(_, v)| !v.passed()).collect();
            failed += bad.len();
            writeln!(out, "size {size}: {} datasets, {} failed", verdicts.len(), bad.len()).map_err(io)?;
            for (name, v) in bad {
                writeln!(out, "  {name}: {} mismatches", v.mismatches.len()).map_err(io)?;
            }
        }
        if failed > 0 {
            return Err(ApiError::bad_request("bench", format!("{failed} datasets failed verification")));
        }
        return Ok(());
    }
    let report = run_benchmark_from(&source, &args.sizes, args.repetitions).map_err(fail)?;
    write!(out, "{}", report.table()).map_err(io)?;
    let verified = report.datasets.iter().filter(|d| d.verified).count();
    writeln!(out, "{verified} verified datasets").map_err(io)?;
    if let Some(p) = args.csv {
        write_file(&p, &report.to_csv())?;
    }
    if let Some(p) = args.json {
        write_file(&p, &serde_json::to_string_pretty(&report.to_json()).unwrap())?;
    }
    Ok(())
}

/// Entry point shared by the binary and tests: parses `args`, runs, and maps the outcome to an
/// exit status, printing failures as ApiError JSON on `err`.
pub fn main_with(args: impl IntoIterator<Item = String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let api = ApiError::bad_request("usage", e.to_string().trim().to_string());
                let _ = writeln!(err, "{}", api.to_json());
            }
            return code;
        }
    };
    match run(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{}", json!(e));
            1
        }
    }
}
