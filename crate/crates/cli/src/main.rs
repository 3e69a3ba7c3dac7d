//! Command-line front door: ingestion, mining simulation, queries,
//! statistics and CSV import/export over snapshot directories.
//!
//! A snapshot is a directory holding the `nodes.csv`/`edges.csv` pair, so
//! every intermediate state stays inspectable and diff-able. Query
//! results print as CSV on standard output; identical invocations on
//! identical inputs produce byte-identical output. Exit codes: 0 on
//! success, 1 on domain errors (the error name goes to standard error),
//! 2 on usage errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use gavgraph::graph::DependencyGraph;
use gavgraph::io;
use gavgraph::miner::{self, FaultPlan, PipelineConfig, Scheduler};
use gavgraph::model::{CalendarKey, LibraryId, Scope};
use gavgraph::pom::parse_pom;
use gavgraph::query;

#[derive(Parser)]
#[command(
    name = "gavgraph",
    about = "Temporal dependency graph engine for Maven-style artifact metadata",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sequentially ingest a corpus directory into a snapshot.
    Ingest {
        /// Corpus root laid out as group/artifact/version/{pom.xml,timestamp}.
        #[arg(long)]
        corpus: PathBuf,
        /// Snapshot directory to write (created if absent).
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the producer/consumer collection pipeline over an index file.
    Mine {
        /// Index file: one group:artifact:version per line.
        #[arg(long)]
        index: PathBuf,
        /// Corpus root the consumers resolve against.
        #[arg(long)]
        corpus: PathBuf,
        /// Number of simulated consumers.
        #[arg(long, default_value_t = 1)]
        consumers: usize,
        /// Seed for the crash schedule and consumer scheduling.
        #[arg(long, default_value_t = 0)]
        fault_seed: u64,
        /// Number of consumer crashes to inject.
        #[arg(long, default_value_t = 0)]
        fault_count: usize,
        /// Abort when any message exceeds this many deliveries.
        #[arg(long, default_value_t = 10)]
        max_deliveries: u32,
        /// Snapshot directory to write.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a query against a snapshot; results print as CSV.
    Query {
        /// Snapshot directory to load.
        #[arg(long)]
        snapshot: PathBuf,
        #[command(subcommand)]
        query: QueryCommand,
    },
    /// Print whole-graph statistics and degree percentiles.
    Stats {
        #[arg(long)]
        snapshot: PathBuf,
    },
    /// Write a snapshot back out as an explicit CSV pair.
    Export {
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long)]
        nodes: PathBuf,
        #[arg(long)]
        edges: PathBuf,
    },
    /// Build a snapshot from a nodes/edges CSV pair.
    Import {
        #[arg(long)]
        nodes: PathBuf,
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum QueryCommand {
    /// Artifacts released in a calendar period.
    ReleasedIn {
        /// Period as YYYY, YYYY-MM or YYYY-MM-DD.
        #[arg(long)]
        date: String,
    },
    /// Artifacts released in a year that depend on any version of a library.
    DependentsInYear {
        #[command(flatten)]
        library: LibraryArg,
        #[arg(long)]
        year: i32,
        /// Restrict to one dependency scope.
        #[arg(long)]
        scope: Option<String>,
    },
    /// Number of versions per library.
    VersionsPerLibrary,
    /// Clients depending on an older library version than a provider they use.
    StaleDependents {
        #[command(flatten)]
        library: LibraryArg,
        #[arg(long)]
        scope: String,
    },
    /// Versions of a library inside a bracket-interval range.
    VersionRange {
        #[command(flatten)]
        library: LibraryArg,
        /// Range expression, e.g. "[1.0,2.0)" or "(,1.5]".
        #[arg(long)]
        range: String,
    },
}

#[derive(Args)]
struct LibraryArg {
    /// Library as group:artifact.
    #[arg(long)]
    library: String,
}

impl LibraryArg {
    fn parse(&self) -> anyhow::Result<LibraryId> {
        Ok(LibraryId::parse(&self.library)?)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("{error}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Ingest { corpus, out } => ingest(&corpus, &out),
        Command::Mine {
            index,
            corpus,
            consumers,
            fault_seed,
            fault_count,
            max_deliveries,
            out,
        } => mine(
            &index,
            &corpus,
            consumers,
            fault_seed,
            fault_count,
            max_deliveries,
            &out,
        ),
        Command::Query { snapshot, query } => run_query(&snapshot, &query),
        Command::Stats { snapshot } => stats(&snapshot),
        Command::Export {
            snapshot,
            nodes,
            edges,
        } => {
            let (graph, _) = io::read_snapshot(&snapshot)
                .with_context(|| format!("loading snapshot {}", snapshot.display()))?;
            let nodes_file = std::fs::File::create(&nodes)?;
            let edges_file = std::fs::File::create(&edges)?;
            let (n, e) = io::export_csv(&graph, nodes_file, edges_file)?;
            println!("nodes_written: {n}");
            println!("edges_written: {e}");
            Ok(())
        }
        Command::Import { nodes, edges, out } => {
            let nodes_file = std::fs::File::open(&nodes)?;
            let edges_file = std::fs::File::open(&edges)?;
            let (graph, report) =
                io::import_csv(nodes_file, edges_file, &io::ImportOptions::default())?;
            io::write_snapshot(&graph, &out)?;
            println!("nodes: {}", report.nodes);
            println!("dependency_edges: {}", report.dep_edges);
            println!("next_edges: {}", report.next_edges);
            println!("dangling_edges: {}", report.dangling_edges);
            Ok(())
        }
    }
}

fn ingest(corpus: &Path, out: &Path) -> anyhow::Result<()> {
    let load = io::load_corpus(corpus)
        .with_context(|| format!("loading corpus {}", corpus.display()))?;
    for issue in &load.issues {
        eprintln!("corpus issue: {}: {}", issue.path.display(), issue.reason);
    }
    let parents = io::DirectoryCorpus::new(corpus);
    let mut graph = DependencyGraph::new();
    let mut insert = gavgraph::graph::InsertReport::default();
    let mut skips = miner::DepSkips::default();
    let mut corrupt = 0u64;
    for entry in &load.entries {
        match parse_pom(&entry.document, &parents) {
            Err(error) => {
                corrupt += 1;
                eprintln!("skipped: {error}");
            }
            Ok(parsed) => {
                let (i, s) =
                    miner::store_artifact(&mut graph, &entry.coordinates, entry.timestamp, &parsed);
                insert += i;
                skips += s;
            }
        }
    }
    let next_edges = graph.build_next_chains();
    io::write_snapshot(&graph, out)?;
    println!("artifacts_loaded: {}", load.entries.len());
    println!("corpus_issues: {}", load.issues.len());
    println!("skipped_corrupt: {corrupt}");
    println!("inserted: {}", insert.inserted);
    println!("duplicates_skipped: {}", insert.duplicates_skipped);
    println!("dangling_edges: {}", insert.dangling_edges);
    println!("deps_skipped_versionless: {}", skips.versionless);
    println!("deps_skipped_malformed: {}", skips.malformed);
    println!("deps_skipped_self_loops: {}", skips.self_loops);
    println!("next_edges: {next_edges}");
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn mine(
    index_path: &Path,
    corpus: &Path,
    consumers: usize,
    fault_seed: u64,
    fault_count: usize,
    max_deliveries: u32,
    out: &Path,
) -> anyhow::Result<()> {
    let index_text = std::fs::read_to_string(index_path)
        .with_context(|| format!("reading index {}", index_path.display()))?;
    let index = io::read_index(&index_text)?;
    let source = io::DirectoryCorpus::new(corpus);
    let faults = if fault_count == 0 {
        FaultPlan::none()
    } else {
        let max_nth = (index.len() / consumers.max(1)).max(1) as u64;
        FaultPlan::seeded(fault_seed, consumers, fault_count, max_nth)
    };
    let config = PipelineConfig {
        consumers,
        max_deliveries,
        scheduler: if fault_seed == 0 {
            Scheduler::RoundRobin
        } else {
            Scheduler::Seeded(fault_seed)
        },
    };
    let (graph, report) = miner::run_pipeline(&index, &source, &config, &faults)?;
    io::write_snapshot(&graph, out)?;
    print!("{report}");
    Ok(())
}

fn run_query(snapshot: &Path, command: &QueryCommand) -> anyhow::Result<()> {
    let (graph, _) = io::read_snapshot(snapshot)
        .with_context(|| format!("loading snapshot {}", snapshot.display()))?;
    let output = match command {
        QueryCommand::ReleasedIn { date } => {
            let key: CalendarKey = date.parse()?;
            io::coordinates_csv(&query::artifacts_released_in(&graph, &key))
        }
        QueryCommand::DependentsInYear {
            library,
            year,
            scope,
        } => {
            let scope = scope.as_deref().map(Scope::parse).transpose()?;
            io::coordinates_csv(&query::dependents_of_library_in_year(
                &graph,
                &library.parse()?,
                *year,
                scope,
            ))
        }
        QueryCommand::VersionsPerLibrary => {
            io::version_counts_csv(&query::versions_per_library(&graph)?)
        }
        QueryCommand::StaleDependents { library, scope } => {
            let scope = Scope::parse(scope)?;
            io::pairs_csv(&query::stale_dependents(&graph, &library.parse()?, scope))
        }
        QueryCommand::VersionRange { library, range } => io::coordinates_csv(
            &query::artifacts_in_version_range(&graph, &library.parse()?, range)?,
        ),
    };
    print!("{output}");
    Ok(())
}

fn stats(snapshot: &Path) -> anyhow::Result<()> {
    let (graph, _) = io::read_snapshot(snapshot)
        .with_context(|| format!("loading snapshot {}", snapshot.display()))?;
    if !graph.chains_built() {
        bail!("snapshot has no NEXT chains");
    }
    let stats = query::compute_stats(&graph)?;
    let percentiles = query::compute_percentiles(&graph)?;
    print!("{}", io::stats_csv(&stats));
    println!();
    print!("{}", io::percentiles_csv(&percentiles));
    Ok(())
}
