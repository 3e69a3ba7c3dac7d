//! CSV import/export of the graph, snapshot directories, corpus loading
//! and CSV rendering of query results.
//!
//! File formats (RFC-4180 quoting, UTF-8, LF on export, LF or CRLF on
//! import):
//!
//! - `nodes.csv`: `coordinates,groupId,artifactId,version,packaging,release_timestamp`
//! - `edges.csv`: `source,target,kind,scope` with kind `DEPENDS_ON` or
//!   `NEXT`; the scope column is empty exactly for NEXT rows.
//!
//! Node rows cover resolved artifacts only; unresolved placeholders are
//! reconstructed on import from edges whose endpoints have no node row.
//! Export is deterministic: nodes sort by coordinates, edges by
//! (source, kind, target, scope), so equal graphs produce byte-identical
//! files. Column order in imported files is flexible; header names are
//! fixed but can be adapted through [`ImportOptions`] renames.

use std::collections::HashMap;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::graph::{DependencyGraph, GraphError};
use crate::miner::{ResolveSource, ResolvedArtifact};
use crate::model::{Coordinates, Packaging, ReleaseTimestamp, Scope};
use crate::pom::{ParentProvider, PomDocument};
use crate::query::{GraphStats, LibraryVersionCount, PercentileRow};

pub const NODE_HEADERS: [&str; 6] = [
    "coordinates",
    "groupId",
    "artifactId",
    "version",
    "packaging",
    "release_timestamp",
];
pub const EDGE_HEADERS: [&str; 4] = ["source", "target", "kind", "scope"];

pub const KIND_DEPENDS_ON: &str = "DEPENDS_ON";
pub const KIND_NEXT: &str = "NEXT";

/// Sidecar file name holding the epoch-millisecond release timestamp of a
/// corpus artifact.
pub const TIMESTAMP_FILE: &str = "timestamp";
/// POM file name inside a corpus artifact directory.
pub const POM_FILE: &str = "pom.xml";

#[derive(Debug, Error)]
pub enum IoError {
    /// Header row does not contain a required column.
    #[error("SchemaMismatch: {0}")]
    SchemaMismatch(String),
    /// A data row failed validation; `line` is the 1-based physical line.
    #[error("RowError: line {line}: {reason}")]
    RowError { line: u64, reason: String },
    /// NEXT rows that branch, cycle or touch invalid endpoints.
    #[error("ChainViolation: {0}")]
    ChainViolation(String),
    #[error("ChainsNotBuilt: export requires built version chains")]
    ChainsNotBuilt,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Import counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ImportReport {
    pub nodes: u64,
    pub duplicate_nodes: u64,
    pub dep_edges: u64,
    pub duplicate_edges: u64,
    /// Edges with at least one endpoint that was no resolved node when the
    /// edge was read.
    pub dangling_edges: u64,
    pub next_edges: u64,
}

/// Header renames for adapting externally produced CSV files: maps the
/// canonical column name to the name actually present in the file.
#[derive(Debug, Clone, Default)]
pub struct ImportOptions {
    pub node_columns: HashMap<String, String>,
    pub edge_columns: HashMap<String, String>,
}

impl ImportOptions {
    pub fn rename_node_column(mut self, canonical: &str, actual: &str) -> Self {
        self.node_columns
            .insert(canonical.to_owned(), actual.to_owned());
        self
    }

    pub fn rename_edge_column(mut self, canonical: &str, actual: &str) -> Self {
        self.edge_columns
            .insert(canonical.to_owned(), actual.to_owned());
        self
    }
}

/// Writes the graph as a nodes/edges CSV pair. Requires built chains.
/// Returns (node rows, edge rows) written.
pub fn export_csv<W1: Write, W2: Write>(
    graph: &DependencyGraph,
    nodes_sink: W1,
    edges_sink: W2,
) -> Result<(u64, u64), IoError> {
    if !graph.chains_built() {
        return Err(IoError::ChainsNotBuilt);
    }
    let mut nodes = csv::Writer::from_writer(nodes_sink);
    nodes.write_record(NODE_HEADERS)?;
    let mut node_rows = 0;
    for record in graph.resolved_records() {
        let c = record.coordinates();
        nodes.write_record([
            c.to_string().as_str(),
            c.group_id(),
            c.artifact_id(),
            c.version(),
            record.packaging().csv_name(),
            &record.release_timestamp().to_string(),
        ])?;
        node_rows += 1;
    }
    nodes.flush()?;

    // One globally sorted edge table: dependency edges and NEXT rows.
    let mut rows: Vec<(&Coordinates, u8, &Coordinates, &str)> = graph
        .dep_edges()
        .map(|(s, t, scope)| (s, 0u8, t, scope.csv_name()))
        .chain(graph.next_edges().map(|(s, t)| (s, 1u8, t, "")))
        .collect();
    rows.sort();
    let mut edges = csv::Writer::from_writer(edges_sink);
    edges.write_record(EDGE_HEADERS)?;
    let mut edge_rows = 0;
    for (source, kind, target, scope) in rows {
        let kind = if kind == 0 { KIND_DEPENDS_ON } else { KIND_NEXT };
        edges.write_record([&source.to_string(), &target.to_string(), kind, scope])?;
        edge_rows += 1;
    }
    edges.flush()?;
    Ok((node_rows, edge_rows))
}

fn column_indexes(
    headers: &csv::StringRecord,
    wanted: &[&str],
    renames: &HashMap<String, String>,
    what: &str,
) -> Result<Vec<usize>, IoError> {
    wanted
        .iter()
        .map(|canonical| {
            let actual = renames
                .get(*canonical)
                .map(String::as_str)
                .unwrap_or(canonical);
            headers
                .iter()
                .position(|h| h == actual)
                .ok_or_else(|| {
                    IoError::SchemaMismatch(format!(
                        "{what} file is missing column {actual:?} (for {canonical:?})"
                    ))
                })
        })
        .collect()
}

fn row_line(record: &csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

/// Reads a nodes/edges CSV pair back into a graph. NEXT rows are loaded
/// verbatim (not rebuilt) and validated as disjoint per-library paths.
pub fn import_csv<R1: Read, R2: Read>(
    nodes_source: R1,
    edges_source: R2,
    options: &ImportOptions,
) -> Result<(DependencyGraph, ImportReport), IoError> {
    let mut graph = DependencyGraph::new();
    let mut report = ImportReport::default();

    let mut nodes = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(nodes_source);
    let idx = column_indexes(nodes.headers()?, &NODE_HEADERS, &options.node_columns, "nodes")?;
    for record in nodes.records() {
        let record = record?;
        let line = row_line(&record);
        let row_error = |reason: String| IoError::RowError { line, reason };
        let field = |i: usize| record.get(idx[i]).unwrap_or_default();

        let coordinates = Coordinates::parse(field(0)).map_err(|e| row_error(e.to_string()))?;
        let recomposed = Coordinates::new(field(1), field(2), field(3))
            .map_err(|e| row_error(e.to_string()))?;
        if coordinates != recomposed {
            return Err(row_error(format!(
                "coordinates {coordinates} do not match {recomposed}"
            )));
        }
        let packaging = Packaging::parse(field(4));
        let millis: u64 = field(5)
            .trim()
            .parse()
            .map_err(|_| row_error(format!("invalid release_timestamp {:?}", field(5))))?;
        let timestamp =
            ReleaseTimestamp::from_millis(millis).map_err(|e| row_error(e.to_string()))?;
        let outcome = graph.insert_artifact(crate::model::ArtifactRecord::new(
            coordinates,
            packaging,
            timestamp,
        ));
        report.nodes += outcome.inserted;
        report.duplicate_nodes += outcome.duplicates_skipped;
    }

    let mut edges = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(edges_source);
    let idx = column_indexes(edges.headers()?, &EDGE_HEADERS, &options.edge_columns, "edges")?;
    let mut next_rows: Vec<(Coordinates, Coordinates)> = Vec::new();
    let mut next_lines: Vec<u64> = Vec::new();
    for record in edges.records() {
        let record = record?;
        let line = row_line(&record);
        let row_error = |reason: String| IoError::RowError { line, reason };
        let field = |i: usize| record.get(idx[i]).unwrap_or_default();

        let source = Coordinates::parse(field(0)).map_err(|e| row_error(e.to_string()))?;
        let target = Coordinates::parse(field(1)).map_err(|e| row_error(e.to_string()))?;
        match field(2) {
            KIND_DEPENDS_ON => {
                let scope_text = field(3).trim();
                if scope_text.is_empty() {
                    return Err(row_error("DEPENDS_ON row without a scope".to_owned()));
                }
                let scope = Scope::parse(scope_text).map_err(|e| row_error(e.to_string()))?;
                let source_created = graph.ensure_placeholder(&source);
                let outcome = graph
                    .insert_dependency(&source, &target, scope)
                    .map_err(|e| row_error(e.to_string()))?;
                if outcome.added {
                    report.dep_edges += 1;
                    if source_created || outcome.dangling {
                        report.dangling_edges += 1;
                    }
                } else {
                    report.duplicate_edges += 1;
                }
            }
            KIND_NEXT => {
                if !field(3).trim().is_empty() {
                    return Err(row_error("NEXT row must have an empty scope".to_owned()));
                }
                next_rows.push((source, target));
                next_lines.push(line);
            }
            other => {
                return Err(row_error(format!("unknown edge kind {other:?}")));
            }
        }
    }

    report.next_edges = graph
        .load_next_edges(&next_rows)
        .map_err(|e| match e {
            GraphError::ChainViolation { edge_index, reason } => match edge_index {
                Some(i) => IoError::ChainViolation(format!("line {}: {reason}", next_lines[i])),
                None => IoError::ChainViolation(reason),
            },
            other => IoError::ChainViolation(other.to_string()),
        })? as u64;

    Ok((graph, report))
}

/// Writes `nodes.csv` and `edges.csv` into a snapshot directory
/// (created if absent).
pub fn write_snapshot(graph: &DependencyGraph, dir: &Path) -> Result<(u64, u64), IoError> {
    fs::create_dir_all(dir)?;
    let nodes = fs::File::create(dir.join("nodes.csv"))?;
    let edges = fs::File::create(dir.join("edges.csv"))?;
    export_csv(graph, nodes, edges)
}

/// Reads a snapshot directory produced by [`write_snapshot`].
pub fn read_snapshot(dir: &Path) -> Result<(DependencyGraph, ImportReport), IoError> {
    let nodes = fs::File::open(dir.join("nodes.csv"))?;
    let edges = fs::File::open(dir.join("edges.csv"))?;
    import_csv(nodes, edges, &ImportOptions::default())
}

/// One artifact loaded from a corpus directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub coordinates: Coordinates,
    pub document: PomDocument,
    pub timestamp: ReleaseTimestamp,
}

/// A non-fatal problem encountered while loading a corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusIssue {
    pub path: PathBuf,
    pub reason: String,
}

/// Corpus load result: entries in deterministic lexicographic order plus
/// the collected per-file issues.
#[derive(Debug, Clone, Default)]
pub struct CorpusLoad {
    pub entries: Vec<CorpusEntry>,
    pub issues: Vec<CorpusIssue>,
}

fn sorted_dirs(path: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut dirs: Vec<PathBuf> = fs::read_dir(path)?
        .filter_map(|entry| entry.ok())
        .map(|entry| entry.path())
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();
    Ok(dirs)
}

fn read_corpus_artifact(dir: &Path, coordinates: Coordinates) -> Result<CorpusEntry, String> {
    let pom_path = dir.join(POM_FILE);
    let xml = fs::read_to_string(&pom_path).map_err(|e| format!("{}: {e}", pom_path.display()))?;
    let ts_path = dir.join(TIMESTAMP_FILE);
    let ts_text =
        fs::read_to_string(&ts_path).map_err(|e| format!("{}: {e}", ts_path.display()))?;
    let millis: u64 = ts_text
        .trim()
        .parse()
        .map_err(|_| format!("{}: invalid timestamp {:?}", ts_path.display(), ts_text.trim()))?;
    let timestamp = ReleaseTimestamp::from_millis(millis).map_err(|e| e.to_string())?;
    Ok(CorpusEntry {
        document: PomDocument::new(pom_path.display().to_string(), xml),
        coordinates,
        timestamp,
    })
}

/// Loads a `group/artifact/version/` corpus directory: each leaf holds a
/// `pom.xml` plus a `timestamp` sidecar (one line, epoch milliseconds).
/// Traversal is lexicographic; per-file failures are collected as issues,
/// never fatal.
pub fn load_corpus(root: &Path) -> Result<CorpusLoad, IoError> {
    let mut load = CorpusLoad::default();
    for group_dir in sorted_dirs(root)? {
        for artifact_dir in sorted_dirs(&group_dir)? {
            for version_dir in sorted_dirs(&artifact_dir)? {
                let name = |p: &Path| {
                    p.file_name()
                        .map(|n| n.to_string_lossy().into_owned())
                        .unwrap_or_default()
                };
                let coordinates = match Coordinates::new(
                    name(&group_dir),
                    name(&artifact_dir),
                    name(&version_dir),
                ) {
                    Ok(c) => c,
                    Err(e) => {
                        load.issues.push(CorpusIssue {
                            path: version_dir.clone(),
                            reason: e.to_string(),
                        });
                        continue;
                    }
                };
                match read_corpus_artifact(&version_dir, coordinates) {
                    Ok(entry) => load.entries.push(entry),
                    Err(reason) => load.issues.push(CorpusIssue {
                        path: version_dir.clone(),
                        reason,
                    }),
                }
            }
        }
    }
    Ok(load)
}

/// Filesystem-backed [`ResolveSource`] over a `group/artifact/version/`
/// corpus directory.
#[derive(Debug, Clone)]
pub struct DirectoryCorpus {
    root: PathBuf,
}

impl DirectoryCorpus {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        DirectoryCorpus { root: root.into() }
    }

    /// Coordinates map to directory names verbatim; anything that would
    /// escape the corpus root is treated as absent.
    fn artifact_dir(&self, coordinates: &Coordinates) -> Option<PathBuf> {
        let parts = [
            coordinates.group_id(),
            coordinates.artifact_id(),
            coordinates.version(),
        ];
        if parts
            .iter()
            .any(|p| *p == ".." || p.contains('/') || p.contains('\\'))
        {
            return None;
        }
        Some(self.root.join(parts[0]).join(parts[1]).join(parts[2]))
    }
}

impl ResolveSource for DirectoryCorpus {
    fn resolve(&self, coordinates: &Coordinates) -> Option<ResolvedArtifact> {
        let dir = self.artifact_dir(coordinates)?;
        let entry = read_corpus_artifact(&dir, coordinates.clone()).ok()?;
        Some(ResolvedArtifact {
            document: entry.document,
            timestamp: entry.timestamp,
        })
    }
}

impl ParentProvider for DirectoryCorpus {
    fn parent_pom(&self, coordinates: &Coordinates) -> Option<PomDocument> {
        self.resolve(coordinates).map(|r| r.document)
    }
}

/// Reads an index file: one coordinate string per line, UTF-8; blank
/// lines are skipped. Line numbers in errors are 1-based.
pub fn read_index(text: &str) -> Result<Vec<Coordinates>, IoError> {
    let mut index = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let coordinates = Coordinates::parse(line).map_err(|e| IoError::RowError {
            line: i as u64 + 1,
            reason: e.to_string(),
        })?;
        index.push(coordinates);
    }
    Ok(index)
}

fn csv_string(build: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    build(&mut writer).expect("in-memory CSV writes cannot fail");
    String::from_utf8(writer.into_inner().expect("flushed")).expect("CSV output is UTF-8")
}

/// `coordinates` column, one row per artifact.
pub fn coordinates_csv(rows: &[Coordinates]) -> String {
    csv_string(|w| {
        w.write_record(["coordinates"])?;
        for c in rows {
            w.write_record([c.to_string()])?;
        }
        Ok(())
    })
}

/// `source,target` pairs.
pub fn pairs_csv(rows: &[(Coordinates, Coordinates)]) -> String {
    csv_string(|w| {
        w.write_record(["source", "target"])?;
        for (s, t) in rows {
            w.write_record([s.to_string(), t.to_string()])?;
        }
        Ok(())
    })
}

/// `groupId,artifactId,versions` rows.
pub fn version_counts_csv(rows: &[LibraryVersionCount]) -> String {
    csv_string(|w| {
        w.write_record(["groupId", "artifactId", "versions"])?;
        for row in rows {
            w.write_record([
                row.library.group_id(),
                row.library.artifact_id(),
                &row.versions.to_string(),
            ])?;
        }
        Ok(())
    })
}

/// `metric,value` rows for the whole-graph statistics.
pub fn stats_csv(stats: &GraphStats) -> String {
    csv_string(|w| {
        w.write_record(["metric", "value"])?;
        w.write_record(["artifacts", &stats.artifacts.to_string()])?;
        w.write_record(["libraries", &stats.libraries.to_string()])?;
        w.write_record(["groups", &stats.groups.to_string()])?;
        w.write_record(["upgrades", &stats.upgrades.to_string()])?;
        w.write_record(["dependency_edges", &stats.dep_edges.to_string()])?;
        w.write_record(["density", &stats.density.to_string()])?;
        w.write_record([
            "unresolved_placeholders",
            &stats.unresolved_placeholders.to_string(),
        ])?;
        Ok(())
    })
}

/// `distribution,p25,p50,p75,min,max` rows.
pub fn percentiles_csv(rows: &[PercentileRow]) -> String {
    csv_string(|w| {
        w.write_record(["distribution", "p25", "p50", "p75", "min", "max"])?;
        for row in rows {
            w.write_record([
                row.metric.name(),
                &row.p25.to_string(),
                &row.p50.to_string(),
                &row.p75.to_string(),
                &row.min.to_string(),
                &row.max.to_string(),
            ])?;
        }
        Ok(())
    })
}
