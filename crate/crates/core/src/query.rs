//! The query repertoire over a [`DependencyGraph`]: temporal selection,
//! per-library version counts, stale-dependent detection, version-range
//! selection and descriptive statistics.
//!
//! All queries are read-only and deterministic: results come out sorted
//! by coordinates, so two runs over equal graphs print byte-identical
//! output. Operations that rely on NEXT chains refuse to run before
//! [`DependencyGraph::build_next_chains`] (or a verbatim chain import)
//! has happened.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{DependencyGraph, GraphError};
use crate::model::{CalendarKey, Coordinates, LibraryId, Scope};
use crate::version::{VersionError, VersionRange};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Version(#[from] VersionError),
}

/// Number of versions a library ships, per the NEXT chain (length + 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LibraryVersionCount {
    pub library: LibraryId,
    pub versions: u64,
}

/// Whole-graph descriptive statistics. Placeholder nodes are excluded
/// from `artifacts` and the density denominator and reported separately;
/// `dep_edges` counts every stored edge, including edges to placeholders.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphStats {
    pub artifacts: u64,
    pub libraries: u64,
    pub groups: u64,
    pub upgrades: u64,
    pub dep_edges: u64,
    /// `dep_edges / artifacts`; zero for an empty graph.
    pub density: f64,
    pub unresolved_placeholders: u64,
}

/// Which degree distribution a percentile row describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionMetric {
    Dependencies,
    Usages,
    Versions,
}

impl DistributionMetric {
    pub fn name(self) -> &'static str {
        match self {
            DistributionMetric::Dependencies => "dependencies",
            DistributionMetric::Usages => "usages",
            DistributionMetric::Versions => "versions",
        }
    }
}

/// Nearest-rank percentile summary of one distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PercentileRow {
    pub metric: DistributionMetric,
    pub p25: u64,
    pub p50: u64,
    pub p75: u64,
    pub min: u64,
    pub max: u64,
}

/// Artifacts whose release date matches `key` at the key's granularity,
/// sorted by coordinates.
pub fn artifacts_released_in(graph: &DependencyGraph, key: &CalendarKey) -> Vec<Coordinates> {
    graph.released_in(key).cloned().collect()
}

/// Artifacts released in `year` with at least one dependency edge to any
/// version of `library` (any scope unless filtered). Duplicates removed,
/// sorted by coordinates.
pub fn dependents_of_library_in_year(
    graph: &DependencyGraph,
    library: &LibraryId,
    year: i32,
    scope_filter: Option<Scope>,
) -> Vec<Coordinates> {
    graph
        .released_in(&CalendarKey::year(year))
        .filter(|artifact| {
            graph
                .dependencies_of(artifact, scope_filter)
                .map(|deps| deps.iter().any(|(target, _)| target.library() == *library))
                .unwrap_or(false)
        })
        .cloned()
        .collect()
}

/// Version count per library: chain length plus one, singletons report 1.
/// Covers every library with a resolved version exactly once.
pub fn versions_per_library(
    graph: &DependencyGraph,
) -> Result<Vec<LibraryVersionCount>, QueryError> {
    require_chains(graph)?;
    Ok(graph
        .libraries()
        .map(|(library, versions)| LibraryVersionCount {
            library: library.clone(),
            versions: versions.len() as u64,
        })
        .collect())
}

/// All (client, provider) pairs where the client depends on the provider
/// (any scope) and both depend on `library` with the given scope, the
/// client on a strictly older version than the provider.
pub fn stale_dependents(
    graph: &DependencyGraph,
    library: &LibraryId,
    scope: Scope,
) -> Vec<(Coordinates, Coordinates)> {
    let library_versions_of = |artifact: &Coordinates| -> Vec<Coordinates> {
        graph
            .dependencies_of(artifact, Some(scope))
            .map(|deps| {
                deps.into_iter()
                    .map(|(target, _)| target)
                    .filter(|target| target.library() == *library)
                    .collect()
            })
            .unwrap_or_default()
    };
    let mut pairs = Vec::new();
    for client in graph.resolved_records().map(|r| r.coordinates()) {
        let client_versions = library_versions_of(client);
        if client_versions.is_empty() {
            continue;
        }
        let Ok(hops) = graph.dependencies_of(client, None) else {
            continue;
        };
        for (provider, _) in hops {
            let provider_versions = library_versions_of(&provider);
            let stale = client_versions.iter().any(|older| {
                provider_versions.iter().any(|newer| {
                    older.parsed_version() < newer.parsed_version()
                })
            });
            if stale {
                pairs.push((client.clone(), provider));
            }
        }
    }
    pairs
}

/// Resolved versions of `library` matching the bracket-interval range,
/// in version order.
pub fn artifacts_in_version_range(
    graph: &DependencyGraph,
    library: &LibraryId,
    range: &str,
) -> Result<Vec<Coordinates>, QueryError> {
    let range = VersionRange::parse(range)?;
    let mut matching: Vec<Coordinates> = graph
        .library_versions(library)
        .into_iter()
        .filter(|c| range.contains(&c.parsed_version()))
        .cloned()
        .collect();
    matching.sort_by(|a, b| {
        a.parsed_version()
            .cmp(&b.parsed_version())
            .then_with(|| a.version().cmp(b.version()))
    });
    Ok(matching)
}

/// Exact whole-graph counts and density.
pub fn compute_stats(graph: &DependencyGraph) -> Result<GraphStats, QueryError> {
    require_chains(graph)?;
    let artifacts = graph.resolved_count();
    let groups: BTreeSet<&str> = graph.libraries().map(|(lib, _)| lib.group_id()).collect();
    let dep_edges = graph.edge_count();
    let density = if artifacts == 0 {
        0.0
    } else {
        dep_edges as f64 / artifacts as f64
    };
    Ok(GraphStats {
        artifacts,
        libraries: graph.libraries().count() as u64,
        groups: groups.len() as u64,
        upgrades: graph.next_edge_count(),
        dep_edges,
        density,
        unresolved_placeholders: graph.placeholder_count(),
    })
}

/// Nearest-rank percentiles of the out-degree, in-degree and per-library
/// version-count distributions. Placeholders are not sampled; edges
/// touching them still count in the degrees of resolved nodes.
pub fn compute_percentiles(graph: &DependencyGraph) -> Result<[PercentileRow; 3], QueryError> {
    require_chains(graph)?;
    let resolved: Vec<&Coordinates> = graph.resolved_records().map(|r| r.coordinates()).collect();
    let dependencies: Vec<u64> = resolved
        .iter()
        .map(|c| graph.dependencies_of(c, None).map(|d| d.len() as u64).unwrap_or(0))
        .collect();
    let usages: Vec<u64> = resolved
        .iter()
        .map(|c| graph.usages_of(c, None).map(|d| d.len() as u64).unwrap_or(0))
        .collect();
    let versions: Vec<u64> = graph.libraries().map(|(_, v)| v.len() as u64).collect();
    Ok([
        percentile_row(DistributionMetric::Dependencies, dependencies),
        percentile_row(DistributionMetric::Usages, usages),
        percentile_row(DistributionMetric::Versions, versions),
    ])
}

fn percentile_row(metric: DistributionMetric, mut values: Vec<u64>) -> PercentileRow {
    values.sort_unstable();
    PercentileRow {
        metric,
        p25: nearest_rank(&values, 25),
        p50: nearest_rank(&values, 50),
        p75: nearest_rank(&values, 75),
        min: values.first().copied().unwrap_or(0),
        max: values.last().copied().unwrap_or(0),
    }
}

/// The ceil(p·N)-th smallest value (1-indexed); 0 for an empty sample.
fn nearest_rank(sorted: &[u64], percent: u64) -> u64 {
    if sorted.is_empty() {
        return 0;
    }
    let rank = (percent * sorted.len() as u64).div_ceil(100).max(1);
    sorted[(rank - 1) as usize]
}

fn require_chains(graph: &DependencyGraph) -> Result<(), QueryError> {
    if graph.chains_built() {
        Ok(())
    } else {
        Err(GraphError::ChainsNotBuilt.into())
    }
}
