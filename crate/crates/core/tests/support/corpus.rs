//! Seeded random corpora plus brute-force query oracles.
//!
//! A [`RawCorpus`] is plain data: coordinate strings, packaging strings,
//! epoch timestamps, and an edge list of coordinate-string triples. The
//! oracles answer queries by scanning these lists directly, using the
//! independent civil-calendar and version comparators from this support
//! tree, so they share no code path with the graph store they check.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use gavgraph::graph::{DependencyGraph, InsertReport};
use gavgraph::miner::{MemoryCorpus, ResolvedArtifact};
use gavgraph::model::{ArtifactRecord, Coordinates, Packaging, ReleaseTimestamp, Scope};
use gavgraph::pom::{minimal_pom, DependencyDecl, PomDocument};
use gavgraph::version::VersionTokens;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::civil;
use super::version_oracle;

#[derive(Debug, Clone)]
pub struct RawArtifact {
    pub coords: String,
    pub packaging: String,
    pub timestamp_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RawEdge {
    pub source: String,
    pub target: String,
    /// Lowercase scope name.
    pub scope: String,
}

#[derive(Debug, Clone, Default)]
pub struct RawCorpus {
    pub artifacts: Vec<RawArtifact>,
    /// Distinct (source, target, scope) triples; sources are always
    /// artifacts of the corpus, targets may be outside it.
    pub edges: Vec<RawEdge>,
}

const GROUPS: [&str; 6] = [
    "org.acme",
    "com.blue",
    "net.carol",
    "io.delta",
    "org.echo",
    "dev.foxtrot",
];
const PACKAGINGS: [&str; 6] = ["jar", "jar", "jar", "pom", "war", "bundle"];
const SCOPES: [&str; 6] = ["compile", "runtime", "provided", "test", "system", "import"];
const QUALIFIERS: [&str; 7] = ["alpha", "beta", "rc", "rc1", "snapshot", "sp", "final"];

// 2010-01-01 .. 2020-12-31 in epoch milliseconds.
const TS_MIN: u64 = 1_262_304_000_000;
const TS_MAX: u64 = 1_609_459_199_999;

fn random_version(rng: &mut ChaCha8Rng) -> String {
    let major = rng.gen_range(0..10u32);
    let minor = rng.gen_range(0..20u32);
    let patch = rng.gen_range(0..30u32);
    match rng.gen_range(0..7u32) {
        0 => format!("{major}"),
        1 => format!("{major}.{minor}"),
        2 => format!("{major}.{minor}.{patch}"),
        3 => format!(
            "{major}.{minor}-{}",
            QUALIFIERS[rng.gen_range(0..QUALIFIERS.len())]
        ),
        4 => format!(
            "{major}.{minor}.{patch}-{}-{}",
            QUALIFIERS[rng.gen_range(0..QUALIFIERS.len())],
            rng.gen_range(1..5u32)
        ),
        5 => format!("{major}.{minor}b{}", rng.gen_range(1..4u32)),
        _ => format!("{major}.{minor}.{patch}.{}", rng.gen_range(0..100u32)),
    }
}

/// Generates a corpus with `min_artifacts..=max_artifacts` artifacts and
/// up to `max_edges` distinct edges. Versions within a library are
/// pairwise distinct under the version order, so chain identities hold
/// exactly.
pub fn generate_sized(
    seed: u64,
    min_artifacts: usize,
    max_artifacts: usize,
    max_edges: usize,
) -> RawCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = rng.gen_range(min_artifacts..=max_artifacts);

    let mut corpus = RawCorpus::default();
    let mut lib_no = 0usize;
    while corpus.artifacts.len() < target {
        let group = GROUPS[rng.gen_range(0..GROUPS.len())];
        let artifact = format!("lib{lib_no}");
        lib_no += 1;
        let remaining = target - corpus.artifacts.len();
        let version_count = rng.gen_range(1..=8usize.min(remaining));
        let mut seen = HashSet::new();
        let mut produced = 0usize;
        while produced < version_count {
            let version = random_version(&mut rng);
            let normalized = VersionTokens::parse(&version).unwrap().canonical();
            if !seen.insert(normalized) {
                continue;
            }
            corpus.artifacts.push(RawArtifact {
                coords: format!("{group}:{artifact}:{version}"),
                packaging: PACKAGINGS[rng.gen_range(0..PACKAGINGS.len())].to_owned(),
                timestamp_ms: rng.gen_range(TS_MIN..=TS_MAX),
            });
            produced += 1;
        }
    }

    let mut edges = BTreeSet::new();
    let attempts = rng.gen_range(0..=max_edges);
    for _ in 0..attempts {
        let source = &corpus.artifacts[rng.gen_range(0..corpus.artifacts.len())].coords;
        let target = if rng.gen_bool(0.12) {
            format!(
                "ghost.g{}:ghost{}:{}",
                rng.gen_range(0..3u32),
                rng.gen_range(0..4u32),
                rng.gen_range(1..6u32)
            )
        } else {
            corpus.artifacts[rng.gen_range(0..corpus.artifacts.len())]
                .coords
                .clone()
        };
        if target == *source {
            continue;
        }
        edges.insert(RawEdge {
            source: source.clone(),
            target,
            scope: SCOPES[rng.gen_range(0..SCOPES.len())].to_owned(),
        });
    }
    corpus.edges = edges.into_iter().collect();
    corpus
}

pub fn generate(seed: u64) -> RawCorpus {
    generate_sized(seed, 10, 200, 800)
}

fn library_of(coords: &str) -> (String, String) {
    let mut parts = coords.split(':');
    (
        parts.next().unwrap_or_default().to_owned(),
        parts.next().unwrap_or_default().to_owned(),
    )
}

fn version_of(coords: &str) -> &str {
    coords.split(':').nth(2).unwrap_or_default()
}

impl RawCorpus {
    pub fn coordinates(&self) -> Vec<Coordinates> {
        self.artifacts
            .iter()
            .map(|a| Coordinates::parse(&a.coords).unwrap())
            .collect()
    }

    /// Direct sequential ingestion: artifacts in list order, then edges in
    /// list order, then chain building.
    pub fn build_graph(&self) -> (DependencyGraph, InsertReport) {
        let mut graph = DependencyGraph::new();
        let mut report = InsertReport::default();
        for artifact in &self.artifacts {
            report += graph.insert_artifact(ArtifactRecord::new(
                Coordinates::parse(&artifact.coords).unwrap(),
                Packaging::parse(&artifact.packaging),
                ReleaseTimestamp::from_millis(artifact.timestamp_ms).unwrap(),
            ));
        }
        for edge in &self.edges {
            let outcome = graph
                .insert_dependency(
                    &Coordinates::parse(&edge.source).unwrap(),
                    &Coordinates::parse(&edge.target).unwrap(),
                    Scope::parse(&edge.scope).unwrap(),
                )
                .unwrap();
            if outcome.dangling {
                report.dangling_edges += 1;
            }
        }
        graph.build_next_chains();
        (graph, report)
    }

    /// Renders every artifact as a minimal POM so the corpus can feed the
    /// collection pipeline. Returns the index (artifact order) and the
    /// in-memory resolve source.
    pub fn to_memory_corpus(&self) -> (Vec<Coordinates>, MemoryCorpus) {
        let mut source = MemoryCorpus::new();
        let index = self.coordinates();
        for artifact in &self.artifacts {
            let coordinates = Coordinates::parse(&artifact.coords).unwrap();
            let deps: Vec<DependencyDecl> = self
                .edges
                .iter()
                .filter(|e| e.source == artifact.coords)
                .map(|e| {
                    let (group, name) = library_of(&e.target);
                    DependencyDecl {
                        target_group: group,
                        target_artifact: name,
                        target_version: Some(version_of(&e.target).to_owned()),
                        scope: Scope::parse(&e.scope).unwrap(),
                        optional: false,
                        unresolved_interpolation: false,
                    }
                })
                .collect();
            let xml = minimal_pom(&coordinates, &Packaging::parse(&artifact.packaging), &deps);
            source.insert(
                coordinates.clone(),
                ResolvedArtifact {
                    document: PomDocument::new(format!("{coordinates}.pom"), xml),
                    timestamp: ReleaseTimestamp::from_millis(artifact.timestamp_ms).unwrap(),
                },
            );
        }
        (index, source)
    }

    /// (group, artifact, scope) of every edge target, for query picking.
    pub fn targeted_libraries(&self) -> Vec<(String, String, String)> {
        self.edges
            .iter()
            .map(|e| {
                let (g, a) = library_of(&e.target);
                (g, a, e.scope.clone())
            })
            .collect()
    }
}

fn release_year(ms: u64) -> i32 {
    civil::civil_from_millis(ms).0
}

fn edges_by_source(corpus: &RawCorpus) -> HashMap<&str, Vec<&RawEdge>> {
    let mut map: HashMap<&str, Vec<&RawEdge>> = HashMap::new();
    for edge in &corpus.edges {
        map.entry(edge.source.as_str()).or_default().push(edge);
    }
    map
}

/// Literal re-implementation of the "deployed in a year, depends on the
/// library" selection over the raw lists.
pub fn oracle_dependents_in_year(
    corpus: &RawCorpus,
    group: &str,
    artifact: &str,
    year: i32,
    scope: Option<&str>,
) -> BTreeSet<String> {
    let outgoing = edges_by_source(corpus);
    let wanted = (group.to_owned(), artifact.to_owned());
    let mut hits = BTreeSet::new();
    for candidate in &corpus.artifacts {
        if release_year(candidate.timestamp_ms) != year {
            continue;
        }
        let uses_library = outgoing
            .get(candidate.coords.as_str())
            .into_iter()
            .flatten()
            .any(|e| library_of(&e.target) == wanted && scope.is_none_or(|s| e.scope == s));
        if uses_library {
            hits.insert(candidate.coords.clone());
        }
    }
    hits
}

/// Version count per library by direct counting.
pub fn oracle_versions_per_library(corpus: &RawCorpus) -> BTreeMap<(String, String), u64> {
    let mut counts = BTreeMap::new();
    for artifact in &corpus.artifacts {
        *counts.entry(library_of(&artifact.coords)).or_insert(0u64) += 1;
    }
    counts
}

/// Triple-nested enumeration of the stale-dependent predicate: client
/// depends on provider (any scope), both depend on the library with the
/// given scope, and some client-side version is strictly older than some
/// provider-side version under the reference comparator.
pub fn oracle_stale_dependents(
    corpus: &RawCorpus,
    group: &str,
    artifact: &str,
    scope: &str,
) -> BTreeSet<(String, String)> {
    let lib = (group.to_owned(), artifact.to_owned());
    let outgoing = edges_by_source(corpus);
    let lib_edges = |from: &str| -> Vec<&RawEdge> {
        outgoing
            .get(from)
            .into_iter()
            .flatten()
            .filter(|e| e.scope == scope && library_of(&e.target) == lib)
            .copied()
            .collect()
    };
    let mut pairs = BTreeSet::new();
    for client in &corpus.artifacts {
        for older in lib_edges(&client.coords) {
            for hop in outgoing.get(client.coords.as_str()).into_iter().flatten() {
                for newer in lib_edges(&hop.target) {
                    let is_lower = version_oracle::compare(
                        version_of(&older.target),
                        version_of(&newer.target),
                    ) == std::cmp::Ordering::Less;
                    if is_lower {
                        pairs.insert((client.coords.clone(), hop.target.clone()));
                    }
                }
            }
        }
    }
    pairs
}

/// Counting pass over the raw lists: (artifacts, libraries, groups,
/// dep_edges).
pub fn oracle_counts(corpus: &RawCorpus) -> (u64, u64, u64, u64) {
    let libraries: BTreeSet<(String, String)> = corpus
        .artifacts
        .iter()
        .map(|a| library_of(&a.coords))
        .collect();
    let groups: BTreeSet<String> = libraries.iter().map(|(g, _)| g.clone()).collect();
    (
        corpus.artifacts.len() as u64,
        libraries.len() as u64,
        groups.len() as u64,
        corpus.edges.len() as u64,
    )
}

/// Degree distributions over the raw lists: out-degrees and in-degrees of
/// corpus artifacts, and per-library version counts.
pub fn oracle_distributions(corpus: &RawCorpus) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let mut out_degree: HashMap<&str, u64> = HashMap::new();
    let mut in_degree: HashMap<&str, u64> = HashMap::new();
    for edge in &corpus.edges {
        *out_degree.entry(edge.source.as_str()).or_insert(0) += 1;
        *in_degree.entry(edge.target.as_str()).or_insert(0) += 1;
    }
    let degree_of = |map: &HashMap<&str, u64>, coords: &str| map.get(coords).copied().unwrap_or(0);
    let out: Vec<u64> = corpus
        .artifacts
        .iter()
        .map(|a| degree_of(&out_degree, &a.coords))
        .collect();
    let inc: Vec<u64> = corpus
        .artifacts
        .iter()
        .map(|a| degree_of(&in_degree, &a.coords))
        .collect();
    let versions: Vec<u64> = oracle_versions_per_library(corpus).into_values().collect();
    (out, inc, versions)
}

/// The ceil(p·N)-th order statistic by sorting and indexing.
pub fn oracle_nearest_rank(values: &[u64], percent: u64) -> u64 {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    if sorted.is_empty() {
        return 0;
    }
    let rank = ((percent * sorted.len() as u64) as f64 / 100.0).ceil() as usize;
    sorted[rank.max(1) - 1]
}
