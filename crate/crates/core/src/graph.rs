//! The temporal property-graph store: artifact nodes keyed by
//! coordinates, scoped `DEPENDS_ON` adjacency in both directions,
//! per-library `NEXT` version chains, and a calendar index materialized
//! at year, year-month and year-month-day granularity.
//!
//! Coordinates are the primary key. Re-inserting existing coordinates is
//! a counted no-op (first write wins), which is what collapses duplicated
//! index entries and makes every pipeline write idempotently
//! re-appliable. Dependency targets that are not (yet) in the graph
//! become explicit unresolved placeholder nodes so that usage counts stay
//! queryable; placeholders never join NEXT chains, the library index or
//! the calendar index.
//!
//! Concurrency: mutation requires `&mut self`, queries take `&self`, so
//! the single-writer / multiple-reader contract is enforced by the borrow
//! checker; the graph value is `Send + Sync` once built.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::AddAssign;

use thiserror::Error;

use crate::model::{calendar_key_of, ArtifactRecord, CalendarKey, Coordinates, LibraryId, Scope};

/// Errors raised by graph mutations and lookups.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("SelfDependency: {0} cannot depend on itself")]
    SelfDependency(Coordinates),
    #[error("UnknownArtifact: {0}")]
    UnknownArtifact(Coordinates),
    #[error("ChainsNotBuilt: build_next_chains must run before this operation")]
    ChainsNotBuilt,
    #[error("ChainViolation: {reason}")]
    ChainViolation {
        /// Index into the offending edge list, when attributable to one edge.
        edge_index: Option<usize>,
        reason: String,
    },
}

/// Counters for an ingestion step; `inserted + duplicates_skipped` equals
/// the number of attempted artifact inserts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InsertReport {
    pub inserted: u64,
    pub duplicates_skipped: u64,
    /// Edges whose target was not a resolved node at insert time.
    pub dangling_edges: u64,
}

impl AddAssign for InsertReport {
    fn add_assign(&mut self, other: Self) {
        self.inserted += other.inserted;
        self.duplicates_skipped += other.duplicates_skipped;
        self.dangling_edges += other.dangling_edges;
    }
}

/// Outcome of one dependency-edge insert.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeInsert {
    /// False when the identical (source, target, scope) edge was already present.
    pub added: bool,
    /// True when the edge was added while its target was not resolved.
    pub dangling: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum NodeEntry {
    Resolved(Box<ArtifactRecord>),
    Placeholder,
}

/// The in-memory dependency graph. Structural equality covers nodes,
/// edges and chains, so two ingestions of the same corpus compare equal
/// regardless of insertion order or pipeline schedule.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DependencyGraph {
    nodes: BTreeMap<Coordinates, NodeEntry>,
    out_edges: BTreeMap<Coordinates, BTreeSet<(Coordinates, Scope)>>,
    in_edges: BTreeMap<Coordinates, BTreeSet<(Coordinates, Scope)>>,
    next: BTreeMap<Coordinates, Coordinates>,
    prev: BTreeMap<Coordinates, Coordinates>,
    library_index: BTreeMap<LibraryId, BTreeSet<Coordinates>>,
    calendar_index: BTreeMap<CalendarKey, BTreeSet<Coordinates>>,
    chains_built: bool,
}

impl DependencyGraph {
    pub fn new() -> Self {
        DependencyGraph::default()
    }

    /// Inserts an artifact node. First insertion wins; re-insertion of
    /// existing coordinates is a counted no-op. An existing unresolved
    /// placeholder is upgraded in place and counts as an insert.
    pub fn insert_artifact(&mut self, record: ArtifactRecord) -> InsertReport {
        let coordinates = record.coordinates().clone();
        match self.nodes.get(&coordinates) {
            Some(NodeEntry::Resolved(_)) => {
                return InsertReport {
                    duplicates_skipped: 1,
                    ..InsertReport::default()
                };
            }
            Some(NodeEntry::Placeholder) | None => {}
        }
        let key = calendar_key_of(record.release_timestamp());
        self.calendar_index
            .entry(key.at_year())
            .or_default()
            .insert(coordinates.clone());
        self.calendar_index
            .entry(key.at_month().expect("full key has a month"))
            .or_default()
            .insert(coordinates.clone());
        self.calendar_index
            .entry(key)
            .or_default()
            .insert(coordinates.clone());
        self.library_index
            .entry(coordinates.library())
            .or_default()
            .insert(coordinates.clone());
        self.nodes
            .insert(coordinates, NodeEntry::Resolved(Box::new(record)));
        self.chains_built = false;
        InsertReport {
            inserted: 1,
            ..InsertReport::default()
        }
    }

    /// Records a scoped dependency edge. The target may be absent: it is
    /// then created as an unresolved placeholder. Re-inserting the same
    /// (source, target, scope) edge is a no-op, so interrupted pipeline
    /// writes can simply be re-applied.
    pub fn insert_dependency(
        &mut self,
        source: &Coordinates,
        target: &Coordinates,
        scope: Scope,
    ) -> Result<EdgeInsert, GraphError> {
        if source == target {
            return Err(GraphError::SelfDependency(source.clone()));
        }
        if !self.nodes.contains_key(source) {
            return Err(GraphError::UnknownArtifact(source.clone()));
        }
        let target_resolved = matches!(self.nodes.get(target), Some(NodeEntry::Resolved(_)));
        if !self.nodes.contains_key(target) {
            self.nodes.insert(target.clone(), NodeEntry::Placeholder);
        }
        let added = self
            .out_edges
            .entry(source.clone())
            .or_default()
            .insert((target.clone(), scope));
        if added {
            self.in_edges
                .entry(target.clone())
                .or_default()
                .insert((source.clone(), scope));
        }
        Ok(EdgeInsert {
            added,
            dangling: added && !target_resolved,
        })
    }

    /// Creates an unresolved placeholder node unless the coordinates are
    /// already present. Used when loading edge files that reference
    /// sources outside the node set.
    pub(crate) fn ensure_placeholder(&mut self, coordinates: &Coordinates) -> bool {
        if self.nodes.contains_key(coordinates) {
            return false;
        }
        self.nodes
            .insert(coordinates.clone(), NodeEntry::Placeholder);
        true
    }

    /// Rebuilds all NEXT chains: per library, versions sort by the version
    /// order (ties broken by raw version string, then release timestamp,
    /// then coordinates) and consecutive pairs are linked. Returns the
    /// number of NEXT edges created. Idempotent; replaces existing chains.
    pub fn build_next_chains(&mut self) -> usize {
        self.next.clear();
        self.prev.clear();
        let mut created = 0;
        for versions in self.library_index.values() {
            let mut ordered: Vec<&Coordinates> = versions.iter().collect();
            ordered.sort_by(|a, b| {
                let ra = self.expect_record(a);
                let rb = self.expect_record(b);
                ra.parsed_version()
                    .cmp(rb.parsed_version())
                    .then_with(|| a.version().cmp(b.version()))
                    .then_with(|| ra.release_timestamp().cmp(&rb.release_timestamp()))
                    .then_with(|| a.cmp(b))
            });
            for pair in ordered.windows(2) {
                self.next.insert(pair[0].clone(), pair[1].clone());
                self.prev.insert(pair[1].clone(), pair[0].clone());
                created += 1;
            }
        }
        self.chains_built = true;
        created
    }

    /// Loads NEXT edges verbatim (no rebuild), validating that they form
    /// disjoint per-library simple paths over resolved nodes. On success
    /// the graph counts as chain-built.
    pub fn load_next_edges(&mut self, edges: &[(Coordinates, Coordinates)]) -> Result<usize, GraphError> {
        let violation = |idx: usize, reason: String| GraphError::ChainViolation {
            edge_index: Some(idx),
            reason,
        };
        let mut next: BTreeMap<Coordinates, Coordinates> = BTreeMap::new();
        let mut prev: BTreeMap<Coordinates, Coordinates> = BTreeMap::new();
        for (idx, (source, target)) in edges.iter().enumerate() {
            for end in [source, target] {
                match self.nodes.get(end) {
                    Some(NodeEntry::Resolved(_)) => {}
                    Some(NodeEntry::Placeholder) => {
                        return Err(violation(
                            idx,
                            format!("NEXT edge touches unresolved placeholder {end}"),
                        ));
                    }
                    None => {
                        return Err(violation(idx, format!("NEXT edge references absent node {end}")));
                    }
                }
            }
            if source == target {
                return Err(violation(idx, format!("NEXT self-loop at {source}")));
            }
            if source.library() != target.library() {
                return Err(violation(
                    idx,
                    format!("NEXT edge crosses libraries: {source} -> {target}"),
                ));
            }
            if next.insert(source.clone(), target.clone()).is_some() {
                return Err(violation(idx, format!("{source} has two NEXT successors")));
            }
            if prev.insert(target.clone(), source.clone()).is_some() {
                return Err(violation(idx, format!("{target} has two NEXT predecessors")));
            }
        }
        // Cycle check: every edge must be reachable from a chain head.
        let mut reachable = 0usize;
        for head in next.keys().filter(|c| !prev.contains_key(*c)) {
            let mut cursor = head;
            while let Some(successor) = next.get(cursor) {
                reachable += 1;
                cursor = successor;
            }
        }
        if reachable != next.len() {
            let on_cycle = next
                .keys()
                .find(|c| {
                    // A node is on a cycle when walking predecessors from it
                    // never terminates; equivalently it is not reachable from
                    // any head. Cheap variant: it has a predecessor chain
                    // longer than the edge count.
                    let mut cursor = *c;
                    let mut steps = 0;
                    while let Some(p) = prev.get(cursor) {
                        cursor = p;
                        steps += 1;
                        if steps > next.len() {
                            return true;
                        }
                    }
                    false
                })
                .cloned();
            return Err(GraphError::ChainViolation {
                edge_index: None,
                reason: match on_cycle {
                    Some(c) => format!("NEXT edges form a cycle through {c}"),
                    None => "NEXT edges form a cycle".to_owned(),
                },
            });
        }
        self.next = next;
        self.prev = prev;
        self.chains_built = true;
        Ok(self.next.len())
    }

    pub fn contains(&self, coordinates: &Coordinates) -> bool {
        self.nodes.contains_key(coordinates)
    }

    pub fn is_resolved(&self, coordinates: &Coordinates) -> bool {
        matches!(self.nodes.get(coordinates), Some(NodeEntry::Resolved(_)))
    }

    pub fn record(&self, coordinates: &Coordinates) -> Option<&ArtifactRecord> {
        match self.nodes.get(coordinates) {
            Some(NodeEntry::Resolved(record)) => Some(record),
            _ => None,
        }
    }

    fn expect_record(&self, coordinates: &Coordinates) -> &ArtifactRecord {
        self.record(coordinates)
            .expect("library index only holds resolved nodes")
    }

    /// All resolved records, in coordinate order.
    pub fn resolved_records(&self) -> impl Iterator<Item = &ArtifactRecord> {
        self.nodes.values().filter_map(|entry| match entry {
            NodeEntry::Resolved(record) => Some(record.as_ref()),
            NodeEntry::Placeholder => None,
        })
    }

    /// Unresolved placeholder coordinates, in coordinate order.
    pub fn placeholders(&self) -> impl Iterator<Item = &Coordinates> {
        self.nodes.iter().filter_map(|(c, entry)| match entry {
            NodeEntry::Placeholder => Some(c),
            NodeEntry::Resolved(_) => None,
        })
    }

    pub fn resolved_count(&self) -> u64 {
        self.resolved_records().count() as u64
    }

    pub fn placeholder_count(&self) -> u64 {
        self.placeholders().count() as u64
    }

    /// Total number of stored dependency edges.
    pub fn edge_count(&self) -> u64 {
        self.out_edges.values().map(|s| s.len() as u64).sum()
    }

    pub fn next_edge_count(&self) -> u64 {
        self.next.len() as u64
    }

    pub fn chains_built(&self) -> bool {
        self.chains_built
    }

    /// Outgoing dependencies of an artifact, sorted by target coordinates.
    pub fn dependencies_of(
        &self,
        coordinates: &Coordinates,
        scope_filter: Option<Scope>,
    ) -> Result<Vec<(Coordinates, Scope)>, GraphError> {
        self.adjacency(&self.out_edges, coordinates, scope_filter)
    }

    /// Incoming usages of an artifact, sorted by user coordinates.
    pub fn usages_of(
        &self,
        coordinates: &Coordinates,
        scope_filter: Option<Scope>,
    ) -> Result<Vec<(Coordinates, Scope)>, GraphError> {
        self.adjacency(&self.in_edges, coordinates, scope_filter)
    }

    fn adjacency(
        &self,
        edges: &BTreeMap<Coordinates, BTreeSet<(Coordinates, Scope)>>,
        coordinates: &Coordinates,
        scope_filter: Option<Scope>,
    ) -> Result<Vec<(Coordinates, Scope)>, GraphError> {
        if !self.nodes.contains_key(coordinates) {
            return Err(GraphError::UnknownArtifact(coordinates.clone()));
        }
        Ok(edges
            .get(coordinates)
            .into_iter()
            .flatten()
            .filter(|(_, scope)| scope_filter.is_none_or(|wanted| *scope == wanted))
            .cloned()
            .collect())
    }

    pub fn successor(&self, coordinates: &Coordinates) -> Result<Option<&Coordinates>, GraphError> {
        if !self.nodes.contains_key(coordinates) {
            return Err(GraphError::UnknownArtifact(coordinates.clone()));
        }
        Ok(self.next.get(coordinates))
    }

    pub fn predecessor(&self, coordinates: &Coordinates) -> Result<Option<&Coordinates>, GraphError> {
        if !self.nodes.contains_key(coordinates) {
            return Err(GraphError::UnknownArtifact(coordinates.clone()));
        }
        Ok(self.prev.get(coordinates))
    }

    /// Resolved versions of a library, sorted by coordinates.
    pub fn library_versions(&self, library: &LibraryId) -> Vec<&Coordinates> {
        self.library_index
            .get(library)
            .into_iter()
            .flatten()
            .collect()
    }

    /// All libraries with at least one resolved version.
    pub fn libraries(&self) -> impl Iterator<Item = (&LibraryId, &BTreeSet<Coordinates>)> {
        self.library_index.iter()
    }

    /// Artifacts whose derived calendar key matches `key` at the key's
    /// granularity, in coordinate order.
    pub fn released_in(&self, key: &CalendarKey) -> impl Iterator<Item = &Coordinates> {
        self.calendar_index.get(key).into_iter().flatten()
    }

    /// All dependency edges in (source, target, scope) order.
    pub fn dep_edges(&self) -> impl Iterator<Item = (&Coordinates, &Coordinates, Scope)> {
        self.out_edges
            .iter()
            .flat_map(|(source, targets)| targets.iter().map(move |(t, s)| (source, t, *s)))
    }

    /// All NEXT edges in source order.
    pub fn next_edges(&self) -> impl Iterator<Item = (&Coordinates, &Coordinates)> {
        self.next.iter()
    }
}
