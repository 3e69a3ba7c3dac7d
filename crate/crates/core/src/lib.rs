//! Temporal dependency graph engine for Maven-style artifact metadata.
//!
//! The crate ingests artifact coordinates and POM documents, materializes a
//! property graph (artifact nodes, scoped `DEPENDS_ON` edges, per-library
//! `NEXT` version chains, calendar index) and answers queries over it.
//!
//! Modules map onto the pipeline stages:
//!
//! - [`model`] — coordinates, scopes, packaging, calendar keys
//! - [`version`] — total order over Maven version strings
//! - [`pom`] — POM parsing into records and dependency declarations
//! - [`graph`] — the in-memory graph store and its indexes
//! - [`query`] — the query repertoire and descriptive statistics
//! - [`miner`] — producer/consumer collection pipeline with ack/redelivery
//! - [`io`] — CSV import/export, snapshots, corpus loading

pub mod graph;
pub mod io;
pub mod miner;
pub mod model;
pub mod pom;
pub mod query;
pub mod version;

pub use graph::DependencyGraph;
pub use model::{ArtifactRecord, CalendarKey, Coordinates, LibraryId, Packaging, Scope};
pub use version::VersionTokens;
