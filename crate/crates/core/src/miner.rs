//! Desk-scale realization of the collection pipeline: a producer reads an
//! index of coordinates and wraps them into messages, a broker queue hands
//! each message to exactly one consumer at a time, consumers resolve the
//! POM and write artifact plus direct dependencies into the graph, then
//! acknowledge. A message leaves the queue only on acknowledgement; a
//! consumer crash puts it back (at the tail), so delivery is
//! at-least-once and graph writes stay idempotently re-appliable.
//!
//! The broker and the consumers run as a deterministic in-process
//! simulation with a pluggable scheduler (round-robin by default, seeded
//! random for property tests). Failures come from an explicit replayable
//! [`FaultPlan`] instead of wall-clock visibility timeouts.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{DependencyGraph, GraphError, InsertReport};
use crate::model::{Coordinates, ReleaseTimestamp};
use crate::pom::{parse_pom, ParentProvider, ParsedPom, PomDocument};

/// Broker protocol violations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MinerError {
    #[error("ConsumerBusy: consumer {0} already holds a message")]
    ConsumerBusy(ConsumerId),
    #[error("NotInFlight: consumer {consumer} does not hold message {message_id}")]
    NotInFlight {
        consumer: ConsumerId,
        message_id: u64,
    },
}

/// Pipeline-level failures.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),
    #[error(
        "DeliveryLimitExceeded: message {message_id} ({coordinates}) reached {deliveries} deliveries"
    )]
    DeliveryLimitExceeded {
        message_id: u64,
        coordinates: Coordinates,
        deliveries: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConsumerId(pub usize);

impl fmt::Display for ConsumerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "consumer-{}", self.0)
    }
}

/// Delivery state of one message. `Acked` is terminal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MessageState {
    Queued,
    InFlight(ConsumerId),
    Acked,
}

/// Unit of work: one artifact coordinate wrapped for delivery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinerMessage {
    pub id: u64,
    pub payload: Coordinates,
    pub delivery_count: u32,
    pub state: MessageState,
}

/// In-process broker queue. Messages are removed permanently only on
/// acknowledgement, and each message is held by at most one consumer at a
/// time.
#[derive(Debug, Default)]
pub struct BrokerQueue {
    messages: Vec<MinerMessage>,
    queue: VecDeque<u64>,
    in_flight: HashMap<ConsumerId, u64>,
    acked: u64,
}

impl BrokerQueue {
    pub fn new() -> Self {
        BrokerQueue::default()
    }

    /// Enqueues one message per index entry, in index order. Duplicate
    /// coordinates are still enqueued; deduplication happens at graph
    /// insert.
    pub fn produce(&mut self, index: &[Coordinates]) -> u64 {
        for coordinates in index {
            let id = self.messages.len() as u64;
            self.messages.push(MinerMessage {
                id,
                payload: coordinates.clone(),
                delivery_count: 0,
                state: MessageState::Queued,
            });
            self.queue.push_back(id);
        }
        index.len() as u64
    }

    /// Hands the oldest queued message to `consumer`, or `None` when the
    /// queue is empty. A consumer may hold at most one message.
    pub fn deliver(&mut self, consumer: ConsumerId) -> Result<Option<MinerMessage>, MinerError> {
        if self.in_flight.contains_key(&consumer) {
            return Err(MinerError::ConsumerBusy(consumer));
        }
        let Some(id) = self.queue.pop_front() else {
            return Ok(None);
        };
        let message = &mut self.messages[id as usize];
        message.delivery_count += 1;
        message.state = MessageState::InFlight(consumer);
        self.in_flight.insert(consumer, id);
        Ok(Some(message.clone()))
    }

    /// Acknowledges the message held by `consumer`; it is now removed for
    /// good.
    pub fn ack(&mut self, consumer: ConsumerId, message_id: u64) -> Result<(), MinerError> {
        self.release(consumer, message_id, MessageState::Acked)?;
        self.acked += 1;
        Ok(())
    }

    /// Consumer failure: the held message goes back to the queue tail and
    /// becomes deliverable again.
    pub fn requeue(&mut self, consumer: ConsumerId, message_id: u64) -> Result<(), MinerError> {
        self.release(consumer, message_id, MessageState::Queued)?;
        self.queue.push_back(message_id);
        Ok(())
    }

    fn release(
        &mut self,
        consumer: ConsumerId,
        message_id: u64,
        state: MessageState,
    ) -> Result<(), MinerError> {
        match self.in_flight.get(&consumer) {
            Some(held) if *held == message_id => {
                self.in_flight.remove(&consumer);
                self.messages[message_id as usize].state = state;
                Ok(())
            }
            _ => Err(MinerError::NotInFlight {
                consumer,
                message_id,
            }),
        }
    }

    pub fn holds(&self, consumer: ConsumerId) -> Option<u64> {
        self.in_flight.get(&consumer).copied()
    }

    pub fn message(&self, id: u64) -> Option<&MinerMessage> {
        self.messages.get(id as usize)
    }

    pub fn queued_len(&self) -> usize {
        self.queue.len()
    }

    pub fn in_flight_len(&self) -> usize {
        self.in_flight.len()
    }

    pub fn acked_count(&self) -> u64 {
        self.acked
    }

    /// True once every produced message is acknowledged.
    pub fn is_drained(&self) -> bool {
        self.queue.is_empty() && self.in_flight.is_empty()
    }
}

/// Resolved artifact metadata: the POM document and the release
/// timestamp that accompanies it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedArtifact {
    pub document: PomDocument,
    pub timestamp: ReleaseTimestamp,
}

/// Lookup from coordinates to artifact metadata. Deterministic for a
/// fixed corpus.
pub trait ResolveSource {
    fn resolve(&self, coordinates: &Coordinates) -> Option<ResolvedArtifact>;
}

/// In-memory corpus, the fixture-friendly [`ResolveSource`].
#[derive(Debug, Clone, Default)]
pub struct MemoryCorpus {
    entries: HashMap<Coordinates, ResolvedArtifact>,
}

impl MemoryCorpus {
    pub fn new() -> Self {
        MemoryCorpus::default()
    }

    pub fn insert(&mut self, coordinates: Coordinates, artifact: ResolvedArtifact) {
        self.entries.insert(coordinates, artifact);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl ResolveSource for MemoryCorpus {
    fn resolve(&self, coordinates: &Coordinates) -> Option<ResolvedArtifact> {
        self.entries.get(coordinates).cloned()
    }
}

/// Adapter: parent POMs resolve through the same source as artifacts.
struct SourceParents<'a, S: ?Sized>(&'a S);

impl<S: ResolveSource + ?Sized> ParentProvider for SourceParents<'_, S> {
    fn parent_pom(&self, coordinates: &Coordinates) -> Option<PomDocument> {
        self.0.resolve(coordinates).map(|r| r.document)
    }
}

/// Replayable crash schedule: consumer `c` fails (after its graph writes,
/// before acknowledging) on its `nth` delivery, for every `(c, nth)` pair
/// in the plan. `nth` is 1-based.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FaultPlan {
    crashes: BTreeSet<(usize, u64)>,
}

impl FaultPlan {
    pub fn none() -> Self {
        FaultPlan::default()
    }

    pub fn new(pairs: impl IntoIterator<Item = (usize, u64)>) -> Self {
        FaultPlan {
            crashes: pairs.into_iter().collect(),
        }
    }

    /// Deterministic random plan: `crash_count` distinct (consumer, nth)
    /// pairs with nth in `1..=max_nth`.
    pub fn seeded(seed: u64, consumers: usize, crash_count: usize, max_nth: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut crashes = BTreeSet::new();
        let capacity = consumers as u64 * max_nth;
        let wanted = (crash_count as u64).min(capacity);
        while (crashes.len() as u64) < wanted {
            let consumer = rand::Rng::gen_range(&mut rng, 0..consumers);
            let nth = rand::Rng::gen_range(&mut rng, 1..=max_nth);
            crashes.insert((consumer, nth));
        }
        FaultPlan { crashes }
    }

    pub fn len(&self) -> usize {
        self.crashes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crashes.is_empty()
    }

    fn should_crash(&self, consumer: ConsumerId, nth_delivery: u64) -> bool {
        self.crashes.contains(&(consumer.0, nth_delivery))
    }
}

/// Order in which simulated consumers take turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheduler {
    RoundRobin,
    /// Shuffles the consumer order every round with a seeded generator.
    Seeded(u64),
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub consumers: usize,
    /// Abort threshold: no message may exceed this many deliveries.
    pub max_deliveries: u32,
    pub scheduler: Scheduler,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            consumers: 1,
            max_deliveries: 10,
            scheduler: Scheduler::RoundRobin,
        }
    }
}

impl PipelineConfig {
    pub fn with_consumers(consumers: usize) -> Self {
        PipelineConfig {
            consumers,
            ..PipelineConfig::default()
        }
    }
}

/// Dependency declarations that could not become edges.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DepSkips {
    /// Declarations without a version after interpolation.
    pub versionless: u64,
    /// Declarations whose target coordinates could not be formed.
    pub malformed: u64,
    /// Declarations pointing back at the declaring artifact.
    pub self_loops: u64,
}

impl std::ops::AddAssign for DepSkips {
    fn add_assign(&mut self, other: Self) {
        self.versionless += other.versionless;
        self.malformed += other.malformed;
        self.self_loops += other.self_loops;
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConsumerStats {
    pub delivered: u64,
    pub acked: u64,
    pub crashes: u64,
}

/// Outcome of one pipeline run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PipelineReport {
    pub enqueued: u64,
    pub acked: u64,
    pub redeliveries: u64,
    pub crashes_injected: u64,
    pub skipped_not_found: u64,
    pub skipped_corrupt: u64,
    pub insert: InsertReport,
    pub dep_skips: DepSkips,
    pub next_edges: u64,
    pub per_consumer: Vec<ConsumerStats>,
    pub unresolvable: Vec<Coordinates>,
    pub corrupt: Vec<Coordinates>,
}

impl fmt::Display for PipelineReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "enqueued: {}", self.enqueued)?;
        writeln!(f, "acked: {}", self.acked)?;
        writeln!(f, "redeliveries: {}", self.redeliveries)?;
        writeln!(f, "crashes_injected: {}", self.crashes_injected)?;
        writeln!(f, "skipped_not_found: {}", self.skipped_not_found)?;
        writeln!(f, "skipped_corrupt: {}", self.skipped_corrupt)?;
        writeln!(f, "inserted: {}", self.insert.inserted)?;
        writeln!(f, "duplicates_skipped: {}", self.insert.duplicates_skipped)?;
        writeln!(f, "dangling_edges: {}", self.insert.dangling_edges)?;
        writeln!(f, "deps_skipped_versionless: {}", self.dep_skips.versionless)?;
        writeln!(f, "deps_skipped_malformed: {}", self.dep_skips.malformed)?;
        writeln!(f, "deps_skipped_self_loops: {}", self.dep_skips.self_loops)?;
        writeln!(f, "next_edges: {}", self.next_edges)?;
        for (i, stats) in self.per_consumer.iter().enumerate() {
            writeln!(
                f,
                "consumer-{i}: delivered={} acked={} crashes={}",
                stats.delivered, stats.acked, stats.crashes
            )?;
        }
        for c in &self.unresolvable {
            writeln!(f, "unresolvable: {c}")?;
        }
        for c in &self.corrupt {
            writeln!(f, "corrupt: {c}")?;
        }
        Ok(())
    }
}

/// Writes one parsed POM into the graph: the artifact record under the
/// index coordinates plus one edge per versioned dependency declaration.
/// Shared by the pipeline consumers and direct (sequential) ingestion so
/// both paths produce identical graphs.
pub fn store_artifact(
    graph: &mut DependencyGraph,
    coordinates: &Coordinates,
    timestamp: ReleaseTimestamp,
    parsed: &ParsedPom,
) -> (InsertReport, DepSkips) {
    let record = crate::model::ArtifactRecord::new(
        coordinates.clone(),
        parsed.packaging.clone(),
        timestamp,
    );
    let mut report = graph.insert_artifact(record);
    let mut skips = DepSkips::default();
    for decl in &parsed.dependencies {
        let Some(version) = &decl.target_version else {
            skips.versionless += 1;
            continue;
        };
        if decl.target_group.contains("${") || decl.target_artifact.contains("${") {
            skips.malformed += 1;
            continue;
        }
        let Ok(target) = Coordinates::new(
            decl.target_group.clone(),
            decl.target_artifact.clone(),
            version.clone(),
        ) else {
            skips.malformed += 1;
            continue;
        };
        match graph.insert_dependency(coordinates, &target, decl.scope) {
            Ok(edge) => {
                if edge.dangling {
                    report.dangling_edges += 1;
                }
            }
            Err(GraphError::SelfDependency(_)) => skips.self_loops += 1,
            Err(other) => unreachable!("source inserted above: {other}"),
        }
    }
    (report, skips)
}

/// Drives produce / deliver / process to quiescence, then builds the NEXT
/// chains. Aborts when any message exceeds `max_deliveries`.
pub fn run_pipeline<S: ResolveSource>(
    index: &[Coordinates],
    source: &S,
    config: &PipelineConfig,
    faults: &FaultPlan,
) -> Result<(DependencyGraph, PipelineReport), PipelineError> {
    if config.consumers == 0 {
        return Err(PipelineError::InvalidConfig(
            "consumers must be at least 1".to_owned(),
        ));
    }
    let mut broker = BrokerQueue::new();
    let mut graph = DependencyGraph::new();
    let mut report = PipelineReport {
        enqueued: broker.produce(index),
        per_consumer: vec![ConsumerStats::default(); config.consumers],
        ..PipelineReport::default()
    };
    let mut deliveries: Vec<u64> = vec![0; config.consumers];
    let mut rng = match config.scheduler {
        Scheduler::RoundRobin => None,
        Scheduler::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let mut order: Vec<ConsumerId> = (0..config.consumers).map(ConsumerId).collect();

    while !broker.is_drained() {
        if let Some(rng) = rng.as_mut() {
            order.shuffle(rng);
        }
        for &consumer in &order {
            if let Some(message_id) = broker.holds(consumer) {
                let message = broker
                    .message(message_id)
                    .expect("held message exists")
                    .clone();
                process(
                    &mut graph,
                    source,
                    &mut report,
                    consumer,
                    &message,
                );
                if faults.should_crash(consumer, deliveries[consumer.0]) {
                    report.crashes_injected += 1;
                    report.per_consumer[consumer.0].crashes += 1;
                    broker
                        .requeue(consumer, message_id)
                        .expect("consumer holds the message");
                } else {
                    broker
                        .ack(consumer, message_id)
                        .expect("consumer holds the message");
                    report.acked += 1;
                    report.per_consumer[consumer.0].acked += 1;
                }
            } else if let Some(message) = broker.deliver(consumer).expect("consumer is idle") {
                if message.delivery_count > config.max_deliveries {
                    return Err(PipelineError::DeliveryLimitExceeded {
                        message_id: message.id,
                        coordinates: message.payload,
                        deliveries: message.delivery_count,
                    });
                }
                deliveries[consumer.0] += 1;
                report.per_consumer[consumer.0].delivered += 1;
                if message.delivery_count >= 2 {
                    report.redeliveries += 1;
                }
            }
        }
    }

    report.next_edges = graph.build_next_chains() as u64;
    report.unresolvable.sort();
    report.unresolvable.dedup();
    report.corrupt.sort();
    report.corrupt.dedup();
    Ok((graph, report))
}

/// One consumer step over an in-flight message: resolve, parse, write.
/// Unresolvable and corrupt artifacts are recorded and will be
/// acknowledged (retrying cannot change a deterministic corpus).
fn process<S: ResolveSource>(
    graph: &mut DependencyGraph,
    source: &S,
    report: &mut PipelineReport,
    _consumer: ConsumerId,
    message: &MinerMessage,
) {
    match source.resolve(&message.payload) {
        None => {
            report.skipped_not_found += 1;
            report.unresolvable.push(message.payload.clone());
        }
        Some(resolved) => match parse_pom(&resolved.document, &SourceParents(source)) {
            Err(_) => {
                report.skipped_corrupt += 1;
                report.corrupt.push(message.payload.clone());
            }
            Ok(parsed) => {
                let (insert, skips) = store_artifact(
                    graph,
                    &message.payload,
                    resolved.timestamp,
                    &parsed,
                );
                report.insert += insert;
                report.dep_skips += skips;
            }
        },
    }
}
