//! Domain vocabulary shared by every other module: artifact coordinates,
//! library identities, dependency scopes, packaging kinds and calendar keys.
//!
//! All types here are immutable value objects and freely shareable across
//! threads.

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Datelike};
use thiserror::Error;

use crate::version::VersionTokens;

/// Errors raised while building or parsing model values.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    /// Input is not a `group:artifact:version` triple with non-empty parts.
    #[error("MalformedCoordinates: {0:?} is not a group:artifact:version triple")]
    MalformedCoordinates(String),
    /// Input is not a `group:artifact` pair with non-empty parts.
    #[error("MalformedLibraryId: {0:?} is not a group:artifact pair")]
    MalformedLibraryId(String),
    /// Scope string outside the six-value enumeration.
    #[error("UnknownScope: {0:?}")]
    UnknownScope(String),
    /// Timestamp outside the supported range.
    #[error("InvalidTimestamp: {0} exceeds the supported epoch-millisecond range")]
    InvalidTimestamp(u64),
    /// Calendar key with out-of-range or inconsistent fields.
    #[error("InvalidCalendarKey: {0}")]
    InvalidCalendarKey(String),
}

/// Unique artifact identity: the `group:artifact:version` triple.
///
/// Components are stored as written (after whitespace trimming); none of
/// them contains the `:` separator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coordinates {
    group_id: String,
    artifact_id: String,
    version: String,
}

impl Coordinates {
    /// Builds coordinates from components, trimming surrounding whitespace
    /// and rejecting empty or `:`-bearing parts.
    pub fn new(
        group_id: impl Into<String>,
        artifact_id: impl Into<String>,
        version: impl Into<String>,
    ) -> Result<Self, ModelError> {
        let group_id = group_id.into().trim().to_owned();
        let artifact_id = artifact_id.into().trim().to_owned();
        let version = version.into().trim().to_owned();
        let parts = [&group_id, &artifact_id, &version];
        if parts.iter().any(|p| p.is_empty() || p.contains(':')) {
            return Err(ModelError::MalformedCoordinates(format!(
                "{group_id}:{artifact_id}:{version}"
            )));
        }
        Ok(Coordinates {
            group_id,
            artifact_id,
            version,
        })
    }

    /// Parses the canonical `group:artifact:version` form.
    ///
    /// Inputs with more or fewer than two separators are rejected rather
    /// than greedily split, so corrupt index lines fail loudly.
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let mut parts = text.split(':');
        match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(g), Some(a), Some(v), None) => Coordinates::new(g, a, v)
                .map_err(|_| ModelError::MalformedCoordinates(text.to_owned())),
            _ => Err(ModelError::MalformedCoordinates(text.to_owned())),
        }
    }

    pub fn group_id(&self) -> &str {
        &self.group_id
    }

    pub fn artifact_id(&self) -> &str {
        &self.artifact_id
    }

    /// The raw version component, exactly as written.
    pub fn version(&self) -> &str {
        &self.version
    }

    /// The version-less library identity of this artifact.
    pub fn library(&self) -> LibraryId {
        LibraryId {
            group_id: self.group_id.clone(),
            artifact_id: self.artifact_id.clone(),
        }
    }

    /// Parsed version tokens for ordering. Derived from [`Self::version`].
    pub fn parsed_version(&self) -> VersionTokens {
        // Coordinates::new guarantees a non-empty version component.
        VersionTokens::parse(&self.version).expect("coordinate version is non-empty")
    }
}

impl fmt::Display for Coordinates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.group_id, self.artifact_id, self.version)
    }
}

impl FromStr for Coordinates {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Coordinates::parse(s)
    }
}

/// A library: the set of all versions sharing a `group:artifact` pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LibraryId {
    group_id: String,
    artifact_id: String,
}

impl LibraryId {
    pub fn new(
        group_id: impl Into<String>,
        artifact_id: impl Into<String>,
    ) -> Result<Self, ModelError> {
        let group_id = group_id.into().trim().to_owned();
        let artifact_id = artifact_id.into().trim().to_owned();
        if group_id.is_empty()
            || artifact_id.is_empty()
            || group_id.contains(':')
            || artifact_id.contains(':')
        {
            return Err(ModelError::MalformedLibraryId(format!(
                "{group_id}:{artifact_id}"
            )));
        }
        Ok(LibraryId {
            group_id,
            artifact_id,
        })
    }

    /// Parses the `group:artifact` pair form.
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let mut parts = text.split(':');
        match (parts.next(), parts.next(), parts.next()) {
            (Some(g), Some(a), None) => {
                LibraryId::new(g, a).map_err(|_| ModelError::MalformedLibraryId(text.to_owned()))
            }
            _ => Err(ModelError::MalformedLibraryId(text.to_owned())),
        }
    }

    pub fn group_id(&self) -> &str {
        &self.group_id
    }

    pub fn artifact_id(&self) -> &str {
        &self.artifact_id
    }
}

impl fmt::Display for LibraryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.group_id, self.artifact_id)
    }
}

impl FromStr for LibraryId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LibraryId::parse(s)
    }
}

/// Dependency scope, limiting the transitivity of a dependency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scope {
    Compile,
    Runtime,
    Provided,
    Test,
    System,
    Import,
}

impl Scope {
    pub const ALL: [Scope; 6] = [
        Scope::Compile,
        Scope::Runtime,
        Scope::Provided,
        Scope::Test,
        Scope::System,
        Scope::Import,
    ];

    /// Case-insensitive parse; anything outside the six values is rejected.
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        match text.trim().to_ascii_lowercase().as_str() {
            "compile" => Ok(Scope::Compile),
            "runtime" => Ok(Scope::Runtime),
            "provided" => Ok(Scope::Provided),
            "test" => Ok(Scope::Test),
            "system" => Ok(Scope::System),
            "import" => Ok(Scope::Import),
            _ => Err(ModelError::UnknownScope(text.to_owned())),
        }
    }

    /// Capitalized display form.
    pub fn display_name(self) -> &'static str {
        match self {
            Scope::Compile => "Compile",
            Scope::Runtime => "Runtime",
            Scope::Provided => "Provided",
            Scope::Test => "Test",
            Scope::System => "System",
            Scope::Import => "Import",
        }
    }

    /// Lowercase form used in CSV files.
    pub fn csv_name(self) -> &'static str {
        match self {
            Scope::Compile => "compile",
            Scope::Runtime => "runtime",
            Scope::Provided => "provided",
            Scope::Test => "test",
            Scope::System => "system",
            Scope::Import => "import",
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

impl FromStr for Scope {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scope::parse(s)
    }
}

/// Packaging of an artifact. The four schema values are first-class;
/// `Other` preserves any further packaging string losslessly.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Packaging {
    Jar,
    War,
    Pom,
    Ear,
    Other(String),
}

impl Packaging {
    /// Case-insensitive match on the four named values; anything else is
    /// carried verbatim as `Other`.
    pub fn parse(text: &str) -> Self {
        match text.trim().to_ascii_lowercase().as_str() {
            "jar" => Packaging::Jar,
            "war" => Packaging::War,
            "pom" => Packaging::Pom,
            "ear" => Packaging::Ear,
            _ => Packaging::Other(text.trim().to_owned()),
        }
    }

    /// Capitalized display form; `Other` shows its raw string.
    pub fn display_name(&self) -> &str {
        match self {
            Packaging::Jar => "Jar",
            Packaging::War => "War",
            Packaging::Pom => "Pom",
            Packaging::Ear => "Ear",
            Packaging::Other(s) => s,
        }
    }

    /// Lowercase CSV form for the named values; `Other` stays verbatim so
    /// that import/export round-trips.
    pub fn csv_name(&self) -> &str {
        match self {
            Packaging::Jar => "jar",
            Packaging::War => "war",
            Packaging::Pom => "pom",
            Packaging::Ear => "ear",
            Packaging::Other(s) => s,
        }
    }
}

impl fmt::Display for Packaging {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

/// Milliseconds since the Unix epoch, UTC. Bounded to years 1970–9999 so
/// calendar conversion is total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ReleaseTimestamp(u64);

/// 9999-12-31T23:59:59.999Z.
pub const MAX_RELEASE_TIMESTAMP_MS: u64 = 253_402_300_799_999;

impl ReleaseTimestamp {
    pub fn from_millis(millis: u64) -> Result<Self, ModelError> {
        if millis > MAX_RELEASE_TIMESTAMP_MS {
            return Err(ModelError::InvalidTimestamp(millis));
        }
        Ok(ReleaseTimestamp(millis))
    }

    pub fn as_millis(self) -> u64 {
        self.0
    }
}

impl fmt::Display for ReleaseTimestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Gregorian calendar key at year, year-month or year-month-day
/// granularity, always derived from a release timestamp (never stored
/// independently, so the two representations cannot drift).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CalendarKey {
    year: i32,
    month: Option<u8>,
    day: Option<u8>,
}

impl CalendarKey {
    pub fn year(year: i32) -> Self {
        CalendarKey {
            year,
            month: None,
            day: None,
        }
    }

    pub fn year_month(year: i32, month: u8) -> Result<Self, ModelError> {
        if !(1..=12).contains(&month) {
            return Err(ModelError::InvalidCalendarKey(format!(
                "month {month} out of range"
            )));
        }
        Ok(CalendarKey {
            year,
            month: Some(month),
            day: None,
        })
    }

    pub fn year_month_day(year: i32, month: u8, day: u8) -> Result<Self, ModelError> {
        let base = CalendarKey::year_month(year, month)?;
        if !(1..=31).contains(&day) {
            return Err(ModelError::InvalidCalendarKey(format!(
                "day {day} out of range"
            )));
        }
        Ok(CalendarKey {
            day: Some(day),
            ..base
        })
    }

    pub fn year_value(&self) -> i32 {
        self.year
    }

    pub fn month_value(&self) -> Option<u8> {
        self.month
    }

    pub fn day_value(&self) -> Option<u8> {
        self.day
    }

    /// This key truncated to year granularity.
    pub fn at_year(&self) -> CalendarKey {
        CalendarKey::year(self.year)
    }

    /// This key truncated to year-month granularity, if a month is present.
    pub fn at_month(&self) -> Option<CalendarKey> {
        self.month.map(|m| CalendarKey {
            year: self.year,
            month: Some(m),
            day: None,
        })
    }
}

impl fmt::Display for CalendarKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}", self.year)?;
        if let Some(m) = self.month {
            write!(f, "-{m:02}")?;
        }
        if let Some(d) = self.day {
            write!(f, "-{d:02}")?;
        }
        Ok(())
    }
}

impl FromStr for CalendarKey {
    type Err = ModelError;

    /// Parses `YYYY`, `YYYY-MM` or `YYYY-MM-DD`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::InvalidCalendarKey(s.to_owned());
        let mut parts = s.trim().split('-');
        let year: i32 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let month = parts
            .next()
            .map(|m| m.parse::<u8>())
            .transpose()
            .map_err(|_| bad())?;
        let day = parts
            .next()
            .map(|d| d.parse::<u8>())
            .transpose()
            .map_err(|_| bad())?;
        if parts.next().is_some() {
            return Err(bad());
        }
        match (month, day) {
            (None, _) => Ok(CalendarKey::year(year)),
            (Some(m), None) => CalendarKey::year_month(year, m),
            (Some(m), Some(d)) => CalendarKey::year_month_day(year, m, d),
        }
    }
}

/// Fully populated (year, month, day) key for a timestamp, in the
/// proleptic Gregorian calendar, UTC.
pub fn calendar_key_of(timestamp: ReleaseTimestamp) -> CalendarKey {
    let date = DateTime::from_timestamp_millis(timestamp.as_millis() as i64)
        .expect("ReleaseTimestamp is bounded to the chrono-supported range")
        .date_naive();
    CalendarKey {
        year: date.year(),
        month: Some(date.month() as u8),
        day: Some(date.day() as u8),
    }
}

/// One graph node: coordinates plus the metadata mined from its POM.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArtifactRecord {
    coordinates: Coordinates,
    packaging: Packaging,
    release_timestamp: ReleaseTimestamp,
    parsed_version: VersionTokens,
}

impl ArtifactRecord {
    /// Builds a record; `parsed_version` is derived from the coordinate
    /// version string, so the two can never disagree.
    pub fn new(
        coordinates: Coordinates,
        packaging: Packaging,
        release_timestamp: ReleaseTimestamp,
    ) -> Self {
        let parsed_version = coordinates.parsed_version();
        ArtifactRecord {
            coordinates,
            packaging,
            release_timestamp,
            parsed_version,
        }
    }

    pub fn coordinates(&self) -> &Coordinates {
        &self.coordinates
    }

    pub fn packaging(&self) -> &Packaging {
        &self.packaging
    }

    pub fn release_timestamp(&self) -> ReleaseTimestamp {
        self.release_timestamp
    }

    pub fn parsed_version(&self) -> &VersionTokens {
        &self.parsed_version
    }

    pub fn calendar_key(&self) -> CalendarKey {
        calendar_key_of(self.release_timestamp)
    }
}

/// Directed, scoped dependency edge: `source` uses, `target` provides.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DependencyEdge {
    source: Coordinates,
    target: Coordinates,
    scope: Scope,
}

impl DependencyEdge {
    /// Self-dependencies are rejected.
    pub fn new(source: Coordinates, target: Coordinates, scope: Scope) -> Option<Self> {
        if source == target {
            return None;
        }
        Some(DependencyEdge {
            source,
            target,
            scope,
        })
    }

    pub fn source(&self) -> &Coordinates {
        &self.source
    }

    pub fn target(&self) -> &Coordinates {
        &self.target
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }
}
