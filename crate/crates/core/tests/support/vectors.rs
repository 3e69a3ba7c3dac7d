//! Frozen Maven version-order comparison vectors.
//!
//! These are the published behaviour cases for the version order as
//! implemented by Maven's artifact resolver: null-value trimming, the
//! digit/letter transition rules, the single-letter qualifier shorthands,
//! the release aliases and the well-known qualifier ranking.

use std::cmp::Ordering;

/// Pairs that must compare exactly as stated (and reversed when swapped).
pub const PAIRS: &[(&str, &str, Ordering)] = &[
    // Null-value trimming.
    ("1", "1", Ordering::Equal),
    ("1", "1.0", Ordering::Equal),
    ("1", "1.0.0", Ordering::Equal),
    ("1.0", "1.0.0", Ordering::Equal),
    ("1", "1-0", Ordering::Equal),
    ("1", "1.0-0", Ordering::Equal),
    ("1.0", "1.0-0", Ordering::Equal),
    // No separator between number and character.
    ("1a", "1-a", Ordering::Equal),
    ("1a", "1.0-a", Ordering::Equal),
    ("1a", "1.0.0-a", Ordering::Equal),
    ("1.0a", "1-a", Ordering::Equal),
    ("1.0.0a", "1-a", Ordering::Equal),
    ("1x", "1-x", Ordering::Equal),
    ("1x", "1.0-x", Ordering::Equal),
    ("1x", "1.0.0-x", Ordering::Equal),
    ("1.0x", "1-x", Ordering::Equal),
    ("1.0.0x", "1-x", Ordering::Equal),
    // Release aliases.
    ("1ga", "1", Ordering::Equal),
    ("1release", "1", Ordering::Equal),
    ("1final", "1", Ordering::Equal),
    ("1cr", "1rc", Ordering::Equal),
    // Single-letter shorthands apply only directly before a number.
    ("1a1", "1-alpha-1", Ordering::Equal),
    ("1b2", "1-beta-2", Ordering::Equal),
    ("1m3", "1-milestone-3", Ordering::Equal),
    ("1a1", "1-a1", Ordering::Equal),
    // Case insensitivity.
    ("1X", "1x", Ordering::Equal),
    ("1A", "1a", Ordering::Equal),
    ("1B", "1b", Ordering::Equal),
    ("1M", "1m", Ordering::Equal),
    ("1Ga", "1", Ordering::Equal),
    ("1GA", "1", Ordering::Equal),
    ("1RELEASE", "1", Ordering::Equal),
    ("1RELeaSE", "1", Ordering::Equal),
    ("1Final", "1", Ordering::Equal),
    ("1FinaL", "1", Ordering::Equal),
    ("1FINAL", "1", Ordering::Equal),
    ("1Cr", "1Rc", Ordering::Equal),
    ("1cR", "1rC", Ordering::Equal),
    ("1m3", "1Milestone3", Ordering::Equal),
    ("1m3", "1MileStone3", Ordering::Equal),
    ("1m3", "1MILESTONE3", Ordering::Equal),
    // Empty segments and mixed separators.
    ("1-1.foo-bar1baz-.1", "1-1.foo-bar-1-baz-0.1", Ordering::Equal),
    ("..1", "0.0.1", Ordering::Equal),
    ("1.", "1", Ordering::Equal),
    ("1-", "1", Ordering::Equal),
    // Basic numeric ordering.
    ("1", "2", Ordering::Less),
    ("1.5", "2", Ordering::Less),
    ("1", "2.5", Ordering::Less),
    ("1.0", "1.1", Ordering::Less),
    ("1.1", "1.2", Ordering::Less),
    ("1.0.0", "1.1", Ordering::Less),
    ("1.0.1", "1.1", Ordering::Less),
    ("1.1", "1.2.0", Ordering::Less),
    ("1.5.0", "1.19.0", Ordering::Less),
    // Qualifier ordering.
    ("1.0-alpha-1", "1.0", Ordering::Less),
    ("1.0-alpha-1", "1.0-alpha-2", Ordering::Less),
    ("1.0-alpha-1", "1.0-beta-1", Ordering::Less),
    ("1.0-alpha", "1.0-beta", Ordering::Less),
    ("1.0-beta", "1.0-milestone", Ordering::Less),
    ("1.0-milestone", "1.0-rc", Ordering::Less),
    ("1.0-rc", "1.0-snapshot", Ordering::Less),
    ("1.0-beta-1", "1.0-SNAPSHOT", Ordering::Less),
    ("1.0-SNAPSHOT", "1.0", Ordering::Less),
    ("1.0", "1.0-sp", Ordering::Less),
    ("1.0-sp", "1.0-abc", Ordering::Less),
    ("1.0-alpha-1-SNAPSHOT", "1.0-alpha-1", Ordering::Less),
    // Hyphen-number sections sort above the bare release.
    ("1.0", "1.0-1", Ordering::Less),
    ("1.0-1", "1.0-2", Ordering::Less),
    ("1.0.0", "1.0-1", Ordering::Less),
    ("2.0-1", "2.0.1", Ordering::Less),
    // Unknown qualifiers: lexical order, after every known one.
    ("2.0.1-klm", "2.0.1-lmn", Ordering::Less),
    ("2.0.1", "2.0.1-xyz", Ordering::Less),
    ("2.0.1", "2.0.1-123", Ordering::Less),
    ("2.0.1-xyz", "2.0.1-123", Ordering::Less),
    // A null dotted item followed by more content still sorts pre-release.
    ("1-0.alpha", "1", Ordering::Less),
    ("1-0.beta", "1", Ordering::Less),
];

/// Strictly increasing qualifier ladder around version 1.
pub const QUALIFIER_LADDER: &[&str] = &[
    "1-alpha2snapshot",
    "1-alpha2",
    "1-alpha-123",
    "1-beta-2",
    "1-beta123",
    "1-m2",
    "1-m11",
    "1-rc",
    "1-cr2",
    "1-rc123",
    "1-SNAPSHOT",
    "1",
    "1-sp",
    "1-sp2",
    "1-sp123",
    "1-abc",
    "1-def",
    "1-pom-1",
    "1-1-snapshot",
    "1-1",
    "1-2",
    "1-123",
];

/// Strictly increasing numeric/transition ladder.
pub const NUMBER_LADDER: &[&str] = &[
    "2.0",
    "2-1",
    "2.0.a",
    "2.0.0.a",
    "2.0.2",
    "2.0.123",
    "2.1.0",
    "2.1-a",
    "2.1b",
    "2.1-1",
    "2.1.0.1",
    "2.2",
    "2.123",
    "11.a2",
    "11.b2",
    "11a2",
    "11b2",
    "11c2",
    "102.112",
];
