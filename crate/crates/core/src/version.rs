//! Total ordering over Maven version strings.
//!
//! Version strings are normalized into a flat token list and compared
//! token by token under the Maven version-order rules:
//!
//! - tokens are separated by `.`, `-` and by transitions between digits
//!   and non-digits (a transition counts as `-`);
//! - empty segments become the number `0`;
//! - comparison is case-insensitive;
//! - the shorthands `a`, `b`, `m` mean `alpha`, `beta`, `milestone` only
//!   when directly followed by a digit (`1a1` equals `1-alpha-1`, while
//!   `1-a-1` keeps the literal qualifier `a`);
//! - `ga`, `final` and `release` are aliases of the empty (release)
//!   qualifier, `cr` is an alias of `rc`;
//! - known qualifiers rank `alpha < beta < milestone < rc < snapshot <
//!   "" (release) < sp`; all other qualifiers sort after `sp`, among
//!   themselves in lexical order;
//! - numbers are newer than qualifiers, and at the same position
//!   `.qualifier < -qualifier < -number < .number`;
//! - trailing null tokens (`0`, the release qualifier) of every
//!   dot-separated section are trimmed, so `1`, `1.0` and `1.0.0-ga`
//!   all normalize to the same token list.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

/// Errors raised by version parsing and range matching.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VersionError {
    /// Empty or blank version string.
    #[error("EmptyVersion: version strings must contain at least one character")]
    EmptyVersion,
    /// Range expression that does not follow the bracket-interval grammar.
    #[error("MalformedRange: {0:?}")]
    MalformedRange(String),
}

/// Separator class recorded in front of every token.
///
/// The first token of a version carries an implicit [`Separator::Dot`];
/// digit/letter transitions count as [`Separator::Hyphen`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Separator {
    Dot,
    Hyphen,
}

/// One normalized token: a non-negative integer or a qualifier string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TokenItem {
    Numeric(BigUint),
    Qualifier(String),
}

impl TokenItem {
    /// Null tokens are trimmed from section tails: the number zero and
    /// the empty (release) qualifier.
    fn is_null(&self) -> bool {
        match self {
            TokenItem::Numeric(n) => n.is_zero(),
            TokenItem::Qualifier(q) => q.is_empty(),
        }
    }
}

/// A separator-class / item pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub separator: Separator,
    pub item: TokenItem,
}

/// A version string normalized into its ordering tokens.
///
/// Equality, hashing and ordering are defined over the token list only;
/// the raw source string is carried along for display and round-trips.
/// Two versions compare [`Ordering::Equal`] exactly when their token
/// lists are equal (`1.0` vs `1.0.0`, `1-ga` vs `1`).
#[derive(Debug, Clone)]
pub struct VersionTokens {
    tokens: Vec<Token>,
    raw: String,
}

const KNOWN_QUALIFIERS: [&str; 7] = ["alpha", "beta", "milestone", "rc", "snapshot", "", "sp"];

fn qualifier_rank(q: &str) -> Option<usize> {
    KNOWN_QUALIFIERS.iter().position(|k| *k == q)
}

/// Known qualifiers by rank, then every unknown qualifier lexically.
fn cmp_qualifiers(a: &str, b: &str) -> Ordering {
    match (qualifier_rank(a), qualifier_rank(b)) {
        (Some(i), Some(j)) => i.cmp(&j),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a.cmp(b),
    }
}

fn normalize_qualifier(text: &str, followed_by_digit: bool) -> String {
    let text = if followed_by_digit && text.len() == 1 {
        match text {
            "a" => "alpha",
            "b" => "beta",
            "m" => "milestone",
            other => other,
        }
    } else {
        text
    };
    match text {
        "ga" | "final" | "release" => String::new(),
        "cr" => "rc".to_owned(),
        other => other.to_owned(),
    }
}

fn make_item(segment: &str, is_digits: bool, followed_by_digit: bool) -> TokenItem {
    if is_digits {
        TokenItem::Numeric(segment.parse().expect("segment is all ASCII digits"))
    } else {
        TokenItem::Qualifier(normalize_qualifier(segment, followed_by_digit))
    }
}

fn tokenize(lower: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut sep = Separator::Dot;
    let mut start = 0usize;
    let mut in_digits = false;
    for (i, ch) in lower.char_indices() {
        if ch == '.' || ch == '-' {
            let item = if i == start {
                TokenItem::Numeric(BigUint::zero())
            } else {
                make_item(&lower[start..i], in_digits, false)
            };
            tokens.push(Token {
                separator: sep,
                item,
            });
            sep = if ch == '.' {
                Separator::Dot
            } else {
                Separator::Hyphen
            };
            start = i + 1;
            in_digits = false;
        } else {
            let is_digit = ch.is_ascii_digit();
            if i > start && is_digit != in_digits {
                tokens.push(Token {
                    separator: sep,
                    item: make_item(&lower[start..i], in_digits, is_digit),
                });
                sep = Separator::Hyphen;
                start = i;
            }
            in_digits = is_digit;
        }
    }
    if lower.len() > start {
        tokens.push(Token {
            separator: sep,
            item: make_item(&lower[start..], in_digits, false),
        });
    }
    tokens
}

/// Drops trailing null tokens from every dot-separated section. A section
/// runs from a hyphen token (or the version start) up to the next hyphen
/// token; sections left empty disappear entirely.
fn trim_nulls(tokens: Vec<Token>) -> Vec<Token> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        let mut end = i + 1;
        while end < tokens.len() && tokens[end].separator == Separator::Dot {
            end += 1;
        }
        let section = &tokens[i..end];
        let keep = section
            .iter()
            .rposition(|t| !t.item.is_null())
            .map_or(0, |p| p + 1);
        out.extend_from_slice(&section[..keep]);
        i = end;
    }
    out
}

/// Position of a token in the `.qualifier < -qualifier < -number <
/// .number` order, used when two tokens at the same index disagree on
/// their separator class.
fn category(token: &Token) -> u8 {
    match (token.separator, &token.item) {
        (Separator::Dot, TokenItem::Qualifier(_)) => 0,
        (Separator::Hyphen, TokenItem::Qualifier(_)) => 1,
        (Separator::Hyphen, TokenItem::Numeric(_)) => 2,
        (Separator::Dot, TokenItem::Numeric(_)) => 3,
    }
}

fn cmp_pair(a: &Token, b: &Token) -> Ordering {
    if a.separator != b.separator {
        return category(a).cmp(&category(b));
    }
    match (&a.item, &b.item) {
        (TokenItem::Numeric(x), TokenItem::Numeric(y)) => x.cmp(y),
        (TokenItem::Qualifier(x), TokenItem::Qualifier(y)) => cmp_qualifiers(x, y),
        // Numbers are newer than qualifiers.
        (TokenItem::Numeric(_), TokenItem::Qualifier(_)) => Ordering::Greater,
        (TokenItem::Qualifier(_), TokenItem::Numeric(_)) => Ordering::Less,
    }
}

/// Comparison of a surplus token against the exhausted side. `Equal`
/// means "keep scanning": a zero or release qualifier in the surplus
/// does not decide the order (`1-0.alpha` is still older than `1`).
fn cmp_vs_null(token: &Token) -> Ordering {
    match &token.item {
        TokenItem::Numeric(n) => {
            if n.is_zero() {
                Ordering::Equal
            } else {
                Ordering::Greater
            }
        }
        TokenItem::Qualifier(q) => cmp_qualifiers(q, ""),
    }
}

fn cmp_tokens(a: &[Token], b: &[Token]) -> Ordering {
    for k in 0..a.len().max(b.len()) {
        let ord = match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) => cmp_pair(x, y),
            (Some(x), None) => cmp_vs_null(x),
            (None, Some(y)) => cmp_vs_null(y).reverse(),
            (None, None) => unreachable!("k < max(len)"),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

impl VersionTokens {
    /// Tokenizes a version string. Every non-blank input parses; there is
    /// no rejection of unusual qualifiers.
    pub fn parse(text: &str) -> Result<Self, VersionError> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(VersionError::EmptyVersion);
        }
        let lower = trimmed.to_lowercase();
        Ok(VersionTokens {
            tokens: trim_nulls(tokenize(&lower)),
            raw: trimmed.to_owned(),
        })
    }

    /// The normalized token list. May be empty (`"0"` trims to nothing).
    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    /// The source string, as written (surrounding whitespace removed).
    pub fn raw(&self) -> &str {
        &self.raw
    }

    /// Canonical rendering of the normalized tokens. Tokenizing the
    /// result yields the same token list.
    pub fn canonical(&self) -> String {
        if self.tokens.is_empty() {
            return "0".to_owned();
        }
        let mut out = String::new();
        for (i, token) in self.tokens.iter().enumerate() {
            match token.separator {
                Separator::Dot if i == 0 => {}
                Separator::Dot => out.push('.'),
                // A leading hyphen token needs a null head to re-parse.
                Separator::Hyphen => {
                    if i == 0 {
                        out.push('0');
                    }
                    out.push('-');
                }
            }
            match &token.item {
                TokenItem::Numeric(n) => out.push_str(&n.to_string()),
                TokenItem::Qualifier(q) if q.is_empty() => out.push_str("ga"),
                TokenItem::Qualifier(q) => out.push_str(q),
            }
        }
        out
    }

    /// True when this version is strictly older than `reference`.
    pub fn is_lower(&self, reference: &str) -> Result<bool, VersionError> {
        let other = VersionTokens::parse(reference)?;
        Ok(self.cmp(&other) == Ordering::Less)
    }

    /// Membership in a bracket-interval range such as `[1.0,2.0)`,
    /// `[1.5]` or `(,1.0]`. An omitted bound is unbounded.
    pub fn matches_range(&self, range: &str) -> Result<bool, VersionError> {
        let range = VersionRange::parse(range)?;
        Ok(range.contains(self))
    }
}

impl PartialEq for VersionTokens {
    fn eq(&self, other: &Self) -> bool {
        self.tokens == other.tokens
    }
}

impl Eq for VersionTokens {}

impl std::hash::Hash for VersionTokens {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.tokens.hash(state);
    }
}

impl PartialOrd for VersionTokens {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VersionTokens {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_tokens(&self.tokens, &other.tokens)
    }
}

impl fmt::Display for VersionTokens {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

/// A parsed bracket-interval version range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VersionRange {
    lower: Option<(VersionTokens, bool)>,
    upper: Option<(VersionTokens, bool)>,
}

impl VersionRange {
    pub fn parse(text: &str) -> Result<Self, VersionError> {
        let malformed = || VersionError::MalformedRange(text.to_owned());
        let trimmed = text.trim();
        if trimmed.len() < 2 {
            return Err(malformed());
        }
        let open = trimmed.chars().next().ok_or_else(malformed)?;
        let close = trimmed.chars().next_back().ok_or_else(malformed)?;
        let lower_inclusive = match open {
            '[' => true,
            '(' => false,
            _ => return Err(malformed()),
        };
        let upper_inclusive = match close {
            ']' => true,
            ')' => false,
            _ => return Err(malformed()),
        };
        let inner = &trimmed[1..trimmed.len() - 1];
        if inner.contains(['[', ']', '(', ')']) {
            return Err(malformed());
        }
        let parse_bound = |part: &str| -> Result<Option<VersionTokens>, VersionError> {
            let part = part.trim();
            if part.is_empty() {
                Ok(None)
            } else {
                VersionTokens::parse(part).map(Some)
            }
        };
        let mut parts = inner.split(',');
        let first = parts.next().ok_or_else(malformed)?;
        match (parts.next(), parts.next()) {
            // Single version: an exact range, only valid as `[v]`.
            (None, _) => {
                if !(lower_inclusive && upper_inclusive) {
                    return Err(malformed());
                }
                let exact = parse_bound(first)?.ok_or_else(malformed)?;
                Ok(VersionRange {
                    lower: Some((exact.clone(), true)),
                    upper: Some((exact, true)),
                })
            }
            (Some(second), None) => Ok(VersionRange {
                lower: parse_bound(first)?.map(|v| (v, lower_inclusive)),
                upper: parse_bound(second)?.map(|v| (v, upper_inclusive)),
            }),
            (Some(_), Some(_)) => Err(malformed()),
        }
    }

    pub fn contains(&self, version: &VersionTokens) -> bool {
        if let Some((lower, inclusive)) = &self.lower {
            match version.cmp(lower) {
                Ordering::Less => return false,
                Ordering::Equal if !inclusive => return false,
                _ => {}
            }
        }
        if let Some((upper, inclusive)) = &self.upper {
            match version.cmp(upper) {
                Ordering::Greater => return false,
                Ordering::Equal if !inclusive => return false,
                _ => {}
            }
        }
        true
    }
}
