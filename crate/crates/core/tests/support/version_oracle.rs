//! Reference comparator for Maven version order, used as the oracle for
//! the production token model.
//!
//! This is a direct port of the classic stack-of-nested-lists algorithm:
//! a version parses into a list of items where every hyphen (or
//! digit/letter transition) opens a nested sub-list, trailing null items
//! are pruned per list, and comparison recurses structurally. It shares
//! no code with `gavgraph::version`.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Int(BigUint),
    Str(String),
    List(Vec<Item>),
}

const QUALIFIERS: [&str; 7] = ["alpha", "beta", "milestone", "rc", "snapshot", "", "sp"];

/// Known qualifiers map to their index rendered as a string; unknown ones
/// get a `"7-"` prefix, so plain string comparison of the results yields
/// rank order for known qualifiers and lexical order for unknown ones.
fn comparable_qualifier(q: &str) -> String {
    match QUALIFIERS.iter().position(|k| *k == q) {
        Some(i) => i.to_string(),
        None => format!("{}-{}", QUALIFIERS.len(), q),
    }
}

fn release_index() -> String {
    comparable_qualifier("")
}

fn alias(value: &str, followed_by_digit: bool) -> String {
    let value = if followed_by_digit && value.len() == 1 {
        match value {
            "a" => "alpha",
            "b" => "beta",
            "m" => "milestone",
            other => other,
        }
    } else {
        value
    };
    match value {
        "ga" | "final" | "release" => String::new(),
        "cr" => "rc".to_owned(),
        other => other.to_owned(),
    }
}

fn parse_item(is_digit: bool, segment: &str, followed_by_digit: bool) -> Item {
    if is_digit {
        Item::Int(segment.parse().expect("digit segment"))
    } else {
        Item::Str(alias(segment, followed_by_digit))
    }
}

fn is_null(item: &Item) -> bool {
    match item {
        Item::Int(n) => n.is_zero(),
        Item::Str(s) => comparable_qualifier(s) == release_index(),
        Item::List(items) => items.is_empty(),
    }
}

/// Removes trailing null items, scanning past (but keeping) trailing
/// non-null sub-lists, and stopping at the first non-null plain item.
fn normalize(items: &mut Vec<Item>) {
    let mut i = items.len();
    while i > 0 {
        i -= 1;
        if is_null(&items[i]) {
            items.remove(i);
        } else if !matches!(items[i], Item::List(_)) {
            break;
        }
    }
}

pub fn parse(version: &str) -> Vec<Item> {
    let lower = version.trim().to_lowercase();
    let mut stack: Vec<Vec<Item>> = vec![Vec::new()];
    let mut start = 0usize;
    let mut is_digit = false;
    for (i, ch) in lower.char_indices() {
        if ch == '.' || ch == '-' {
            let item = if i == start {
                Item::Int(BigUint::zero())
            } else {
                parse_item(is_digit, &lower[start..i], false)
            };
            stack.last_mut().unwrap().push(item);
            start = i + 1;
            if ch == '-' {
                stack.push(Vec::new());
            }
        } else if ch.is_ascii_digit() {
            if !is_digit && i > start {
                let item = Item::Str(alias(&lower[start..i], true));
                stack.last_mut().unwrap().push(item);
                start = i;
                stack.push(Vec::new());
            }
            is_digit = true;
        } else {
            if is_digit && i > start {
                let item = parse_item(true, &lower[start..i], false);
                stack.last_mut().unwrap().push(item);
                start = i;
                stack.push(Vec::new());
            }
            is_digit = false;
        }
    }
    if lower.len() > start {
        let item = parse_item(is_digit, &lower[start..], false);
        stack.last_mut().unwrap().push(item);
    }
    while stack.len() > 1 {
        let mut top = stack.pop().unwrap();
        normalize(&mut top);
        stack.last_mut().unwrap().push(Item::List(top));
    }
    let mut items = stack.pop().unwrap();
    normalize(&mut items);
    items
}

fn cmp_vs_nothing(item: &Item) -> Ordering {
    match item {
        Item::Int(n) => {
            if n.is_zero() {
                Ordering::Equal
            } else {
                Ordering::Greater
            }
        }
        Item::Str(s) => comparable_qualifier(s).cmp(&release_index()),
        Item::List(items) => {
            for inner in items {
                let ord = cmp_vs_nothing(inner);
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            Ordering::Equal
        }
    }
}

fn cmp_items(a: &Item, b: &Item) -> Ordering {
    use Item::*;
    match (a, b) {
        (Int(x), Int(y)) => x.cmp(y),
        (Int(_), Str(_)) => Ordering::Greater,
        (Int(_), List(_)) => Ordering::Greater,
        (Str(_), Int(_)) => Ordering::Less,
        (Str(x), Str(y)) => comparable_qualifier(x).cmp(&comparable_qualifier(y)),
        (Str(_), List(_)) => Ordering::Less,
        (List(_), Int(_)) => Ordering::Less,
        (List(_), Str(_)) => Ordering::Greater,
        (List(x), List(y)) => {
            for k in 0..x.len().max(y.len()) {
                let ord = match (x.get(k), y.get(k)) {
                    (Some(l), Some(r)) => cmp_items(l, r),
                    (Some(l), None) => cmp_vs_nothing(l),
                    (None, Some(r)) => cmp_vs_nothing(r).reverse(),
                    (None, None) => unreachable!(),
                };
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            Ordering::Equal
        }
    }
}

/// Compares two version strings under the reference algorithm.
pub fn compare(a: &str, b: &str) -> Ordering {
    cmp_items(&Item::List(parse(a)), &Item::List(parse(b)))
}
