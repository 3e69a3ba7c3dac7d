//! Shared fixtures and independent oracles for the integration suites.
//!
//! Everything in here is deliberately written against the raw inputs
//! (strings, record lists, edge lists) rather than the crate's own data
//! structures, so the suites compare two independent computation paths.

#![allow(dead_code)]

pub mod civil;
pub mod corpus;
pub mod vectors;
pub mod version_oracle;
