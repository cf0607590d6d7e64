//! Toolkit for working with per-instance algorithm selection scenarios.
//!
//! A scenario bundles problem instances, a portfolio of algorithms,
//! precomputed performance data, instance features with per-group costs,
//! and cross-validation folds. This crate reads and writes the on-disk
//! scenario layout, validates it, trains selection models over it
//! (classification, regression, clustering), evaluates them against the
//! virtual-best and single-best baselines, and scores external
//! submissions. A seeded synthetic generator with planted structure
//! backs the test suite so nothing here depends on downloading real
//! datasets.

pub mod arff;
pub mod cli;
pub mod description;
pub mod eda;
pub mod evaluation;
pub mod fetch;
pub mod gen;
pub mod io;
pub mod learners;
pub mod preprocess;
pub mod rng;
pub mod scenario;
pub mod selectors;
pub mod subset;
pub mod validate;
pub mod zip;
