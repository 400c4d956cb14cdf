//! Nature-inspired optimization toolkit: a shared search engine, four
//! solvers, benchmark problems with exact oracles, a two-level taxonomy of
//! algorithms with a problem-to-algorithm recommender, and an experiment
//! harness.

pub mod algorithms;
pub mod benchmarks;
pub mod engine;
pub mod taxonomy;
pub mod harness;
