//! The four solvers: genetic algorithm, ant colony optimization, fruit fly
//! optimization and the bat algorithm.
//!
//! | solver | encodings                                | evaluation granule |
//! |--------|------------------------------------------|--------------------|
//! | GA     | bitstring, permutation, real, mixed      | one individual     |
//! | ACO    | permutation                              | one tour           |
//! | FOA    | real vector                              | one fly            |
//! | BA     | real vector                              | one bat move       |
//!
//! Every solver evaluates through [`crate::engine::Evaluator`], which stops
//! exactly at `max_evaluations`; partial generations, colonies or swarms are
//! cut short rather than overrunning the budget.

pub mod aco;
pub mod ba;
pub mod foa;
pub mod ga;
pub mod operators;

pub use aco::{
    aco_run, aco_transition_probability, aco_update_pheromone, AcoError, AcoParams,
    DepositPolicy, PheromoneMatrix, Tour,
};
pub use ba::BaParams;
pub use foa::{FoaParams, FruitFlySwarm};
pub use ga::{ga_step, ArrayCrossover, GaParams, Selection};
