//! Distributed submodular maximization at desk scale.
//!
//! The crate provides the submodular-oracle abstraction with oracle-call
//! accounting, the paper-standard objective families (coverage, graph cut,
//! exemplar clustering, Gaussian-process information gain, DPP log-det),
//! feasibility oracles for cardinality/matroid/knapsack-style constraints,
//! a greedy engine family with lazy evaluation, the GreeDi two-round
//! distributed protocol over simulated machines with naive reference
//! protocols, exhaustive ground-truth oracles with approximation-bound
//! checkers, and a seeded experiment harness with CSV output.
//!
//! Machines are simulated by a worker pool; all randomness flows from
//! explicit seeds, and results are invariant to the worker count.

pub mod constraints;
pub mod data;
pub mod engines;
pub mod error;
pub mod experiment;
pub mod greedi;
pub mod objective;
pub mod objectives;
pub mod rng;
pub mod set;
pub mod structure;
pub mod suite;
pub mod verify;

pub use constraints::{
    Cardinality, Constraint, Intersection, Knapsack, MatroidOracle, PSystemOracle,
    PartitionMatroid, Unconstrained,
};
pub use engines::{
    constrained_greedy, cost_benefit_greedy, greedy, greedy_cardinality, lazy_greedy,
    lazy_greedy_cardinality, random_greedy, tau, EngineKind,
};
pub use error::{Error, Result};
pub use greedi::{
    baseline, greedi, greedi_decomposable, greedi_general, naive_kround_greedy, partition_uniform,
    BaselineKind, GreediConfig, GreediTrace, Partition,
};
pub use objective::{Evaluator, Objective, Oracle, Solution, VALUE_TOL};
pub use set::{ElementId, ElementSet, GroundSet, PayloadKind};
pub use structure::{
    verify_monotone, verify_submodular, MonotonicityWitness, SubmodularityWitness,
};
pub use verify::{
    brute_force_opt, check_bound, exact_two_round, worst_case_instance, Bound, BoundReport,
    WorstCaseInstance,
};
