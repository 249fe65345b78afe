//! Shared fixtures for the benchmark suite.

use std::sync::Arc;

use greedi_core::data::{gen_gaussian_mixture, gen_random_sets};
use greedi_core::objectives::{Coverage, Exemplar};

pub fn exemplar_fixture(n: usize, d: usize, seed: u64) -> Exemplar {
    let data = gen_gaussian_mixture(10, n, d, 0.3, seed).expect("valid generator parameters");
    Exemplar::new(Arc::new(data), 2.0).expect("valid exemplar instance")
}

pub fn coverage_fixture(n: usize, seed: u64) -> Coverage {
    let sets = gen_random_sets(n, n * 2, 0.002, seed).expect("valid generator parameters");
    Coverage::from_dataset(&sets)
}
