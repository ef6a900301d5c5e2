//! Shared fixtures for the kernel benchmarks in `benches/`.

use ltensor_core::characters::DirichletCharacter;
use ltensor_core::lfunctions::{find_zeros, ZeroList};
use ltensor_core::tensor::TensorEvalParams;

/// A character by label; panics on an unknown label (fixtures are fixed).
pub fn character(label: &str) -> DirichletCharacter {
    DirichletCharacter::from_label(label).expect("fixture label")
}

/// Zeros of the character with the given label up to `height`.
pub fn zeros(label: &str, height: f64) -> ZeroList {
    find_zeros(&character(label), height).expect("fixture zeros")
}

/// Pair parameters with reduced truncations so one evaluation takes milliseconds.
pub fn small_pair_params(chi1: &DirichletCharacter, chi2: &DirichletCharacter, prime_limit: u64) -> TensorEvalParams {
    let mut p = TensorEvalParams::for_characters(chi1, chi2)
        .expect("fixture params")
        .with_prime_limit(prime_limit);
    p.inner_limit = 100_000;
    p
}
