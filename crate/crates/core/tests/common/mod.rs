#![allow(unused_imports, dead_code)]

//! Shared setup for the integration suites. The generators themselves live
//! in [`britton_core::instances`] so the bench tooling runs on the same
//! distributions.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use britton_core::{FingerprintParams, GeneratorAlphabet};

pub use britton_core::instances::{
    random_balanced_items, random_cyclic_word, random_hnn_instance, random_letter,
    random_reduced_word, random_slp, random_system_with_cuts, random_word, same_word_two_ways,
    RandomHnn,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn alphabet(names: &[&str], seed: u64) -> Arc<GeneratorAlphabet> {
    GeneratorAlphabet::new(names.iter().copied(), FingerprintParams::from_seed(seed)).unwrap()
}
