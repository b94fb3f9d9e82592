//! Shared inputs for the benchmarks.

use std::path::PathBuf;

use beldef::gen::{self, Sample};
use beldef::KnowledgeBase;

/// Loads a shipped fixture by file name.
pub fn fixture(name: &str) -> KnowledgeBase {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    KnowledgeBase::load(&path, 16).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Seeded consistent random bases.
pub fn samples(seed: u64, count: usize, max_atoms: usize, max_rules: usize) -> Vec<Sample> {
    let mut rng = gen::rng(seed);
    (0..count)
        .map(|_| gen::consistent_sample(&mut rng, max_atoms, max_rules))
        .collect()
}
