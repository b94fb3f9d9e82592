#![allow(dead_code)]

use std::path::PathBuf;

use beldef::gen::{self, Sample};
use beldef::{Formula, KnowledgeBase};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> KnowledgeBase {
    KnowledgeBase::load(fixture_path(name), 24).expect("fixture loads")
}

/// Parses a query pair, registering any new atoms.
pub fn query(kb: &mut KnowledgeBase, alpha: &str, beta: &str) -> (Formula, Formula) {
    (kb.parse_formula(alpha).unwrap(), kb.parse_formula(beta).unwrap())
}

pub struct Case {
    pub sample: Sample,
    pub queries: Vec<(Formula, Formula)>,
}

/// Consistent bases with at most `max_rules` rules over at most `max_atoms`
/// atoms, each with `queries` queries.
pub fn suite(seed: u64, bases: usize, max_atoms: usize, max_rules: usize, queries: usize) -> Vec<Case> {
    let mut rng = gen::rng(seed);
    (0..bases)
        .map(|_| {
            let sample = gen::consistent_sample(&mut rng, max_atoms, max_rules);
            let queries = (0..queries).map(|_| gen::query(&mut rng, sample.atoms)).collect();
            Case { sample, queries }
        })
        .collect()
}
