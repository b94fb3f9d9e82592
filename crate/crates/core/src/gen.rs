//! Seeded random bases and queries for the property suites and the oracle.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::prop::{DefaultBase, Formula, KnowledgeBase, Vocabulary, WorldSet};
use crate::zcore::stratify;

/// Deterministic generator used by every random suite.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn literal<R: Rng>(rng: &mut R, atoms: usize) -> Formula {
    let a = Formula::atom(rng.gen_range(0..atoms));
    if rng.gen_bool(0.5) {
        Formula::not(a)
    } else {
        a
    }
}

/// Formula of depth at most `depth`, biased towards literals and conjunctions.
pub fn formula<R: Rng>(rng: &mut R, atoms: usize, depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.35) {
        return literal(rng, atoms);
    }
    let roll: f64 = rng.gen();
    if roll < 0.1 {
        return Formula::not(formula(rng, atoms, depth - 1));
    }
    let l = formula(rng, atoms, depth - 1);
    let r = formula(rng, atoms, depth - 1);
    if roll < 0.6 {
        Formula::and(l, r)
    } else if roll < 0.85 {
        Formula::or(l, r)
    } else if roll < 0.95 {
        Formula::implies(l, r)
    } else {
        Formula::iff(l, r)
    }
}

/// A formula with at least one model among `2^atoms` worlds.
pub fn satisfiable<R: Rng>(rng: &mut R, atoms: usize, depth: u32) -> Formula {
    loop {
        let f = formula(rng, atoms, depth);
        if !WorldSet::models(&f, atoms).is_empty() {
            return f;
        }
    }
}

/// Rule `alpha ~> beta` with `alpha & beta` satisfiable.
pub fn rule<R: Rng>(rng: &mut R, atoms: usize) -> (Formula, Formula) {
    loop {
        let alpha = if rng.gen_bool(0.7) {
            let mut a = literal(rng, atoms);
            if rng.gen_bool(0.4) {
                a = Formula::and(a, literal(rng, atoms));
            }
            a
        } else {
            formula(rng, atoms, 2)
        };
        let beta = if rng.gen_bool(0.75) {
            literal(rng, atoms)
        } else {
            formula(rng, atoms, 1)
        };
        let both = Formula::and(alpha.clone(), beta.clone());
        if !WorldSet::models(&both, atoms).is_empty() {
            return (alpha, beta);
        }
    }
}

pub fn base<R: Rng>(rng: &mut R, atoms: usize, rules: usize) -> DefaultBase {
    DefaultBase::from_pairs((0..rules).map(|_| rule(rng, atoms)))
}

/// A random base over a fixed universe size.
#[derive(Debug, Clone)]
pub struct Sample {
    pub atoms: usize,
    pub base: DefaultBase,
}

impl Sample {
    /// Knowledge base with atoms named `a`, `b`, `c`, ...
    pub fn knowledge_base(&self) -> KnowledgeBase {
        let names = (0..self.atoms).map(|i| ((b'a' + i as u8) as char).to_string());
        let vocab = Vocabulary::from_atoms(names).expect("generated names are valid");
        KnowledgeBase::new(vocab, self.base.clone())
    }
}

/// A Z-consistent base with 2..=`max_atoms` atoms and 1..=`max_rules` rules.
pub fn consistent_sample<R: Rng>(rng: &mut R, max_atoms: usize, max_rules: usize) -> Sample {
    loop {
        let atoms = rng.gen_range(2..=max_atoms.max(2));
        let rules = rng.gen_range(1..=max_rules.max(1));
        let b = base(rng, atoms, rules);
        if stratify(&b, atoms).is_consistent() {
            return Sample { atoms, base: b };
        }
    }
}

/// Query `(alpha, beta)` with satisfiable `alpha`.
pub fn query<R: Rng>(rng: &mut R, atoms: usize) -> (Formula, Formula) {
    let alpha = satisfiable(rng, atoms, 2);
    let beta = if rng.gen_bool(0.6) {
        literal(rng, atoms)
    } else {
        formula(rng, atoms, 1)
    };
    (alpha, beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = consistent_sample(&mut rng(7), 4, 5);
        let b = consistent_sample(&mut rng(7), 4, 5);
        assert_eq!(a.atoms, b.atoms);
        assert_eq!(a.base, b.base);
    }

    #[test]
    fn samples_are_well_formed() {
        let mut r = rng(1);
        for _ in 0..50 {
            let s = consistent_sample(&mut r, 4, 5);
            assert!((2..=4).contains(&s.atoms));
            assert!((1..=5).contains(&s.base.len()));
            assert!(s.base.check_atoms(s.atoms).is_ok());
            for rl in s.base.rules() {
                assert!(!WorldSet::models(&rl.verifier(), s.atoms).is_empty());
            }
            let (alpha, beta) = query(&mut r, s.atoms);
            assert!(!WorldSet::models(&alpha, s.atoms).is_empty());
            assert!(beta.check_atoms(s.atoms).is_ok());
            let kb = s.knowledge_base();
            let again = KnowledgeBase::parse(&kb.to_kb_string(), 24).unwrap();
            assert_eq!(again.base, s.base);
        }
    }
}
