//! Exact-rational belief functions: masses, `bel`, `pl`, Dempster
//! conditioning and combination.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::prop::{World, WorldSet};

/// Normalized basic belief assignment; focal elements are exactly the keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MassAssignment {
    atoms: usize,
    focal: BTreeMap<WorldSet, BigRational>,
}

impl MassAssignment {
    /// Builds an assignment, merging repeated sets and dropping zero masses.
    pub fn new(
        atoms: usize,
        entries: impl IntoIterator<Item = (WorldSet, BigRational)>,
    ) -> Result<Self> {
        let mut focal: BTreeMap<WorldSet, BigRational> = BTreeMap::new();
        for (set, mass) in entries {
            if set.atoms() != atoms {
                return Err(Error::UniverseMismatch);
            }
            if mass < BigRational::zero() {
                return Err(Error::InvalidMass("negative mass".into()));
            }
            if mass.is_zero() {
                continue;
            }
            if set.is_empty() {
                return Err(Error::InvalidMass("positive mass on the empty set".into()));
            }
            *focal.entry(set).or_insert_with(BigRational::zero) += mass;
        }
        let total: BigRational = focal.values().sum();
        if !total.is_one() {
            return Err(Error::InvalidMass(format!("masses sum to {total}, not 1")));
        }
        Ok(Self { atoms, focal })
    }

    /// `m(Omega) = 1`.
    pub fn vacuous(atoms: usize) -> Self {
        let mut focal = BTreeMap::new();
        focal.insert(WorldSet::full(atoms), BigRational::one());
        Self { atoms, focal }
    }

    /// Mass `1 - e` on `set`, `e` on the whole universe.
    pub fn simple_support(set: &WorldSet, e: &BigRational) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::EmptyFocal);
        }
        if *e <= BigRational::zero() || *e >= BigRational::one() {
            return Err(Error::EpsilonOutOfRange);
        }
        let atoms = set.atoms();
        Self::new(
            atoms,
            [
                (set.clone(), BigRational::one() - e),
                (WorldSet::full(atoms), e.clone()),
            ],
        )
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn mass(&self, set: &WorldSet) -> BigRational {
        self.focal.get(set).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn focal_elements(&self) -> impl Iterator<Item = (&WorldSet, &BigRational)> {
        self.focal.iter()
    }

    pub fn focal_count(&self) -> usize {
        self.focal.len()
    }

    /// `bel(A) = sum of m(B) for B subset of A`.
    pub fn belief(&self, set: &WorldSet) -> BigRational {
        self.focal
            .iter()
            .filter(|(b, _)| b.is_subset(set))
            .map(|(_, m)| m)
            .sum()
    }

    /// `pl(A) = sum of m(B) for B meeting A`.
    pub fn plausibility(&self, set: &WorldSet) -> BigRational {
        self.focal
            .iter()
            .filter(|(b, _)| b.intersects(set))
            .map(|(_, m)| m)
            .sum()
    }

    pub fn plausibility_of(&self, world: World) -> BigRational {
        self.focal
            .iter()
            .filter(|(b, _)| b.contains(world))
            .map(|(_, m)| m)
            .sum()
    }

    /// Dempster conditioning on `set`; fails when `pl(set) = 0`.
    pub fn condition(&self, set: &WorldSet) -> Result<ConditionalBelief<'_>> {
        if set.atoms() != self.atoms {
            return Err(Error::UniverseMismatch);
        }
        let outside = set.complement();
        let bel_outside = self.belief(&outside);
        let denominator = BigRational::one() - &bel_outside;
        if denominator.is_zero() {
            return Err(Error::DegenerateConditioning);
        }
        Ok(ConditionalBelief {
            mass: self,
            outside,
            bel_outside,
            denominator,
        })
    }

    /// Normalized Dempster combination.
    pub fn combine(&self, other: &Self) -> Result<Self> {
        if self.atoms != other.atoms {
            return Err(Error::UniverseMismatch);
        }
        let mut joint: BTreeMap<WorldSet, BigRational> = BTreeMap::new();
        let mut conflict = BigRational::zero();
        for (b, mb) in &self.focal {
            for (c, mc) in &other.focal {
                let product = mb * mc;
                let meet = b.intersection(c);
                if meet.is_empty() {
                    conflict += product;
                } else {
                    *joint.entry(meet).or_insert_with(BigRational::zero) += product;
                }
            }
        }
        let norm = BigRational::one() - conflict;
        if norm.is_zero() {
            return Err(Error::TotalConflict);
        }
        for v in joint.values_mut() {
            *v /= &norm;
        }
        Ok(Self {
            atoms: self.atoms,
            focal: joint,
        })
    }

    /// Combination of a sequence; the vacuous assignment for an empty input.
    pub fn combine_all<'a>(
        atoms: usize,
        parts: impl IntoIterator<Item = &'a MassAssignment>,
    ) -> Result<Self> {
        parts
            .into_iter()
            .try_fold(Self::vacuous(atoms), |acc, m| acc.combine(m))
    }

    /// Whether the focal elements form a chain under inclusion.
    pub fn is_consonant(&self) -> bool {
        let mut sets: Vec<&WorldSet> = self.focal.keys().collect();
        sets.sort_by_key(|s| s.len());
        sets.windows(2).all(|w| w[0].is_subset(w[1]))
    }
}

/// `X -> bel(X | A)` for a fixed conditioning set `A`.
#[derive(Debug, Clone)]
pub struct ConditionalBelief<'a> {
    mass: &'a MassAssignment,
    outside: WorldSet,
    bel_outside: BigRational,
    denominator: BigRational,
}

impl ConditionalBelief<'_> {
    /// `(bel(X u A^c) - bel(A^c)) / (bel(Omega) - bel(A^c))`.
    pub fn belief(&self, set: &WorldSet) -> BigRational {
        (self.mass.belief(&set.union(&self.outside)) - &self.bel_outside) / &self.denominator
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn set(atoms: usize, worlds: &[u32]) -> WorldSet {
        WorldSet::from_worlds(atoms, worlds.iter().map(|&w| World(w)))
    }

    fn half_half(atoms: usize, a: &WorldSet) -> MassAssignment {
        MassAssignment::new(atoms, [(a.clone(), q(1, 2)), (WorldSet::full(atoms), q(1, 2))]).unwrap()
    }

    #[test]
    fn belief_and_plausibility() {
        let a = set(2, &[0, 1]);
        let m = half_half(2, &a);
        assert_eq!(m.belief(&WorldSet::full(2)), q(1, 1));
        assert_eq!(m.belief(&WorldSet::empty(2)), q(0, 1));
        assert_eq!(m.belief(&a), q(1, 2));
        assert_eq!(m.plausibility(&WorldSet::full(2)), q(1, 1));
        assert_eq!(m.plausibility(&set(2, &[2, 3])), q(1, 2));
    }

    #[test]
    fn invalid_masses() {
        assert!(MassAssignment::new(1, [(WorldSet::full(1), q(1, 2))]).is_err());
        assert!(MassAssignment::new(
            1,
            [(WorldSet::empty(1), q(1, 2)), (WorldSet::full(1), q(1, 2))]
        )
        .is_err());
        assert!(MassAssignment::new(
            1,
            [(WorldSet::full(1), q(3, 2)), (set(1, &[0]), q(-1, 2))]
        )
        .is_err());
        // zero masses are dropped, duplicates merged
        let m = MassAssignment::new(
            1,
            [
                (WorldSet::full(1), q(1, 2)),
                (WorldSet::full(1), q(1, 2)),
                (set(1, &[0]), q(0, 1)),
            ],
        )
        .unwrap();
        assert_eq!(m.focal_count(), 1);
    }

    #[test]
    fn simple_support_cases() {
        let e = q(1, 10);
        let full = WorldSet::full(2);
        assert_eq!(
            MassAssignment::simple_support(&full, &e).unwrap(),
            MassAssignment::vacuous(2)
        );
        // atoms b (bit 0), f (bit 1): [!b | f] excludes world 1
        let phi = set(2, &[0, 2, 3]);
        let m = MassAssignment::simple_support(&phi, &e).unwrap();
        assert_eq!(m.mass(&phi), q(9, 10));
        assert_eq!(m.mass(&full), q(1, 10));
        assert!(m.is_consonant());
        assert_eq!(
            MassAssignment::simple_support(&WorldSet::empty(2), &e),
            Err(Error::EmptyFocal)
        );
        assert_eq!(
            MassAssignment::simple_support(&phi, &q(1, 1)),
            Err(Error::EpsilonOutOfRange)
        );
    }

    #[test]
    fn consonance() {
        assert!(MassAssignment::vacuous(2).is_consonant());
        let m = MassAssignment::new(2, [(set(2, &[0]), q(1, 2)), (set(2, &[1]), q(1, 2))]).unwrap();
        assert!(!m.is_consonant());
    }

    #[test]
    fn conditioning() {
        let m = half_half(2, &set(2, &[0, 1]));
        let all = m.condition(&WorldSet::full(2)).unwrap();
        for x in [set(2, &[0]), set(2, &[0, 1]), set(2, &[2, 3]), WorldSet::full(2)] {
            assert_eq!(all.belief(&x), m.belief(&x));
        }
        // simple support on S, A subset of S: bel(X|A) is 1 iff A subset of X
        let s = set(2, &[0, 1, 2]);
        let ssf = MassAssignment::simple_support(&s, &q(1, 100)).unwrap();
        let a = set(2, &[0, 1]);
        let c = ssf.condition(&a).unwrap();
        assert_eq!(c.belief(&set(2, &[0, 1, 3])), q(1, 1));
        assert_eq!(c.belief(&set(2, &[0, 2, 3])), q(0, 1));
        let point = MassAssignment::new(2, [(set(2, &[0]), q(1, 1))]).unwrap();
        assert_eq!(point.condition(&set(2, &[1])).unwrap_err(), Error::DegenerateConditioning);
    }

    #[test]
    fn combination() {
        let a = set(2, &[0, 1]);
        let m = half_half(2, &a);
        assert_eq!(m.combine(&MassAssignment::vacuous(2)).unwrap(), m);
        let (e1, e2) = (q(1, 10), q(1, 7));
        let s1 = MassAssignment::simple_support(&a, &e1).unwrap();
        let s2 = MassAssignment::simple_support(&a, &e2).unwrap();
        let c = s1.combine(&s2).unwrap();
        assert_eq!(c.mass(&a), q(1, 1) - &e1 * &e2);
        let p = MassAssignment::new(2, [(set(2, &[0]), q(1, 1))]).unwrap();
        let r = MassAssignment::new(2, [(set(2, &[1]), q(1, 1))]).unwrap();
        assert_eq!(p.combine(&r), Err(Error::TotalConflict));
        assert_eq!(
            p.combine(&MassAssignment::vacuous(3)),
            Err(Error::UniverseMismatch)
        );
    }

    #[test]
    fn conflict_is_renormalized() {
        let s1 = MassAssignment::simple_support(&set(1, &[0]), &q(1, 2)).unwrap();
        let s2 = MassAssignment::simple_support(&set(1, &[1]), &q(1, 2)).unwrap();
        let c = s1.combine(&s2).unwrap();
        // unnormalized: {0}:1/4 {1}:1/4 Omega:1/4, conflict 1/4
        assert_eq!(c.mass(&set(1, &[0])), q(1, 3));
        assert_eq!(c.mass(&WorldSet::full(1)), q(1, 3));
    }
}
