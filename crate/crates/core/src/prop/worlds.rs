use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Formula, Vocabulary};

/// A truth assignment; bit `i` is the value of atom `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct World(pub u32);

impl World {
    pub fn holds(self, atom: usize) -> bool {
        (self.0 >> atom) & 1 == 1
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Bitset over the `2^n` worlds of an `n`-atom universe.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorldSet {
    atoms: u8,
    words: Vec<u64>,
}

const ATOM_MASKS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

impl WorldSet {
    fn word_count(atoms: usize) -> usize {
        if atoms <= 6 {
            1
        } else {
            1 << (atoms - 6)
        }
    }

    fn tail_mask(atoms: usize) -> u64 {
        if atoms >= 6 {
            u64::MAX
        } else {
            (1u64 << (1 << atoms)) - 1
        }
    }

    pub fn empty(atoms: usize) -> Self {
        Self {
            atoms: atoms as u8,
            words: vec![0; Self::word_count(atoms)],
        }
    }

    pub fn full(atoms: usize) -> Self {
        let mut s = Self {
            atoms: atoms as u8,
            words: vec![u64::MAX; Self::word_count(atoms)],
        };
        s.trim();
        s
    }

    /// Worlds where `atom` is true.
    pub fn of_atom(atoms: usize, atom: usize) -> Self {
        let n = Self::word_count(atoms);
        let words = (0..n)
            .map(|k| {
                if atom < 6 {
                    ATOM_MASKS[atom]
                } else if (k >> (atom - 6)) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                }
            })
            .collect();
        let mut s = Self {
            atoms: atoms as u8,
            words,
        };
        s.trim();
        s
    }

    pub fn singleton(atoms: usize, world: World) -> Self {
        let mut s = Self::empty(atoms);
        s.insert(world);
        s
    }

    pub fn from_worlds(atoms: usize, worlds: impl IntoIterator<Item = World>) -> Self {
        let mut s = Self::empty(atoms);
        for w in worlds {
            s.insert(w);
        }
        s
    }

    fn trim(&mut self) {
        let mask = Self::tail_mask(self.atoms as usize);
        if let Some(last) = self.words.last_mut() {
            *last &= mask;
        }
    }

    pub fn atoms(&self) -> usize {
        self.atoms as usize
    }

    pub fn universe_size(&self) -> usize {
        1 << self.atoms
    }

    pub fn contains(&self, world: World) -> bool {
        let i = world.index();
        i < self.universe_size() && (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn insert(&mut self, world: World) {
        let i = world.index();
        assert!(i < self.universe_size(), "world outside universe");
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        *self == Self::full(self.atoms())
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Self {
        let mut s = Self {
            atoms: self.atoms,
            words: self.words.iter().map(|w| !w).collect(),
        };
        s.trim();
        s
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.same_universe(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.same_universe(other);
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = World> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros();
                w &= w - 1;
                Some(World(k as u32 * 64 + bit))
            })
        })
    }

    fn same_universe(&self, other: &Self) {
        assert_eq!(self.atoms, other.atoms, "world sets over different universes");
    }

    fn zip(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        self.same_universe(other);
        Self {
            atoms: self.atoms,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    /// Model set of `f` in the universe of `atoms` atoms.
    ///
    /// Panics if `f` mentions an atom `>= atoms`.
    pub fn models(f: &Formula, atoms: usize) -> Self {
        match f {
            Formula::True => Self::full(atoms),
            Formula::False => Self::empty(atoms),
            Formula::Atom(i) => {
                assert!(*i < atoms, "atom {i} outside universe of {atoms} atoms");
                Self::of_atom(atoms, *i)
            }
            Formula::Not(g) => Self::models(g, atoms).complement(),
            Formula::And(l, r) => Self::models(l, atoms).intersection(&Self::models(r, atoms)),
            Formula::Or(l, r) => Self::models(l, atoms).union(&Self::models(r, atoms)),
            Formula::Implies(l, r) => Self::models(l, atoms)
                .complement()
                .union(&Self::models(r, atoms)),
            Formula::Iff(l, r) => {
                let a = Self::models(l, atoms);
                let b = Self::models(r, atoms);
                a.intersection(&b).union(&a.union(&b).complement())
            }
        }
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|w| w.0)).finish()
    }
}

/// `[f]`: the worlds of `vocab` at which `f` is true.
pub fn models(f: &Formula, vocab: &Vocabulary) -> WorldSet {
    WorldSet::models(f, vocab.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prop::parse_formula;

    #[test]
    fn model_examples() {
        let mut v = Vocabulary::from_atoms(["b", "f"]).unwrap();
        assert_eq!(models(&Formula::True, &v).len(), 4);
        let contra = parse_formula("b & !b", &mut v).unwrap();
        assert!(models(&contra, &v).is_empty());
        let f = parse_formula("!b | f", &mut v).unwrap();
        let m = models(&f, &v);
        // truth table: (b,f) = FF, TF, FT, TT -> world 1 (b=T, f=F) is excluded
        assert_eq!(m.iter().map(|w| w.0).collect::<Vec<_>>(), vec![0, 2, 3]);
    }

    #[test]
    fn zero_atoms() {
        let full = WorldSet::full(0);
        assert_eq!(full.len(), 1);
        assert!(WorldSet::models(&Formula::False, 0).is_empty());
        assert_eq!(full.complement().len(), 0);
    }

    #[test]
    fn atom_patterns_large_universe() {
        for atoms in [3usize, 6, 7, 9] {
            for atom in 0..atoms {
                let s = WorldSet::of_atom(atoms, atom);
                assert_eq!(s.len(), 1 << (atoms - 1));
                for w in 0..(1u32 << atoms) {
                    assert_eq!(s.contains(World(w)), World(w).holds(atom));
                }
            }
        }
    }

    #[test]
    fn iter_and_membership() {
        let s = WorldSet::from_worlds(7, [World(0), World(65), World(127)]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![World(0), World(65), World(127)]);
        assert!(s.contains(World(65)));
        assert!(!s.contains(World(64)));
        assert_eq!(s.complement().len(), 125);
        assert!(WorldSet::singleton(7, World(65)).is_subset(&s));
    }
}
