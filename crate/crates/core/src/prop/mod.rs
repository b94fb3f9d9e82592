//! Propositional language: vocabularies, formulas, worlds and default bases.

mod base;
mod formula;
mod parser;
mod worlds;

pub use base::{DefaultBase, DefaultRule, KnowledgeBase, LoadError, RuleId};
pub use formula::{Formula, Pretty};
pub use parser::parse_formula;
pub use worlds::{models, World, WorldSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the number of atoms in a vocabulary.
pub const DEFAULT_CAPACITY: usize = 24;

/// Hard ceiling imposed by the `u32` world encoding.
pub const MAX_CAPACITY: usize = 30;

/// Ordered list of distinct atom names. Atom `i` is bit `i` of a world index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    atoms: Vec<String>,
    capacity: usize,
}

impl Default for Vocabulary {
    fn default() -> Self {
        Self::new()
    }
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::with_capacity(DEFAULT_CAPACITY)
    }

    /// Capacity is clamped to [`MAX_CAPACITY`].
    pub fn with_capacity(capacity: usize) -> Self {
        Self {
            atoms: Vec::new(),
            capacity: capacity.clamp(1, MAX_CAPACITY),
        }
    }

    pub fn from_atoms<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut vocab = Self::new();
        for name in names {
            vocab.declare(name.as_ref())?;
        }
        Ok(vocab)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn name(&self, atom: usize) -> Option<&str> {
        self.atoms.get(atom).map(String::as_str)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == name)
    }

    /// Adds a new atom; fails if it already exists.
    pub fn declare(&mut self, name: &str) -> Result<usize> {
        if self.index_of(name).is_some() {
            return Err(Error::DuplicateAtom(name.to_string()));
        }
        self.intern(name)
    }

    /// Returns the index of `name`, registering it if capacity allows.
    pub fn intern(&mut self, name: &str) -> Result<usize> {
        if let Some(i) = self.index_of(name) {
            return Ok(i);
        }
        if !is_atom_name(name) || name == "true" || name == "false" {
            return Err(Error::InvalidAtom(name.to_string()));
        }
        if self.atoms.len() >= self.capacity {
            return Err(Error::CapacityExceeded {
                atom: name.to_string(),
                capacity: self.capacity,
            });
        }
        self.atoms.push(name.to_string());
        Ok(self.atoms.len() - 1)
    }

    pub fn world_count(&self) -> usize {
        1usize << self.atoms.len()
    }

    pub fn worlds(&self) -> impl Iterator<Item = World> {
        (0..self.world_count() as u32).map(World)
    }

    /// Renders a world as e.g. `b !f p`.
    pub fn describe(&self, world: World) -> String {
        self.atoms
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if world.holds(i) {
                    a.clone()
                } else {
                    format!("!{a}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub(crate) fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
