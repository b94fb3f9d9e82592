use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Vocabulary, World};
use crate::error::{Error, Result};

/// Classical propositional formula over atom indices of a [`Vocabulary`].
///
/// `Implies` is material implication. Default rules are not formulas; see
/// [`DefaultRule`](super::DefaultRule).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formula {
    True,
    False,
    Atom(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(index: usize) -> Self {
        Formula::Atom(index)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    pub fn eval(&self, world: World) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(i) => world.holds(*i),
            Formula::Not(f) => !f.eval(world),
            Formula::And(l, r) => l.eval(world) && r.eval(world),
            Formula::Or(l, r) => l.eval(world) || r.eval(world),
            Formula::Implies(l, r) => !l.eval(world) || r.eval(world),
            Formula::Iff(l, r) => l.eval(world) == r.eval(world),
        }
    }

    /// Largest atom index referenced, if any.
    pub fn max_atom(&self) -> Option<usize> {
        match self {
            Formula::True | Formula::False => None,
            Formula::Atom(i) => Some(*i),
            Formula::Not(f) => f.max_atom(),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => match (l.max_atom(), r.max_atom()) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, b) => a.or(b),
            },
        }
    }

    /// Fails if the formula mentions an atom outside a universe of `atoms` atoms.
    pub fn check_atoms(&self, atoms: usize) -> Result<()> {
        match self.max_atom() {
            Some(a) if a >= atoms => Err(Error::VocabularyMismatch { atom: a, atoms }),
            _ => Ok(()),
        }
    }

    pub fn display<'a>(&'a self, vocab: &'a Vocabulary) -> Pretty<'a> {
        Pretty {
            formula: self,
            vocab,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            _ => 5,
        }
    }
}

/// Canonical printer: emits the minimum parentheses needed for the parser to
/// rebuild the same tree.
pub struct Pretty<'a> {
    formula: &'a Formula,
    vocab: &'a Vocabulary,
}

impl Pretty<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, node: &Formula, min: u8) -> fmt::Result {
        let paren = node.precedence() < min;
        if paren {
            f.write_str("(")?;
        }
        match node {
            Formula::True => f.write_str("true")?,
            Formula::False => f.write_str("false")?,
            Formula::Atom(i) => match self.vocab.name(*i) {
                Some(name) => f.write_str(name)?,
                None => write!(f, "?{i}")?,
            },
            Formula::Not(g) => {
                f.write_str("!")?;
                self.write(f, g, 5)?;
            }
            // left-associative levels nest on the left, `->` nests on the right
            Formula::And(l, r) => self.binary(f, l, " & ", r, 4, 5)?,
            Formula::Or(l, r) => self.binary(f, l, " | ", r, 3, 4)?,
            Formula::Implies(l, r) => self.binary(f, l, " -> ", r, 3, 2)?,
            Formula::Iff(l, r) => self.binary(f, l, " <-> ", r, 1, 2)?,
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }

    fn binary(
        &self,
        f: &mut fmt::Formatter<'_>,
        l: &Formula,
        op: &str,
        r: &Formula,
        lmin: u8,
        rmin: u8,
    ) -> fmt::Result {
        self.write(f, l, lmin)?;
        f.write_str(op)?;
        self.write(f, r, rmin)
    }
}

impl fmt::Display for Pretty<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula, 0)
    }
}
