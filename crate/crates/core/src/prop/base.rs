use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{parse_formula, Formula, Vocabulary, WorldSet};
use crate::error::{Error, Result};

/// Identity of a rule occurrence inside a base; `1..=n` in list order.
pub type RuleId = u32;

/// A default `antecedent ~> consequent`. Not a formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefaultRule {
    pub id: RuleId,
    pub antecedent: Formula,
    pub consequent: Formula,
}

impl DefaultRule {
    /// The material counterpart `!antecedent | consequent`.
    pub fn material(&self) -> Formula {
        Formula::or(Formula::not(self.antecedent.clone()), self.consequent.clone())
    }

    /// `antecedent & consequent`: the verifying side.
    pub fn verifier(&self) -> Formula {
        Formula::and(self.antecedent.clone(), self.consequent.clone())
    }

    /// `antecedent & !consequent`: the falsifying side.
    pub fn falsifier(&self) -> Formula {
        Formula::and(self.antecedent.clone(), Formula::not(self.consequent.clone()))
    }

    pub fn display(&self, vocab: &Vocabulary) -> String {
        format!(
            "{} ~> {}",
            self.antecedent.display(vocab),
            self.consequent.display(vocab)
        )
    }
}

/// Ordered multiset of default rules. Duplicates are distinct occurrences.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefaultBase {
    rules: Vec<DefaultRule>,
}

impl DefaultBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Formula, Formula)>) -> Self {
        let mut base = Self::new();
        for (a, b) in pairs {
            base.push(a, b);
        }
        base
    }

    /// Appends a rule and returns its id.
    pub fn push(&mut self, antecedent: Formula, consequent: Formula) -> RuleId {
        let id = self.rules.len() as RuleId + 1;
        self.rules.push(DefaultRule {
            id,
            antecedent,
            consequent,
        });
        id
    }

    pub fn rules(&self) -> &[DefaultRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn get(&self, id: RuleId) -> Option<&DefaultRule> {
        id.checked_sub(1).and_then(|i| self.rules.get(i as usize))
    }

    pub fn ids(&self) -> impl Iterator<Item = RuleId> + '_ {
        self.rules.iter().map(|r| r.id)
    }

    /// Copy of this base with `extra` appended.
    pub fn with_rule(&self, antecedent: Formula, consequent: Formula) -> Self {
        let mut base = self.clone();
        base.push(antecedent, consequent);
        base
    }

    /// Rebuilds the base in the order given by `order` (0-based positions);
    /// ids are reassigned by the new order.
    pub fn reordered(&self, order: &[usize]) -> Self {
        Self::from_pairs(order.iter().map(|&i| {
            let r = &self.rules[i];
            (r.antecedent.clone(), r.consequent.clone())
        }))
    }

    pub fn max_atom(&self) -> Option<usize> {
        self.rules
            .iter()
            .flat_map(|r| [r.antecedent.max_atom(), r.consequent.max_atom()])
            .flatten()
            .max()
    }

    pub fn check_atoms(&self, atoms: usize) -> Result<()> {
        match self.max_atom() {
            Some(a) if a >= atoms => Err(Error::VocabularyMismatch { atom: a, atoms }),
            _ => Ok(()),
        }
    }

    /// `[phi_d]` for every rule, in order.
    pub fn material_sets(&self, atoms: usize) -> Vec<WorldSet> {
        self.rules
            .iter()
            .map(|r| WorldSet::models(&r.material(), atoms))
            .collect()
    }
}

/// A vocabulary together with a base written over it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnowledgeBase {
    pub vocab: Vocabulary,
    pub base: DefaultBase,
}

impl KnowledgeBase {
    pub fn new(vocab: Vocabulary, base: DefaultBase) -> Self {
        Self { vocab, base }
    }

    /// Parses the line-oriented KB format:
    ///
    /// ```text
    /// # comment
    /// atoms: b p f
    /// b ~> f
    /// p ~> !f
    /// ```
    pub fn parse(text: &str, capacity: usize) -> Result<Self> {
        let mut vocab = Vocabulary::with_capacity(capacity);
        let mut base = DefaultBase::new();
        let mut header_seen = false;
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let kb_err = |message: String| Error::KbFormat {
                line: line_no,
                message,
            };
            if let Some(rest) = line.strip_prefix("atoms:") {
                if header_seen || !base.is_empty() {
                    return Err(kb_err("`atoms:` header must come once, before any rule".into()));
                }
                header_seen = true;
                for name in rest.split_whitespace() {
                    vocab.declare(name).map_err(|e| kb_err(e.to_string()))?;
                }
                continue;
            }
            let Some((lhs, rhs)) = line.split_once("~>") else {
                return Err(kb_err("expected `<formula> ~> <formula>`".into()));
            };
            if rhs.contains("~>") {
                return Err(kb_err("more than one `~>` on a line".into()));
            }
            let a = parse_formula(lhs, &mut vocab).map_err(|e| kb_err(e.to_string()))?;
            let b = parse_formula(rhs, &mut vocab).map_err(|e| kb_err(e.to_string()))?;
            base.push(a, b);
        }
        Ok(Self { vocab, base })
    }

    pub fn load(path: impl AsRef<Path>, capacity: usize) -> std::result::Result<Self, LoadError> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(LoadError::Io)?;
        Self::parse(&text, capacity).map_err(LoadError::Parse)
    }

    pub fn parse_formula(&mut self, text: &str) -> Result<Formula> {
        parse_formula(text, &mut self.vocab)
    }

    /// Serializes back to the KB format with an explicit `atoms:` header.
    pub fn to_kb_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "atoms: {}", self.vocab.atoms().join(" "));
        for r in self.base.rules() {
            let _ = writeln!(out, "{}", r.display(&self.vocab));
        }
        out
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read knowledge base: {0}")]
    Io(std::io::Error),
    #[error(transparent)]
    Parse(Error),
}
