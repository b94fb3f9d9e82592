//! Penalty, lexicographic and preferred-subtheories (Brewka) orders built on
//! the Z-stratification. Strata are numbered from 1.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::prop::{DefaultBase, Formula, RuleId, World, WorldSet};
use crate::zcore::{stratify, Stratification};

/// Per-stratum view of one world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumStats {
    /// `k_i`: rules of stratum `i` the world violates.
    pub violated: Vec<usize>,
    /// Rules of stratum `i` the world satisfies.
    pub satisfied: Vec<BTreeSet<RuleId>>,
    pub sizes: Vec<usize>,
}

/// A consistent base with its strata and material sets.
#[derive(Debug, Clone)]
pub struct StratifiedBase {
    atoms: usize,
    strat: Stratification,
    /// `(rule id, stratum index, material set)`, grouped by stratum.
    rules: Vec<(RuleId, usize, WorldSet)>,
    sizes: Vec<usize>,
}

impl StratifiedBase {
    pub fn new(base: &DefaultBase, atoms: usize) -> Result<Self> {
        base.check_atoms(atoms)?;
        let strat = stratify(base, atoms);
        if !strat.is_consistent() {
            return Err(Error::InconsistentBase);
        }
        let materials = base.material_sets(atoms);
        let mut rules = Vec::new();
        for (i, stratum) in strat.strata().iter().enumerate() {
            for &id in stratum {
                let pos = base.rules().iter().position(|r| r.id == id).expect("rule in base");
                rules.push((id, i + 1, materials[pos].clone()));
            }
        }
        let sizes = strat.strata().iter().map(Vec::len).collect();
        Ok(Self {
            atoms,
            strat,
            rules,
            sizes,
        })
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn stratification(&self) -> &Stratification {
        &self.strat
    }

    pub fn stats(&self, world: World) -> StratumStats {
        let k = self.sizes.len();
        let mut violated = vec![0; k];
        let mut satisfied = vec![BTreeSet::new(); k];
        for (id, i, m) in &self.rules {
            if m.contains(world) {
                satisfied[i - 1].insert(*id);
            } else {
                violated[i - 1] += 1;
            }
        }
        StratumStats {
            violated,
            satisfied,
            sizes: self.sizes.clone(),
        }
    }

    /// Sum of the stratum indices of the violated rules.
    pub fn penalty_cost(&self, world: World) -> u64 {
        self.rules
            .iter()
            .filter(|(_, _, m)| !m.contains(world))
            .map(|(_, i, _)| *i as u64)
            .sum()
    }

    /// `Greater` when `a` is lexicographically preferred: more satisfied
    /// rules at the highest stratum where the counts differ.
    pub fn lex_compare(&self, a: World, b: World) -> Ordering {
        let (sa, sb) = (self.stats(a), self.stats(b));
        for i in (0..self.sizes.len()).rev() {
            match sa.satisfied[i].len().cmp(&sb.satisfied[i].len()) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }

    /// `a` strictly preferred to `b`: equal satisfied sets above some stratum
    /// `i` and a strictly larger one at `i`.
    pub fn brewka_dominates(&self, a: World, b: World) -> bool {
        let (sa, sb) = (self.stats(a), self.stats(b));
        for i in (0..self.sizes.len()).rev() {
            if sa.satisfied[i] == sb.satisfied[i] {
                continue;
            }
            return sa.satisfied[i].is_superset(&sb.satisfied[i]);
        }
        false
    }

    fn split(&self, alpha: &Formula, beta: &Formula) -> Result<(WorldSet, WorldSet)> {
        alpha.check_atoms(self.atoms)?;
        beta.check_atoms(self.atoms)?;
        let yes = WorldSet::models(&Formula::and(alpha.clone(), beta.clone()), self.atoms);
        let no = WorldSet::models(
            &Formula::and(alpha.clone(), Formula::not(beta.clone())),
            self.atoms,
        );
        Ok((yes, no))
    }

    pub fn entails_penalty(&self, alpha: &Formula, beta: &Formula) -> Result<bool> {
        let (yes, no) = self.split(alpha, beta)?;
        let min = |s: &WorldSet| s.iter().map(|w| self.penalty_cost(w)).min();
        Ok(match (min(&yes), min(&no)) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a < b,
        })
    }

    /// Models of `alpha` that are lexicographically maximal.
    pub fn lex_preferred(&self, alpha: &Formula) -> Result<Vec<World>> {
        alpha.check_atoms(self.atoms)?;
        let worlds: Vec<World> = WorldSet::models(alpha, self.atoms).iter().collect();
        let Some(best) = worlds
            .iter()
            .copied()
            .max_by(|&a, &b| self.lex_compare(a, b))
        else {
            return Ok(Vec::new());
        };
        Ok(worlds
            .into_iter()
            .filter(|&w| self.lex_compare(w, best) == Ordering::Equal)
            .collect())
    }

    /// Models of `alpha` no other model of `alpha` dominates.
    pub fn brewka_preferred(&self, alpha: &Formula) -> Result<Vec<World>> {
        alpha.check_atoms(self.atoms)?;
        let worlds: Vec<World> = WorldSet::models(alpha, self.atoms).iter().collect();
        Ok(worlds
            .iter()
            .copied()
            .filter(|&w| !worlds.iter().any(|&v| self.brewka_dominates(v, w)))
            .collect())
    }

    pub fn entails_lex(&self, alpha: &Formula, beta: &Formula) -> Result<bool> {
        beta.check_atoms(self.atoms)?;
        Ok(self.lex_preferred(alpha)?.iter().all(|&w| beta.eval(w)))
    }

    pub fn entails_brewka(&self, alpha: &Formula, beta: &Formula) -> Result<bool> {
        beta.check_atoms(self.atoms)?;
        Ok(self.brewka_preferred(alpha)?.iter().all(|&w| beta.eval(w)))
    }
}

pub fn penalty_cost(strat: &StratifiedBase, world: World) -> u64 {
    strat.penalty_cost(world)
}

pub fn entails_penalty(base: &DefaultBase, atoms: usize, alpha: &Formula, beta: &Formula) -> Result<bool> {
    StratifiedBase::new(base, atoms)?.entails_penalty(alpha, beta)
}

pub fn entails_lex(base: &DefaultBase, atoms: usize, alpha: &Formula, beta: &Formula) -> Result<bool> {
    StratifiedBase::new(base, atoms)?.entails_lex(alpha, beta)
}

pub fn entails_brewka(base: &DefaultBase, atoms: usize, alpha: &Formula, beta: &Formula) -> Result<bool> {
    StratifiedBase::new(base, atoms)?.entails_brewka(alpha, beta)
}
