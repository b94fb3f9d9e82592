//! Tolerance, Z-stratification, the least-commitment consonant construction
//! and the P / Z entailment relations.
//!
//! All functions take the universe size `atoms`; formulas and rules must not
//! mention atoms `>= atoms`.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::epsalg::{DegreeSystem, EpsSymbol, EpsTerm, OrderVerdict};
use crate::error::{Error, Result};
use crate::prop::{DefaultBase, DefaultRule, Formula, RuleId, World, WorldSet};
use crate::ratbf::MassAssignment;

/// Ordered partition of a base into strata `Delta_1, ..., Delta_k`, or the
/// point where peeling got stuck.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stratification {
    Consistent {
        strata: Vec<Vec<RuleId>>,
    },
    Inconsistent {
        /// Strata peeled before the failure.
        strata: Vec<Vec<RuleId>>,
        /// Rules none of which is tolerated by the residue.
        residue: Vec<RuleId>,
    },
}

impl Stratification {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Stratification::Consistent { .. })
    }

    pub fn strata(&self) -> &[Vec<RuleId>] {
        match self {
            Stratification::Consistent { strata } | Stratification::Inconsistent { strata, .. } => {
                strata
            }
        }
    }

    pub fn residue(&self) -> &[RuleId] {
        match self {
            Stratification::Consistent { .. } => &[],
            Stratification::Inconsistent { residue, .. } => residue,
        }
    }

    /// 1-based stratum index of a rule.
    pub fn stratum_of(&self, id: RuleId) -> Option<usize> {
        self.strata()
            .iter()
            .position(|s| s.contains(&id))
            .map(|i| i + 1)
    }
}

fn intersect_all<'a>(atoms: usize, sets: impl IntoIterator<Item = &'a WorldSet>) -> WorldSet {
    sets.into_iter()
        .fold(WorldSet::full(atoms), |acc, s| acc.intersection(s))
}

/// Whether `rule` is tolerated by `base`: `a & b` is consistent with every
/// material counterpart of `base`.
pub fn tolerated(rule: &DefaultRule, base: &DefaultBase, atoms: usize) -> bool {
    let materials = base.material_sets(atoms);
    let verifier = WorldSet::models(&rule.verifier(), atoms);
    verifier.intersects(&intersect_all(atoms, &materials))
}

/// Peels off, round by round, every rule tolerated by the rules not yet placed.
pub fn stratify(base: &DefaultBase, atoms: usize) -> Stratification {
    let materials = base.material_sets(atoms);
    let verifiers: Vec<WorldSet> = base
        .rules()
        .iter()
        .map(|r| WorldSet::models(&r.verifier(), atoms))
        .collect();
    let mut remaining: Vec<usize> = (0..base.len()).collect();
    let mut strata = Vec::new();
    while !remaining.is_empty() {
        let common = intersect_all(atoms, remaining.iter().map(|&i| &materials[i]));
        let (tolerated, rest): (Vec<usize>, Vec<usize>) = remaining
            .iter()
            .partition(|&&i| verifiers[i].intersects(&common));
        if tolerated.is_empty() {
            return Stratification::Inconsistent {
                strata,
                residue: rest.iter().map(|&i| base.rules()[i].id).collect(),
            };
        }
        strata.push(tolerated.iter().map(|&i| base.rules()[i].id).collect());
        remaining = rest;
    }
    Stratification::Consistent { strata }
}

/// Compiled Z-ranking of a consistent base.
#[derive(Debug, Clone)]
pub struct ZModel {
    atoms: usize,
    stratification: Stratification,
    /// 1-based stratum of each rule, in base order.
    stratum_of: Vec<u32>,
    materials: Vec<WorldSet>,
}

impl ZModel {
    pub fn new(base: &DefaultBase, atoms: usize) -> Result<Self> {
        base.check_atoms(atoms)?;
        let stratification = stratify(base, atoms);
        if !stratification.is_consistent() {
            return Err(Error::InconsistentBase);
        }
        let stratum_of = base
            .ids()
            .map(|id| stratification.stratum_of(id).expect("every rule placed") as u32)
            .collect();
        Ok(Self {
            atoms,
            stratification,
            stratum_of,
            materials: base.material_sets(atoms),
        })
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn stratification(&self) -> &Stratification {
        &self.stratification
    }

    pub fn strata(&self) -> &[Vec<RuleId>] {
        self.stratification.strata()
    }

    /// Stratum index (1-based) of each rule in base order.
    pub fn rule_strata(&self) -> &[u32] {
        &self.stratum_of
    }

    /// Ids (1-based) of the rules whose material counterpart `world` falsifies.
    pub fn violated(&self, world: World) -> impl Iterator<Item = RuleId> + '_ {
        self.materials
            .iter()
            .enumerate()
            .filter(move |(_, m)| !m.contains(world))
            .map(|(i, _)| i as RuleId + 1)
    }

    /// Highest stratum index among violated rules; 0 if none.
    pub fn rank(&self, world: World) -> u32 {
        self.violated(world)
            .map(|id| self.stratum_of[id as usize - 1])
            .max()
            .unwrap_or(0)
    }

    /// `z(f)`: least rank over the models of `f`; `None` stands for infinity.
    pub fn z(&self, f: &Formula) -> Result<Option<u32>> {
        f.check_atoms(self.atoms)?;
        Ok(WorldSet::models(f, self.atoms)
            .iter()
            .map(|w| self.rank(w))
            .min())
    }

    /// `alpha |~_Z beta` iff `z(alpha & beta) < z(alpha & !beta)`, with
    /// infinity on empty model sets.
    pub fn entails(&self, alpha: &Formula, beta: &Formula) -> Result<bool> {
        let yes = self.z(&Formula::and(alpha.clone(), beta.clone()))?;
        let no = self.z(&Formula::and(alpha.clone(), Formula::not(beta.clone())))?;
        Ok(match (yes, no) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a < b,
        })
    }
}

/// `rank` for a single world against a stratification of `base`.
pub fn world_rank(strat: &Stratification, base: &DefaultBase, world: World) -> u32 {
    base.rules()
        .iter()
        .filter(|r| !r.material().eval(world))
        .filter_map(|r| strat.stratum_of(r.id))
        .max()
        .unwrap_or(0) as u32
}

pub fn entails_z(base: &DefaultBase, atoms: usize, alpha: &Formula, beta: &Formula) -> Result<bool> {
    ZModel::new(base, atoms)?.entails(alpha, beta)
}

/// System P: `base |- alpha ~> beta` iff `alpha` has no models or
/// `base + {alpha ~> !beta}` admits no tolerance stratification.
pub fn entails_p(base: &DefaultBase, atoms: usize, alpha: &Formula, beta: &Formula) -> Result<bool> {
    base.check_atoms(atoms)?;
    alpha.check_atoms(atoms)?;
    beta.check_atoms(atoms)?;
    if !stratify(base, atoms).is_consistent() {
        return Err(Error::InconsistentBase);
    }
    if WorldSet::models(alpha, atoms).is_empty() {
        return Ok(true);
    }
    let extended = base.with_rule(alpha.clone(), Formula::not(beta.clone()));
    Ok(!stratify(&extended, atoms).is_consistent())
}

/// One focal element of the consonant chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcLevel {
    /// `[phi_delta_i]` for the rules still unsatisfied when the level was added.
    pub focal: WorldSet,
    /// Rules first satisfied at this level.
    pub satisfied: Vec<RuleId>,
}

/// Nested-focal epsilon belief function built by least commitment.
///
/// Level `i` (1-based) carries mass `e_{i-1} - e_i` with `e_0 = 1`; the whole
/// universe carries `e_k`, and `e_1 >> e_2 >> ... >> e_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsonantEbf {
    atoms: usize,
    levels: Vec<LcLevel>,
}

impl ConsonantEbf {
    pub fn levels(&self) -> &[LcLevel] {
        &self.levels
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    /// Satisfied-rule sets in level order.
    pub fn strata(&self) -> Vec<Vec<RuleId>> {
        self.levels.iter().map(|l| l.satisfied.clone()).collect()
    }

    /// Index of the innermost level containing `world`, minus one; `k` when
    /// only the universe contains it.
    pub fn level_of(&self, world: World) -> u32 {
        level_in(&self.levels, world)
    }

    /// Symbolic plausibility of a world: `e_j` for level `j`, `1` at level 0.
    pub fn pl_term(&self, world: World) -> EpsTerm {
        level_term(self.level_of(world))
    }

    pub fn degree_system(&self) -> DegreeSystem {
        DegreeSystem::chain(self.levels.len() as u32)
    }

    pub fn mass_labels(&self) -> Vec<String> {
        let k = self.levels.len();
        let mut out: Vec<String> = (1..=k)
            .map(|i| {
                if i == 1 {
                    "1-e1".to_string()
                } else {
                    format!("e{}-e{}", i - 1, i)
                }
            })
            .collect();
        out.push(if k == 0 { "1".into() } else { format!("e{k}") });
        out
    }

    /// `alpha |~_LC beta` decided on the symbolic chain: `pl(alpha & beta)`
    /// infinitely larger than `pl(alpha & !beta)`.
    pub fn entails(&self, alpha: &Formula, beta: &Formula) -> Result<bool> {
        alpha.check_atoms(self.atoms)?;
        beta.check_atoms(self.atoms)?;
        satisfied_on_chain(&self.levels, self.atoms, alpha, beta)
    }

    /// Numeric instance with parameters `eps[0] > eps[1] > ...`, all in (0, 1).
    pub fn instantiate(&self, eps: &[BigRational]) -> Result<MassAssignment> {
        assert_eq!(eps.len(), self.levels.len(), "one parameter per level");
        let mut prev = BigRational::one();
        let mut entries = Vec::new();
        for (level, e) in self.levels.iter().zip(eps) {
            if *e <= BigRational::zero() || *e >= prev {
                return Err(Error::EpsilonOutOfRange);
            }
            entries.push((level.focal.clone(), &prev - e));
            prev = e.clone();
        }
        entries.push((WorldSet::full(self.atoms), prev));
        MassAssignment::new(self.atoms, entries)
    }
}

fn level_in(levels: &[LcLevel], world: World) -> u32 {
    levels
        .iter()
        .position(|l| l.focal.contains(world))
        .unwrap_or(levels.len()) as u32
}

fn level_term(level: u32) -> EpsTerm {
    if level == 0 {
        EpsTerm::unit()
    } else {
        EpsTerm::symbol(EpsSymbol(level))
    }
}

fn satisfied_on_chain(
    levels: &[LcLevel],
    atoms: usize,
    alpha: &Formula,
    beta: &Formula,
) -> Result<bool> {
    let terms = |f: Formula| -> Vec<EpsTerm> {
        let lv: BTreeSet<u32> = WorldSet::models(&f, atoms)
            .iter()
            .map(|w| level_in(levels, w))
            .collect();
        lv.into_iter().map(level_term).collect()
    };
    let yes = terms(Formula::and(alpha.clone(), beta.clone()));
    let no = terms(Formula::and(alpha.clone(), Formula::not(beta.clone())));
    if no.is_empty() {
        return Ok(true);
    }
    if yes.is_empty() {
        return Ok(false);
    }
    let sys = DegreeSystem::chain(levels.len() as u32);
    Ok(sys.compare_max(&yes, &no)? == OrderVerdict::Greater)
}

/// Least-commitment construction: put almost all free mass on the worlds
/// satisfying the still-unsatisfied rules, until every rule is satisfied.
///
/// A rule whose `alpha & !beta` has no model holds vacuously at every step;
/// it is recorded at the first level whose focal set meets `alpha & beta`
/// (where `pl([alpha & beta]) = 1`). Its material counterpart is the whole
/// universe, so this placement leaves the focal sets unchanged.
pub fn lc_build(base: &DefaultBase, atoms: usize) -> Result<ConsonantEbf> {
    base.check_atoms(atoms)?;
    let materials = base.material_sets(atoms);
    let mut pending: Vec<usize> = (0..base.len()).collect();
    let mut levels: Vec<LcLevel> = Vec::new();
    while !pending.is_empty() {
        let focal = intersect_all(atoms, pending.iter().map(|&i| &materials[i]));
        levels.push(LcLevel {
            focal,
            satisfied: Vec::new(),
        });
        let mut sat = Vec::new();
        let mut rest = Vec::new();
        for &i in &pending {
            let r = &base.rules()[i];
            let ok = if WorldSet::models(&r.falsifier(), atoms).is_empty() {
                let focal = &levels.last().expect("just pushed").focal;
                WorldSet::models(&r.verifier(), atoms).intersects(focal)
            } else {
                satisfied_on_chain(&levels, atoms, &r.antecedent, &r.consequent)?
            };
            if ok {
                sat.push(i);
            } else {
                rest.push(i);
            }
        }
        if sat.is_empty() {
            return Err(Error::InconsistentBase);
        }
        levels.last_mut().expect("just pushed").satisfied =
            sat.iter().map(|&i| base.rules()[i].id).collect();
        pending = rest;
    }
    Ok(ConsonantEbf { atoms, levels })
}
