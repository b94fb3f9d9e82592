//! Numeric cross-checks of the symbolic LCD engine.
//!
//! A solved model gives each rule an integer degree `k_d` (a point of its
//! cone). At a base `e` every rule becomes the simple support function with
//! `m({phi_d}) = 1 - e^k_d`, `m(Omega) = e^k_d`; their Dempster combination is
//! then compared with the symbolic predictions.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed};
use serde::{Deserialize, Serialize};

use crate::epsalg::{EpsSymbol, EpsTerm, OrderVerdict};
use crate::error::Result;
use crate::lcd::LcdModel;
use crate::prop::{DefaultBase, Formula, World, WorldSet};
use crate::ratbf::MassAssignment;

/// Positive integer degrees for every symbol of the model's cone.
pub fn exponents(model: &LcdModel) -> Result<BTreeMap<EpsSymbol, u64>> {
    model.system().integer_witness()
}

fn power(e: &BigRational, k: u64) -> BigRational {
    Pow::pow(e, BigInt::from(k))
}

/// `prod e^k_s` over the factors of `term`.
pub fn term_value(term: &EpsTerm, exps: &BTreeMap<EpsSymbol, u64>, e: &BigRational) -> BigRational {
    let degree: u64 = term
        .factors()
        .map(|(s, m)| exps.get(&s).copied().unwrap_or(1) * u64::from(m))
        .sum();
    power(e, degree)
}

/// Dempster combination of one simple support function per rule.
pub fn combination(
    base: &DefaultBase,
    atoms: usize,
    exps: &BTreeMap<EpsSymbol, u64>,
    e: &BigRational,
) -> Result<MassAssignment> {
    let materials = base.material_sets(atoms);
    let mut ssfs = Vec::with_capacity(base.len());
    for (rule, m) in base.rules().iter().zip(&materials) {
        let k = exps.get(&EpsSymbol(rule.id)).copied().unwrap_or(1);
        ssfs.push(MassAssignment::simple_support(m, &power(e, k))?);
    }
    MassAssignment::combine_all(atoms, ssfs.iter())
}

/// `bel(target | given)`.
pub fn conditional_belief(mass: &MassAssignment, given: &Formula, target: &Formula) -> Result<BigRational> {
    let atoms = mass.atoms();
    let cond = mass.condition(&WorldSet::models(given, atoms))?;
    Ok(cond.belief(&WorldSet::models(target, atoms)))
}

/// Results at one base epsilon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rung {
    pub e: BigRational,
    /// `max |pl({w}) / viol(w) - 1|` over all worlds.
    pub max_deviation: BigRational,
    pub bound: BigRational,
    /// Greater verdicts (world pairs and rules) matched numerically.
    pub confirmed: usize,
    /// Greater verdicts the numbers contradict.
    pub refuted: Vec<String>,
}

impl Rung {
    pub fn within_bound(&self) -> bool {
        self.max_deviation <= self.bound
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub exponents: BTreeMap<EpsSymbol, u64>,
    pub rungs: Vec<Rung>,
    /// Deviations do not grow as `e` shrinks.
    pub shrinking: bool,
    /// Term pairs of equal order: no strict numeric separation expected.
    pub same_order: Vec<(EpsTerm, EpsTerm)>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.shrinking && self.rungs.iter().all(|r| r.within_bound() && r.refuted.is_empty())
    }
}

/// Runs the checks at each base epsilon of `ladder` (expected in `(0, 1)`,
/// any order; reported from largest to smallest).
pub fn run(base: &DefaultBase, model: &LcdModel, ladder: &[BigRational]) -> Result<OracleReport> {
    let atoms = model.atoms();
    let exps = exponents(model)?;
    let worlds: Vec<World> = WorldSet::full(atoms).iter().collect();
    let terms: Vec<EpsTerm> = worlds.iter().map(|&w| model.viol_term(w)).collect();
    let distinct: Vec<EpsTerm> = terms.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();

    let mut verdicts: BTreeMap<(EpsTerm, EpsTerm), OrderVerdict> = BTreeMap::new();
    let mut same_order = Vec::new();
    for (i, a) in distinct.iter().enumerate() {
        for b in &distinct[i + 1..] {
            let v = model.system().compare(a, b)?;
            if v == OrderVerdict::SameOrder {
                same_order.push((a.clone(), b.clone()));
            }
            verdicts.insert((a.clone(), b.clone()), v);
            verdicts.insert((b.clone(), a.clone()), v.flip());
        }
    }

    let mut sorted = ladder.to_vec();
    sorted.sort_by(|a, b| b.cmp(a));
    let mut rungs = Vec::with_capacity(sorted.len());
    for e in sorted {
        let mass = combination(base, atoms, &exps, &e)?;
        let pl: Vec<BigRational> = worlds.iter().map(|&w| mass.plausibility_of(w)).collect();
        let mut max_deviation = BigRational::from_integer(0.into());
        for (p, t) in pl.iter().zip(&terms) {
            let dev = (p / term_value(t, &exps, &e) - BigRational::one()).abs();
            if dev > max_deviation {
                max_deviation = dev;
            }
        }
        let mut confirmed = 0;
        let mut refuted = Vec::new();
        for (i, wa) in worlds.iter().enumerate() {
            for (j, wb) in worlds.iter().enumerate() {
                if verdicts.get(&(terms[i].clone(), terms[j].clone())) != Some(&OrderVerdict::Greater) {
                    continue;
                }
                if pl[i] > pl[j] {
                    confirmed += 1;
                } else {
                    refuted.push(format!(
                        "world {} ({}) >> world {} ({})",
                        wa.0, terms[i], wb.0, terms[j]
                    ));
                }
            }
        }
        for c in model.constraints() {
            let rule = base.get(c.rule).expect("constraint of this base");
            let best = |f: Formula| {
                WorldSet::models(&f, atoms)
                    .iter()
                    .map(|w| pl[w.index()].clone())
                    .max()
            };
            match (best(rule.verifier()), best(rule.falsifier())) {
                (Some(a), Some(b)) if a > b => confirmed += 1,
                (_, None) => confirmed += 1,
                _ => refuted.push(format!("rule {}", c.rule)),
            }
        }
        rungs.push(Rung {
            bound: BigRational::from_integer(32.into()) * &e,
            e,
            max_deviation,
            confirmed,
            refuted,
        });
    }
    let shrinking = rungs
        .windows(2)
        .all(|w| w[1].max_deviation <= w[0].max_deviation);
    Ok(OracleReport {
        exponents: exps,
        rungs,
        shrinking,
        same_order,
    })
}

/// `10^-k` for each `k`.
pub fn decimal_ladder(powers: &[u32]) -> Vec<BigRational> {
    powers
        .iter()
        .map(|&k| BigRational::new(BigInt::one(), Pow::pow(BigInt::from(10), k)))
        .collect()
}
