//! Dempster-combination entailment (LCD).
//!
//! Each rule `d` becomes a simple support function with parameter `e_d`. The
//! plausibility of a world in the combination is of the order of the product
//! of the parameters of the rules it violates, so every world is summarized
//! by its violation term. Auto-deduction of every rule yields one constraint
//! per rule; [`solve`] orders the parameters into classes of equal degree and
//! the resulting [`DegreeSystem`] decides queries.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::epsalg::{prune, DegreeSystem, EpsSymbol, EpsTerm, OrderVerdict};
use crate::error::{Error, Result};
use crate::prop::{DefaultBase, Formula, RuleId, World, WorldSet};

/// Product of the parameters of the rules whose material counterpart `world`
/// falsifies; the unit term when it violates nothing.
pub fn viol_term(base: &DefaultBase, world: World) -> EpsTerm {
    EpsTerm::from_symbols(
        base.rules()
            .iter()
            .filter(|r| !r.material().eval(world))
            .map(|r| EpsSymbol(r.id)),
    )
}

/// Violation terms of a fixed base, computed from its material sets.
#[derive(Debug, Clone)]
pub struct ViolationTable {
    atoms: usize,
    ids: Vec<RuleId>,
    materials: Vec<WorldSet>,
}

impl ViolationTable {
    pub fn new(base: &DefaultBase, atoms: usize) -> Result<Self> {
        base.check_atoms(atoms)?;
        Ok(Self {
            atoms,
            ids: base.ids().collect(),
            materials: base.material_sets(atoms),
        })
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn symbols(&self) -> Vec<EpsSymbol> {
        self.ids.iter().map(|&id| EpsSymbol(id)).collect()
    }

    pub fn term(&self, world: World) -> EpsTerm {
        EpsTerm::from_symbols(
            self.materials
                .iter()
                .zip(&self.ids)
                .filter(|(m, _)| !m.contains(world))
                .map(|(_, &id)| EpsSymbol(id)),
        )
    }

    /// Distinct violation terms over a set of worlds.
    pub fn terms_of(&self, worlds: &WorldSet) -> Vec<EpsTerm> {
        let set: BTreeSet<EpsTerm> = worlds.iter().map(|w| self.term(w)).collect();
        set.into_iter().collect()
    }
}

/// `max pl(alpha & beta) >> max pl(alpha & !beta)` for one rule, in terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcdConstraint {
    pub rule: RuleId,
    pub lhs: Vec<EpsTerm>,
    pub rhs: Vec<EpsTerm>,
}

impl LcdConstraint {
    pub fn render(&self) -> String {
        let side = |ts: &[EpsTerm]| {
            if ts.len() == 1 {
                ts[0].to_string()
            } else {
                let inner: Vec<String> = ts.iter().map(ToString::to_string).collect();
                format!("max{{{}}}", inner.join(", "))
            }
        };
        format!("{} >> {}", side(&self.lhs), side(&self.rhs))
    }
}

/// One constraint per rule whose falsifying side is satisfiable; both sides
/// pruned of dominated terms.
pub fn gen_constraints(base: &DefaultBase, atoms: usize) -> Result<Vec<LcdConstraint>> {
    let table = ViolationTable::new(base, atoms)?;
    constraints_from_table(base, &table)
}

fn constraints_from_table(base: &DefaultBase, table: &ViolationTable) -> Result<Vec<LcdConstraint>> {
    let atoms = table.atoms();
    let mut out = Vec::new();
    for r in base.rules() {
        let yes = WorldSet::models(&r.verifier(), atoms);
        if yes.is_empty() {
            return Err(Error::UnsatisfiableRule(r.id));
        }
        let no = WorldSet::models(&r.falsifier(), atoms);
        if no.is_empty() {
            continue;
        }
        let lhs = prune(table.terms_of(&yes));
        let rhs = prune(table.terms_of(&no));
        if lhs.iter().any(EpsTerm::is_unit) && rhs.iter().any(EpsTerm::is_unit) {
            return Err(Error::NotRepresentable(r.id));
        }
        out.push(LcdConstraint {
            rule: r.id,
            lhs,
            rhs,
        });
    }
    Ok(out)
}

/// Solver provenance for one round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverRound {
    pub round: usize,
    pub discharged: Vec<RuleId>,
    /// Terms opened as a new class in this round; empty if none.
    pub class: Vec<EpsTerm>,
}

/// Class partition of the parameters plus the cone it induces.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Solution {
    pub system: DegreeSystem,
    pub rounds: Vec<SolverRound>,
    /// Symbols in no class term, attached to the final class.
    pub attached: Vec<EpsSymbol>,
    /// `(class, term)`: terms held only below the previous class.
    pub loose: Vec<(usize, EpsTerm)>,
    pub warnings: Vec<String>,
}

fn classed(term: &EpsTerm, done: &BTreeSet<EpsSymbol>) -> bool {
    term.symbols().all(|s| done.contains(&s))
}

/// Round-based peeling of the constraints into classes `xi_0 >> xi_1 >> ...`.
///
/// Round 0 discharges every constraint whose left side holds the unit term.
/// Each later round discharges every constraint with a fully classed left
/// term that beats all its right terms, assuming the symbols not yet classed
/// lie strictly below the last class. The right terms of discharged
/// constraints that still mention unclassed symbols open the next class,
/// except that a term is held back while a pending right-side term divides it
/// (it must end up at least as implausible as that term) or while another
/// term of the new class divides it. Held-back terms are retried later; when
/// nothing can be discharged they may open a class on their own.
///
/// The below-the-last-class assumption is kept in the final cone, so every
/// discharge stays valid. A term whose equality with its class would empty
/// the cone is kept loose (only below the previous class) with a warning;
/// that choice depends on the terms only, never on rule order. A
/// verification pass checks every constraint at the end.
pub fn solve(constraints: &[LcdConstraint], symbols: &[EpsSymbol]) -> Result<Solution> {
    let mut b = Builder {
        symbols,
        layers: Vec::new(),
        fresh: Vec::new(),
        done: BTreeSet::new(),
        below: Vec::new(),
        split: Vec::new(),
        warnings: Vec::new(),
    };
    let mut active: Vec<&LcdConstraint> = constraints.iter().collect();
    let mut held: Vec<EpsTerm> = Vec::new();
    let mut rounds = Vec::new();
    // Some discharge relied on unclassed symbols lying below the final class.
    let mut below_final = false;
    let mut round = 0;

    while !active.is_empty() {
        let chosen: Vec<bool> = if round == 0 {
            active
                .iter()
                .map(|c| c.lhs.iter().any(EpsTerm::is_unit))
                .collect()
        } else {
            let mut picks = dischargeable(&b.cone_with(true, &[]), &active, &b.done)?;
            let flush = !classify(held.iter().cloned().collect(), &active, &b.done).0.is_empty();
            if !picks.iter().any(|&p| p) && !flush {
                // Stuck: also put the unclassed symbols below every classed
                // left-hand term still pending.
                let lhs: BTreeSet<EpsTerm> = active
                    .iter()
                    .flat_map(|c| c.lhs.iter())
                    .filter(|t| classed(t, &b.done))
                    .cloned()
                    .collect();
                let unclassed: BTreeSet<EpsSymbol> =
                    symbols.iter().copied().filter(|s| !b.done.contains(s)).collect();
                let before = b.below.len();
                b.below.extend(lhs.into_iter().map(|t| (t, unclassed.clone())));
                picks = dischargeable(&b.cone_with(true, &[]), &active, &b.done)?;
                if !picks.iter().any(|&p| p) {
                    b.below.truncate(before);
                }
            }
            picks
        };

        let mut discharged = Vec::new();
        let mut candidates: BTreeSet<EpsTerm> = held.drain(..).collect();
        let mut next = Vec::new();
        for (c, pick) in active.into_iter().zip(chosen) {
            if pick {
                discharged.push(c.rule);
                candidates.extend(c.rhs.iter().cloned());
            } else {
                next.push(c);
            }
        }
        active = next;

        let (mut reduced, deferred) = classify(candidates, &active, &b.done);
        held = deferred;

        if discharged.is_empty() && reduced.is_empty() {
            return Err(Error::NoLcdStratification {
                round,
                pending: active.iter().map(|c| c.rule).collect(),
            });
        }
        if reduced.is_empty() {
            below_final |= round > 0;
        } else {
            reduced.sort();
            b.open_class(&reduced);
            below_final = false;
        }
        rounds.push(SolverRound {
            round,
            discharged,
            class: reduced,
        });
        round += 1;
    }

    let attached: Vec<EpsSymbol> = symbols
        .iter()
        .copied()
        .filter(|s| !b.done.contains(s))
        .collect();
    if !attached.is_empty() {
        let terms: Vec<EpsTerm> = attached.iter().map(|&s| EpsTerm::symbol(s)).collect();
        if b.layers.is_empty() || below_final {
            b.open_class(&terms);
        } else {
            b.extend_last(&terms);
        }
    }

    b.split();
    let mut system = b.cone(false);
    system.set_classes(b.classes());
    for &s in &attached {
        system.mark_unconstrained(s);
    }
    if !system.is_feasible() {
        return Err(Error::InfeasibleSystem);
    }
    for c in constraints {
        if system.compare_max(&c.lhs, &c.rhs)? != OrderVerdict::Greater {
            return Err(Error::VerificationFailed(c.rule));
        }
    }
    Ok(Solution {
        system,
        rounds,
        attached,
        loose: b.loose(),
        warnings: b.warnings,
    })
}

fn dischargeable(
    tentative: &DegreeSystem,
    active: &[&LcdConstraint],
    done: &BTreeSet<EpsSymbol>,
) -> Result<Vec<bool>> {
    let mut picks = Vec::with_capacity(active.len());
    for c in active {
        let mut ok = false;
        for t in c.lhs.iter().filter(|t| classed(t, done)) {
            let mut all = true;
            for u in &c.rhs {
                if tentative.compare(t, u)? != OrderVerdict::Greater {
                    all = false;
                    break;
                }
            }
            if all {
                ok = true;
                break;
            }
        }
        picks.push(ok);
    }
    Ok(picks)
}

/// Splits candidate terms into the next class and the terms held back.
fn classify(
    candidates: BTreeSet<EpsTerm>,
    active: &[&LcdConstraint],
    done: &BTreeSet<EpsSymbol>,
) -> (Vec<EpsTerm>, Vec<EpsTerm>) {
    let pending: Vec<&EpsTerm> = active
        .iter()
        .flat_map(|c| c.rhs.iter())
        .filter(|u| !classed(u, done))
        .collect();
    let (class, mut deferred): (Vec<EpsTerm>, Vec<EpsTerm>) = candidates
        .into_iter()
        .filter(|t| !classed(t, done))
        .partition(|t| !pending.iter().any(|u| u.divides(t)));
    let reduced = prune(class.iter().cloned());
    deferred.extend(class.iter().filter(|t| !reduced.contains(t)).cloned());
    (reduced, deferred)
}

struct Layer {
    /// Terms of one common degree.
    solid: Vec<EpsTerm>,
    /// Terms only known to lie below the previous layer.
    loose: Vec<EpsTerm>,
}

struct Builder<'a> {
    symbols: &'a [EpsSymbol],
    layers: Vec<Layer>,
    /// Symbols first classed in layer `k >= 1` lie below every term of
    /// layer `k - 1`.
    fresh: Vec<(usize, EpsSymbol)>,
    done: BTreeSet<EpsSymbol>,
    /// `(u, S)`: every symbol of `S` lies below the term `u`.
    below: Vec<(EpsTerm, BTreeSet<EpsSymbol>)>,
    split: Vec<(EpsTerm, EpsTerm)>,
    warnings: Vec<String>,
}

impl Builder<'_> {
    fn classes(&self) -> Vec<Vec<EpsTerm>> {
        self.layers.iter().map(|l| l.solid.clone()).collect()
    }

    fn loose(&self) -> Vec<(usize, EpsTerm)> {
        self.layers
            .iter()
            .enumerate()
            .flat_map(|(k, l)| l.loose.iter().map(move |t| (k, t.clone())))
            .collect()
    }

    /// The cone so far; with `tentative`, unclassed symbols go below the
    /// last layer.
    fn cone(&self, tentative: bool) -> DegreeSystem {
        self.cone_with(tentative, &[])
    }

    fn cone_with(&self, tentative: bool, extra: &[(EpsTerm, EpsTerm)]) -> DegreeSystem {
        let mut sys = DegreeSystem::new(self.symbols.iter().copied());
        for layer in &self.layers {
            for t in layer.solid.iter().skip(1) {
                sys.equate(layer.solid[0].clone(), t.clone());
            }
        }
        for (a, c) in self.split.iter().chain(extra) {
            sys.equate(a.clone(), c.clone());
        }
        let terms = |k: usize| self.layers[k].solid.iter().chain(&self.layers[k].loose);
        for &(k, s) in &self.fresh {
            for u in terms(k - 1) {
                sys.dominate(u.clone(), EpsTerm::symbol(s));
            }
        }
        for (u, set) in &self.below {
            for &s in set {
                sys.dominate(u.clone(), EpsTerm::symbol(s));
            }
        }
        if tentative && !self.layers.is_empty() {
            let last = self.layers.len() - 1;
            for &s in self.symbols.iter().filter(|s| !self.done.contains(s)) {
                for u in terms(last) {
                    sys.dominate(u.clone(), EpsTerm::symbol(s));
                }
            }
        }
        sys
    }

    fn claim(&mut self, k: usize, t: &EpsTerm) {
        for s in t.symbols() {
            if self.done.insert(s) && k > 0 {
                self.fresh.push((k, s));
            }
        }
    }

    fn open_class(&mut self, terms: &[EpsTerm]) {
        self.layers.push(Layer {
            solid: Vec::new(),
            loose: Vec::new(),
        });
        self.extend_last(terms);
    }

    /// Adds terms to the last layer and settles which of its terms share one
    /// degree: a term whose equality with some other term of the layer would
    /// empty the cone is loose, and the rest are loose too if their joint
    /// equality does.
    fn extend_last(&mut self, terms: &[EpsTerm]) {
        let k = self.layers.len() - 1;
        for t in terms {
            self.claim(k, t);
        }
        let mut all: Vec<EpsTerm> = self.layers[k].solid.drain(..).collect();
        all.append(&mut self.layers[k].loose);
        all.extend(terms.iter().cloned());
        let feasible = |b: &Self, eqs: &[(EpsTerm, EpsTerm)]| b.cone_with(false, eqs).is_feasible();
        let chain = |ts: &[EpsTerm]| -> Vec<(EpsTerm, EpsTerm)> {
            ts.iter().skip(1).map(|t| (ts[0].clone(), t.clone())).collect()
        };
        let (solid, loose) = if feasible(self, &chain(&all)) {
            (all, Vec::new())
        } else {
            let mut bad = vec![false; all.len()];
            for i in 0..all.len() {
                for j in i + 1..all.len() {
                    if !feasible(self, &[(all[i].clone(), all[j].clone())]) {
                        bad[i] = true;
                        bad[j] = true;
                    }
                }
            }
            let (mut solid, mut loose) = (Vec::new(), Vec::new());
            for (t, b) in all.into_iter().zip(bad) {
                if b {
                    loose.push(t);
                } else {
                    solid.push(t);
                }
            }
            if !feasible(self, &chain(&solid)) {
                loose.append(&mut solid);
            }
            (solid, loose)
        };
        for t in &loose {
            self.warnings.push(format!(
                "term {t} cannot share the degree of class {k}; kept only below the previous class"
            ));
        }
        self.layers[k] = Layer { solid, loose };
    }

    /// Equal degrees for the factors of complex class terms whose symbols
    /// occur in no other class term. Splits that empty the cone on their own
    /// are dropped, and all are dropped if they do so jointly.
    fn split(&mut self) {
        let mut occurrences: BTreeMap<EpsSymbol, usize> = BTreeMap::new();
        for layer in &self.layers {
            for t in layer.solid.iter().chain(&layer.loose) {
                for s in t.symbols() {
                    *occurrences.entry(s).or_insert(0) += 1;
                }
            }
        }
        let mut groups = Vec::new();
        for t in self.layers.iter().flat_map(|l| l.solid.iter()).filter(|t| t.is_complex()) {
            let syms: Vec<EpsSymbol> = t.symbols().collect();
            if !syms.iter().all(|s| occurrences[s] == 1) {
                self.warnings.push(format!(
                    "class term {t} shares symbols with other class terms; its factors are left unequal"
                ));
                continue;
            }
            let eqs: Vec<(EpsTerm, EpsTerm)> = syms
                .windows(2)
                .map(|p| (EpsTerm::symbol(p[0]), EpsTerm::symbol(p[1])))
                .collect();
            if self.cone_with(false, &eqs).is_feasible() {
                groups.push((t.clone(), eqs));
            } else {
                self.warnings
                    .push(format!("factors of class term {t} cannot be equal; left unequal"));
            }
        }
        let joint: Vec<(EpsTerm, EpsTerm)> = groups.iter().flat_map(|(_, e)| e.clone()).collect();
        if self.cone_with(false, &joint).is_feasible() {
            self.split = joint;
        } else {
            for (t, _) in groups {
                self.warnings
                    .push(format!("factors of class term {t} left unequal to keep the cone nonempty"));
            }
        }
    }
}

/// Answer to one LCD query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcdAnswer {
    pub entailed: bool,
    /// `None` when decided vacuously (no models of `alpha`, or of `alpha & !beta`).
    pub verdict: Option<OrderVerdict>,
    pub lhs: Vec<EpsTerm>,
    pub rhs: Vec<EpsTerm>,
}

/// Compiled and verified LCD representation of a base.
#[derive(Debug, Clone)]
pub struct LcdModel {
    table: ViolationTable,
    constraints: Vec<LcdConstraint>,
    solution: Solution,
}

impl LcdModel {
    pub fn build(base: &DefaultBase, atoms: usize) -> Result<Self> {
        let table = ViolationTable::new(base, atoms)?;
        let constraints = constraints_from_table(base, &table)?;
        let solution = solve(&constraints, &table.symbols())?;
        Ok(Self {
            table,
            constraints,
            solution,
        })
    }

    pub fn atoms(&self) -> usize {
        self.table.atoms()
    }

    pub fn constraints(&self) -> &[LcdConstraint] {
        &self.constraints
    }

    pub fn system(&self) -> &DegreeSystem {
        &self.solution.system
    }

    pub fn classes(&self) -> &[Vec<EpsTerm>] {
        self.solution.system.classes()
    }

    pub fn rounds(&self) -> &[SolverRound] {
        &self.solution.rounds
    }

    pub fn attached(&self) -> &[EpsSymbol] {
        &self.solution.attached
    }

    pub fn loose(&self) -> &[(usize, EpsTerm)] {
        &self.solution.loose
    }

    pub fn warnings(&self) -> &[String] {
        &self.solution.warnings
    }

    pub fn viol_term(&self, world: World) -> EpsTerm {
        self.table.term(world)
    }

    /// Orders the plausibilities of two worlds.
    pub fn compare_worlds(&self, a: World, b: World) -> Result<OrderVerdict> {
        self.system().compare(&self.viol_term(a), &self.viol_term(b))
    }

    pub fn query(&self, alpha: &Formula, beta: &Formula) -> Result<LcdAnswer> {
        alpha.check_atoms(self.atoms())?;
        beta.check_atoms(self.atoms())?;
        let atoms = self.atoms();
        let yes = WorldSet::models(&Formula::and(alpha.clone(), beta.clone()), atoms);
        let no = WorldSet::models(&Formula::and(alpha.clone(), Formula::not(beta.clone())), atoms);
        let lhs = prune(self.table.terms_of(&yes));
        let rhs = prune(self.table.terms_of(&no));
        if rhs.is_empty() {
            return Ok(LcdAnswer {
                entailed: true,
                verdict: None,
                lhs,
                rhs,
            });
        }
        if lhs.is_empty() {
            return Ok(LcdAnswer {
                entailed: false,
                verdict: Some(OrderVerdict::Smaller),
                lhs,
                rhs,
            });
        }
        let verdict = self.system().compare_max(&lhs, &rhs)?;
        Ok(LcdAnswer {
            entailed: verdict == OrderVerdict::Greater,
            verdict: Some(verdict),
            lhs,
            rhs,
        })
    }

    pub fn entails(&self, alpha: &Formula, beta: &Formula) -> Result<bool> {
        Ok(self.query(alpha, beta)?.entailed)
    }

    /// Models of `alpha` whose plausibility no other model of `alpha` beats.
    pub fn preferred_models(&self, alpha: &Formula) -> Result<Vec<World>> {
        alpha.check_atoms(self.atoms())?;
        let worlds = WorldSet::models(alpha, self.atoms());
        if worlds.is_empty() {
            return Err(Error::UnsatisfiableQuery);
        }
        let terms = self.table.terms_of(&worlds);
        let mut undominated = BTreeSet::new();
        for t in &terms {
            let mut beaten = false;
            for other in &terms {
                if other != t && self.system().compare(other, t)? == OrderVerdict::Greater {
                    beaten = true;
                    break;
                }
            }
            if !beaten {
                undominated.insert(t.clone());
            }
        }
        Ok(worlds
            .iter()
            .filter(|&w| undominated.contains(&self.viol_term(w)))
            .collect())
    }
}

pub fn entails_lcd(model: &LcdModel, alpha: &Formula, beta: &Formula) -> Result<bool> {
    model.entails(alpha, beta)
}

pub fn preferred_models(model: &LcdModel, alpha: &Formula) -> Result<Vec<World>> {
    model.preferred_models(alpha)
}
