//! Order-of-magnitude algebra over products of infinitesimals.
//!
//! Every symbol `e` stands for `t^x_e` for a base infinitesimal `t` and a
//! positive degree `x_e`; a product has the sum of its factors' degrees. A
//! [`DegreeSystem`] carves a cone of admissible degree vectors, and
//! comparisons hold only if they hold at every point of that cone.

pub mod fm;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use fm::{LinearConstraint, LinearSystem, Relation};

/// One infinitesimal; for LCD there is one per rule occurrence, keyed by rule id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EpsSymbol(pub u32);

impl fmt::Display for EpsSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Multiset of symbols; the empty multiset is the unit term `1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EpsTerm(BTreeMap<EpsSymbol, u32>);

impl EpsTerm {
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn symbol(s: EpsSymbol) -> Self {
        Self::from_symbols([s])
    }

    pub fn from_symbols(symbols: impl IntoIterator<Item = EpsSymbol>) -> Self {
        let mut map = BTreeMap::new();
        for s in symbols {
            *map.entry(s).or_insert(0) += 1;
        }
        Self(map)
    }

    /// `s^power`.
    pub fn power(s: EpsSymbol, power: u32) -> Self {
        if power == 0 {
            return Self::unit();
        }
        Self(BTreeMap::from([(s, power)]))
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of factors, counting multiplicity.
    pub fn size(&self) -> u32 {
        self.0.values().sum()
    }

    /// At least two factors.
    pub fn is_complex(&self) -> bool {
        self.size() >= 2
    }

    pub fn contains(&self, s: EpsSymbol) -> bool {
        self.0.contains_key(&s)
    }

    pub fn multiplicity(&self, s: EpsSymbol) -> u32 {
        self.0.get(&s).copied().unwrap_or(0)
    }

    pub fn symbols(&self) -> impl Iterator<Item = EpsSymbol> + '_ {
        self.0.keys().copied()
    }

    pub fn factors(&self) -> impl Iterator<Item = (EpsSymbol, u32)> + '_ {
        self.0.iter().map(|(&s, &m)| (s, m))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut map = self.0.clone();
        for (s, m) in &other.0 {
            *map.entry(*s).or_insert(0) += m;
        }
        Self(map)
    }

    /// Multiset inclusion.
    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().all(|(s, m)| other.multiplicity(*s) >= *m)
    }

    pub fn degree_at(&self, degrees: &BTreeMap<EpsSymbol, BigRational>) -> BigRational {
        self.0
            .iter()
            .map(|(s, m)| degrees[s].clone() * BigRational::from_integer(BigInt::from(*m)))
            .sum()
    }
}

impl fmt::Display for EpsTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("1");
        }
        let mut first = true;
        for (s, m) in &self.0 {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "{s}")?;
            if *m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

/// Keeps only the terms that can be the maximum of the set: drops duplicates
/// and every proper multiple of another member.
pub fn prune(terms: impl IntoIterator<Item = EpsTerm>) -> Vec<EpsTerm> {
    let mut all: Vec<EpsTerm> = terms.into_iter().collect();
    all.sort_by_key(|t| t.size());
    let mut kept: Vec<EpsTerm> = Vec::new();
    for t in all {
        if !kept.iter().any(|k| k.divides(&t)) {
            kept.push(t);
        }
    }
    kept.sort();
    kept
}

/// Outcome of an order comparison between two quantities `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderVerdict {
    /// `a` is infinitely larger than `b` everywhere on the cone.
    Greater,
    /// `b` is infinitely larger than `a` everywhere on the cone.
    Smaller,
    /// Same order everywhere on the cone.
    SameOrder,
    /// None of the above holds uniformly.
    Incomparable,
}

impl OrderVerdict {
    pub fn flip(self) -> Self {
        match self {
            OrderVerdict::Greater => OrderVerdict::Smaller,
            OrderVerdict::Smaller => OrderVerdict::Greater,
            v => v,
        }
    }
}

/// Linear cone of admissible degree assignments.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct DegreeSystem {
    symbols: Vec<EpsSymbol>,
    equalities: Vec<(EpsTerm, EpsTerm)>,
    /// `(a, b)`: `a` is infinitely larger than `b`, `deg(a) < deg(b)`.
    dominations: Vec<(EpsTerm, EpsTerm)>,
    classes: Vec<Vec<EpsTerm>>,
    unconstrained: Vec<EpsSymbol>,
    #[serde(skip)]
    feasible: OnceLock<bool>,
}

impl DegreeSystem {
    pub fn new(symbols: impl IntoIterator<Item = EpsSymbol>) -> Self {
        let mut symbols: Vec<EpsSymbol> = symbols.into_iter().collect();
        symbols.sort();
        symbols.dedup();
        Self {
            symbols,
            ..Self::default()
        }
    }

    /// Chain `e1 >> e2 >> ... >> ek`.
    pub fn chain(k: u32) -> Self {
        let mut sys = Self::new((1..=k).map(EpsSymbol));
        for i in 1..k {
            sys.dominate(EpsTerm::symbol(EpsSymbol(i)), EpsTerm::symbol(EpsSymbol(i + 1)));
        }
        sys
    }

    /// Classes `xi_0 >> xi_1 >> ...`: equal degree inside a class, strictly
    /// increasing degree from one class to the next.
    pub fn from_classes(
        symbols: impl IntoIterator<Item = EpsSymbol>,
        classes: Vec<Vec<EpsTerm>>,
    ) -> Self {
        let mut sys = Self::new(symbols);
        for class in &classes {
            for pair in class.windows(2) {
                sys.equate(pair[0].clone(), pair[1].clone());
            }
        }
        for pair in classes.windows(2) {
            if let (Some(a), Some(b)) = (pair[0].first(), pair[1].first()) {
                sys.dominate(a.clone(), b.clone());
            }
        }
        sys.classes = classes;
        sys
    }

    pub fn equate(&mut self, a: EpsTerm, b: EpsTerm) {
        self.feasible = OnceLock::new();
        self.equalities.push((a, b));
    }

    /// Records `a >>_inf b`.
    pub fn dominate(&mut self, a: EpsTerm, b: EpsTerm) {
        self.feasible = OnceLock::new();
        self.dominations.push((a, b));
    }

    /// Records class labels for display; adds no constraint.
    pub fn set_classes(&mut self, classes: Vec<Vec<EpsTerm>>) {
        self.classes = classes;
    }

    pub fn mark_unconstrained(&mut self, s: EpsSymbol) {
        self.unconstrained.push(s);
    }

    pub fn symbols(&self) -> &[EpsSymbol] {
        &self.symbols
    }

    pub fn classes(&self) -> &[Vec<EpsTerm>] {
        &self.classes
    }

    pub fn equalities(&self) -> &[(EpsTerm, EpsTerm)] {
        &self.equalities
    }

    pub fn dominations(&self) -> &[(EpsTerm, EpsTerm)] {
        &self.dominations
    }

    pub fn unconstrained(&self) -> &[EpsSymbol] {
        &self.unconstrained
    }

    fn index(&self, s: EpsSymbol) -> Result<usize> {
        self.symbols
            .binary_search(&s)
            .map_err(|_| Error::UnknownSymbol(s.0))
    }

    fn linear(&self, t: &EpsTerm) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); self.symbols.len()];
        for (s, m) in t.factors() {
            v[self.index(s)?] += BigInt::from(m);
        }
        Ok(v)
    }

    /// `deg(a) - deg(b)`.
    fn difference(&self, a: &EpsTerm, b: &EpsTerm) -> Result<Vec<BigInt>> {
        let la = self.linear(a)?;
        let lb = self.linear(b)?;
        Ok(la.into_iter().zip(lb).map(|(x, y)| x - y).collect())
    }

    /// The cone as a linear system over `symbols()` in order.
    pub fn linear_system(&self) -> Result<LinearSystem> {
        let mut sys = LinearSystem::new(self.symbols.len());
        sys.require_positive();
        for (a, b) in &self.equalities {
            sys.push(LinearConstraint::homogeneous(
                self.difference(a, b)?,
                Relation::Eq,
            ));
        }
        for (a, b) in &self.dominations {
            sys.push(LinearConstraint::homogeneous(
                self.difference(b, a)?,
                Relation::Gt,
            ));
        }
        Ok(sys)
    }

    pub fn is_feasible(&self) -> bool {
        *self.feasible.get_or_init(|| {
            self.linear_system()
                .map(|s| s.is_feasible())
                .unwrap_or(false)
        })
    }

    fn ensure_feasible(&self) -> Result<()> {
        if self.is_feasible() {
            Ok(())
        } else {
            Err(Error::InfeasibleSystem)
        }
    }

    /// Feasibility of the cone extended by `extra` rows.
    fn feasible_with(&self, extra: impl IntoIterator<Item = LinearConstraint>) -> Result<bool> {
        let mut sys = self.linear_system()?;
        for c in extra {
            sys.push(c);
        }
        Ok(sys.is_feasible())
    }

    /// Whether some cone point has `deg(a) - deg(b) rel 0`.
    fn possible(&self, a: &EpsTerm, b: &EpsTerm, rel: Relation) -> Result<bool> {
        let d = self.difference(a, b)?;
        self.feasible_with([LinearConstraint::homogeneous(d, rel)])
    }

    /// Orders `t1` against `t2` uniformly over the cone.
    pub fn compare(&self, t1: &EpsTerm, t2: &EpsTerm) -> Result<OrderVerdict> {
        self.ensure_feasible()?;
        self.linear(t1)?;
        self.linear(t2)?;
        if t1 == t2 {
            return Ok(OrderVerdict::SameOrder);
        }
        let can_ge = self.possible(t1, t2, Relation::Ge)?;
        if !can_ge {
            return Ok(OrderVerdict::Greater);
        }
        let can_le = self.possible(t2, t1, Relation::Ge)?;
        if !can_le {
            return Ok(OrderVerdict::Smaller);
        }
        let can_gt = self.possible(t1, t2, Relation::Gt)?;
        let can_lt = self.possible(t2, t1, Relation::Gt)?;
        if !can_gt && !can_lt {
            Ok(OrderVerdict::SameOrder)
        } else {
            Ok(OrderVerdict::Incomparable)
        }
    }

    /// Orders `max s1` against `max s2`, where the max of a set of terms is
    /// its member of least degree, pointwise on the cone.
    pub fn compare_max(&self, s1: &[EpsTerm], s2: &[EpsTerm]) -> Result<OrderVerdict> {
        if s1.is_empty() || s2.is_empty() {
            return Err(Error::EmptyOperand);
        }
        self.ensure_feasible()?;
        for t in s1.iter().chain(s2) {
            self.linear(t)?;
        }
        let s1 = prune(s1.iter().cloned());
        let s2 = prune(s2.iter().cloned());
        if s1 == s2 {
            return Ok(OrderVerdict::SameOrder);
        }
        // max s1 <= max s2 somewhere iff some u in s2 is at most as deep as all of s1
        let s2_reaches = self.some_member_dominates(&s2, &s1, Relation::Ge)?;
        if !s2_reaches {
            return Ok(OrderVerdict::Greater);
        }
        let s1_reaches = self.some_member_dominates(&s1, &s2, Relation::Ge)?;
        if !s1_reaches {
            return Ok(OrderVerdict::Smaller);
        }
        let s1_strict = self.some_member_dominates(&s1, &s2, Relation::Gt)?;
        let s2_strict = self.some_member_dominates(&s2, &s1, Relation::Gt)?;
        if !s1_strict && !s2_strict {
            Ok(OrderVerdict::SameOrder)
        } else {
            Ok(OrderVerdict::Incomparable)
        }
    }

    /// Whether some cone point and some `u` in `leaders` have
    /// `deg(t) - deg(u) rel 0` for every `t` in `others`.
    fn some_member_dominates(
        &self,
        leaders: &[EpsTerm],
        others: &[EpsTerm],
        rel: Relation,
    ) -> Result<bool> {
        for u in leaders {
            let rows = others
                .iter()
                .map(|t| Ok(LinearConstraint::homogeneous(self.difference(t, u)?, rel)))
                .collect::<Result<Vec<_>>>()?;
            if self.feasible_with(rows)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// A canonical point of the cone.
    pub fn witness(&self) -> Result<BTreeMap<EpsSymbol, BigRational>> {
        let point = self.linear_system()?.witness().ok_or(Error::InfeasibleSystem)?;
        Ok(self.symbols.iter().copied().zip(point).collect())
    }

    /// A pseudo-random point of the cone.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Result<BTreeMap<EpsSymbol, BigRational>> {
        let point = self
            .linear_system()?
            .sample(rng)
            .ok_or(Error::InfeasibleSystem)?;
        Ok(self.symbols.iter().copied().zip(point).collect())
    }

    /// The canonical witness scaled to positive integer degrees with no
    /// common factor.
    pub fn integer_witness(&self) -> Result<BTreeMap<EpsSymbol, u64>> {
        let point = self.witness()?;
        Ok(integer_scaling(&point))
    }
}

/// Scales a positive rational point to coprime positive integers.
pub fn integer_scaling(point: &BTreeMap<EpsSymbol, BigRational>) -> BTreeMap<EpsSymbol, u64> {
    let lcm = point
        .values()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<(EpsSymbol, BigInt)> = point
        .iter()
        .map(|(s, x)| (*s, (x * BigRational::from_integer(lcm.clone())).to_integer()))
        .collect();
    let g = ints
        .iter()
        .fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    ints.into_iter()
        .map(|(s, v)| {
            let v = if g.is_zero() { v } else { v / &g };
            (s, u64::try_from(v).expect("degree fits in u64"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: u32) -> EpsTerm {
        EpsTerm::symbol(EpsSymbol(i))
    }

    fn prod(ids: &[u32]) -> EpsTerm {
        EpsTerm::from_symbols(ids.iter().map(|&i| EpsSymbol(i)))
    }

    fn syms(n: u32) -> impl Iterator<Item = EpsSymbol> {
        (1..=n).map(EpsSymbol)
    }

    /// xi_0 = {e1}, xi_1 = {e2, e3}
    fn penguin_system() -> DegreeSystem {
        DegreeSystem::from_classes(syms(3), vec![vec![e(1)], vec![e(2), e(3)]])
    }

    /// xi_0 = {e1, e4}, xi_1 = {e2, e3}
    fn wings_system() -> DegreeSystem {
        DegreeSystem::from_classes(syms(4), vec![vec![e(1), e(4)], vec![e(2), e(3)]])
    }

    #[test]
    fn term_basics() {
        let t = prod(&[2, 1, 2]);
        assert_eq!(t.to_string(), "e1*e2^2");
        assert_eq!(t.size(), 3);
        assert!(prod(&[1, 2]).divides(&t));
        assert!(!prod(&[1, 1]).divides(&t));
        assert_eq!(EpsTerm::unit().to_string(), "1");
        assert!(EpsTerm::unit().divides(&t));
        assert_eq!(e(1).mul(&e(2)), prod(&[1, 2]));
        assert_eq!(EpsTerm::power(EpsSymbol(3), 2), prod(&[3, 3]));
    }

    #[test]
    fn pruning_removes_multiples() {
        let p = prune([prod(&[2, 4]), prod(&[1, 4]), prod(&[2, 3, 4]), prod(&[2, 4])]);
        assert_eq!(p, vec![prod(&[1, 4]), prod(&[2, 4])]);
        let p = prune([e(4), prod(&[1, 4])]);
        assert_eq!(p, vec![e(4)]);
    }

    #[test]
    fn class_separation() {
        let sys = penguin_system();
        assert_eq!(sys.compare(&e(1), &e(2)).unwrap(), OrderVerdict::Greater);
        assert_eq!(sys.compare(&e(2), &e(1)).unwrap(), OrderVerdict::Smaller);
        assert_eq!(sys.compare(&e(2), &e(3)).unwrap(), OrderVerdict::SameOrder);
        let t = prod(&[1, 2]);
        assert_eq!(sys.compare(&t, &t).unwrap(), OrderVerdict::SameOrder);
    }

    #[test]
    fn free_ratio_between_classes_is_incomparable() {
        let sys = wings_system();
        assert_eq!(
            sys.compare(&e(2), &prod(&[1, 4])).unwrap(),
            OrderVerdict::Incomparable
        );
    }

    #[test]
    fn single_class_products() {
        let sys = DegreeSystem::from_classes(syms(3), vec![vec![e(1), e(2), e(3)]]);
        assert_eq!(sys.compare(&e(3), &prod(&[1, 2])).unwrap(), OrderVerdict::Greater);
    }

    #[test]
    fn max_comparisons() {
        let sys = wings_system();
        let s1 = [e(2), e(1), prod(&[2, 3]), e(2)];
        let s2 = [prod(&[2, 4]), prod(&[1, 4]), prod(&[2, 3, 4]), prod(&[2, 4])];
        assert_eq!(sys.compare_max(&s1, &s2).unwrap(), OrderVerdict::Greater);
        assert_eq!(sys.compare_max(&s2, &s1).unwrap(), OrderVerdict::Smaller);
        assert_eq!(
            sys.compare_max(&[EpsTerm::unit()], &[e(2), prod(&[1, 3])]).unwrap(),
            OrderVerdict::Greater
        );
        assert_eq!(sys.compare_max(&s1, &s1).unwrap(), OrderVerdict::SameOrder);
        assert_eq!(sys.compare_max(&[], &s1), Err(Error::EmptyOperand));
    }

    #[test]
    fn errors() {
        let mut sys = DegreeSystem::chain(2);
        assert_eq!(sys.compare(&e(1), &e(9)), Err(Error::UnknownSymbol(9)));
        sys.dominate(e(2), e(1));
        assert!(!sys.is_feasible());
        assert_eq!(sys.compare(&e(1), &e(2)), Err(Error::InfeasibleSystem));
    }

    #[test]
    fn chain_orders_levels() {
        let sys = DegreeSystem::chain(3);
        assert_eq!(sys.compare(&e(1), &e(3)).unwrap(), OrderVerdict::Greater);
        let w = sys.integer_witness().unwrap();
        assert!(w[&EpsSymbol(1)] < w[&EpsSymbol(2)] && w[&EpsSymbol(2)] < w[&EpsSymbol(3)]);
    }

    #[test]
    fn integer_witness_respects_equalities() {
        let mut sys = DegreeSystem::new(syms(3));
        sys.equate(prod(&[1, 2]), e(3));
        sys.equate(e(1), e(2));
        let w = sys.integer_witness().unwrap();
        assert_eq!(w[&EpsSymbol(1)] + w[&EpsSymbol(2)], w[&EpsSymbol(3)]);
        assert_eq!(w[&EpsSymbol(1)], 1);
    }
}
