//! Exact feasibility of linear systems over the rationals by Fourier-Motzkin
//! elimination with strictness flags.
//!
//! Rows are kept integral and reduced by their content; equalities are
//! removed by substitution before any inequality is combined.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// `expr = 0`
    Eq,
    /// `expr >= 0`
    Ge,
    /// `expr > 0`
    Gt,
}

/// `coeffs . x + constant  (rel)  0`
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearConstraint {
    pub coeffs: Vec<BigInt>,
    pub constant: BigInt,
    pub rel: Relation,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<BigInt>, constant: BigInt, rel: Relation) -> Self {
        let mut c = Self {
            coeffs,
            constant,
            rel,
        };
        c.normalize();
        c
    }

    pub fn homogeneous(coeffs: Vec<BigInt>, rel: Relation) -> Self {
        Self::new(coeffs, BigInt::zero(), rel)
    }

    fn normalize(&mut self) {
        let mut g = self.constant.abs();
        for a in &self.coeffs {
            g = g.gcd(a);
        }
        if !g.is_zero() && !g.is_one() {
            for a in &mut self.coeffs {
                *a /= &g;
            }
            self.constant /= &g;
        }
        if self.rel == Relation::Eq {
            // canonical sign: first nonzero coefficient positive
            if let Some(first) = self.coeffs.iter().find(|a| !a.is_zero()) {
                if first.is_negative() {
                    for a in &mut self.coeffs {
                        *a = -&*a;
                    }
                    self.constant = -&self.constant;
                }
            }
        }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn constant_holds(&self) -> bool {
        match self.rel {
            Relation::Eq => self.constant.is_zero(),
            Relation::Ge => !self.constant.is_negative(),
            Relation::Gt => self.constant.is_positive(),
        }
    }

    fn eval_rest(&self, skip: usize, point: &[Option<BigRational>]) -> BigRational {
        let mut acc = BigRational::from_integer(self.constant.clone());
        for (i, a) in self.coeffs.iter().enumerate() {
            if i == skip || a.is_zero() {
                continue;
            }
            let xi = point[i].as_ref().expect("variable assigned before use");
            acc += xi * BigRational::from_integer(a.clone());
        }
        acc
    }

    pub fn holds_at(&self, point: &[BigRational]) -> bool {
        let mut acc = BigRational::from_integer(self.constant.clone());
        for (a, x) in self.coeffs.iter().zip(point) {
            acc += x * BigRational::from_integer(a.clone());
        }
        match self.rel {
            Relation::Eq => acc.is_zero(),
            Relation::Ge => !acc.is_negative(),
            Relation::Gt => acc.is_positive(),
        }
    }
}

/// Linear system over `vars` unknowns.
#[derive(Debug, Clone, Default)]
pub struct LinearSystem {
    vars: usize,
    constraints: Vec<LinearConstraint>,
}

enum Step {
    Substituted { var: usize, row: LinearConstraint },
    Eliminated { var: usize, rows: Vec<LinearConstraint> },
}

struct Trace {
    steps: Vec<Step>,
}

impl LinearSystem {
    pub fn new(vars: usize) -> Self {
        Self {
            vars,
            constraints: Vec::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn push(&mut self, c: LinearConstraint) {
        assert_eq!(c.coeffs.len(), self.vars, "constraint arity mismatch");
        self.constraints.push(c);
    }

    /// Adds `x_i > 0` for every variable.
    pub fn require_positive(&mut self) {
        for i in 0..self.vars {
            let mut coeffs = vec![BigInt::zero(); self.vars];
            coeffs[i] = BigInt::one();
            self.push(LinearConstraint::homogeneous(coeffs, Relation::Gt));
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.eliminate(false).is_some()
    }

    /// A point satisfying every constraint, if one exists.
    pub fn witness(&self) -> Option<Vec<BigRational>> {
        let trace = self.eliminate(true)?;
        Some(self.back_substitute(&trace, &mut Chooser::Canonical))
    }

    /// A pseudo-random point satisfying every constraint, if one exists.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Option<Vec<BigRational>> {
        let trace = self.eliminate(true)?;
        Some(self.back_substitute(&trace, &mut Chooser::Random(rng)))
    }

    fn eliminate(&self, record: bool) -> Option<Trace> {
        let mut steps = Vec::new();
        let mut rows: Vec<LinearConstraint> = Vec::with_capacity(self.constraints.len());
        for c in &self.constraints {
            if c.is_constant() {
                if !c.constant_holds() {
                    return None;
                }
            } else {
                rows.push(c.clone());
            }
        }

        // equalities by substitution
        while let Some(pos) = rows.iter().position(|r| r.rel == Relation::Eq) {
            let eq = rows.swap_remove(pos);
            let var = eq
                .coeffs
                .iter()
                .position(|a| !a.is_zero())
                .expect("constant rows were filtered");
            let pivot = eq.coeffs[var].clone();
            let mut next = Vec::with_capacity(rows.len());
            for r in rows.drain(..) {
                let b = &r.coeffs[var];
                let r = if b.is_zero() {
                    r
                } else {
                    // |pivot| * r - sign(pivot) * b * eq, direction preserved
                    let scale = pivot.abs();
                    let factor = if pivot.is_negative() { -b } else { b.clone() };
                    let coeffs = r
                        .coeffs
                        .iter()
                        .zip(&eq.coeffs)
                        .map(|(x, e)| x * &scale - e * &factor)
                        .collect();
                    let constant = &r.constant * &scale - &eq.constant * &factor;
                    LinearConstraint::new(coeffs, constant, r.rel)
                };
                if r.is_constant() {
                    if !r.constant_holds() {
                        return None;
                    }
                } else {
                    next.push(r);
                }
            }
            rows = next;
            if record {
                steps.push(Step::Substituted { var, row: eq });
            }
        }

        dedup(&mut rows);
        let mut remaining: Vec<usize> = (0..self.vars).collect();
        while !rows.is_empty() {
            // cheapest variable first
            let (slot, var) = remaining
                .iter()
                .copied()
                .enumerate()
                .filter(|&(_, v)| rows.iter().any(|r| !r.coeffs[v].is_zero()))
                .min_by_key(|&(_, v)| {
                    let pos = rows.iter().filter(|r| r.coeffs[v].is_positive()).count();
                    let neg = rows.iter().filter(|r| r.coeffs[v].is_negative()).count();
                    pos * neg
                })
                .expect("non-constant rows mention some variable");
            remaining.swap_remove(slot);

            let (touching, mut untouched): (Vec<_>, Vec<_>) =
                rows.into_iter().partition(|r| !r.coeffs[var].is_zero());
            let (lower, upper): (Vec<_>, Vec<_>) =
                touching.iter().partition(|r| r.coeffs[var].is_positive());
            for lo in &lower {
                for up in &upper {
                    let a = lo.coeffs[var].clone();
                    let b = -up.coeffs[var].clone();
                    let coeffs = lo
                        .coeffs
                        .iter()
                        .zip(&up.coeffs)
                        .map(|(x, y)| x * &b + y * &a)
                        .collect();
                    let constant = &lo.constant * &b + &up.constant * &a;
                    let rel = if lo.rel == Relation::Gt || up.rel == Relation::Gt {
                        Relation::Gt
                    } else {
                        Relation::Ge
                    };
                    let c = LinearConstraint::new(coeffs, constant, rel);
                    if c.is_constant() {
                        if !c.constant_holds() {
                            return None;
                        }
                    } else {
                        untouched.push(c);
                    }
                }
            }
            dedup(&mut untouched);
            rows = untouched;
            if record {
                steps.push(Step::Eliminated {
                    var,
                    rows: touching,
                });
            }
        }
        Some(Trace { steps })
    }

    fn back_substitute(&self, trace: &Trace, chooser: &mut Chooser<'_>) -> Vec<BigRational> {
        let mut point: Vec<Option<BigRational>> = vec![None; self.vars];
        // variables that never occur in an inequality step are free
        let mut bound = vec![false; self.vars];
        for step in &trace.steps {
            match step {
                Step::Substituted { var, .. } | Step::Eliminated { var, .. } => bound[*var] = true,
            }
        }
        for (i, b) in bound.iter().enumerate() {
            if !b {
                point[i] = Some(chooser.free());
            }
        }
        for step in trace.steps.iter().rev() {
            match step {
                Step::Eliminated { var, rows } => {
                    let mut lo: Option<(BigRational, bool)> = None;
                    let mut hi: Option<(BigRational, bool)> = None;
                    for r in rows {
                        let a = BigRational::from_integer(r.coeffs[*var].clone());
                        let rest = r.eval_rest(*var, &point);
                        let strict = r.rel == Relation::Gt;
                        let limit = -rest / &a;
                        if a.is_positive() {
                            tighten(&mut lo, limit, strict, |new, old| new > old);
                        } else {
                            tighten(&mut hi, limit, strict, |new, old| new < old);
                        }
                    }
                    point[*var] = Some(chooser.pick(lo, hi));
                }
                Step::Substituted { .. } => {}
            }
        }
        for step in trace.steps.iter().rev() {
            if let Step::Substituted { var, row } = step {
                let a = BigRational::from_integer(row.coeffs[*var].clone());
                for (i, c) in row.coeffs.iter().enumerate() {
                    if i != *var && !c.is_zero() && point[i].is_none() {
                        point[i] = Some(chooser.free());
                    }
                }
                let rest = row.eval_rest(*var, &point);
                point[*var] = Some(-rest / a);
            }
        }
        point
            .into_iter()
            .map(|x| x.unwrap_or_else(BigRational::one))
            .collect()
    }
}

fn tighten(
    slot: &mut Option<(BigRational, bool)>,
    limit: BigRational,
    strict: bool,
    better: impl Fn(&BigRational, &BigRational) -> bool,
) {
    match slot {
        Some((old, old_strict)) => {
            if better(&limit, old) {
                *slot = Some((limit, strict));
            } else if limit == *old {
                *old_strict |= strict;
            }
        }
        None => *slot = Some((limit, strict)),
    }
}

fn dedup(rows: &mut Vec<LinearConstraint>) {
    rows.sort();
    rows.dedup();
    // a strict row makes the non-strict copy of itself redundant
    let mut i = 0;
    while i + 1 < rows.len() {
        if rows[i].coeffs == rows[i + 1].coeffs && rows[i].constant == rows[i + 1].constant {
            rows.remove(i);
        } else {
            i += 1;
        }
    }
}

enum Chooser<'a> {
    Canonical,
    Random(&'a mut dyn rand::RngCore),
}

impl Chooser<'_> {
    fn free(&mut self) -> BigRational {
        match self {
            Chooser::Canonical => BigRational::one(),
            Chooser::Random(rng) => ratio(rng.gen_range(1..=100), 10),
        }
    }

    fn pick(
        &mut self,
        lo: Option<(BigRational, bool)>,
        hi: Option<(BigRational, bool)>,
    ) -> BigRational {
        match (lo, hi) {
            (None, None) => self.free(),
            (Some((l, _)), None) => {
                let step = match self {
                    Chooser::Canonical => BigRational::one(),
                    Chooser::Random(rng) => {
                        ratio(rng.gen_range(1..=300), 100) * (l.abs() + BigRational::one())
                    }
                };
                l + step
            }
            (None, Some((h, _))) => {
                let step = match self {
                    Chooser::Canonical => BigRational::one(),
                    Chooser::Random(rng) => {
                        ratio(rng.gen_range(1..=300), 100) * (h.abs() + BigRational::one())
                    }
                };
                h - step
            }
            (Some((l, _)), Some((h, _))) => {
                if l == h {
                    return l;
                }
                let t = match self {
                    Chooser::Canonical => ratio(1, 2),
                    Chooser::Random(rng) => ratio(rng.gen_range(1..1000), 1000),
                };
                &l + (h - &l) * t
            }
        }
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
