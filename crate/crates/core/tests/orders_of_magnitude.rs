use std::collections::BTreeMap;

use beldef::epsalg::{prune, LinearConstraint, LinearSystem, Relation};
use beldef::gen;
use beldef::{DegreeSystem, EpsSymbol, EpsTerm, OrderVerdict};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const SYMBOLS: u32 = 4;

fn term() -> impl Strategy<Value = EpsTerm> {
    proptest::collection::vec(0u32..3, SYMBOLS as usize).prop_map(|powers| {
        let mut t = EpsTerm::unit();
        for (i, p) in powers.into_iter().enumerate() {
            if p > 0 {
                t = t.mul(&EpsTerm::power(EpsSymbol(i as u32 + 1), p));
            }
        }
        t
    })
}

#[derive(Debug, Clone)]
enum Fact {
    Equal(EpsTerm, EpsTerm),
    Dominates(EpsTerm, EpsTerm),
}

fn system() -> impl Strategy<Value = DegreeSystem> {
    let fact = prop_oneof![
        (term(), term()).prop_map(|(a, b)| Fact::Equal(a, b)),
        (term(), term()).prop_map(|(a, b)| Fact::Dominates(a, b)),
    ];
    proptest::collection::vec(fact, 0..4).prop_map(|facts| {
        let mut sys = DegreeSystem::new((1..=SYMBOLS).map(EpsSymbol));
        for f in facts {
            match f {
                Fact::Equal(a, b) => sys.equate(a, b),
                Fact::Dominates(a, b) => sys.dominate(a, b),
            }
        }
        sys
    })
}

fn degree(t: &EpsTerm, point: &BTreeMap<EpsSymbol, BigRational>) -> BigRational {
    t.degree_at(point)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn verdicts_hold_at_sampled_points(sys in system(), t1 in term(), t2 in term(), seed in any::<u64>()) {
        prop_assume!(sys.is_feasible());
        let v = sys.compare(&t1, &t2).unwrap();
        let mut rng = gen::rng(seed);
        for _ in 0..50 {
            let p = sys.sample(&mut rng).unwrap();
            let (d1, d2) = (degree(&t1, &p), degree(&t2, &p));
            match v {
                OrderVerdict::Greater => prop_assert!(d1 < d2),
                OrderVerdict::Smaller => prop_assert!(d1 > d2),
                OrderVerdict::SameOrder => prop_assert_eq!(d1, d2),
                OrderVerdict::Incomparable => {}
            }
        }
    }

    #[test]
    fn samples_lie_in_the_cone(sys in system(), seed in any::<u64>()) {
        prop_assume!(sys.is_feasible());
        let ls = sys.linear_system().unwrap();
        let mut rng = gen::rng(seed);
        for _ in 0..10 {
            let p: Vec<BigRational> = sys.sample(&mut rng).unwrap().into_values().collect();
            prop_assert!(ls.constraints().iter().all(|c| c.holds_at(&p)));
        }
    }

    #[test]
    fn strict_partial_order(sys in system(), t1 in term(), t2 in term(), t3 in term()) {
        prop_assume!(sys.is_feasible());
        prop_assert_eq!(sys.compare(&t1, &t1).unwrap(), OrderVerdict::SameOrder);
        let v12 = sys.compare(&t1, &t2).unwrap();
        prop_assert_eq!(sys.compare(&t2, &t1).unwrap(), v12.flip());
        if v12 == OrderVerdict::Greater && sys.compare(&t2, &t3).unwrap() == OrderVerdict::Greater {
            prop_assert_eq!(sys.compare(&t1, &t3).unwrap(), OrderVerdict::Greater);
        }
    }

    #[test]
    fn proper_divisors_dominate(sys in system(), t1 in term(), t2 in term()) {
        prop_assume!(sys.is_feasible());
        let bigger = t1.mul(&t2);
        prop_assume!(!t2.is_unit());
        prop_assert_eq!(sys.compare(&t1, &bigger).unwrap(), OrderVerdict::Greater);
    }

    #[test]
    fn max_comparison_sufficient_condition(sys in system(), s1 in proptest::collection::vec(term(), 1..3), s2 in proptest::collection::vec(term(), 1..3)) {
        prop_assume!(sys.is_feasible());
        let beats_all = s1.iter().any(|t| {
            s2.iter().all(|u| sys.compare(t, u).unwrap() == OrderVerdict::Greater)
        });
        if beats_all {
            prop_assert_eq!(sys.compare_max(&s1, &s2).unwrap(), OrderVerdict::Greater);
        }
    }

    #[test]
    fn max_comparison_ignores_pruned_terms(sys in system(), s1 in proptest::collection::vec(term(), 1..4), s2 in proptest::collection::vec(term(), 1..4)) {
        prop_assume!(sys.is_feasible());
        prop_assert_eq!(
            sys.compare_max(&s1, &s2).unwrap(),
            sys.compare_max(&prune(s1.clone()), &prune(s2.clone())).unwrap()
        );
    }

    #[test]
    fn planted_points_are_feasible(point in proptest::collection::vec(1i64..6, 3), rows in proptest::collection::vec(proptest::collection::vec(-3i64..4, 3), 1..6)) {
        // Every row gets the relation it satisfies at the planted point.
        let mut ls = LinearSystem::new(3);
        ls.require_positive();
        for row in &rows {
            let value: i64 = row.iter().zip(&point).map(|(a, x)| a * x).sum();
            let rel = if value == 0 { Relation::Eq } else { Relation::Gt };
            let coeffs: Vec<BigInt> = row.iter().map(|&a| BigInt::from(if value < 0 { -a } else { a })).collect();
            ls.push(LinearConstraint::homogeneous(coeffs, rel));
        }
        prop_assert!(ls.is_feasible());
        let w = ls.witness().unwrap();
        prop_assert!(ls.constraints().iter().all(|c| c.holds_at(&w)));
    }
}

fn e(i: u32) -> EpsTerm {
    EpsTerm::symbol(EpsSymbol(i))
}

#[test]
fn contradictions_are_infeasible() {
    let mut sys = DegreeSystem::new((1..=2).map(EpsSymbol));
    sys.dominate(e(1), e(2));
    sys.dominate(e(2), e(1));
    assert!(!sys.is_feasible());
    let mut sys = DegreeSystem::new((1..=2).map(EpsSymbol));
    sys.equate(e(1), e(1).mul(&e(2)));
    assert!(!sys.is_feasible());
}

#[test]
fn penguin_classes_decide_queries() {
    let sys = DegreeSystem::from_classes((1..=3).map(EpsSymbol), vec![vec![e(1)], vec![e(2), e(3)]]);
    assert_eq!(sys.compare_max(&[e(1)], &[e(2)]).unwrap(), OrderVerdict::Greater);
    assert_eq!(sys.compare_max(&[e(1), e(3)], &[e(2)]).unwrap(), OrderVerdict::Greater);
    assert_eq!(sys.compare(&e(2), &e(3)).unwrap(), OrderVerdict::SameOrder);
    assert_eq!(sys.compare(&e(1).mul(&e(1)), &e(2)).unwrap(), OrderVerdict::Incomparable);
}

#[test]
fn wings_incomparable() {
    // xi0 = {e1, e4}, xi1 = {e2, e3}: e2 against e1*e4 has free ratio.
    let sys = DegreeSystem::from_classes(
        (1..=4).map(EpsSymbol),
        vec![vec![e(1), e(4)], vec![e(2), e(3)]],
    );
    assert_eq!(sys.compare(&e(2), &e(1).mul(&e(4))).unwrap(), OrderVerdict::Incomparable);
}

#[test]
fn integer_witness_is_coprime_and_positive() {
    let sys = DegreeSystem::from_classes((1..=3).map(EpsSymbol), vec![vec![e(1)], vec![e(2), e(3)]]);
    let w = sys.integer_witness().unwrap();
    assert!(w.values().all(|&k| k > 0));
    let g = w.values().fold(0u64, |a, &b| num_integer::gcd(a, b));
    assert_eq!(g, 1);
    assert!(w[&EpsSymbol(1)] < w[&EpsSymbol(2)]);
    assert_eq!(w[&EpsSymbol(2)], w[&EpsSymbol(3)]);
}
