use intuit::spread::Point;
use intuit::vitali::{
    decide, embed_in_estar, fan_for, iterate_plus, plus, transitive_closure_expr, union, RelExpr, VitaliError,
};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Point> {
    (prop::collection::vec(0..3u64, 0..6), prop::collection::vec(0..3u64, 1..=3))
        .prop_map(|(pre, period)| Point::new(pre, period).unwrap())
}

/// Eventual agreement by looking far enough out: past both prefixes, one
/// full common period decides it.
fn agree_eventually(a: &Point, b: &Point) -> bool {
    let start = a.pre().len().max(b.pre().len());
    let span = a.period().len() * b.period().len();
    (start..start + span).all(|i| a.at(i) == b.at(i))
}

fn towers() -> Vec<RelExpr> {
    let mut out: Vec<RelExpr> = (0..5).map(|i| RelExpr::Tower { i }).collect();
    out.extend([RelExpr::Base, RelExpr::OmegaTower, RelExpr::NegNeg, plus(union(vec![RelExpr::Base]))]);
    out
}

proptest! {
    #[test]
    fn every_relation_is_eventual_agreement(a in point(), b in point()) {
        let truth = agree_eventually(&a, &b);
        for r in towers() {
            prop_assert_eq!(decide(&r, &a, &b), truth, "{}", r);
        }
        prop_assert_eq!(decide(&RelExpr::Almost, &a, &b), truth);
    }

    #[test]
    fn towers_ignore_prefixes(a in point(), b in point(), head in prop::collection::vec(0..5u64, 0..4)) {
        for r in towers() {
            prop_assert_eq!(decide(&r, &a.splice(&head), &b), decide(&r, &a, &b));
        }
    }

    #[test]
    fn omega_tower_is_an_equivalence(a in point(), b in point(), c in point()) {
        let r = RelExpr::OmegaTower;
        prop_assert!(decide(&r, &a, &a));
        prop_assert_eq!(decide(&r, &a, &b), decide(&r, &b, &a));
        if decide(&r, &a, &b) && decide(&r, &b, &c) {
            prop_assert!(decide(&r, &a, &c));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn second_tower_is_shift_invariant(a in point(), b in point()) {
        let r = RelExpr::Tower { i: 2 };
        prop_assert_eq!(decide(&r, &a.shift(), &b.shift()), decide(&r, &a, &b));
    }
}

fn e_members() -> Vec<RelExpr> {
    let mut out = vec![RelExpr::Base, RelExpr::OmegaTower];
    for i in 0..4 {
        out.push(RelExpr::Tower { i });
        out.push(union(vec![RelExpr::Tower { i }, RelExpr::Base]));
        out.push(plus(union(vec![RelExpr::Tower { i }])));
    }
    out
}

proptest! {
    #[test]
    fn embedding_contains_the_relation(a in point(), b in point()) {
        for r in e_members() {
            let e = embed_in_estar(&r).unwrap();
            prop_assert!(e.is_estar(), "{}", e);
            if decide(&r, &a, &b) {
                prop_assert!(decide(&e, &a, &b), "{} into {}", r, e);
            }
        }
    }
}

#[test]
fn embedding_needs_the_grammar() {
    assert!(matches!(embed_in_estar(&RelExpr::Almost), Err(VitaliError::NotInE(_))));
    assert!(matches!(embed_in_estar(&RelExpr::NegNeg), Err(VitaliError::NotInE(_))));
}

#[test]
fn closure_composes() {
    let once = transitive_closure_expr(&RelExpr::Base).unwrap();
    let twice = transitive_closure_expr(&once).unwrap();
    let RelExpr::Union { children, .. } = &twice else { panic!("closure is a union") };
    assert_eq!(children[0], once);
    assert_eq!(children[2], iterate_plus(once.clone(), 2));
    assert!(matches!(transitive_closure_expr(&plus(RelExpr::Base)), Err(VitaliError::PreconditionFailed(_))));
    assert!(matches!(transitive_closure_expr(&RelExpr::Almost), Err(VitaliError::NotInE(_))));
}

#[test]
fn fans_hold_zero() {
    for r in e_members() {
        let e = embed_in_estar(&r).unwrap();
        let fan = fan_for(&e).unwrap();
        assert!(fan.contains(&Point::zero()), "{e}");
    }
    assert!(fan_for(&RelExpr::Almost).is_err());
}
