use intuit::spread::{
    cb_rank_profile, retract, validate_spread_law, Point, SpreadLaw, TableDefault, TableLaw, TruncatedTree,
};
use intuit::toyspread::{toy_law, SumDescriptor};
use proptest::prelude::*;

fn brute_valid(law: &dyn SpreadLaw, depth: usize, bound: u64) -> bool {
    let mut stack = vec![vec![]];
    while let Some(s) = stack.pop() {
        if s.len() == depth {
            continue;
        }
        let kids: Vec<Vec<u64>> = (0..bound).map(|c| [s.clone(), vec![c]].concat()).collect();
        if law.accepts(&s) != kids.iter().any(|k| law.accepts(k)) {
            return false;
        }
        stack.extend(kids);
    }
    true
}

fn table_strategy() -> impl Strategy<Value = TableLaw> {
    let row = prop::collection::vec(0..3u64, 0..=3);
    let default = prop_oneof![
        Just(TableDefault::RejectExtensions),
        Just(TableDefault::ExtendZeros),
        Just(TableDefault::ExtendAll)
    ];
    (prop::collection::vec(row, 0..12), default).prop_map(|(rows, d)| TableLaw::new(rows, d))
}

/// Prefix-closed tables where every short node has a child.
fn spread_table_strategy() -> impl Strategy<Value = TableLaw> {
    (prop::collection::vec(prop::collection::vec(0..3u64, 3), 1..6), any::<bool>()).prop_map(|(paths, all)| {
        let mut rows = Vec::new();
        for p in &paths {
            for k in 0..=p.len() {
                rows.push(p[..k].to_vec());
            }
        }
        TableLaw::new(rows, if all { TableDefault::ExtendAll } else { TableDefault::ExtendZeros })
    })
}

fn point_strategy() -> impl Strategy<Value = Point> {
    (prop::collection::vec(0..4u64, 0..6), prop::collection::vec(0..4u64, 1..3))
        .prop_map(|(pre, period)| Point::new(pre, period).unwrap())
}

proptest! {
    #[test]
    fn validation_matches_the_definition(law in table_strategy(), depth in 1usize..=5) {
        prop_assert_eq!(validate_spread_law(&law, depth, 3).is_valid(), brute_valid(&law, depth, 3));
    }

    #[test]
    fn retraction_fixes_members(law in spread_table_strategy(), pick in any::<prop::sample::Index>()) {
        let rows: Vec<Vec<u64>> = law.entries().filter(|r| r.len() == 3).cloned().collect();
        let x = Point::prefix_then_constant(&rows[pick.index(rows.len())], 0);
        for d in 0..8 {
            prop_assert_eq!(retract(&law, &x, d, 4).unwrap().0, x.prefix(d));
        }
    }

    #[test]
    fn retraction_lands_in_the_spread_coherently(law in spread_table_strategy(), x in point_strategy()) {
        let full = retract(&law, &x, 8, 4).unwrap();
        for d in 0..=8 {
            let r = retract(&law, &x, d, 4).unwrap();
            prop_assert!(law.accepts(r.as_slice()));
            prop_assert_eq!(r.as_slice(), &full.as_slice()[..d]);
        }
    }

    #[test]
    fn toy_retraction(n in 1u64..5, x in point_strategy()) {
        let law = toy_law(n);
        let r = retract(&law, &x, 7, 5).unwrap();
        prop_assert!(law.accepts(r.as_slice()));
        if law.accepts(&x.prefix(7)) {
            prop_assert_eq!(r.0, x.prefix(7));
        }
    }

    #[test]
    fn branching_nodes_are_not_isolated(law in spread_table_strategy()) {
        let t = TruncatedTree::build(&law, 6, 3);
        let layers = t.layers(2);
        if let Some(first) = layers.get(1) {
            let full: Vec<_> = t.leaves();
            for &i in t.nodes_of_len(first.height) {
                if first.mask[i] {
                    let s = t.seq(i);
                    let below = full.iter().filter(|l| l.as_slice().starts_with(s.as_slice())).count();
                    prop_assert!(below >= 2);
                }
            }
        }
    }
}

#[test]
fn rank_is_monotone_in_depth_on_toy_families() {
    let laws: Vec<Box<dyn SpreadLaw>> = vec![
        Box::new(toy_law(2)),
        Box::new(toy_law(4)),
        Box::new(SumDescriptor::Product { n: 3, m: 3 }.law()),
        Box::new(SumDescriptor::OmegaProduct { m: 2 }.law()),
    ];
    for law in &laws {
        let mut last = 0;
        for depth in 3..=10 {
            let p = cb_rank_profile(law.as_ref(), depth, 6, 8);
            let r = p.root_rank.expect("non-empty").lower_bound();
            assert!(r >= last, "{} at depth {depth}", law.describe());
            last = r;
        }
    }
}

#[test]
fn toy_truncations_separate_ranks() {
    // a leaf of the first derivative sits above at least two full paths
    for n in 2..=5 {
        let law = toy_law(n);
        let t = TruncatedTree::build(&law, 8, n);
        let layers = t.layers(3);
        let full = t.leaves();
        for &i in t.nodes_of_len(layers[1].height) {
            if layers[1].mask[i] {
                let s = t.seq(i);
                assert!(full.iter().filter(|l| l.as_slice().starts_with(s.as_slice())).count() >= 2);
            }
        }
    }
}
