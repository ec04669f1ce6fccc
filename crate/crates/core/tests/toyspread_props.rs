use intuit::spread::{SpreadLaw, TruncatedTree};
use intuit::toyspread::{
    apply_witness, classify_point, enumerate_toy_points, normalize, toy_law, SumDescriptor, SumPoint, ToyPoint,
};
use proptest::prelude::*;

#[test]
fn coherence_of_the_next_toy_is_the_toy() {
    for n in 1..=5u64 {
        let big = TruncatedTree::build(&toy_law(n + 1), 10, n + 1);
        let layers = big.layers(2);
        let mut branching: Vec<Vec<u64>> = big
            .nodes_of_len(9)
            .iter()
            .filter(|&&i| layers[1].mask[i])
            .map(|&i| big.seq(i).0)
            .collect();
        let mut small: Vec<Vec<u64>> = TruncatedTree::build(&toy_law(n), 9, n + 1).leaves().into_iter().map(|s| s.0).collect();
        branching.sort();
        small.sort();
        assert_eq!(branching, small, "n = {n}");
    }
}

#[test]
fn normal_form_of_a_normal_form() {
    for n in 1..=5u64 {
        for m in 1..=5u64 {
            let (a, b, _) = normalize(&vec![m; n as usize]);
            assert_eq!((a, b), (n, m));
        }
    }
}

fn toy_point(n: u64) -> impl Strategy<Value = ToyPoint> {
    let pts = enumerate_toy_points(n, 6);
    (0..pts.len()).prop_map(move |i| pts[i].clone())
}

proptest! {
    #[test]
    fn classification_ignores_a_common_delay(n in 1u64..6, k in 0u64..5, pick in any::<prop::sample::Index>()) {
        let pts = enumerate_toy_points(n, 6);
        let p = &pts[pick.index(pts.len())];
        prop_assert_eq!(classify_point(n, &p.delay(k)).unwrap(), classify_point(n, p).unwrap());
    }

    #[test]
    fn witnesses_keep_the_limit_order(s in prop::collection::vec(0u64..5, 1..=4), pick in any::<prop::sample::Index>()) {
        let (n, m, w) = normalize(&s);
        let target = SumDescriptor::Product { n, m };
        let live: Vec<usize> = (0..s.len()).filter(|&i| s[i] > 0).collect();
        prop_assume!(!live.is_empty());
        let i = live[pick.index(live.len())];
        for inner in enumerate_toy_points(s[i], 4) {
            let p = SumPoint { component: i as u64, inner };
            let q = apply_witness(&w, &p).unwrap();
            prop_assert!(q.check_in(&target).is_ok());
            prop_assert_eq!(
                classify_point(s[i], &p.inner).unwrap().order,
                classify_point(m, &q.inner).unwrap().order
            );
        }
    }

    #[test]
    fn toy_points_are_paths(n in 1u64..6, p in toy_point(5)) {
        let law = toy_law(n);
        let inside = p.final_value() < n;
        prop_assert_eq!(law.accepts(&p.to_point().prefix(8)), inside);
    }
}
