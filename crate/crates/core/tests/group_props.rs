mod common;

use std::collections::BTreeSet;

use chebias::{Permutation, PermutationGroup};
use common::{group_strategy, perm_strategy};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_under_composition_and_inverse(g in group_strategy()) {
        let els = g.elements();
        prop_assert!(els[0].is_identity());
        for a in els {
            prop_assert!(g.contains(&a.inverse()));
            for b in els {
                prop_assert!(g.contains(&a.compose(b).unwrap()));
            }
        }
        let sorted: Vec<_> = els.iter().map(|p| p.images().to_vec()).collect();
        prop_assert!(sorted.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn generators_lie_in_group(g in group_strategy()) {
        for s in g.generators() {
            prop_assert!(g.contains(s));
        }
        let rebuilt = PermutationGroup::generate(g.degree(), g.generators()).unwrap();
        prop_assert_eq!(&rebuilt, &*g);
    }

    #[test]
    fn classes_partition_the_group(g in group_strategy()) {
        let mut seen = BTreeSet::new();
        for (cid, class) in g.classes().iter().enumerate() {
            prop_assert_eq!(g.order() % class.len(), 0);
            let rep = g.element(class.representative);
            for &m in &class.members {
                prop_assert!(seen.insert(m));
                prop_assert_eq!(g.class_of(m), cid);
                prop_assert!(rep.images() <= g.element(m).images());
            }
        }
        prop_assert_eq!(seen.len(), g.order());
    }

    #[test]
    fn classes_agree_with_brute_conjugacy(g in group_strategy(), picks in prop::collection::vec((0usize..1000, 0usize..1000), 12)) {
        for (i, j) in picks {
            let (x, y) = (i % g.order(), j % g.order());
            let brute = g.elements().iter().any(|a| {
                a.compose(g.element(x)).unwrap().compose(&a.inverse()).unwrap() == *g.element(y)
            });
            prop_assert_eq!(brute, g.class_of(x) == g.class_of(y));
        }
    }

    #[test]
    fn element_orders_divide_exponent(g in group_strategy()) {
        let e = g.exponent();
        for p in g.elements() {
            prop_assert_eq!(e % p.order(), 0);
            prop_assert!(p.pow(p.order()).is_identity());
        }
    }

    #[test]
    fn cycle_notation_round_trips(p in (1usize..=12).prop_flat_map(perm_strategy)) {
        let text = p.to_string();
        prop_assert_eq!(Permutation::parse(&text, p.degree()).unwrap(), p.clone());
        let moved: usize = p.cycle_type().iter().filter(|&&l| l > 1).sum();
        prop_assert_eq!(moved, p.support().len());
    }

    #[test]
    fn composition_applies_right_factor_first(a in perm_strategy(7), b in perm_strategy(7)) {
        let ab = a.compose(&b).unwrap();
        for x in 0..7 {
            prop_assert_eq!(ab.apply(x), a.apply(b.apply(x)));
        }
        prop_assert!(a.compose(&a.inverse()).unwrap().is_identity());
    }
}

#[test]
fn symmetric_group_class_count() {
    let s = |c: &str| Permutation::parse(c, 5).unwrap();
    let g = PermutationGroup::generate(5, &[s("(12)"), s("(12345)")]).unwrap();
    assert_eq!(g.order(), 120);
    assert_eq!(g.num_classes(), 7);
}

#[test]
fn mixed_degrees_are_rejected() {
    let a = Permutation::parse("(12)", 3).unwrap();
    let b = Permutation::parse("(12)", 4).unwrap();
    assert!(a.compose(&b).is_err());
}
