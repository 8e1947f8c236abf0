use std::collections::HashSet;

use geomrep::{PermGroup, Permutation};
use num_bigint::BigUint;
use proptest::prelude::*;

/// Closure of the generators by breadth-first multiplication.
fn closure(gens: &[Permutation], degree: usize) -> HashSet<Permutation> {
    let mut seen = HashSet::from([Permutation::identity(degree)]);
    let mut frontier = vec![Permutation::identity(degree)];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

fn perm_strategy(degree: usize) -> impl Strategy<Value = Permutation> {
    Just((0..degree).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_usize_images(&v).unwrap())
}

#[test]
fn symmetric_and_alternating_orders() {
    for n in 1..=9 {
        let fact: u64 = (1..=n as u64).product();
        assert_eq!(PermGroup::symmetric(n).order(), BigUint::from(fact));
    }
    let three = Permutation::from_cycles(7, &[&[0, 1, 2]]).unwrap();
    let long = Permutation::from_cycles(7, &[&[0, 1, 2, 3, 4, 5, 6]]).unwrap();
    assert_eq!(PermGroup::new(7, vec![three, long]).unwrap().order_u64(), Some(2520));
}

#[test]
fn large_symmetric_group_order_is_exact() {
    let s = PermGroup::symmetric(30);
    let fact = (1..=30u32).fold(BigUint::from(1u32), |acc, k| acc * k);
    assert_eq!(s.order(), fact);
}

#[test]
fn fingerprint_of_dihedral_group_of_square() {
    let r = Permutation::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
    let s = Permutation::from_cycles(4, &[&[1, 3]]).unwrap();
    let fp = PermGroup::new(4, vec![r, s]).unwrap().fingerprint(100).unwrap();
    assert_eq!(fp.order, 8);
    assert_eq!(fp.center_order, 2);
    assert_eq!(fp.element_orders.get(&4), Some(&2));
    assert_eq!(fp.involutions(), 5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn order_matches_closure(a in perm_strategy(6), b in perm_strategy(6)) {
        let g = PermGroup::new(6, vec![a.clone(), b.clone()]).unwrap();
        let elems = closure(&[a, b], 6);
        prop_assert_eq!(g.order(), BigUint::from(elems.len()));
        for x in elems.iter().take(20) {
            prop_assert!(g.contains(x).unwrap());
        }
    }

    #[test]
    fn membership_rejects_outsiders(a in perm_strategy(7), x in perm_strategy(7)) {
        let g = PermGroup::new(7, vec![a.clone()]).unwrap();
        let inside = (0..a.order()).any(|k| a.pow(k) == x);
        prop_assert_eq!(g.contains(&x).unwrap(), inside);
    }

    #[test]
    fn then_and_inverse(a in perm_strategy(8), b in perm_strategy(8), x in 0usize..8) {
        prop_assert_eq!(a.then(&b).apply(x), b.apply(a.apply(x)));
        prop_assert!(a.then(&a.inverse()).is_identity());
        prop_assert!(a.pow(a.order()).is_identity());
    }
}
