use std::collections::{BTreeMap, HashSet};

use geomrep::freegroup::{
    bounded_ft_check, intersection, k_group, product_membership, rc_check_exact, reduce,
    rose_cover_generators, subgroup_action, FreeAutomorphism, ParabolicFamily, ProductTester,
    StallingsGraph, Word,
};
use geomrep::FreeGroupError;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn letters(rank: i32, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    proptest::collection::vec((1..=rank, any::<bool>()).prop_map(|(g, s)| if s { g } else { -g }), 0..max_len)
}

/// Folding by repeatedly merging the last conflicting pair found, then
/// trimming and breadth-first renumbering; edges as in `StallingsGraph::edges`.
fn naive_graph(gens: &[Word]) -> Vec<(usize, i32, usize)> {
    let mut edges: Vec<(usize, i32, usize)> = Vec::new();
    let mut n = 1;
    for g in gens.iter().filter(|g| !g.is_empty()) {
        let mut v = 0;
        for (k, &l) in g.letters().iter().enumerate() {
            let next = if k + 1 == g.len() { 0 } else { n += 1; n - 1 };
            edges.push(if l > 0 { (v, l, next) } else { (next, -l, v) });
            v = next;
        }
    }
    edges.sort_unstable();
    edges.dedup();
    loop {
        let mut found = None;
        'scan: for a in (0..edges.len()).rev() {
            for b in (0..a).rev() {
                let (ea, eb) = (edges[a], edges[b]);
                if ea.1 == eb.1 && ea.0 == eb.0 && ea.2 != eb.2 {
                    found = Some((ea.2, eb.2));
                    break 'scan;
                }
                if ea.1 == eb.1 && ea.2 == eb.2 && ea.0 != eb.0 {
                    found = Some((ea.0, eb.0));
                    break 'scan;
                }
            }
        }
        let Some((x, y)) = found else { break };
        let (keep, gone) = (x.min(y), x.max(y));
        for e in &mut edges {
            if e.0 == gone { e.0 = keep; }
            if e.2 == gone { e.2 = keep; }
        }
        edges.sort_unstable();
        edges.dedup();
    }
    loop {
        let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
        for e in &edges {
            *degree.entry(e.0).or_default() += 1;
            *degree.entry(e.2).or_default() += 1;
        }
        let leaf = degree.iter().find(|(&v, &d)| v != 0 && d < 2).map(|(&v, _)| v);
        let Some(v) = leaf else { break };
        edges.retain(|e| e.0 != v && e.2 != v);
    }
    let mut number = BTreeMap::from([(0usize, 0usize)]);
    let mut order = vec![0usize];
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        let mut out: Vec<(i32, usize)> = Vec::new();
        for e in &edges {
            if e.0 == v { out.push((e.1, e.2)); }
            if e.2 == v { out.push((-e.1, e.0)); }
        }
        out.sort_unstable();
        for (_, t) in out {
            if !number.contains_key(&t) {
                number.insert(t, order.len());
                order.push(t);
            }
        }
        i += 1;
    }
    let mut renamed: Vec<(usize, i32, usize)> = edges.iter().map(|e| (number[&e.0], e.1, number[&e.2])).collect();
    renamed.sort_unstable();
    renamed
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn reduction_is_compatible_with_concatenation(u in letters(3, 12), v in letters(3, 12)) {
        let mut uv = u.clone();
        uv.extend(&v);
        let mut u_rv = u.clone();
        u_rv.extend(reduce(&v).letters());
        prop_assert_eq!(reduce(&uv), reduce(&u_rv));
        let r = reduce(&uv);
        prop_assert!(r.letters().windows(2).all(|p| p[0] != -p[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn folding_is_independent_of_order(gens in proptest::collection::vec(letters(2, 7), 1..4)) {
        let words: Vec<Word> = gens.iter().map(|g| reduce(g)).collect();
        let g = StallingsGraph::new(&words);
        prop_assert_eq!(g.edges(), naive_graph(&words));
        let mut reversed = words.clone();
        reversed.reverse();
        prop_assert_eq!(StallingsGraph::new(&reversed), g.clone());
        for x in &words {
            prop_assert!(g.contains(x));
        }
    }

    #[test]
    fn intersections_are_contained_and_symmetric(
        a in proptest::collection::vec(letters(2, 5), 1..3),
        b in proptest::collection::vec(letters(2, 5), 1..3),
    ) {
        let h = StallingsGraph::new(&a.iter().map(|g| reduce(g)).collect::<Vec<_>>());
        let k = StallingsGraph::new(&b.iter().map(|g| reduce(g)).collect::<Vec<_>>());
        let hk = intersection(&h, &k);
        let kh = intersection(&k, &h);
        prop_assert!(hk.same_subgroup(&kh));
        prop_assert!(hk.is_subgroup_of(&h) && hk.is_subgroup_of(&k));
        prop_assert_eq!(hk.rank(), kh.rank());
    }
}

/// Visits every reduced product of at most `depth` letters of `alphabet`,
/// where letters `2i` and `2i+1` are mutually inverse.
fn visit_products(alphabet: &[Word], depth: usize, prefix: &Word, last: Option<usize>, out: &mut impl FnMut(&Word)) {
    out(prefix);
    if depth == 0 {
        return;
    }
    for (i, a) in alphabet.iter().enumerate() {
        if last == Some(i ^ 1) {
            continue;
        }
        visit_products(alphabet, depth - 1, &prefix.mul(a), Some(i), out);
    }
}

#[test]
fn membership_matches_products_of_generators() {
    let s = rose_cover_generators(2).unwrap();
    let g = StallingsGraph::new(&s);
    let alphabet: Vec<Word> = s.iter().flat_map(|x| [x.clone(), x.inverse()]).collect();
    let mut short: HashSet<Word> = HashSet::new();
    let mut all_members = true;
    visit_products(&alphabet, 8, &Word::identity(), None, &mut |p| {
        all_members &= g.contains(p);
        if p.len() <= 8 {
            short.insert(p.clone());
        }
    });
    assert!(all_members);
    for x in Word::all_up_to(2, 8) {
        assert_eq!(g.contains(&x), short.contains(&x), "{x}");
    }
}

#[test]
fn graph_examples() {
    let x = StallingsGraph::new(&[w("x")]);
    assert_eq!((x.vertex_count(), x.edge_count(), x.rank()), (1, 1, 1));
    assert!(x.contains(&w("x")));
    assert!(!StallingsGraph::new(&[w("x^2")]).contains(&w("x")));
    assert_eq!(StallingsGraph::new(&[w("x^2"), w("x^3")]), x);
    let fam = ParabolicFamily::rose_cover(2).unwrap();
    assert!(!fam.members[0].contains(&w("yxy^-1")));
    assert_eq!(intersection(&x, &StallingsGraph::new(&[w("y")])), StallingsGraph::trivial());
    assert!(intersection(&fam.members[2], &fam.members[2]).same_subgroup(&fam.members[2]));
    for h in &fam.members {
        let gens = h.generators();
        assert_eq!(gens.len(), h.rank());
        assert!(StallingsGraph::new(&gens).same_subgroup(h));
    }
}

#[test]
fn rose_cover_family_sizes() {
    assert_eq!(rose_cover_generators(3).unwrap().len(), 12);
    assert_eq!(rose_cover_generators(1), Err(FreeGroupError::RankTooSmall { min: 2 }));
    for n in 2..=4 {
        let s = rose_cover_generators(n).unwrap();
        assert_eq!(StallingsGraph::new(&s).rank(), 2 * n * (n - 1));
    }
}

#[test]
fn products_of_sampled_elements_are_members() {
    let fam = ParabolicFamily::rose_cover(2).unwrap();
    let (h, k) = (&fam.members[0], &fam.members[3]);
    let hg = h.generators();
    let kg = k.generators();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sample = |gens: &[Word], rng: &mut ChaCha8Rng| {
        let mut acc = Word::identity();
        for _ in 0..rng.gen_range(0..5) {
            let g = &gens[rng.gen_range(0..gens.len())];
            acc = acc.mul(&if rng.gen() { g.clone() } else { g.inverse() });
        }
        acc
    };
    let tester = ProductTester::new(h, k);
    let trivial = StallingsGraph::trivial();
    for _ in 0..1000 {
        let a = sample(&hg, &mut rng);
        let b = sample(&kg, &mut rng);
        let word = a.mul(&b);
        assert!(product_membership(&word, h, k));
        assert!(tester.contains(&word));
        assert!(product_membership(&a, h, &trivial));
    }
}

#[test]
fn automorphism_examples() {
    let k = k_group(2).unwrap();
    assert_eq!(k[0].apply(&w("yxy^-1")).unwrap(), w("yx^-1y^-1"));
    let swap = FreeAutomorphism::new(2, vec![w("y"), w("x")]).unwrap();
    assert_eq!(swap.apply(&w("yxy^-1")).unwrap(), w("xyx^-1"));
    assert!(k[0].then(&k[0]).unwrap().is_identity());
    let id = FreeAutomorphism::identity(3);
    for x in Word::all_up_to(3, 3) {
        assert_eq!(id.apply(&x).unwrap(), x);
    }
    assert!(FreeAutomorphism::new(2, vec![w("xy"), w("y")]).is_ok());
    assert_eq!(FreeAutomorphism::new(2, vec![w("x^2"), w("y")]), Err(FreeGroupError::NotABasis));
    assert!(matches!(FreeAutomorphism::new(2, vec![w("x")]), Err(FreeGroupError::RankMismatch { .. })));
    let k3 = k_group(3).unwrap();
    assert_eq!(k3[1].apply(&w("x1 x3")).unwrap(), w("x2 x1"));
}

#[test]
fn subgroup_action_rejects_foreign_automorphisms() {
    let fam = ParabolicFamily::rose_cover(2).unwrap();
    let transvection = FreeAutomorphism::new(2, vec![w("xy"), w("y")]).unwrap();
    assert!(matches!(
        subgroup_action(&[transvection], &fam),
        Err(FreeGroupError::NoMatchingSubgroup { .. })
    ));
}

#[test]
fn subgroup_checks_on_rank_two_family() {
    let fam = ParabolicFamily::rose_cover(2).unwrap();
    assert!(bounded_ft_check(&fam, &[0, 1], 2, 6).unwrap().pass);
    assert!(bounded_ft_check(&fam, &[], 1, 4).unwrap().pass);
    assert!(bounded_ft_check(&fam, &[0], 3, 5).unwrap().pass);
    let rc = rc_check_exact(&fam).unwrap();
    assert!(rc.pass);
    assert_eq!(rc.entries.len(), 11);
    let single = ParabolicFamily::new(2, vec![w("x")]);
    assert!(rc_check_exact(&single).unwrap().pass);
    let g12 = intersection(&fam.members[0], &fam.members[1]);
    assert!(g12.same_subgroup(&StallingsGraph::new(&[w("xyx^-1"), w("x^-1yx")])));
}
