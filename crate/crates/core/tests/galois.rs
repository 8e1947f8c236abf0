use geomrep::galois::FieldElement;
use geomrep::{FiniteField, ProjectiveSpace};
use proptest::prelude::*;

fn fields() -> Vec<FiniteField> {
    [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (5, 2), (2, 4)]
        .into_iter()
        .map(|(p, k)| FiniteField::new(p, k).unwrap())
        .collect()
}

fn times(f: &FiniteField, v: &[FieldElement], m: &[Vec<FieldElement>]) -> Vec<FieldElement> {
    (0..m[0].len())
        .map(|j| v.iter().zip(m).fold(0, |acc, (&a, row)| f.add(acc, f.mul(a, row[j]))))
        .collect()
}

#[test]
fn field_axioms_exhaustively() {
    for f in fields() {
        let q = f.order();
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
                assert_eq!(f.pow(a, (q - 1) as u64), 1);
            }
            for b in f.elements() {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
                assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
            }
        }
        let g = f.primitive_element();
        let powers: std::collections::HashSet<FieldElement> = (0..q as u64 - 1).map(|e| f.pow(g, e)).collect();
        assert_eq!(powers.len(), q as usize - 1);
    }
}

#[test]
fn subfields() {
    let f16 = FiniteField::new(2, 4).unwrap();
    assert_eq!(f16.elements().filter(|&x| f16.in_subfield(x, 2)).count(), 4);
    assert_eq!(f16.elements().filter(|&x| f16.in_subfield(x, 1)).count(), 2);
    assert!(f16.check_subfield(3).is_err());
    assert!(FiniteField::new(4, 1).is_err());
}

#[test]
fn projective_space_counts() {
    for f in fields().into_iter().filter(|f| f.order() <= 9) {
        let q = f.order() as usize;
        let plane = ProjectiveSpace::new(&f, 2).unwrap();
        assert_eq!(plane.point_count(), q * q + q + 1);
        assert_eq!(plane.subspaces(1).len(), q * q + q + 1);
        let sys = plane.incidence_system();
        assert!(sys.is_geometry() && sys.is_firm() && sys.is_residually_connected());
        assert_eq!(sys.incidence_graph().girth(), Some(6));
    }
    let f2 = FiniteField::new(2, 1).unwrap();
    let pg3 = ProjectiveSpace::new(&f2, 3).unwrap();
    let sizes: Vec<usize> = (0..3).map(|d| pg3.subspaces(d).len()).collect();
    assert_eq!(sizes, [15, 35, 15]);
}

#[test]
fn projective_linear_group_orders() {
    for (p, k, order) in [(2, 1, 168u64), (3, 1, 5616), (2, 2, 60480)] {
        let f = FiniteField::new(p, k).unwrap();
        let plane = ProjectiveSpace::new(&f, 2).unwrap();
        assert_eq!(plane.pgl_group().order_u64(), Some(order));
    }
}

#[test]
fn cross_ratio_errors() {
    let f = FiniteField::new(3, 1).unwrap();
    let a = [1, 0, 0];
    let b = [0, 1, 0];
    let c = [0, 0, 1];
    let d = [1, 1, 0];
    assert!(f.cross_ratio([&a, &b, &c, &d]).is_err());
    assert!(f.cross_ratio([&a, &b, &a, &d]).is_err());
}

fn invertible(f: &FiniteField, entries: &[u32]) -> Option<Vec<Vec<FieldElement>>> {
    let q = f.order();
    let m: Vec<Vec<FieldElement>> = entries.chunks(3).map(|r| r.iter().map(|&x| x % q).collect()).collect();
    (f.rref(&m).iter().filter(|r| r.iter().any(|&x| x != 0)).count() == 3).then_some(m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cross_ratio_is_projectively_invariant(
        which in 0usize..4,
        entries in proptest::collection::vec(0u32..64, 9),
        picks in proptest::collection::vec(0usize..1000, 4),
        line_pick in 0usize..1000,
    ) {
        let (p, k) = [(2, 2), (5, 1), (2, 3), (3, 2)][which];
        let f = FiniteField::new(p, k).unwrap();
        let Some(m) = invertible(&f, &entries) else { return Ok(()) };
        let plane = ProjectiveSpace::new(&f, 2).unwrap();
        let lines = plane.subspaces(1);
        let line = &lines[line_pick % lines.len()];
        let mut chosen: Vec<usize> = Vec::new();
        for p in picks {
            let pt = line.points[p % line.points.len()];
            if !chosen.contains(&pt) {
                chosen.push(pt);
            }
        }
        if chosen.len() < 4 {
            for &pt in &line.points {
                if chosen.len() < 4 && !chosen.contains(&pt) {
                    chosen.push(pt);
                }
            }
        }
        let vs: Vec<Vec<FieldElement>> = chosen.iter().map(|&i| plane.point(i).to_vec()).collect();
        let before = f.cross_ratio([&vs[0], &vs[1], &vs[2], &vs[3]]).unwrap();
        let ws: Vec<Vec<FieldElement>> = vs.iter().map(|v| f.normalize(&times(&f, v, &m)).unwrap()).collect();
        let after = f.cross_ratio([&ws[0], &ws[1], &ws[2], &ws[3]]).unwrap();
        prop_assert_eq!(before, after);
        let conj: Vec<Vec<FieldElement>> = vs.iter().map(|v| v.iter().map(|&x| f.frobenius(x)).collect()).collect();
        prop_assert_eq!(f.cross_ratio([&conj[0], &conj[1], &conj[2], &conj[3]]).unwrap(), f.frobenius(before));
    }
}

fn det(f: &FiniteField, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0]))
}

/// `(|p1 p2| |p3 p4|) / (|p1 p3| |p2 p4|)`, a different member of the
/// anharmonic family.
fn other_convention(f: &FiniteField, p: &[&[FieldElement]; 4]) -> FieldElement {
    f.div(
        f.mul(det(f, p[0], p[1]), det(f, p[2], p[3])),
        f.mul(det(f, p[0], p[2]), det(f, p[1], p[3])),
    )
}

#[test]
fn cross_ratio_classes_are_galois_stable_in_either_convention() {
    for (p, k) in [(2, 2), (2, 3), (3, 2)] {
        let f = FiniteField::new(p, k).unwrap();
        let line = ProjectiveSpace::new(&f, 1).unwrap();
        let pts: Vec<Vec<FieldElement>> = (0..line.point_count()).map(|i| line.point(i).to_vec()).collect();
        let mut mine_to_other = std::collections::HashMap::new();
        let n = pts.len();
        for a in 0..n {
            for b in (0..n).filter(|&b| b != a) {
                for c in (0..n).filter(|&c| c != a && c != b) {
                    for d in (0..n).filter(|&d| d != a && d != b && d != c) {
                        let q = [&pts[a][..], &pts[b][..], &pts[c][..], &pts[d][..]];
                        let mine = f.cross_ratio(q).unwrap();
                        let other = other_convention(&f, &q);
                        // Each class of the other convention is a union of ours.
                        assert_eq!(*mine_to_other.entry(mine).or_insert(other), other);
                        let conj: Vec<Vec<FieldElement>> =
                            q.iter().map(|v| v.iter().map(|&x| f.frobenius(x)).collect()).collect();
                        let cq = [&conj[0][..], &conj[1][..], &conj[2][..], &conj[3][..]];
                        assert_eq!(f.cross_ratio(cq).unwrap(), f.frobenius(mine));
                        assert_eq!(other_convention(&f, &cq), f.frobenius(other));
                    }
                }
            }
        }
    }
}
