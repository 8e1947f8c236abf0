use geomrep::constructions::{
    check_ft_condition, check_rc_condition, complete_graph_geometry, coset_geometry, cube_faces,
    cube_geometry, dihedral_geometry, flag_orbit_transitive, gq22, hemidodecahedron_petrie,
    pgl_cross_ratio_geometry, phi, synthemes, tau_bar, tetrahedron_spec, transpositions,
    CosetGeometrySpec, FacePetrieRule,
};
use geomrep::{ConstructionError, FiniteField, PermGroup, Permutation};

#[test]
fn dihedral_element_counts() {
    for n in 3..=12 {
        let d = dihedral_geometry(n).unwrap();
        assert_eq!(d.len(), n * (1 + tau_bar(n).len()));
        assert_eq!(2 * tau_bar(n).len(), phi(n).max(2));
        let rank = tau_bar(n).len() + if n % 2 == 0 { 2 } else { 1 };
        assert_eq!(d.rank(), rank);
    }
    assert_eq!(dihedral_geometry(5).unwrap().len(), 15);
    let err = dihedral_geometry(2).unwrap_err();
    assert_eq!(err, ConstructionError::TooSmall { min: 3 });
    assert_eq!(err.to_string(), "n must be ≥ 3");
}

#[test]
fn complete_graph_counts() {
    for n in 2..=7 {
        let k = complete_graph_geometry(n).unwrap();
        assert_eq!(k.len(), n + n * (n - 1) / 2);
    }
    assert!(complete_graph_geometry(1).is_err());
}

#[test]
fn gq22_is_a_generalized_quadrangle() {
    assert_eq!(transpositions().len(), 15);
    assert_eq!(synthemes().len(), 15);
    let gq = gq22();
    assert_eq!(gq.len(), 30);
    let g = gq.incidence_graph();
    assert!((0..30).all(|v| g.degree(v) == 3));
    assert_eq!(g.girth(), Some(8));
    assert!(gq.is_geometry() && gq.is_firm() && gq.is_residually_connected());
}

#[test]
fn cube_variants() {
    assert_eq!(cube_faces().len(), 6);
    let with = cube_geometry(true);
    let without = cube_geometry(false);
    assert_eq!(with.len(), 26);
    assert_eq!(without.len(), 26);
    assert!(with.is_geometry());
    assert!(!without.is_geometry());
}

#[test]
fn hemidodecahedron_rules() {
    for rule in FacePetrieRule::ALL {
        let h = hemidodecahedron_petrie(rule);
        assert_eq!(h.len(), 37);
        assert_eq!(rule.to_string().parse::<FacePetrieRule>().unwrap(), rule);
    }
    assert!("sideways".parse::<FacePetrieRule>().is_err());
    let base = hemidodecahedron_petrie(FacePetrieRule::SharedEdge);
    let trunc = base.truncation(&["0", "1", "2"]).unwrap().system;
    assert_eq!(trunc.len(), 31);
    assert!(trunc.is_geometry() && trunc.is_firm() && trunc.is_residually_connected());
}

#[test]
fn tetrahedron_coset_geometry() {
    let geom = coset_geometry(&tetrahedron_spec()).unwrap();
    assert_eq!(geom.group_order(), 24);
    assert!(check_ft_condition(&geom).pass);
    assert!(check_rc_condition(&geom).pass);
    assert!(flag_orbit_transitive(&geom));
}

#[test]
fn coset_geometry_rejects_non_subgroups() {
    let a4 = PermGroup::new(
        4,
        vec![
            Permutation::from_cycles(4, &[&[0, 1, 2]]).unwrap(),
            Permutation::from_cycles(4, &[&[1, 2, 3]]).unwrap(),
        ],
    )
    .unwrap();
    let outside = PermGroup::new(4, vec![Permutation::from_cycles(4, &[&[0, 1]]).unwrap()]).unwrap();
    let spec = CosetGeometrySpec::new(a4, vec![outside]);
    assert!(matches!(coset_geometry(&spec), Err(ConstructionError::NotASubgroup { .. })));
}

#[test]
fn flag_transitivity_failure_is_detected_both_ways() {
    // Three copies of the trivial subgroup of C_3: every pair of cosets
    // meets nowhere, so no flags of rank two exist beyond the chamber orbit.
    let c = Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap();
    let s3 = PermGroup::new(3, vec![c.clone(), Permutation::from_cycles(3, &[&[0, 1]]).unwrap()]).unwrap();
    let t = |cyc: &[usize]| PermGroup::new(3, vec![Permutation::from_cycles(3, &[cyc]).unwrap()]).unwrap();
    let spec = CosetGeometrySpec::new(s3, vec![t(&[0, 1]), t(&[1, 2]), t(&[0, 2])]);
    let geom = coset_geometry(&spec).unwrap();
    assert_eq!(check_ft_condition(&geom).pass, flag_orbit_transitive(&geom));
}

#[test]
fn pgl_element_counts() {
    let f2 = FiniteField::new(2, 1).unwrap();
    let pg22 = pgl_cross_ratio_geometry(3, &f2, 1, false).unwrap();
    assert!(pg22.degenerate);
    assert_eq!(pg22.system.len(), 14);
    let f4 = FiniteField::new(2, 2).unwrap();
    let g = pgl_cross_ratio_geometry(3, &f4, 1, false).unwrap();
    let sizes: Vec<usize> = g.system.fibers().iter().map(Vec::len).collect();
    assert_eq!(sizes, [21, 21, 1260, 1260]);
    let labels: Vec<&str> = g.system.types().iter().map(|t| t.as_str()).collect();
    assert_eq!(labels, ["0", "1", "Q(w)", "Q(w+1)"]);
    for q in &g.quadruples {
        let line = g.space.span(&q[..2]).unwrap();
        assert_eq!(g.space.span(q).unwrap(), line);
    }
}

#[test]
fn small_coset_specs_agree_with_direct_checks() {
    let r = Permutation::from_cycles(6, &[&[0, 1, 2, 3, 4, 5]]).unwrap();
    let c6 = PermGroup::new(6, vec![r.clone()]).unwrap();
    let spec = CosetGeometrySpec::new(
        c6,
        vec![
            PermGroup::new(6, vec![r.pow(2)]).unwrap(),
            PermGroup::new(6, vec![r.pow(3)]).unwrap(),
        ],
    );
    let geom = coset_geometry(&spec).unwrap();
    assert_eq!(check_ft_condition(&geom).pass, flag_orbit_transitive(&geom));
    assert_eq!(check_rc_condition(&geom).pass, geom.system.is_residually_connected());
    assert!(check_rc_condition(&geom).pass);

    let t = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
    let s3 = PermGroup::symmetric(3);
    let h = || PermGroup::new(3, vec![t.clone()]).unwrap();
    let geom = coset_geometry(&CosetGeometrySpec::new(s3, vec![h(), h()])).unwrap();
    assert!(check_ft_condition(&geom).pass);
    assert!(flag_orbit_transitive(&geom));
    assert_eq!(geom.system.len(), 6);
}
