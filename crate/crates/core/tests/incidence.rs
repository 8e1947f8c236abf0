use geomrep::autsolver::correlation_group;
use geomrep::constructions::{dihedral_geometry, tetrahedron_spec, coset_geometry};
use geomrep::{Flag, IncidenceSystem, SystemBuilder};
use proptest::prelude::*;

fn polygon_pair(n: usize, copies: usize) -> IncidenceSystem {
    let mut b = SystemBuilder::new(["0", "1"]);
    let mut ids = Vec::new();
    for _ in 0..copies {
        let v: Vec<usize> = b.add_elements(0, n).collect();
        ids.push(v);
    }
    for v in &ids {
        for i in 0..n {
            let e = b.add_element(1);
            b.incident(e, v[i]).incident(e, v[(i + 1) % n]);
        }
    }
    b.build()
}

#[test]
fn triangle_predicates() {
    let t = polygon_pair(3, 1);
    assert!(t.validate().ok);
    assert!(t.is_geometry());
    assert!(t.is_firm());
    assert!(t.is_residually_connected());
    assert_eq!(t.chambers().len(), 6);
}

#[test]
fn two_triangles_are_not_residually_connected() {
    let t = polygon_pair(3, 2);
    assert!(t.is_geometry());
    assert!(!t.is_residually_connected());
}

#[test]
fn same_type_incidence_is_reported() {
    let mut b = SystemBuilder::new(["0", "1"]);
    let v = b.add_elements(0, 2);
    b.incident(v.start, v.start + 1);
    b.add_element(1);
    let report = b.build().validate();
    assert!(!report.ok);
}

#[test]
fn residues_and_truncations_of_tetrahedron() {
    let geom = coset_geometry(&tetrahedron_spec()).unwrap();
    let sys = &geom.system;
    assert_eq!(sys.fibers().iter().map(Vec::len).collect::<Vec<_>>(), [4, 6, 4]);
    assert!(sys.is_geometry() && sys.is_firm() && sys.is_residually_connected());
    let vertex = sys.fibers()[0][0];
    let res = sys.residue(&Flag::new([vertex])).unwrap();
    assert_eq!(res.system.len(), 6);
    assert!(res.system.is_geometry());
    let trunc = sys.truncation(&["0", "1"]).unwrap();
    assert_eq!(trunc.system.len(), 10);
    assert_eq!(trunc.system.incidence_graph().edge_count(), 12);
}

#[test]
fn json_round_trip_and_rejection() {
    let d = dihedral_geometry(5).unwrap();
    let text = d.to_json();
    assert_eq!(IncidenceSystem::from_json(&text).unwrap(), d);
    assert!(IncidenceSystem::from_json("{").is_err());
    let sparse = r#"{"types":["0"],"elements":[{"id":1,"type":"0"}],"incidences":[]}"#;
    assert!(IncidenceSystem::from_json(sparse).is_err());
}

#[test]
fn chamber_orbits_of_d10_geometry() {
    let d = dihedral_geometry(5).unwrap();
    let r = correlation_group(&d).unwrap();
    let chambers: Vec<Vec<usize>> = d.chambers().iter().map(|c| c.ids().to_vec()).collect();
    assert_eq!(chambers.len(), 20);
    // Aut_I has order 10, so it cannot be transitive on 20 chambers.
    assert!(!r.aut_i_group().is_transitive_on_sets(&chambers).unwrap());
    assert!(r.aut_group().is_transitive_on_sets(&chambers).unwrap());
    let ids: Vec<Vec<usize>> = d.fibers()[0].iter().map(|&v| vec![v]).collect();
    assert!(r.aut_i_group().is_transitive_on_sets(&ids).unwrap());
}

#[test]
fn dihedral_geometry_status_is_reported() {
    let d6 = dihedral_geometry(3).unwrap();
    assert!(d6.is_geometry() && d6.is_firm() && d6.is_residually_connected());
    let d16 = dihedral_geometry(8).unwrap();
    assert!(!d16.is_geometry());
}

proptest! {
    #[test]
    fn relabelling_preserves_predicates(seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let sys = dihedral_geometry(6).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..sys.len()).collect();
        perm.shuffle(&mut rng);
        let moved = sys.relabel(&perm);
        prop_assert_eq!(moved.is_geometry(), sys.is_geometry());
        prop_assert_eq!(moved.is_firm(), sys.is_firm());
        prop_assert_eq!(moved.is_residually_connected(), sys.is_residually_connected());
        prop_assert_eq!(moved.chambers().len(), sys.chambers().len());
        prop_assert_eq!(moved.flags().len(), sys.flags().len());
    }
}
