//! Concrete incidence systems: dihedral, complete-graph, GQ(2,2), cube,
//! hemidodecahedron with Petrie polygons, the cross-ratio geometry of
//! PGL(n,q), and Tits coset geometries of finite permutation groups.

mod coset;
mod pgl;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

pub use coset::{
    check_ft_condition, check_rc_condition, coset_geometry, flag_orbit_transitive,
    tetrahedron_spec, CosetGeometry, CosetGeometrySpec, FtFailure, FtReport, RcFailure, RcReport,
    COSET_GROUP_BOUND,
};
pub use pgl::{
    extend_truncation_correlation, pgl_correlation_group, pgl_cross_ratio_geometry,
    PglCorrelations, PglGeometry, MAX_PGL_ELEMENTS,
};

use crate::error::ConstructionError;
use crate::incidence::{IncidenceSystem, SystemBuilder};
use crate::perm::Permutation;
use crate::permgroup::PermGroup;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Euler's totient.
pub fn phi(n: usize) -> usize {
    (1..=n).filter(|&k| gcd(k, n) == 1).count()
}

/// `{min(k, n-k) : gcd(k,n) = 1, 1 ≤ k < n}`, ascending.
pub fn tau_bar(n: usize) -> Vec<usize> {
    let set: BTreeSet<usize> = (1..n).filter(|&k| gcd(k, n) == 1).map(|k| k.min(n - k)).collect();
    set.into_iter().collect()
}

/// Γ(D_2n). Vertices `0..n` come first (element id = vertex label); for
/// even `n` odd labels have type `-1` and even labels type `0`. Then for
/// each `i` in τ̄(n), ascending, the edges `{v, v+i mod n}` for `v = 0..n`.
pub fn dihedral_geometry(n: usize) -> Result<IncidenceSystem, ConstructionError> {
    if n < 3 {
        return Err(ConstructionError::TooSmall { min: 3 });
    }
    let distances = tau_bar(n);
    let even = n % 2 == 0;
    let mut types: Vec<String> = if even {
        vec!["-1".into(), "0".into()]
    } else {
        vec!["0".into()]
    };
    let first_edge_type = types.len();
    types.extend(distances.iter().map(usize::to_string));
    let mut b = SystemBuilder::new(types);
    for v in 0..n {
        b.add_element(if even { 1 - v % 2 } else { 0 });
    }
    let mut edge_ids = Vec::new();
    for (t, &i) in distances.iter().enumerate() {
        let ids: Vec<usize> = (0..n)
            .map(|v| {
                let e = b.add_element(first_edge_type + t);
                b.incident(v, e).incident((v + i) % n, e);
                e
            })
            .collect();
        edge_ids.push(ids);
    }
    for s in 0..edge_ids.len() {
        for t in s + 1..edge_ids.len() {
            for &x in &edge_ids[s] {
                for &y in &edge_ids[t] {
                    b.incident(x, y);
                }
            }
        }
    }
    if even {
        for u in (0..n).step_by(2) {
            for w in (1..n).step_by(2) {
                b.incident(u, w);
            }
        }
    }
    Ok(b.build())
}

/// Vertices `0..n` of type `0`, then edges `{a,b}` in lexicographic order
/// of type `1`.
pub fn complete_graph_geometry(n: usize) -> Result<IncidenceSystem, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::TooSmall { min: 2 });
    }
    let mut b = SystemBuilder::new(["0", "1"]);
    b.add_elements(0, n);
    for x in 0..n {
        for y in x + 1..n {
            let e = b.add_element(1);
            b.incident(x, e).incident(y, e);
        }
    }
    Ok(b.build())
}

/// The 15 transpositions of `{0..5}` in lexicographic order.
pub fn transpositions() -> Vec<(usize, usize)> {
    (0..6).flat_map(|a| (a + 1..6).map(move |b| (a, b))).collect()
}

/// The 15 perfect matchings of `{0..5}`, each as three sorted pairs,
/// in lexicographic order.
pub fn synthemes() -> Vec<[(usize, usize); 3]> {
    let mut out = Vec::new();
    for b in 1..6 {
        let rest: Vec<usize> = (1..6).filter(|&x| x != b).collect();
        for &d in &rest[1..] {
            let last: Vec<usize> = rest[1..].iter().copied().filter(|&x| x != d).collect();
            out.push([(0, b), (rest[0], d), (last[0], last[1])]);
        }
    }
    out.sort();
    out
}

/// GQ(2,2): points are transpositions (type `0`), lines are products of
/// three disjoint transpositions (type `1`), incidence is containment.
pub fn gq22() -> IncidenceSystem {
    let points = transpositions();
    let lines = synthemes();
    let mut b = SystemBuilder::new(["0", "1"]);
    b.add_elements(0, points.len());
    let first_line = b.len();
    b.add_elements(1, lines.len());
    for (l, line) in lines.iter().enumerate() {
        for pair in line {
            let p = points.iter().position(|t| t == pair).unwrap();
            b.incident(p, first_line + l);
        }
    }
    b.build()
}

/// Cube vertices are bit vectors `0..8`.
pub const CUBE_EVEN_VERTICES: [usize; 4] = [0, 3, 5, 6];
pub const CUBE_ODD_VERTICES: [usize; 4] = [1, 2, 4, 7];

/// Edges `(a, b)` with `a < b` differing in one bit, lexicographic.
pub fn cube_edges() -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = (0..8usize)
        .flat_map(|v| (0..3).map(move |bit| (v, v ^ (1 << bit))))
        .filter(|&(a, b)| a < b)
        .collect();
    edges.sort_unstable();
    edges
}

/// Faces `{v : bit i of v = s}` ordered by `(i, s)`.
pub fn cube_faces() -> Vec<Vec<usize>> {
    (0..3)
        .flat_map(|i| (0..2).map(move |s| (0..8).filter(|v| (v >> i) & 1 == s).collect()))
        .collect()
}

/// Rank-4 cube geometry with types `1` (even-parity vertices), `2`
/// (odd-parity vertices), `3` (edges) and `4` (faces). Ids: the four even
/// vertices, the four odd vertices, twelve edges, six faces. With
/// `vertex_adjacency`, vertices of different classes are incident iff
/// adjacent in the cube.
pub fn cube_geometry(vertex_adjacency: bool) -> IncidenceSystem {
    let mut b = SystemBuilder::new(["1", "2", "3", "4"]);
    let mut id_of = [0usize; 8];
    for &v in &CUBE_EVEN_VERTICES {
        id_of[v] = b.add_element(0);
    }
    for &v in &CUBE_ODD_VERTICES {
        id_of[v] = b.add_element(1);
    }
    let edges = cube_edges();
    let faces = cube_faces();
    let edge_ids: Vec<usize> = edges
        .iter()
        .map(|&(x, y)| {
            let e = b.add_element(2);
            b.incident(id_of[x], e).incident(id_of[y], e);
            e
        })
        .collect();
    for face in &faces {
        let f = b.add_element(3);
        for &v in face {
            b.incident(id_of[v], f);
        }
        for (k, &(x, y)) in edges.iter().enumerate() {
            if face.contains(&x) && face.contains(&y) {
                b.incident(edge_ids[k], f);
            }
        }
    }
    if vertex_adjacency {
        for &(x, y) in &edges {
            b.incident(id_of[x], id_of[y]);
        }
    }
    b.build()
}

/// How faces and Petrie polygons of the hemidodecahedron are incident.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FacePetrieRule {
    SharedEdge,
    SharedVertex,
    Always,
}

impl FacePetrieRule {
    pub const ALL: [FacePetrieRule; 3] = [
        FacePetrieRule::SharedEdge,
        FacePetrieRule::SharedVertex,
        FacePetrieRule::Always,
    ];
}

impl fmt::Display for FacePetrieRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FacePetrieRule::SharedEdge => "shared-edge",
            FacePetrieRule::SharedVertex => "shared-vertex",
            FacePetrieRule::Always => "always",
        })
    }
}

impl FromStr for FacePetrieRule {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "shared-edge" => Ok(FacePetrieRule::SharedEdge),
            "shared-vertex" => Ok(FacePetrieRule::SharedVertex),
            "always" => Ok(FacePetrieRule::Always),
            other => Err(ConstructionError::BadRule(other.to_string())),
        }
    }
}

/// Petersen graph: vertices are the 2-subsets of `{0..4}` in lexicographic
/// order, adjacent iff disjoint.
pub fn petersen_vertices() -> Vec<(usize, usize)> {
    (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect()
}

pub fn petersen_edges() -> Vec<(usize, usize)> {
    let v = petersen_vertices();
    let disjoint = |x: (usize, usize), y: (usize, usize)| {
        x.0 != y.0 && x.0 != y.1 && x.1 != y.0 && x.1 != y.1
    };
    let mut edges = Vec::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if disjoint(v[i], v[j]) {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// All 5-cycles of the Petersen graph as vertex sequences starting at the
/// smallest vertex, second vertex smaller than the last; sorted.
pub fn petersen_pentagons() -> Vec<Vec<usize>> {
    let edges = petersen_edges();
    let adjacent = |a: usize, b: usize| edges.contains(&(a.min(b), a.max(b)));
    let mut out = Vec::new();
    let mut path = Vec::new();
    for start in 0..10 {
        path.clear();
        path.push(start);
        extend_cycle(&mut path, &adjacent, &mut out);
    }
    out.sort();
    out
}

fn extend_cycle(path: &mut Vec<usize>, adjacent: &dyn Fn(usize, usize) -> bool, out: &mut Vec<Vec<usize>>) {
    let start = path[0];
    if path.len() == 5 {
        if adjacent(path[4], start) && path[1] < path[4] {
            out.push(path.clone());
        }
        return;
    }
    let last = *path.last().unwrap();
    for next in start + 1..10 {
        if !path.contains(&next) && adjacent(last, next) {
            path.push(next);
            extend_cycle(path, adjacent, out);
            path.pop();
        }
    }
}

fn cycle_edges(cycle: &[usize]) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = (0..cycle.len())
        .map(|i| {
            let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            (a.min(b), a.max(b))
        })
        .collect();
    e.sort_unstable();
    e
}

/// A_5 as even permutations of `{0..4}`, acting on the Petersen vertices.
pub fn a5_on_petersen() -> PermGroup {
    let verts = petersen_vertices();
    let act = |g: &[usize]| -> Permutation {
        let images: Vec<usize> = verts
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (g[a].min(g[b]), g[a].max(g[b]));
                verts.iter().position(|&v| v == (x, y)).unwrap()
            })
            .collect();
        Permutation::from_usize_images(&images).unwrap()
    };
    PermGroup::new(10, vec![act(&[1, 2, 3, 4, 0]), act(&[1, 2, 0, 3, 4])]).unwrap()
}

/// The two A_5-orbits on the twelve pentagons, as indices into
/// [`petersen_pentagons`]; the first orbit contains pentagon 0.
pub fn pentagon_orbits() -> (Vec<usize>, Vec<usize>) {
    let cycles = petersen_pentagons();
    let keys: Vec<Vec<(usize, usize)>> = cycles.iter().map(|c| cycle_edges(c)).collect();
    let a5 = a5_on_petersen();
    let image = |g: &Permutation, c: usize| -> usize {
        let mapped: Vec<usize> = cycles[c].iter().map(|&v| g.apply(v)).collect();
        let key = cycle_edges(&mapped);
        keys.iter().position(|k| *k == key).unwrap()
    };
    let mut orbit = vec![0usize];
    let mut i = 0;
    while i < orbit.len() {
        for g in a5.generators() {
            let c = image(g, orbit[i]);
            if !orbit.contains(&c) {
                orbit.push(c);
            }
        }
        i += 1;
    }
    orbit.sort_unstable();
    let rest = (0..cycles.len()).filter(|c| !orbit.contains(c)).collect();
    (orbit, rest)
}

/// Γ′: Petersen vertices (type `0`), edges (`1`), faces (`2`) and Petrie
/// polygons (`3`). Faces are the pentagon orbit containing the first
/// pentagon. Vertices and edges are incident to the pentagons containing
/// them; faces and Petrie polygons are incident according to `rule`.
pub fn hemidodecahedron_petrie(rule: FacePetrieRule) -> IncidenceSystem {
    let edges = petersen_edges();
    let cycles = petersen_pentagons();
    let (faces, petries) = pentagon_orbits();
    let mut b = SystemBuilder::new(["0", "1", "2", "3"]);
    b.add_elements(0, 10);
    let edge_ids: Vec<usize> = edges
        .iter()
        .map(|&(x, y)| {
            let e = b.add_element(1);
            b.incident(x, e).incident(y, e);
            e
        })
        .collect();
    let add_cycles = |b: &mut SystemBuilder, ty: usize, which: &[usize]| -> Vec<usize> {
        which
            .iter()
            .map(|&c| {
                let id = b.add_element(ty);
                for &v in &cycles[c] {
                    b.incident(v, id);
                }
                for e in cycle_edges(&cycles[c]) {
                    b.incident(edge_ids[edges.iter().position(|&x| x == e).unwrap()], id);
                }
                id
            })
            .collect()
    };
    let face_ids = add_cycles(&mut b, 2, &faces);
    let petrie_ids = add_cycles(&mut b, 3, &petries);
    for (fi, &f) in faces.iter().enumerate() {
        for (pi, &p) in petries.iter().enumerate() {
            let related = match rule {
                FacePetrieRule::SharedEdge => {
                    let pe = cycle_edges(&cycles[p]);
                    cycle_edges(&cycles[f]).iter().any(|e| pe.contains(e))
                }
                FacePetrieRule::SharedVertex => cycles[f].iter().any(|v| cycles[p].contains(v)),
                FacePetrieRule::Always => true,
            };
            if related {
                b.incident(face_ids[fi], petrie_ids[pi]);
            }
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totatives() {
        assert_eq!(tau_bar(5), vec![1, 2]);
        assert_eq!(tau_bar(8), vec![1, 3]);
        assert_eq!(tau_bar(12), vec![1, 5]);
        assert_eq!(phi(12), 4);
    }

    #[test]
    fn dihedral_counts() {
        let d5 = dihedral_geometry(5).unwrap();
        assert_eq!(d5.len(), 15);
        assert_eq!(d5.types().iter().map(|t| t.as_str()).collect::<Vec<_>>(), ["0", "1", "2"]);
        let d8 = dihedral_geometry(8).unwrap();
        assert_eq!(d8.len(), 24);
        assert_eq!(d8.types().iter().map(|t| t.as_str()).collect::<Vec<_>>(), ["-1", "0", "1", "3"]);
        assert_eq!(d8.fibers().iter().map(Vec::len).collect::<Vec<_>>(), [4, 4, 8, 8]);
        assert!(d5.validate().ok && d8.validate().ok);
        assert!(matches!(dihedral_geometry(2), Err(ConstructionError::TooSmall { min: 3 })));
    }

    #[test]
    fn gq22_counts() {
        let gq = gq22();
        assert_eq!(gq.fibers().iter().map(Vec::len).collect::<Vec<_>>(), [15, 15]);
        assert!((0..30).all(|x| gq.neighbors(x).len() == 3));
        assert_eq!(gq.incidence_graph().girth(), Some(8));
    }

    #[test]
    fn cube_counts() {
        let c = cube_geometry(true);
        assert_eq!(c.len(), 26);
        assert!(c.validate().ok);
        for e in 8..20 {
            let ends: Vec<usize> = c.neighbors(e).iter().copied().filter(|&x| x < 8).collect();
            assert_eq!(ends.len(), 2);
            assert_eq!(c.type_of(ends[0]) + c.type_of(ends[1]), 1);
        }
    }

    #[test]
    fn petersen_pentagons_split_evenly() {
        assert_eq!(petersen_edges().len(), 15);
        assert_eq!(petersen_pentagons().len(), 12);
        let (a, b) = pentagon_orbits();
        assert_eq!((a.len(), b.len()), (6, 6));
        let h = hemidodecahedron_petrie(FacePetrieRule::SharedEdge);
        assert_eq!(h.len(), 37);
        assert!(h.validate().ok);
        assert_eq!("always".parse::<FacePetrieRule>().unwrap(), FacePetrieRule::Always);
        assert!("sometimes".parse::<FacePetrieRule>().is_err());
    }
}
