//! Tits coset incidence systems of finite permutation groups, and the
//! set-product criteria for flag-transitivity and residual connectedness.

use std::collections::HashMap;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::ConstructionError;
use crate::incidence::{IncidenceSystem, SystemBuilder, TypeId};
use crate::perm::Permutation;
use crate::permgroup::PermGroup;

/// Largest group order accepted for coset enumeration.
pub const COSET_GROUP_BOUND: u64 = 100_000;

#[derive(Clone, Debug)]
pub struct CosetGeometrySpec {
    pub group: PermGroup,
    pub subgroups: Vec<PermGroup>,
    pub labels: Vec<TypeId>,
}

impl CosetGeometrySpec {
    /// Labels default to `"0".."r-1"`.
    pub fn new(group: PermGroup, subgroups: Vec<PermGroup>) -> Self {
        let labels = (0..subgroups.len()).map(|i| TypeId(i.to_string())).collect();
        CosetGeometrySpec {
            group,
            subgroups,
            labels,
        }
    }
}

/// S_4 on the vertices `0..4` of a tetrahedron with the stabilizers of
/// vertex 0, edge {0,1} and face {0,1,2}.
pub fn tetrahedron_spec() -> CosetGeometrySpec {
    let p = |cycles: &[&[usize]]| Permutation::from_cycles(4, cycles).unwrap();
    let group = PermGroup::new(4, vec![p(&[&[0, 1]]), p(&[&[0, 1, 2, 3]])]).unwrap();
    let vertex = PermGroup::new(4, vec![p(&[&[1, 2]]), p(&[&[1, 2, 3]])]).unwrap();
    let edge = PermGroup::new(4, vec![p(&[&[0, 1]]), p(&[&[2, 3]])]).unwrap();
    let face = PermGroup::new(4, vec![p(&[&[0, 1]]), p(&[&[0, 1, 2]])]).unwrap();
    CosetGeometrySpec::new(group, vec![vertex, edge, face])
}

/// A built coset geometry. Group elements are indexed by their position in
/// the sorted element list; each coset is represented by its smallest
/// element.
#[derive(Clone, Debug)]
pub struct CosetGeometry {
    pub system: IncidenceSystem,
    /// Right multiplication by the generators of G, on elements.
    pub action: PermGroup,
    pub elements: Vec<Permutation>,
    /// `coset_of[i][g]` is the element id of `G_i g`.
    pub coset_of: Vec<Vec<usize>>,
    /// Element indices of each subgroup `G_i`.
    pub subgroup_sets: Vec<Vec<bool>>,
    index: HashMap<Permutation, usize>,
}

impl CosetGeometry {
    pub fn group_order(&self) -> usize {
        self.elements.len()
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].then(&self.elements[b])]
    }

    fn identity(&self) -> usize {
        self.index[&Permutation::identity(self.elements[0].degree())]
    }

    /// `G_J` as a membership vector; `G` for empty `J`.
    fn parabolic(&self, j: &[usize]) -> Vec<bool> {
        let mut set = vec![true; self.elements.len()];
        for &t in j {
            for (x, keep) in set.iter_mut().enumerate() {
                *keep &= self.subgroup_sets[t][x];
            }
        }
        set
    }

    fn product(&self, a: &[bool], b: &[bool]) -> Vec<bool> {
        let mut out = vec![false; self.elements.len()];
        let bs: Vec<usize> = members(b);
        for x in members(a) {
            for &y in &bs {
                out[self.mul(x, y)] = true;
            }
        }
        out
    }

    fn generated(&self, gens: &[usize]) -> Vec<bool> {
        let mut set = vec![false; self.elements.len()];
        let e = self.identity();
        set[e] = true;
        let mut queue = vec![e];
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !set[y] {
                    set[y] = true;
                    queue.push(y);
                }
            }
        }
        set
    }
}

fn members(set: &[bool]) -> Vec<usize> {
    set.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

/// Elements are the right cosets `G_i g`, type `i`, numbered by type and
/// then by smallest element; incidence is nonempty intersection.
pub fn coset_geometry(spec: &CosetGeometrySpec) -> Result<CosetGeometry, ConstructionError> {
    let order = spec.group.order();
    if order.to_u64().map_or(true, |o| o > COSET_GROUP_BOUND) {
        return Err(ConstructionError::GroupTooLarge {
            order,
            bound: COSET_GROUP_BOUND,
        });
    }
    for (i, h) in spec.subgroups.iter().enumerate() {
        for (k, g) in h.generators().iter().enumerate() {
            if !spec.group.contains(g)? {
                return Err(ConstructionError::NotASubgroup {
                    subgroup: i,
                    generator: k,
                });
            }
        }
    }
    let elements = spec.group.enumerate_elements(COSET_GROUP_BOUND)?;
    let index: HashMap<Permutation, usize> =
        elements.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
    let n = elements.len();
    let mut b = SystemBuilder::new(spec.labels.clone());
    let mut coset_of = Vec::new();
    let mut subgroup_sets = Vec::new();
    for (t, h) in spec.subgroups.iter().enumerate() {
        let h_elems = h.enumerate_elements(COSET_GROUP_BOUND)?;
        let mut set = vec![false; n];
        for x in &h_elems {
            set[index[x]] = true;
        }
        subgroup_sets.push(set);
        let mut of = vec![usize::MAX; n];
        for g in 0..n {
            if of[g] != usize::MAX {
                continue;
            }
            let id = b.add_element(t);
            for x in &h_elems {
                of[index[&x.then(&elements[g])]] = id;
            }
        }
        coset_of.push(of);
    }
    for g in 0..n {
        for s in 0..coset_of.len() {
            for t in s + 1..coset_of.len() {
                b.incident(coset_of[s][g], coset_of[t][g]);
            }
        }
    }
    let system = b.build();
    let mut rep = vec![usize::MAX; system.len()];
    for of in &coset_of {
        for (g, &c) in of.iter().enumerate() {
            if rep[c] == usize::MAX {
                rep[c] = g;
            }
        }
    }
    let gens = spec
        .group
        .generators()
        .iter()
        .map(|s| {
            let images: Vec<usize> = (0..system.len())
                .map(|c| {
                    let moved = index[&elements[rep[c]].then(s)];
                    coset_of[system.type_of(c)][moved]
                })
                .collect();
            Permutation::from_usize_images(&images).expect("right multiplication permutes cosets")
        })
        .collect();
    let action = PermGroup::new(system.len(), gens)?;
    Ok(CosetGeometry {
        system,
        action,
        elements,
        coset_of,
        subgroup_sets,
        index,
    })
}

fn subsets(r: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..1usize << r).map(move |mask| (0..r).filter(|i| mask >> i & 1 == 1).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FtFailure {
    pub j: Vec<usize>,
    pub i: usize,
    /// `|G_J G_i|`.
    pub product_size: usize,
    /// `|∩_{j∈J} G_j G_i|`.
    pub intersection_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FtReport {
    pub pass: bool,
    pub checked: usize,
    pub failures: Vec<FtFailure>,
}

/// Compares `G_J G_i` with `∩_{j∈J} G_j G_i` for every `J ⊆ I` and
/// `i ∉ J`.
pub fn check_ft_condition(geom: &CosetGeometry) -> FtReport {
    let r = geom.subgroup_sets.len();
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut pair_products: HashMap<(usize, usize), Vec<bool>> = HashMap::new();
    for j in subsets(r) {
        let g_j = geom.parabolic(&j);
        for i in (0..r).filter(|i| !j.contains(i)) {
            checked += 1;
            let lhs = geom.product(&g_j, &geom.subgroup_sets[i]);
            let mut rhs = vec![true; geom.group_order()];
            for &t in &j {
                let p = pair_products
                    .entry((t, i))
                    .or_insert_with(|| geom.product(&geom.subgroup_sets[t], &geom.subgroup_sets[i]));
                for (x, keep) in rhs.iter_mut().enumerate() {
                    *keep &= p[x];
                }
            }
            if lhs != rhs {
                failures.push(FtFailure {
                    j: j.clone(),
                    i,
                    product_size: members(&lhs).len(),
                    intersection_size: members(&rhs).len(),
                });
            }
        }
    }
    FtReport {
        pass: failures.is_empty(),
        checked,
        failures,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RcFailure {
    pub j: Vec<usize>,
    pub parabolic_order: usize,
    pub generated_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RcReport {
    pub pass: bool,
    pub checked: usize,
    pub failures: Vec<RcFailure>,
}

/// Checks `G_J = ⟨G_{J∪{i}} : i ∈ I∖J⟩` for every `J` with `|I∖J| ≥ 2`.
pub fn check_rc_condition(geom: &CosetGeometry) -> RcReport {
    let r = geom.subgroup_sets.len();
    let mut failures = Vec::new();
    let mut checked = 0;
    for j in subsets(r).filter(|j| r - j.len() >= 2) {
        checked += 1;
        let g_j = geom.parabolic(&j);
        let mut gens = vec![false; geom.group_order()];
        for i in (0..r).filter(|i| !j.contains(i)) {
            let mut bigger = j.clone();
            bigger.push(i);
            for (x, s) in geom.parabolic(&bigger).into_iter().enumerate() {
                gens[x] |= s;
            }
        }
        let generated = geom.generated(&members(&gens));
        if generated != g_j {
            failures.push(RcFailure {
                j,
                parabolic_order: members(&g_j).len(),
                generated_order: members(&generated).len(),
            });
        }
    }
    RcReport {
        pass: failures.is_empty(),
        checked,
        failures,
    }
}

/// Direct check: the right action is transitive on the flags of every type.
pub fn flag_orbit_transitive(geom: &CosetGeometry) -> bool {
    let sys = &geom.system;
    let mut by_type: HashMap<Vec<usize>, Vec<Vec<usize>>> = HashMap::new();
    sys.for_each_flag(|f| {
        if !f.is_empty() {
            let mut ty: Vec<usize> = f.iter().map(|&x| sys.type_of(x)).collect();
            ty.sort_unstable();
            by_type.entry(ty).or_default().push(f.to_vec());
        }
        true
    });
    by_type
        .values()
        .all(|flags| geom.action.is_transitive_on_sets(flags).unwrap_or(false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tetrahedron() {
        let geom = coset_geometry(&tetrahedron_spec()).unwrap();
        assert_eq!(geom.system.fibers().iter().map(Vec::len).collect::<Vec<_>>(), [4, 6, 4]);
        assert!(geom.system.validate().ok);
        assert!(check_ft_condition(&geom).pass);
        assert!(flag_orbit_transitive(&geom));
        assert!(check_rc_condition(&geom).pass);
        assert!(geom.system.is_residually_connected());
        // The cosets of the identity form a chamber.
        let chamber: Vec<usize> = geom.coset_of.iter().map(|of| of[geom.identity()]).collect();
        assert!(geom.system.is_chamber(&crate::incidence::Flag::new(chamber)));
    }

    #[test]
    fn trivial_subgroup_of_c2() {
        let s = Permutation::from_cycles(2, &[&[0, 1]]).unwrap();
        let spec = CosetGeometrySpec::new(
            PermGroup::new(2, vec![s]).unwrap(),
            vec![PermGroup::trivial(2)],
        );
        let geom = coset_geometry(&spec).unwrap();
        assert_eq!(geom.system.len(), 2);
        assert!(geom.system.incidences().is_empty());
        assert!(check_rc_condition(&geom).pass);
    }

    #[test]
    fn rejects_non_subgroups() {
        let c3 = PermGroup::new(3, vec![Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()]).unwrap();
        let t = PermGroup::new(3, vec![Permutation::from_cycles(3, &[&[0, 1]]).unwrap()]).unwrap();
        let spec = CosetGeometrySpec::new(c3, vec![t]);
        assert!(matches!(
            coset_geometry(&spec),
            Err(ConstructionError::NotASubgroup { subgroup: 0, generator: 0 })
        ));
    }
}
