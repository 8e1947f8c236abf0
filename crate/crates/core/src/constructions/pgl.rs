//! The cross-ratio geometry Γ(PGL(n,q)) and its correlations computed by
//! restriction to the projective space and extension back.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::autsolver::{check_correlation, correlation_group, AutResult};
use crate::error::ConstructionError;
use crate::galois::{FieldElement, FiniteField, ProjectiveSpace};
use crate::incidence::{IncidenceSystem, SystemBuilder};
use crate::perm::Permutation;

/// Size guard on the total number of elements.
pub const MAX_PGL_ELEMENTS: usize = 200_000;

#[derive(Clone, Debug)]
pub struct PglGeometry {
    pub system: IncidenceSystem,
    pub space: ProjectiveSpace,
    /// Number of subspace elements; they occupy ids `0..subspace_count`
    /// and form the projective-space truncation.
    pub subspace_count: usize,
    /// Cross-ratio values that are types, in type order.
    pub lambdas: Vec<FieldElement>,
    /// Point ids of each quadruple, indexed by `id - subspace_count`.
    pub quadruples: Vec<[usize; 4]>,
    quad_index: HashMap<[usize; 4], usize>,
    /// True when K = F: no quadruple types exist and the system is the
    /// projective space itself.
    pub degenerate: bool,
}

impl PglGeometry {
    /// The projective-space truncation, with the same element ids.
    pub fn truncation(&self) -> IncidenceSystem {
        let types = self.system.types()[..self.subspace_types()].to_vec();
        IncidenceSystem::from_parts(
            types,
            self.system.element_types()[..self.subspace_count].to_vec(),
            self.system
                .incidences()
                .iter()
                .copied()
                .filter(|&(a, b)| a.max(b) < self.subspace_count),
        )
        .expect("prefix of a valid system")
    }

    pub fn subspace_types(&self) -> usize {
        self.system.rank() - self.lambdas.len()
    }

    pub fn quadruple_id(&self, q: &[usize; 4]) -> Option<usize> {
        self.quad_index.get(q).map(|&i| self.subspace_count + i)
    }

    /// Type label of the quadruples with cross-ratio `lambda`.
    pub fn lambda_label(field: &FiniteField, lambda: FieldElement) -> String {
        format!("Q({})", field.display(lambda))
    }
}

/// Γ(PGL(n,q)) over the field `field`, with base field of degree
/// `base_degree` over the prime field. Types are the subspace dimensions
/// `0..n-2` followed by `Q(λ)` for λ ∈ K∖F in field order. With
/// `truncate_to_min_poly` the types are `0`, `1` and `Q(λ)` for λ in the
/// Frobenius orbit (over F) of the primitive element.
pub fn pgl_cross_ratio_geometry(
    n: usize,
    field: &FiniteField,
    base_degree: u32,
    truncate_to_min_poly: bool,
) -> Result<PglGeometry, ConstructionError> {
    if n < 3 {
        return Err(ConstructionError::TooSmall { min: 3 });
    }
    field.check_subfield(base_degree)?;
    let space = ProjectiveSpace::new(field, n - 1)?;
    let sub_dims = if truncate_to_min_poly { 2 } else { n - 1 };
    let lambdas: Vec<FieldElement> = if truncate_to_min_poly {
        let xi = field.primitive_element();
        let mut orbit = vec![xi];
        let step = (field.characteristic() as u64).pow(base_degree);
        let mut y = field.pow(xi, step);
        while y != xi {
            orbit.push(y);
            y = field.pow(y, step);
        }
        orbit.sort_unstable();
        if orbit.len() == 1 {
            Vec::new()
        } else {
            orbit
        }
    } else {
        field.elements().filter(|&x| !field.in_subfield(x, base_degree)).collect()
    };

    let q = field.order() as usize;
    let line_count = space.subspaces(1).len();
    let subspace_count: usize = (0..sub_dims).map(|j| space.subspaces(j).len()).sum();
    let per_line = (q + 1) * q * (q - 1) * (q - 2);
    let estimate = subspace_count + line_count * per_line * lambdas.len() / (q.max(3) - 2);
    if estimate > MAX_PGL_ELEMENTS {
        return Err(ConstructionError::TooManyElements {
            elements: estimate,
            limit: MAX_PGL_ELEMENTS,
        });
    }

    let mut types: Vec<String> = (0..sub_dims).map(|j| j.to_string()).collect();
    types.extend(lambdas.iter().map(|&l| PglGeometry::lambda_label(field, l)));
    let mut b = SystemBuilder::new(types);
    let offsets = space.offsets();
    for j in 0..sub_dims {
        b.add_elements(j, space.subspaces(j).len());
    }
    for (lo, hi) in space.containments() {
        if hi < subspace_count {
            b.incident(lo, hi);
        }
    }

    let mut quads_by_lambda: Vec<Vec<(usize, [usize; 4])>> = vec![Vec::new(); lambdas.len()];
    for (li, line) in space.subspaces(1).iter().enumerate() {
        let pts = &line.points;
        for &a in pts {
            for &bb in pts {
                for &c in pts {
                    for &d in pts {
                        let quad = [a, bb, c, d];
                        if (0..4).any(|i| (i + 1..4).any(|j| quad[i] == quad[j])) {
                            continue;
                        }
                        let cr = field.cross_ratio([
                            space.point(a),
                            space.point(bb),
                            space.point(c),
                            space.point(d),
                        ])?;
                        if let Ok(t) = lambdas.binary_search(&cr) {
                            quads_by_lambda[t].push((li, quad));
                        }
                    }
                }
            }
        }
    }
    let supersets = line_supersets(&space, sub_dims);
    let mut quadruples = Vec::new();
    let mut fibers: Vec<Vec<usize>> = Vec::new();
    for (t, quads) in quads_by_lambda.iter_mut().enumerate() {
        quads.sort_unstable();
        let mut fiber = Vec::with_capacity(quads.len());
        for &(li, quad) in quads.iter() {
            let id = b.add_element(sub_dims + t);
            for &p in &quad {
                b.incident(offsets[0] + p, id);
            }
            for &s in &supersets[li] {
                b.incident(s, id);
            }
            quadruples.push(quad);
            fiber.push(id);
        }
        fibers.push(fiber);
    }
    for s in 0..fibers.len() {
        for t in s + 1..fibers.len() {
            for &x in &fibers[s] {
                for &y in &fibers[t] {
                    b.incident(x, y);
                }
            }
        }
    }
    let quad_index = quadruples.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    Ok(PglGeometry {
        system: b.build(),
        degenerate: lambdas.is_empty(),
        space,
        subspace_count,
        lambdas,
        quadruples,
        quad_index,
    })
}

/// For each line, the ids of the subspaces of dimension ≥ 1 containing it,
/// restricted to dimensions below `sub_dims`.
fn line_supersets(space: &ProjectiveSpace, sub_dims: usize) -> Vec<Vec<usize>> {
    let offsets = space.offsets();
    let lines = space.subspaces(1);
    let mut out: Vec<Vec<usize>> = (0..lines.len()).map(|l| vec![offsets[1] + l]).collect();
    for hi in 2..sub_dims {
        for (bi, big) in space.subspaces(hi).iter().enumerate() {
            for (li, line) in lines.iter().enumerate() {
                if line.points.iter().all(|p| big.points.binary_search(p).is_ok()) {
                    out[li].push(offsets[hi] + bi);
                }
            }
        }
    }
    out
}

/// Extends a correlation `f` of the projective-space truncation by sending
/// each quadruple `(p_1..p_4)` to `(f(p_1)..f(p_4))`. `None` when some image
/// is not a quadruple of the system or the result is not a correlation.
pub fn extend_truncation_correlation(
    geom: &PglGeometry,
    f: &Permutation,
) -> Result<Option<Permutation>, ConstructionError> {
    let truncation = geom.truncation();
    if check_correlation(&truncation, f).is_err() {
        return Err(ConstructionError::NotACorrelation);
    }
    let points = geom.space.point_count();
    let mut images: Vec<usize> = (0..geom.subspace_count).map(|x| f.apply(x)).collect();
    for quad in &geom.quadruples {
        let mut image = [0usize; 4];
        for (slot, &p) in image.iter_mut().zip(quad) {
            let fp = f.apply(p);
            if fp >= points {
                return Ok(None);
            }
            *slot = fp;
        }
        match geom.quadruple_id(&image) {
            Some(id) => images.push(id),
            None => return Ok(None),
        }
    }
    let Ok(perm) = Permutation::from_usize_images(&images) else {
        return Ok(None);
    };
    Ok(check_correlation(&geom.system, &perm).is_ok().then_some(perm))
}

/// Outcome of the restriction-extension computation of `Aut(Γ)`.
#[derive(Clone, Debug)]
pub struct PglCorrelations {
    pub result: AutResult,
    /// Correlation group of the projective-space truncation.
    pub truncation: AutResult,
    /// Every type-preserving generator of the truncation extended.
    pub complete: bool,
    /// For each non-identity element of the truncation's type action
    /// (as label images), whether its coset extends.
    pub outer_cosets: Vec<(Vec<String>, bool)>,
}

#[derive(Serialize)]
struct CosetJson<'a> {
    type_images: &'a [String],
    extends: bool,
}

impl PglCorrelations {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "mode": "restriction-extension",
            "truncation_aut_order": self.truncation.aut_order.to_string(),
            "truncation_aut_i_order": self.truncation.aut_i_order.to_string(),
            "complete": self.complete,
            "outer_cosets": self.outer_cosets.iter().map(|(t, e)| CosetJson { type_images: t, extends: *e }).collect::<Vec<_>>(),
            "result": self.result.to_json(),
        })
    }
}

/// `Aut(Γ)` by restriction-extension: the correlation group of the
/// truncation is computed by search, its type-preserving generators are
/// extended, and one representative of each outer coset is tried.
pub fn pgl_correlation_group(geom: &PglGeometry) -> Result<PglCorrelations, ConstructionError> {
    let truncation_sys = geom.truncation();
    let truncation = correlation_group(&truncation_sys).map_err(|_| ConstructionError::NotACorrelation)?;
    let mut gens = Vec::new();
    let mut complete = true;
    for g in &truncation.type_preserving_generators {
        match extend_truncation_correlation(geom, g)? {
            Some(e) => gens.push(e),
            None => complete = false,
        }
    }
    let mut outer_cosets = Vec::new();
    for (on_types, rep) in type_action_representatives(&truncation_sys, &truncation) {
        let labels = on_types
            .iter()
            .map(|&t| truncation.types[t].to_string())
            .collect();
        let extended = extend_truncation_correlation(geom, &rep)?;
        outer_cosets.push((labels, extended.is_some()));
        if let Some(e) = extended {
            gens.push(e);
        }
    }
    let result = AutResult::from_correlations(&geom.system, gens)
        .map_err(|_| ConstructionError::NotACorrelation)?;
    Ok(PglCorrelations {
        result,
        truncation,
        complete,
        outer_cosets,
    })
}

/// One element of `Aut` for each non-identity element of its type action,
/// found by breadth-first products of the generators.
fn type_action_representatives(
    sys: &IncidenceSystem,
    res: &AutResult,
) -> Vec<(Vec<usize>, Permutation)> {
    let fibers = sys.fibers();
    let on_types = |g: &Permutation| -> Vec<usize> {
        fibers.iter().map(|f| sys.type_of(g.apply(f[0]))).collect()
    };
    let identity = Permutation::identity(sys.len());
    let start = on_types(&identity);
    let mut seen: HashMap<Vec<usize>, Permutation> = HashMap::new();
    seen.insert(start.clone(), identity);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(current) = queue.pop_front() {
        for g in &res.correlation_generators {
            let elem = seen[&current].then(g);
            let next = on_types(&elem);
            if !seen.contains_key(&next) {
                seen.insert(next.clone(), elem);
                queue.push_back(next);
            }
        }
    }
    let mut out: Vec<(Vec<usize>, Permutation)> =
        seen.into_iter().filter(|(t, _)| *t != start).collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}
