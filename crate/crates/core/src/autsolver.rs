//! Correlation groups `Aut(Γ)` and type-preserving groups `Aut_I(Γ)`.
//!
//! Correlations are found as automorphisms of an augmented colored graph:
//! one node per element, one per type and an apex, with edges for every
//! incidence, every element–type membership and every type–apex pair.
//! Restricted to element nodes these automorphisms are exactly the
//! correlations. `Aut_I` is the kernel of the induced action on the type
//! fibers.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::SolverError;
use crate::incidence::{IncidenceSystem, TypeId};
use crate::perm::Permutation;
use crate::permgroup::{GroupFingerprint, PermGroup};
use crate::search::{automorphisms, ColoredGraph};

/// Default element bound for [`brute_force_automorphisms`].
pub const BRUTE_FORCE_BOUND: usize = 24;

/// Groups larger than this are not fingerprinted in reports.
pub const FINGERPRINT_BOUND: u64 = 2000;

#[derive(Clone, Debug)]
pub struct AutResult {
    pub types: Vec<TypeId>,
    pub correlation_generators: Vec<Permutation>,
    pub aut_order: BigUint,
    pub type_preserving_generators: Vec<Permutation>,
    pub aut_i_order: BigUint,
    /// Action of `Aut(Γ)` on type indices.
    pub type_action: PermGroup,
    pub out_order: BigUint,
}

#[derive(Serialize)]
struct AutResultJson<'a> {
    correlation_generators: Vec<&'a [u32]>,
    aut_order: String,
    type_preserving_generators: Vec<&'a [u32]>,
    aut_i_order: String,
    type_action: Vec<Vec<&'a str>>,
    out_order: String,
}

impl AutResult {
    /// Assembles the result from generators of a group of correlations.
    pub fn from_correlations(
        sys: &IncidenceSystem,
        generators: Vec<Permutation>,
    ) -> Result<AutResult, SolverError> {
        for g in &generators {
            check_correlation(sys, g)?;
        }
        let aut = PermGroup::new(sys.len(), generators)?;
        let action = aut.induced_action(&sys.fibers())?;
        let aut_order = aut.order();
        let aut_i_order = action.kernel_order.clone();
        let out_order = &aut_order / &aut_i_order;
        Ok(AutResult {
            types: sys.types().to_vec(),
            correlation_generators: aut.generators().to_vec(),
            aut_order,
            type_preserving_generators: action.kernel.generators().to_vec(),
            aut_i_order,
            type_action: action.image,
            out_order,
        })
    }

    pub fn aut_group(&self) -> PermGroup {
        let degree = self.degree();
        PermGroup::new(degree, self.correlation_generators.clone()).expect("same degree")
    }

    pub fn aut_i_group(&self) -> PermGroup {
        let degree = self.degree();
        PermGroup::new(degree, self.type_preserving_generators.clone()).expect("same degree")
    }

    fn degree(&self) -> usize {
        self.correlation_generators
            .first()
            .or(self.type_preserving_generators.first())
            .map_or(0, Permutation::degree)
    }

    /// Orbits of the type action, as labels.
    pub fn type_orbits(&self) -> Vec<Vec<TypeId>> {
        self.type_action
            .orbits()
            .into_iter()
            .map(|cell| cell.into_iter().map(|t| self.types[t].clone()).collect())
            .collect()
    }

    /// Generators of the type action written as label images in typeset
    /// order.
    pub fn type_action_labels(&self) -> Vec<Vec<&str>> {
        self.type_action
            .generators()
            .iter()
            .filter(|g| !g.is_identity())
            .map(|g| {
                (0..self.types.len())
                    .map(|t| self.types[g.apply(t)].as_str())
                    .collect()
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = AutResultJson {
            correlation_generators: self.correlation_generators.iter().map(|g| g.images()).collect(),
            aut_order: self.aut_order.to_string(),
            type_preserving_generators: self
                .type_preserving_generators
                .iter()
                .map(|g| g.images())
                .collect(),
            aut_i_order: self.aut_i_order.to_string(),
            type_action: self.type_action_labels(),
            out_order: self.out_order.to_string(),
        };
        serde_json::to_value(doc).expect("plain data serializes")
    }
}

fn require_valid(sys: &IncidenceSystem) -> Result<(), SolverError> {
    let report = sys.validate();
    if report.ok {
        return Ok(());
    }
    let first = &report.violations[0];
    Err(SolverError::Invalid(format!(
        "{} violation(s), first: {} {:?}",
        report.violations.len(),
        first.rule,
        first.witnesses
    )))
}

/// Checks that `g` preserves incidence and maps type fibers onto type
/// fibers.
pub fn check_correlation(sys: &IncidenceSystem, g: &Permutation) -> Result<(), SolverError> {
    if g.degree() != sys.len() {
        return Err(SolverError::NotACorrelation(format!(
            "degree {} on {} elements",
            g.degree(),
            sys.len()
        )));
    }
    let mut type_map = vec![usize::MAX; sys.rank()];
    for x in 0..sys.len() {
        let (s, t) = (sys.type_of(x), sys.type_of(g.apply(x)));
        if type_map[s] == usize::MAX {
            type_map[s] = t;
        } else if type_map[s] != t {
            return Err(SolverError::NotACorrelation(format!("type fiber of {x} is split")));
        }
    }
    let mut seen = vec![false; sys.rank()];
    for &t in type_map.iter().filter(|&&t| t != usize::MAX) {
        if std::mem::replace(&mut seen[t], true) {
            return Err(SolverError::NotACorrelation("two types merged".into()));
        }
    }
    for &(a, b) in sys.incidences() {
        if !sys.is_incident(g.apply(a), g.apply(b)) {
            return Err(SolverError::NotACorrelation(format!("incidence {a}*{b} not preserved")));
        }
    }
    Ok(())
}

pub fn is_correlation(sys: &IncidenceSystem, g: &Permutation) -> bool {
    check_correlation(sys, g).is_ok()
}

/// The augmented graph whose automorphisms are the correlations.
pub fn augmented_graph(sys: &IncidenceSystem) -> ColoredGraph {
    let n = sys.len();
    let r = sys.rank();
    let apex = n + r;
    let mut edges: Vec<(usize, usize)> = sys.incidences().to_vec();
    edges.extend((0..n).map(|x| (x, n + sys.type_of(x))));
    edges.extend((0..r).map(|t| (n + t, apex)));
    let mut colors = vec![0; n];
    colors.extend(std::iter::repeat(1).take(r));
    colors.push(2);
    ColoredGraph::new(n + r + 1, edges, colors)
}

/// The full correlation group, with `Aut_I` as the kernel of the type
/// action.
pub fn correlation_group(sys: &IncidenceSystem) -> Result<AutResult, SolverError> {
    require_valid(sys)?;
    let graph = augmented_graph(sys);
    let found = automorphisms(&graph);
    let generators = found
        .generators
        .iter()
        .map(|g| g.restrict_prefix(sys.len()))
        .collect::<Result<Vec<_>, _>>()?;
    AutResult::from_correlations(sys, generators)
}

/// `Aut_I(Γ)` directly, by a search in which every type is its own color.
pub fn type_preserving_group(sys: &IncidenceSystem) -> Result<PermGroup, SolverError> {
    require_valid(sys)?;
    let graph = ColoredGraph::new(
        sys.len(),
        sys.incidences().iter().copied(),
        sys.element_types().to_vec(),
    );
    Ok(PermGroup::new(sys.len(), automorphisms(&graph).generators)?)
}

/// Every correlation, by backtracking over type bijections that respect
/// fiber sizes and then over element images in id order. Independent of
/// the refinement search; meant as a test oracle.
pub fn brute_force_automorphisms(
    sys: &IncidenceSystem,
    element_bound: usize,
) -> Result<Vec<Permutation>, SolverError> {
    if sys.len() > element_bound {
        return Err(SolverError::TooLarge {
            elements: sys.len(),
            bound: element_bound,
        });
    }
    require_valid(sys)?;
    let fibers = sys.fibers();
    let mut out = Vec::new();
    for sigma in permutations(sys.rank()) {
        if (0..sys.rank()).any(|t| fibers[t].len() != fibers[sigma[t]].len()) {
            continue;
        }
        let mut images = vec![usize::MAX; sys.len()];
        let mut used = vec![false; sys.len()];
        assign(sys, &fibers, &sigma, 0, &mut images, &mut used, &mut out);
    }
    out.sort();
    Ok(out)
}

fn assign(
    sys: &IncidenceSystem,
    fibers: &[Vec<usize>],
    sigma: &[usize],
    x: usize,
    images: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Permutation>,
) {
    if x == sys.len() {
        out.push(Permutation::from_usize_images(images).expect("bijective by construction"));
        return;
    }
    for &y in &fibers[sigma[sys.type_of(x)]] {
        if used[y] {
            continue;
        }
        let consistent =
            (0..x).all(|z| sys.is_incident(x, z) == sys.is_incident(y, images[z]));
        if !consistent {
            continue;
        }
        images[x] = y;
        used[y] = true;
        assign(sys, fibers, sigma, x + 1, images, used, out);
        used[y] = false;
    }
    images[x] = usize::MAX;
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Representation,
    WeakOrMismatch,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Representation => "representation",
            Verdict::WeakOrMismatch => "weak-or-mismatch",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug)]
pub struct RepresentationReport {
    pub target: String,
    pub expected_inn: BigUint,
    pub expected_aut: BigUint,
    pub result: Option<AutResult>,
    pub verdict: Verdict,
    pub explanation: String,
    pub type_orbits: Vec<Vec<TypeId>>,
    /// Fingerprint of `Aut(Γ)` when its order is at most
    /// [`FINGERPRINT_BOUND`]. Equal fingerprints are not a proof of
    /// isomorphism.
    pub fingerprint: Option<GroupFingerprint>,
}

impl RepresentationReport {
    pub fn from_result(
        target: impl Into<String>,
        expected_inn: BigUint,
        expected_aut: BigUint,
        result: AutResult,
    ) -> Self {
        let mut mismatches = Vec::new();
        if result.aut_i_order != expected_inn {
            mismatches.push(format!(
                "aut_i_order {} ≠ {}",
                result.aut_i_order, expected_inn
            ));
        }
        if result.aut_order != expected_aut {
            mismatches.push(format!("aut_order {} ≠ {}", result.aut_order, expected_aut));
        }
        let (verdict, explanation) = if mismatches.is_empty() {
            (
                Verdict::Representation,
                format!(
                    "|Aut_I| = {} and |Aut| = {} as expected",
                    result.aut_i_order, result.aut_order
                ),
            )
        } else {
            (Verdict::WeakOrMismatch, mismatches.join("; "))
        };
        let fingerprint = match result.aut_order.to_u64() {
            Some(o) if o <= FINGERPRINT_BOUND && !result.aut_order.is_zero() => {
                result.aut_group().fingerprint(FINGERPRINT_BOUND).ok()
            }
            _ => None,
        };
        RepresentationReport {
            target: target.into(),
            expected_inn,
            expected_aut,
            type_orbits: result.type_orbits(),
            result: Some(result),
            verdict,
            explanation,
            fingerprint,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "target": self.target,
            "expected_inn": self.expected_inn.to_string(),
            "expected_aut": self.expected_aut.to_string(),
            "verdict": self.verdict,
            "explanation": self.explanation,
            "type_orbits": self.type_orbits,
            "result": self.result.as_ref().map(AutResult::to_json),
            "fingerprint": self.fingerprint,
            "fingerprint_note": "fingerprint-equal does not prove isomorphism",
        })
    }
}

/// Verdict "representation" iff `|Aut_I| = expected_inn` and
/// `|Aut| = expected_aut`; "fail" if the system is not a valid incidence
/// system.
pub fn verify_representation(
    target: impl Into<String>,
    sys: &IncidenceSystem,
    expected_inn: u64,
    expected_aut: u64,
) -> RepresentationReport {
    let target = target.into();
    match correlation_group(sys) {
        Ok(result) => RepresentationReport::from_result(
            target,
            BigUint::from(expected_inn),
            BigUint::from(expected_aut),
            result,
        ),
        Err(e) => RepresentationReport {
            target,
            expected_inn: BigUint::from(expected_inn),
            expected_aut: BigUint::from(expected_aut),
            result: None,
            verdict: Verdict::Fail,
            explanation: e.to_string(),
            type_orbits: Vec::new(),
            fingerprint: None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::SystemBuilder;

    fn triangle() -> IncidenceSystem {
        let mut b = SystemBuilder::new(["0", "1"]);
        b.add_elements(0, 3);
        b.add_elements(1, 3);
        for i in 0..3 {
            b.incident(i, 3 + i).incident((i + 1) % 3, 3 + i);
        }
        b.build()
    }

    #[test]
    fn triangle_has_a_duality() {
        let t = triangle();
        let res = correlation_group(&t).unwrap();
        assert_eq!(res.aut_order, BigUint::from(12u32));
        assert_eq!(res.aut_i_order, BigUint::from(6u32));
        assert_eq!(res.out_order, BigUint::from(2u32));
        assert_eq!(brute_force_automorphisms(&t, 24).unwrap().len(), 12);
        assert_eq!(type_preserving_group(&t).unwrap().order(), BigUint::from(6u32));
    }

    #[test]
    fn isolated_pair() {
        let mut b = SystemBuilder::new(["0"]);
        b.add_elements(0, 2);
        let sys = b.build();
        assert_eq!(brute_force_automorphisms(&sys, 24).unwrap().len(), 2);
        assert_eq!(correlation_group(&sys).unwrap().aut_order, BigUint::from(2u32));
    }

    #[test]
    fn brute_force_respects_bound() {
        assert!(matches!(
            brute_force_automorphisms(&triangle(), 5),
            Err(SolverError::TooLarge { .. })
        ));
    }

    #[test]
    fn invalid_systems_fail_verification() {
        let bad = IncidenceSystem::from_parts(vec!["0".into()], vec![0, 0], [(0, 1)]).unwrap();
        let report = verify_representation("bad", &bad, 1, 1);
        assert_eq!(report.verdict, Verdict::Fail);
    }

    #[test]
    fn correlation_checks() {
        let t = triangle();
        let rotation = Permutation::from_cycles(6, &[&[0, 1, 2], &[3, 4, 5]]).unwrap();
        assert!(is_correlation(&t, &rotation));
        let broken = Permutation::from_cycles(6, &[&[0, 3]]).unwrap();
        assert!(!is_correlation(&t, &broken));
    }

    #[test]
    fn json_shape() {
        let res = correlation_group(&triangle()).unwrap();
        let v = res.to_json();
        assert_eq!(v["aut_order"], "12");
        assert_eq!(v["aut_i_order"], "6");
        assert_eq!(v["out_order"], "2");
        assert_eq!(v["type_action"], serde_json::json!([["1", "0"]]));
    }
}
