//! Incidence systems: typed elements with a symmetric incidence relation,
//! together with flags, chambers, residues and truncations.
//!
//! Element ids are dense (`0..len`) and the typeset order is fixed at
//! construction, so permutations of elements and types are reproducible.
//! All predicates apply to arbitrary incidence systems; whether a system is
//! a geometry is reported separately by [`IncidenceSystem::is_geometry`].

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::IncidenceError;
use crate::graph::Graph;

/// An opaque type label such as `"0"`, `"-1"` or `"w+1"`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TypeId(pub String);

impl TypeId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for TypeId {
    fn from(s: &str) -> Self {
        TypeId(s.to_string())
    }
}

impl From<String> for TypeId {
    fn from(s: String) -> Self {
        TypeId(s)
    }
}

impl fmt::Display for TypeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for TypeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A set of element ids, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Flag(Vec<usize>);

impl Flag {
    pub fn new(ids: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = ids.into_iter().collect();
        Flag(set.into_iter().collect())
    }

    pub fn empty() -> Self {
        Flag(Vec::new())
    }

    pub fn ids(&self) -> &[usize] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.0.binary_search(&id).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    /// Element ids, or type indices for typeset rules.
    pub witnesses: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

/// A finite incidence system.
#[derive(Clone, PartialEq, Eq)]
pub struct IncidenceSystem {
    types: Vec<TypeId>,
    element_types: Vec<usize>,
    /// Normalized `(a, b)` with `a <= b`, sorted, deduplicated.
    incidences: Vec<(usize, usize)>,
    /// Built from in-range pairs only; dangling pairs are kept for
    /// validation but never traversed.
    adjacency: Vec<Vec<usize>>,
}

impl fmt::Debug for IncidenceSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IncidenceSystem")
            .field("types", &self.types)
            .field("elements", &self.element_types.len())
            .field("incidences", &self.incidences.len())
            .finish()
    }
}

/// A system derived from another one, with `origin[new_id] = old_id`.
#[derive(Clone, Debug)]
pub struct Induced {
    pub system: IncidenceSystem,
    pub origin: Vec<usize>,
}

/// Incremental construction of an [`IncidenceSystem`].
#[derive(Clone, Debug, Default)]
pub struct SystemBuilder {
    types: Vec<TypeId>,
    element_types: Vec<usize>,
    pairs: Vec<(usize, usize)>,
}

impl SystemBuilder {
    pub fn new<T: Into<TypeId>>(types: impl IntoIterator<Item = T>) -> Self {
        SystemBuilder {
            types: types.into_iter().map(Into::into).collect(),
            ..Default::default()
        }
    }

    pub fn add_element(&mut self, ty: usize) -> usize {
        assert!(ty < self.types.len(), "type index {ty} out of range");
        self.element_types.push(ty);
        self.element_types.len() - 1
    }

    pub fn add_elements(&mut self, ty: usize, count: usize) -> std::ops::Range<usize> {
        let start = self.element_types.len();
        for _ in 0..count {
            self.add_element(ty);
        }
        start..self.element_types.len()
    }

    pub fn incident(&mut self, a: usize, b: usize) -> &mut Self {
        self.pairs.push((a, b));
        self
    }

    pub fn len(&self) -> usize {
        self.element_types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.element_types.is_empty()
    }

    pub fn build(self) -> IncidenceSystem {
        IncidenceSystem::from_parts(self.types, self.element_types, self.pairs)
            .expect("builder keeps type indices in range")
    }
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    id: usize,
    #[serde(rename = "type")]
    ty: String,
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    types: Vec<String>,
    elements: Vec<ElementJson>,
    incidences: Vec<[usize; 2]>,
}

impl IncidenceSystem {
    /// Permissive constructor: only type indices are checked. Everything
    /// else (same-type pairs, dangling ids, empty fibers, duplicate labels)
    /// is reported by [`validate`](Self::validate).
    pub fn from_parts(
        types: Vec<TypeId>,
        element_types: Vec<usize>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, IncidenceError> {
        if let Some(&t) = element_types.iter().find(|&&t| t >= types.len()) {
            return Err(IncidenceError::Invalid(format!("type index {t} out of range")));
        }
        let n = element_types.len();
        let mut incidences: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        incidences.sort_unstable();
        incidences.dedup();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &incidences {
            if b < n && a != b {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(IncidenceSystem {
            types,
            element_types,
            incidences,
            adjacency,
        })
    }

    pub fn types(&self) -> &[TypeId] {
        &self.types
    }

    pub fn rank(&self) -> usize {
        self.types.len()
    }

    pub fn len(&self) -> usize {
        self.element_types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.element_types.is_empty()
    }

    pub fn type_of(&self, x: usize) -> usize {
        self.element_types[x]
    }

    pub fn type_label(&self, x: usize) -> &TypeId {
        &self.types[self.element_types[x]]
    }

    pub fn element_types(&self) -> &[usize] {
        &self.element_types
    }

    pub fn type_index(&self, label: &str) -> Option<usize> {
        self.types.iter().position(|t| t.0 == label)
    }

    pub fn incidences(&self) -> &[(usize, usize)] {
        &self.incidences
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.adjacency[x]
    }

    pub fn is_incident(&self, a: usize, b: usize) -> bool {
        a < self.len() && b < self.len() && self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Elements grouped by type, in typeset order.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut fibers = vec![Vec::new(); self.types.len()];
        for (x, &t) in self.element_types.iter().enumerate() {
            fibers[t].push(x);
        }
        fibers
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for i in 0..self.types.len() {
            for j in (i + 1)..self.types.len() {
                if self.types[i] == self.types[j] {
                    violations.push(Violation {
                        rule: "duplicate type".into(),
                        witnesses: vec![i, j],
                    });
                }
            }
        }
        for (t, fiber) in self.fibers().iter().enumerate() {
            if fiber.is_empty() {
                violations.push(Violation {
                    rule: "empty type".into(),
                    witnesses: vec![t],
                });
            }
        }
        let n = self.len();
        for &(a, b) in &self.incidences {
            if b >= n {
                violations.push(Violation {
                    rule: "dangling id".into(),
                    witnesses: vec![a, b],
                });
            } else if self.element_types[a] == self.element_types[b] {
                violations.push(Violation {
                    rule: "same-type incidence".into(),
                    witnesses: vec![a, b],
                });
            }
        }
        ValidationReport {
            ok: violations.is_empty(),
            violations,
        }
    }

    pub fn is_flag(&self, flag: &Flag) -> bool {
        let ids = flag.ids();
        if ids.iter().any(|&x| x >= self.len()) {
            return false;
        }
        let types: BTreeSet<usize> = ids.iter().map(|&x| self.element_types[x]).collect();
        if types.len() != ids.len() {
            return false;
        }
        ids.iter()
            .enumerate()
            .all(|(k, &a)| ids[k + 1..].iter().all(|&b| self.is_incident(a, b)))
    }

    pub fn is_chamber(&self, flag: &Flag) -> bool {
        flag.rank() == self.rank() && self.is_flag(flag)
    }

    /// Elements incident to every member of `ids`; all elements for `[]`.
    pub fn common_neighbors(&self, ids: &[usize]) -> Vec<usize> {
        let Some((&first, rest)) = ids.split_first() else {
            return (0..self.len()).collect();
        };
        let mut common = self.adjacency[first].clone();
        for &x in rest {
            common.retain(|y| self.adjacency[x].binary_search(y).is_ok());
        }
        common
    }

    fn missing_types(&self, ids: &[usize]) -> Vec<usize> {
        let present: BTreeSet<usize> = ids.iter().map(|&x| self.element_types[x]).collect();
        (0..self.rank()).filter(|t| !present.contains(t)).collect()
    }

    /// Greedy lowest-id backtracking extension of `flag` to a chamber.
    pub fn extend_flag_to_chamber(&self, flag: &Flag) -> Result<Option<Flag>, IncidenceError> {
        if !self.is_flag(flag) {
            return Err(IncidenceError::NotAFlag);
        }
        let mut current = flag.ids().to_vec();
        if self.extend_rec(&mut current) {
            Ok(Some(Flag::new(current)))
        } else {
            Ok(None)
        }
    }

    fn extend_rec(&self, current: &mut Vec<usize>) -> bool {
        let missing = self.missing_types(current);
        let Some(&ty) = missing.first() else {
            return true;
        };
        let candidates: Vec<usize> = self
            .common_neighbors(current)
            .into_iter()
            .filter(|&y| self.element_types[y] == ty)
            .collect();
        for y in candidates {
            current.push(y);
            if self.extend_rec(current) {
                return true;
            }
            current.pop();
        }
        false
    }

    /// Number of chambers containing `flag`, counting at most `cap`.
    pub fn count_chambers_containing(&self, flag: &Flag, cap: usize) -> usize {
        let mut current = flag.ids().to_vec();
        self.count_rec(&mut current, cap)
    }

    fn count_rec(&self, current: &mut Vec<usize>, cap: usize) -> usize {
        let missing = self.missing_types(current);
        let Some(&ty) = missing.first() else {
            return 1;
        };
        let mut count = 0;
        for y in self.common_neighbors(current) {
            if self.element_types[y] != ty {
                continue;
            }
            current.push(y);
            count += self.count_rec(current, cap - count);
            current.pop();
            if count >= cap {
                break;
            }
        }
        count
    }

    /// Visits every flag (including the empty one) once, as a sorted id
    /// list. The visitor returns `false` to stop early.
    pub fn for_each_flag(&self, mut visit: impl FnMut(&[usize]) -> bool) {
        let all: Vec<usize> = (0..self.len()).collect();
        let mut current = Vec::new();
        self.flags_rec(&all, &mut current, &mut visit);
    }

    fn flags_rec(
        &self,
        candidates: &[usize],
        current: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        if !visit(current) {
            return false;
        }
        for (k, &x) in candidates.iter().enumerate() {
            let next: Vec<usize> = candidates[k + 1..]
                .iter()
                .copied()
                .filter(|y| self.adjacency[x].binary_search(y).is_ok())
                .collect();
            current.push(x);
            let go_on = self.flags_rec(&next, current, visit);
            current.pop();
            if !go_on {
                return false;
            }
        }
        true
    }

    pub fn flags(&self) -> Vec<Flag> {
        let mut out = Vec::new();
        self.for_each_flag(|f| {
            out.push(Flag(f.to_vec()));
            true
        });
        out
    }

    pub fn chambers(&self) -> Vec<Flag> {
        let rank = self.rank();
        let mut out = Vec::new();
        self.for_each_flag(|f| {
            if f.len() == rank {
                out.push(Flag(f.to_vec()));
            }
            true
        });
        out
    }

    /// Every maximal flag is a chamber.
    pub fn is_geometry(&self) -> bool {
        let rank = self.rank();
        let mut ok = true;
        self.for_each_flag(|f| {
            if f.len() < rank && self.common_neighbors(f).is_empty() {
                ok = false;
            }
            ok
        });
        ok
    }

    /// Every non-maximal flag lies in at least two chambers.
    pub fn is_firm(&self) -> bool {
        let mut ok = true;
        self.for_each_flag(|f| {
            if !self.common_neighbors(f).is_empty()
                && self.count_chambers_containing(&Flag(f.to_vec()), 2) < 2
            {
                ok = false;
            }
            ok
        });
        ok
    }

    /// Restriction to `elements` (sorted) over the types `types` (sorted
    /// type indices).
    fn induced(&self, elements: Vec<usize>, types: &[usize]) -> Induced {
        let mut type_map = vec![usize::MAX; self.rank()];
        for (new, &old) in types.iter().enumerate() {
            type_map[old] = new;
        }
        let mut id_map = vec![usize::MAX; self.len()];
        for (new, &old) in elements.iter().enumerate() {
            id_map[old] = new;
        }
        let element_types = elements
            .iter()
            .map(|&x| type_map[self.element_types[x]])
            .collect();
        let mut pairs = Vec::new();
        for &x in &elements {
            for &y in &self.adjacency[x] {
                if x < y && id_map[y] != usize::MAX {
                    pairs.push((id_map[x], id_map[y]));
                }
            }
        }
        let system = IncidenceSystem::from_parts(
            types.iter().map(|&t| self.types[t].clone()).collect(),
            element_types,
            pairs,
        )
        .expect("type map is total on kept elements");
        Induced {
            system,
            origin: elements,
        }
    }

    /// Elements outside `flag` incident to all of it, over `I ∖ t(flag)`.
    pub fn residue(&self, flag: &Flag) -> Result<Induced, IncidenceError> {
        if !self.is_flag(flag) {
            return Err(IncidenceError::NotAFlag);
        }
        let elements = self.common_neighbors(flag.ids());
        let types = self.missing_types(flag.ids());
        Ok(self.induced(elements, &types))
    }

    /// The restriction to elements whose type lies in `labels`.
    pub fn truncation<S: AsRef<str>>(&self, labels: &[S]) -> Result<Induced, IncidenceError> {
        if labels.is_empty() {
            return Err(IncidenceError::EmptyTypeSet);
        }
        let mut keep = BTreeSet::new();
        for l in labels {
            let t = self
                .type_index(l.as_ref())
                .ok_or_else(|| IncidenceError::UnknownType(l.as_ref().to_string()))?;
            keep.insert(t);
        }
        let types: Vec<usize> = keep.into_iter().collect();
        let elements = (0..self.len())
            .filter(|&x| types.binary_search(&self.element_types[x]).is_ok())
            .collect();
        Ok(self.induced(elements, &types))
    }

    /// Residues of every flag of corank at least two have connected
    /// incidence graphs. Vacuously true in rank 0 and 1.
    pub fn is_residually_connected(&self) -> bool {
        let rank = self.rank();
        if rank < 2 {
            return true;
        }
        let mut ok = true;
        let mut member = vec![false; self.len()];
        self.for_each_flag(|f| {
            if f.len() + 2 > rank {
                return true;
            }
            let residue = self.common_neighbors(f);
            ok = self.connected_within(&residue, &mut member);
            ok
        });
        ok
    }

    fn connected_within(&self, nodes: &[usize], member: &mut [bool]) -> bool {
        if nodes.is_empty() {
            return true;
        }
        for &x in nodes {
            member[x] = true;
        }
        let mut seen = vec![nodes[0]];
        member[nodes[0]] = false;
        let mut k = 0;
        while k < seen.len() {
            let x = seen[k];
            for &y in &self.adjacency[x] {
                if member[y] {
                    member[y] = false;
                    seen.push(y);
                }
            }
            k += 1;
        }
        let connected = seen.len() == nodes.len();
        for &x in nodes {
            member[x] = false;
        }
        connected
    }

    pub fn incidence_graph(&self) -> Graph {
        let n = self.len();
        Graph::new(
            n,
            self.incidences.iter().copied().filter(|&(a, b)| b < n && a != b),
        )
    }

    pub fn to_dot(&self) -> String {
        let labels: Vec<String> = (0..self.len())
            .map(|x| format!("{}:{}", x, self.type_label(x)))
            .collect();
        self.incidence_graph().to_dot("incidence", &labels)
    }

    pub fn to_json(&self) -> String {
        let doc = SystemJson {
            types: self.types.iter().map(|t| t.0.clone()).collect(),
            elements: self
                .element_types
                .iter()
                .enumerate()
                .map(|(id, &t)| ElementJson {
                    id,
                    ty: self.types[t].0.clone(),
                })
                .collect(),
            incidences: self.incidences.iter().map(|&(a, b)| [a, b]).collect(),
        };
        serde_json::to_string(&doc).expect("plain data serializes")
    }

    /// Parses the interchange format. Ids must be exactly `0..n` (in any
    /// order); incidences may be dangling and are left to `validate`.
    pub fn from_json(text: &str) -> Result<Self, IncidenceError> {
        let doc: SystemJson =
            serde_json::from_str(text).map_err(|e| IncidenceError::Json(e.to_string()))?;
        let types: Vec<TypeId> = doc.types.into_iter().map(TypeId).collect();
        let mut elements = doc.elements;
        elements.sort_by_key(|e| e.id);
        let mut element_types = Vec::with_capacity(elements.len());
        for (expected, e) in elements.iter().enumerate() {
            if e.id != expected {
                return Err(IncidenceError::SparseIds {
                    expected,
                    found: e.id,
                });
            }
            let t = types
                .iter()
                .position(|t| t.0 == e.ty)
                .ok_or_else(|| IncidenceError::UnknownType(e.ty.clone()))?;
            element_types.push(t);
        }
        IncidenceSystem::from_parts(types, element_types, doc.incidences.iter().map(|p| (p[0], p[1])))
    }

    /// The image of this system under an element permutation, relabelled so
    /// that element `x` becomes `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> IncidenceSystem {
        let mut element_types = vec![0; self.len()];
        for (x, &t) in self.element_types.iter().enumerate() {
            element_types[perm[x]] = t;
        }
        IncidenceSystem::from_parts(
            self.types.clone(),
            element_types,
            self.incidences.iter().map(|&(a, b)| (perm[a], perm[b])),
        )
        .expect("same typeset")
    }
}
