//! Free groups F_n: reduced words, automorphisms, and finitely generated
//! subgroups as folded Stallings graphs.
//!
//! Letters are nonzero integers: `i` is `x_i` and `-i` is its inverse.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::FreeGroupError;
use crate::perm::Permutation;
use crate::permgroup::PermGroup;

/// A freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<i32>);

/// Free reduction of an arbitrary letter sequence.
pub fn reduce(letters: &[i32]) -> Word {
    let mut out: Vec<i32> = Vec::with_capacity(letters.len());
    for &l in letters {
        assert!(l != 0, "letter 0 is not a generator");
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn new(letters: &[i32]) -> Word {
        reduce(letters)
    }

    /// The generator `x_i`, 1-based.
    pub fn generator(i: usize) -> Word {
        Word(vec![i as i32])
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        reduce(&letters)
    }

    /// Largest generator index used.
    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// All reduced words of length at most `max_len` over `x_1..x_rank`,
    /// by length and then lexicographically.
    pub fn all_up_to(rank: usize, max_len: usize) -> Vec<Word> {
        let alphabet: Vec<i32> = (1..=rank as i32).flat_map(|i| [i, -i]).collect();
        let mut out = vec![Word::identity()];
        let mut layer = vec![Word::identity()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for &a in &alphabet {
                    if w.0.last() != Some(&-a) {
                        let mut l = w.0.clone();
                        l.push(a);
                        next.push(Word(l));
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl fmt::Display for Word {
    /// `x1 x2^-1`; the identity prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, &l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "x{}", l.abs())?;
            if l < 0 {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Word {
    type Err = FreeGroupError;

    /// Accepts `x1 x2^-1`, `x_1`, and the shorthand letters `x`, `y`, `z`
    /// for the first three generators, with optional integer exponents:
    /// `yxy^-1`, `x^2 y`. `1` and `e` denote the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() || t == "1" || t == "e" {
            return Ok(Word::identity());
        }
        let chars: Vec<char> = t.chars().collect();
        let bad = |from: usize| FreeGroupError::Parse(chars[from..].iter().collect());
        let mut letters = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() || c == '*' || c == '.' {
                i += 1;
                continue;
            }
            let start = i;
            let gen = match c {
                'x' | 'y' | 'z' => {
                    i += 1;
                    if chars.get(i) == Some(&'_') {
                        i += 1;
                    }
                    let digits_start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i > digits_start {
                        if c != 'x' {
                            return Err(bad(start));
                        }
                        let n: String = chars[digits_start..i].iter().collect();
                        n.parse::<i32>().map_err(|_| bad(start))?
                    } else {
                        match c {
                            'x' => 1,
                            'y' => 2,
                            _ => 3,
                        }
                    }
                }
                _ => return Err(bad(start)),
            };
            if gen == 0 {
                return Err(bad(start));
            }
            let mut exponent: i32 = 1;
            if chars.get(i) == Some(&'^') {
                i += 1;
                let exp_start = i;
                if chars.get(i) == Some(&'-') {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let e: String = chars[exp_start..i].iter().collect();
                exponent = e.parse().map_err(|_| bad(start))?;
            }
            let letter = if exponent < 0 { -gen } else { gen };
            for _ in 0..exponent.unsigned_abs() {
                letters.push(letter);
            }
        }
        Ok(reduce(&letters))
    }
}

/// An automorphism of F_n given by the images of `x_1..x_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAutomorphism {
    rank: usize,
    images: Vec<Word>,
}

impl FreeAutomorphism {
    /// Verifies that the images form a free basis.
    pub fn new(rank: usize, images: Vec<Word>) -> Result<Self, FreeGroupError> {
        if images.len() != rank {
            return Err(FreeGroupError::RankMismatch {
                expected: rank,
                found: images.len(),
            });
        }
        if let Some(w) = images.iter().find(|w| w.max_generator() > rank) {
            return Err(FreeGroupError::RankMismatch {
                expected: rank,
                found: w.max_generator(),
            });
        }
        let g = StallingsGraph::new(&images);
        if g.vertex_count() != 1 || g.edge_count() != rank {
            return Err(FreeGroupError::NotABasis);
        }
        Ok(FreeAutomorphism { rank, images })
    }

    pub fn identity(rank: usize) -> Self {
        FreeAutomorphism {
            rank,
            images: (1..=rank).map(Word::generator).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, w: &Word) -> Result<Word, FreeGroupError> {
        if w.max_generator() > self.rank {
            return Err(FreeGroupError::RankMismatch {
                expected: self.rank,
                found: w.max_generator(),
            });
        }
        let mut letters = Vec::new();
        for &l in w.letters() {
            let img = &self.images[l.unsigned_abs() as usize - 1];
            if l > 0 {
                letters.extend_from_slice(img.letters());
            } else {
                letters.extend(img.letters().iter().rev().map(|&a| -a));
            }
        }
        Ok(reduce(&letters))
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &FreeAutomorphism) -> Result<Self, FreeGroupError> {
        let images = self
            .images
            .iter()
            .map(|w| other.apply(w))
            .collect::<Result<_, _>>()?;
        Ok(FreeAutomorphism {
            rank: self.rank,
            images,
        })
    }

    pub fn is_identity(&self) -> bool {
        *self == FreeAutomorphism::identity(self.rank)
    }
}

/// The generators φ_1 (inverts `x_1`), φ_ρ (cycles `x_i ↦ x_{i+1}`) and
/// φ_τ (swaps `x_1`, `x_2`) of K = C_2^n ⋊ Sym(n).
pub fn k_group(n: usize) -> Result<Vec<FreeAutomorphism>, FreeGroupError> {
    if n < 2 {
        return Err(FreeGroupError::RankTooSmall { min: 2 });
    }
    let gens: Vec<Word> = (1..=n).map(Word::generator).collect();
    let mut phi1 = gens.clone();
    phi1[0] = gens[0].inverse();
    let rho: Vec<Word> = (0..n).map(|i| gens[(i + 1) % n].clone()).collect();
    let mut tau = gens.clone();
    tau.swap(0, 1);
    [phi1, rho, tau]
        .into_iter()
        .map(|images| FreeAutomorphism::new(n, images))
        .collect()
}

/// A folded, basepointed, core graph with edges labelled by generators.
/// Vertices are numbered in breadth-first order from the basepoint `0`,
/// following outgoing letters in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StallingsGraph {
    /// `out[v][letter] = target` for both orientations.
    out: Vec<BTreeMap<i32, usize>>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        self.0[a.max(b)] = a.min(b);
        true
    }
}

/// Folds an edge list `(u, positive letter, v)` over `n` vertices.
/// Returns per-vertex transition maps on representatives and the map from
/// old vertices to representatives.
fn fold(n: usize, edges: &[(usize, i32, usize)]) -> (Vec<BTreeMap<i32, usize>>, Vec<usize>) {
    let mut uf = UnionFind((0..n).collect());
    loop {
        let mut seen: HashMap<(usize, i32), usize> = HashMap::new();
        let mut merged = false;
        for &(u, l, v) in edges {
            let (u, v) = (uf.find(u), uf.find(v));
            for (from, letter, to) in [(u, l, v), (v, -l, u)] {
                match seen.get(&(from, letter)) {
                    Some(&other) => merged |= uf.union(other, to),
                    None => {
                        seen.insert((from, letter), to);
                    }
                }
            }
        }
        if !merged {
            break;
        }
    }
    let rep: Vec<usize> = (0..n).map(|v| uf.find(v)).collect();
    let mut out = vec![BTreeMap::new(); n];
    for &(u, l, v) in edges {
        let (u, v) = (rep[u], rep[v]);
        out[u].insert(l, v);
        out[v].insert(-l, u);
    }
    (out, rep)
}

/// Removes non-basepoint vertices of degree below two, repeatedly.
fn trim(out: &mut [BTreeMap<i32, usize>], alive: &mut [bool], base: usize) {
    let degree = |m: &BTreeMap<i32, usize>| m.len();
    let mut stack: Vec<usize> = (0..out.len())
        .filter(|&v| alive[v] && v != base && degree(&out[v]) < 2)
        .collect();
    while let Some(v) = stack.pop() {
        if !alive[v] || v == base || degree(&out[v]) >= 2 {
            continue;
        }
        alive[v] = false;
        let edges: Vec<(i32, usize)> = std::mem::take(&mut out[v]).into_iter().collect();
        for (l, w) in edges {
            out[w].remove(&-l);
            if w != base && degree(&out[w]) < 2 {
                stack.push(w);
            }
        }
    }
}

/// Breadth-first renumbering of the component of `base`.
fn canonical(out: &[BTreeMap<i32, usize>], base: usize) -> StallingsGraph {
    let mut number: HashMap<usize, usize> = HashMap::from([(base, 0)]);
    let mut order = vec![base];
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for &w in out[v].values() {
            if !number.contains_key(&w) {
                number.insert(w, order.len());
                order.push(w);
            }
        }
        i += 1;
    }
    StallingsGraph {
        out: order
            .iter()
            .map(|&v| out[v].iter().map(|(&l, w)| (l, number[w])).collect())
            .collect(),
    }
}

impl StallingsGraph {
    /// The folded core graph of the subgroup generated by `generators`.
    pub fn new(generators: &[Word]) -> StallingsGraph {
        let (n, edges, _) = petals(generators, &[]);
        let (mut out, rep) = fold(n, &edges);
        let base = rep[0];
        let mut alive: Vec<bool> = (0..n).map(|v| rep[v] == v).collect();
        trim(&mut out, &mut alive, base);
        canonical(&out, base)
    }

    pub fn trivial() -> StallingsGraph {
        StallingsGraph {
            out: vec![BTreeMap::new()],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|m| m.keys().filter(|&&l| l > 0).count()).sum()
    }

    /// `E - V + 1`.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    /// Edges `(u, letter, v)` with positive letters, sorted.
    pub fn edges(&self) -> Vec<(usize, i32, usize)> {
        let mut e: Vec<(usize, i32, usize)> = self
            .out
            .iter()
            .enumerate()
            .flat_map(|(u, m)| m.iter().filter(|(&l, _)| l > 0).map(move |(&l, &v)| (u, l, v)))
            .collect();
        e.sort_unstable();
        e
    }

    pub fn step(&self, v: usize, letter: i32) -> Option<usize> {
        self.out[v].get(&letter).copied()
    }

    /// End vertex of the path reading `w` from `start`, if it exists.
    pub fn trace(&self, start: usize, w: &Word) -> Option<usize> {
        w.letters().iter().try_fold(start, |v, &l| self.step(v, l))
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.trace(0, w) == Some(0)
    }

    /// A free basis read off a breadth-first spanning tree: one generator
    /// per non-tree edge, in edge order.
    pub fn generators(&self) -> Vec<Word> {
        let n = self.vertex_count();
        let mut path: Vec<Option<Word>> = vec![None; n];
        path[0] = Some(Word::identity());
        let mut tree = std::collections::HashSet::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for (&l, &w) in &self.out[v] {
                if path[w].is_none() {
                    path[w] = Some(path[v].as_ref().unwrap().mul(&Word(vec![l])));
                    tree.insert(if l > 0 { (v, l, w) } else { (w, -l, v) });
                    queue.push_back(w);
                }
            }
        }
        self.edges()
            .into_iter()
            .filter(|e| !tree.contains(e))
            .map(|(u, l, v)| {
                let p = path[u].as_ref().unwrap();
                p.mul(&Word(vec![l])).mul(&path[v].as_ref().unwrap().inverse())
            })
            .collect()
    }

    /// Subgroup equality by mutual membership of generators.
    pub fn same_subgroup(&self, other: &StallingsGraph) -> bool {
        self.generators().iter().all(|g| other.contains(g))
            && other.generators().iter().all(|g| self.contains(g))
    }

    /// Whether every generator of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &StallingsGraph) -> bool {
        self.generators().iter().all(|g| other.contains(g))
    }
}

/// Petal construction: one loop at vertex 0 per nonempty generator and
/// optionally open tails from vertex 0. Returns vertex count, edges and the
/// end vertex of each tail.
fn petals(loops: &[Word], tails: &[Word]) -> (usize, Vec<(usize, i32, usize)>, Vec<usize>) {
    let mut n = 1;
    let mut edges = Vec::new();
    let mut ends = Vec::new();
    let add_path = |w: &Word, close: bool, n: &mut usize, edges: &mut Vec<(usize, i32, usize)>| {
        let mut v = 0;
        let len = w.len();
        for (k, &l) in w.letters().iter().enumerate() {
            let next = if close && k + 1 == len {
                0
            } else {
                *n += 1;
                *n - 1
            };
            if l > 0 {
                edges.push((v, l, next));
            } else {
                edges.push((next, -l, v));
            }
            v = next;
        }
        v
    };
    for w in loops.iter().filter(|w| !w.is_empty()) {
        add_path(w, true, &mut n, &mut edges);
    }
    for w in tails {
        ends.push(add_path(w, false, &mut n, &mut edges));
    }
    (n, edges, ends)
}

/// Pairs of vertices reachable from `start` by synchronized edges.
fn product_component(
    h: &StallingsGraph,
    k: &StallingsGraph,
    start: (usize, usize),
) -> (Vec<BTreeMap<i32, usize>>, HashMap<(usize, usize), usize>) {
    let mut index: HashMap<(usize, usize), usize> = HashMap::from([(start, 0)]);
    let mut pairs = vec![start];
    let mut out: Vec<BTreeMap<i32, usize>> = vec![BTreeMap::new()];
    let mut i = 0;
    while i < pairs.len() {
        let (a, b) = pairs[i];
        for (&l, &a2) in &h.out[a] {
            if let Some(&b2) = k.out[b].get(&l) {
                let j = *index.entry((a2, b2)).or_insert_with(|| {
                    pairs.push((a2, b2));
                    out.push(BTreeMap::new());
                    pairs.len() - 1
                });
                out[i].insert(l, j);
            }
        }
        i += 1;
    }
    (out, index)
}

/// Fiber product of `h` and `k` at the basepoints, trimmed to the core:
/// the Stallings graph of `H ∩ K`.
pub fn intersection(h: &StallingsGraph, k: &StallingsGraph) -> StallingsGraph {
    let (mut out, _) = product_component(h, k, (0, 0));
    let mut alive = vec![true; out.len()];
    trim(&mut out, &mut alive, 0);
    canonical(&out, 0)
}

/// `w ∈ H·K`: fold `H` with a tail reading `w` from the basepoint, then
/// look for a path from (basepoint, basepoint) to (tail end, basepoint) in
/// the fiber product with `K`.
pub fn product_membership(w: &Word, h: &StallingsGraph, k: &StallingsGraph) -> bool {
    let mut edges = h.edges();
    let base_n = h.vertex_count();
    let mut n = base_n;
    let mut v = 0;
    for &l in w.letters() {
        let next = n;
        n += 1;
        if l > 0 {
            edges.push((v, l, next));
        } else {
            edges.push((next, -l, v));
        }
        v = next;
    }
    let (out, rep) = fold(n, &edges);
    let extended = StallingsGraph { out };
    let (start, accept) = (rep[0], rep[v]);
    let (_, index) = product_component(&extended, k, (start, 0));
    index.contains_key(&(accept, 0))
}

/// Precomputed decision procedure for `w ∈ H·K`: `w` splits as a prefix
/// read from the basepoint of `H` to some `a` and a suffix read from some
/// `b` to the basepoint of `K`, with `(a, b)` in the fiber-product
/// component of the basepoints.
#[derive(Clone, Debug)]
pub struct ProductTester {
    h: StallingsGraph,
    k: StallingsGraph,
    reachable: std::collections::HashSet<(usize, usize)>,
}

impl ProductTester {
    pub fn new(h: &StallingsGraph, k: &StallingsGraph) -> Self {
        let (_, index) = product_component(h, k, (0, 0));
        ProductTester {
            h: h.clone(),
            k: k.clone(),
            reachable: index.into_keys().collect(),
        }
    }

    pub fn contains(&self, w: &Word) -> bool {
        let letters = w.letters();
        let mut ends_in_k: Vec<Option<usize>> = vec![None; letters.len() + 1];
        ends_in_k[letters.len()] = Some(0);
        for s in (0..letters.len()).rev() {
            ends_in_k[s] = ends_in_k[s + 1].and_then(|v| self.k.step(v, -letters[s]));
        }
        let mut a = Some(0);
        for (s, end) in ends_in_k.iter().enumerate() {
            let Some(av) = a else { break };
            if let Some(b) = end {
                if self.reachable.contains(&(av, *b)) {
                    return true;
                }
            }
            if s < letters.len() {
                a = self.h.step(av, letters[s]);
            }
        }
        false
    }
}

/// The subgroup `G = ⟨x_j x_i x_j⁻¹, x_j⁻¹ x_i x_j : i ≠ j⟩` of F_n: for
/// each `i`, for each `j ≠ i`, the two conjugates in that order.
pub fn rose_cover_generators(n: usize) -> Result<Vec<Word>, FreeGroupError> {
    if n < 2 {
        return Err(FreeGroupError::RankTooSmall { min: 2 });
    }
    let mut out = Vec::new();
    for i in 1..=n as i32 {
        for j in (1..=n as i32).filter(|&j| j != i) {
            out.push(reduce(&[j, i, -j]));
            out.push(reduce(&[-j, i, j]));
        }
    }
    Ok(out)
}

/// The subgroups `G_s = ⟨S ∖ {s}⟩` together with `G = ⟨S⟩`.
#[derive(Clone, Debug)]
pub struct ParabolicFamily {
    pub rank: usize,
    pub generators: Vec<Word>,
    pub ambient: StallingsGraph,
    pub members: Vec<StallingsGraph>,
}

impl ParabolicFamily {
    pub fn new(rank: usize, generators: Vec<Word>) -> Self {
        let ambient = StallingsGraph::new(&generators);
        let members = (0..generators.len())
            .map(|s| {
                let rest: Vec<Word> = generators
                    .iter()
                    .enumerate()
                    .filter(|&(t, _)| t != s)
                    .map(|(_, w)| w.clone())
                    .collect();
                StallingsGraph::new(&rest)
            })
            .collect();
        ParabolicFamily {
            rank,
            generators,
            ambient,
            members,
        }
    }

    pub fn rose_cover(n: usize) -> Result<Self, FreeGroupError> {
        Ok(ParabolicFamily::new(n, rose_cover_generators(n)?))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `G_J` by left-folding pairwise intersections in index order; `G`
    /// for empty `J`.
    pub fn parabolic(&self, j: &[usize]) -> Result<StallingsGraph, FreeGroupError> {
        let mut acc = self.ambient.clone();
        for (k, &t) in j.iter().enumerate() {
            let m = self.members.get(t).ok_or(FreeGroupError::BadIndex(t))?;
            acc = if k == 0 { m.clone() } else { intersection(&acc, m) };
        }
        Ok(acc)
    }

    /// `⟨S ∖ {s : s ∈ J}⟩`, the subgroup generated by the common generators.
    pub fn common_generators(&self, j: &[usize]) -> StallingsGraph {
        let rest: Vec<Word> = self
            .generators
            .iter()
            .enumerate()
            .filter(|(t, _)| !j.contains(t))
            .map(|(_, w)| w.clone())
            .collect();
        StallingsGraph::new(&rest)
    }
}

fn index_subsets(r: usize) -> Vec<Vec<usize>> {
    (0..1usize << r).map(|mask| (0..r).filter(|i| mask >> i & 1 == 1).collect()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FtCounterexample {
    pub word: Word,
    pub in_intersection: bool,
    pub in_product: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundedFtReport {
    pub j: Vec<usize>,
    pub i: usize,
    pub max_len: usize,
    pub words_checked: usize,
    pub pass: bool,
    pub counterexamples: Vec<FtCounterexample>,
}

/// For every reduced word of length at most `max_len`, compares
/// membership in `∩_{j∈J} G_j G_i` and in `G_J G_i`.
pub fn bounded_ft_check(
    family: &ParabolicFamily,
    j: &[usize],
    i: usize,
    max_len: usize,
) -> Result<BoundedFtReport, FreeGroupError> {
    let g_i = family.members.get(i).ok_or(FreeGroupError::BadIndex(i))?;
    let g_j = family.parabolic(j)?;
    let lhs = ProductTester::new(&g_j, g_i);
    let factors: Vec<ProductTester> = j
        .iter()
        .map(|&t| ProductTester::new(&family.members[t], g_i))
        .collect();
    let words = Word::all_up_to(family.rank, max_len);
    let mut counterexamples = Vec::new();
    for w in &words {
        let in_product = lhs.contains(w);
        let in_intersection = if j.is_empty() {
            family.ambient.contains(w)
        } else {
            factors.iter().all(|f| f.contains(w))
        };
        if in_product != in_intersection {
            counterexamples.push(FtCounterexample {
                word: w.clone(),
                in_intersection,
                in_product,
            });
        }
    }
    Ok(BoundedFtReport {
        j: j.to_vec(),
        i,
        max_len,
        words_checked: words.len(),
        pass: counterexamples.is_empty(),
        counterexamples,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RcEntry {
    pub j: Vec<usize>,
    pub parabolic_rank: usize,
    pub generated_rank: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RcExactReport {
    pub pass: bool,
    pub entries: Vec<RcEntry>,
}

/// `G_J = ⟨G_{J∪{i}} : i ∉ J⟩` for every `J` with `|I∖J| ≥ 2`.
pub fn rc_check_exact(family: &ParabolicFamily) -> Result<RcExactReport, FreeGroupError> {
    let r = family.len();
    let mut entries = Vec::new();
    for j in index_subsets(r).into_iter().filter(|j| r - j.len() >= 2) {
        let left = family.parabolic(&j)?;
        let mut gens = Vec::new();
        for i in (0..r).filter(|i| !j.contains(i)) {
            let mut bigger = j.clone();
            bigger.push(i);
            bigger.sort_unstable();
            gens.extend(family.parabolic(&bigger)?.generators());
        }
        let right = StallingsGraph::new(&gens);
        entries.push(RcEntry {
            parabolic_rank: left.rank(),
            generated_rank: right.rank(),
            equal: left.same_subgroup(&right),
            j,
        });
    }
    Ok(RcExactReport {
        pass: entries.iter().all(|e| e.equal),
        entries,
    })
}

/// Index permutation induced by each automorphism on the family members,
/// and the group they generate.
pub fn subgroup_action(
    automorphisms: &[FreeAutomorphism],
    family: &ParabolicFamily,
) -> Result<(Vec<Permutation>, PermGroup), FreeGroupError> {
    let r = family.len();
    let member_gens: Vec<Vec<Word>> = (0..r)
        .map(|s| {
            family
                .generators
                .iter()
                .enumerate()
                .filter(|&(t, _)| t != s)
                .map(|(_, w)| w.clone())
                .collect()
        })
        .collect();
    let mut perms = Vec::new();
    for phi in automorphisms {
        let mut images = Vec::with_capacity(r);
        for (s, gens) in member_gens.iter().enumerate() {
            let mapped: Vec<Word> = gens.iter().map(|g| phi.apply(g)).collect::<Result<_, _>>()?;
            let image = StallingsGraph::new(&mapped);
            let target = (0..r).find(|&t| {
                mapped.iter().all(|g| family.members[t].contains(g))
                    && member_gens[t].iter().all(|g| image.contains(g))
            });
            match target {
                Some(t) => images.push(t),
                None => {
                    return Err(FreeGroupError::NoMatchingSubgroup {
                        index: s,
                        witness: mapped.first().map(Word::to_string).unwrap_or_default(),
                    })
                }
            }
        }
        perms.push(
            Permutation::from_usize_images(&images).map_err(|_| FreeGroupError::NotABasis)?,
        );
    }
    let group = PermGroup::new(r, perms.clone()).expect("degree r");
    Ok((perms, group))
}
