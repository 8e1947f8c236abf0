//! Permutation groups given by generators, backed by a Schreier–Sims
//! stabilizer chain.
//!
//! Bases are chosen deterministically: an optional forced prefix, then the
//! smallest point moved by the element that needs a new level. Strong
//! generating sets are therefore reproducible across runs.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::GroupError;
use crate::perm::Permutation;

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    /// `transversal[b] = (u, u^-1)` with `base^u = b`.
    transversal: HashMap<usize, (Permutation, Permutation)>,
}

impl Level {
    fn new(base: usize) -> Self {
        Level {
            base,
            gens: Vec::new(),
            orbit: Vec::new(),
            transversal: HashMap::new(),
        }
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        let id = Permutation::identity(degree);
        self.orbit.clear();
        self.transversal.clear();
        self.orbit.push(self.base);
        self.transversal.insert(self.base, (id.clone(), id));
        let mut k = 0;
        while k < self.orbit.len() {
            let beta = self.orbit[k];
            for s in &self.gens {
                let gamma = s.apply(beta);
                if !self.transversal.contains_key(&gamma) {
                    let u = self.transversal[&beta].0.then(s);
                    let u_inv = u.inverse();
                    self.transversal.insert(gamma, (u, u_inv));
                    self.orbit.push(gamma);
                }
            }
            k += 1;
        }
    }
}

/// Base and strong generating set of a permutation group.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    /// Runs deterministic Schreier–Sims. Points in `base_prefix` become the
    /// first base points, in order, even when every generator fixes them.
    pub fn new(degree: usize, generators: &[Permutation], base_prefix: &[usize]) -> Self {
        let mut chain = StabChain {
            degree,
            levels: base_prefix.iter().map(|&b| Level::new(b)).collect(),
        };
        let gens: Vec<Permutation> = generators
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        for g in &gens {
            if chain.levels.iter().all(|l| g.apply(l.base) == l.base) {
                let b = g.first_moved().expect("non-identity");
                chain.levels.push(Level::new(b));
            }
        }
        for g in &gens {
            for l in 0..chain.levels.len() {
                chain.levels[l].gens.push(g.clone());
                let b = chain.levels[l].base;
                if g.apply(b) != b {
                    break;
                }
            }
        }
        for level in &mut chain.levels {
            level.rebuild_orbit(degree);
        }
        if chain.levels.is_empty() {
            return chain;
        }

        let mut i = chain.levels.len() - 1;
        loop {
            match chain.failing_schreier_generator(i) {
                Some((h, j)) => {
                    if j == chain.levels.len() {
                        let b = h.first_moved().expect("non-identity residue");
                        chain.levels.push(Level::new(b));
                    }
                    for l in (i + 1)..=j {
                        chain.levels[l].gens.push(h.clone());
                        chain.levels[l].rebuild_orbit(degree);
                    }
                    i = j;
                }
                None => {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                }
            }
        }
        chain
    }

    fn failing_schreier_generator(&self, i: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[i];
        for &beta in &level.orbit {
            let u_beta = &level.transversal[&beta].0;
            for s in &level.gens {
                let gamma = s.apply(beta);
                let schreier = u_beta.then(s).then(&level.transversal[&gamma].1);
                if schreier.is_identity() {
                    continue;
                }
                let (h, j) = self.strip(&schreier, i + 1);
                if j < self.levels.len() || !h.is_identity() {
                    return Some((h, j));
                }
            }
        }
        None
    }

    /// Sifts `g` through levels `from..`; returns the residue and the level
    /// at which sifting stopped (`levels.len()` if it passed all of them).
    fn strip(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for l in from..self.levels.len() {
            let level = &self.levels[l];
            let beta = h.apply(level.base);
            match level.transversal.get(&beta) {
                Some((_, u_inv)) => h = h.then(u_inv),
                None => return (h, l),
            }
        }
        (h, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.orbit_sizes_from(0)
    }

    fn orbit_sizes_from(&self, level: usize) -> BigUint {
        self.levels[level..]
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        let (h, j) = self.strip(g, 0);
        j == self.levels.len() && h.is_identity()
    }

    /// Strong generators of the pointwise stabilizer of the first `k` base
    /// points.
    pub fn stabilizer_generators(&self, k: usize) -> Vec<Permutation> {
        if k >= self.levels.len() {
            return Vec::new();
        }
        self.levels[k].gens.clone()
    }

    pub fn stabilizer_order(&self, k: usize) -> BigUint {
        if k >= self.levels.len() {
            return BigUint::one();
        }
        self.orbit_sizes_from(k)
    }

    /// Every element, as products of transversal representatives.
    fn elements(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for h in &out {
                for beta in &level.orbit {
                    next.push(h.then(&level.transversal[beta].0));
                }
            }
            out = next;
        }
        out
    }
}

/// Order, element-order histogram and center order of a finite group.
///
/// Equal fingerprints do not prove two groups isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFingerprint {
    pub order: u64,
    pub element_orders: BTreeMap<u64, u64>,
    pub center_order: u64,
}

impl GroupFingerprint {
    pub fn involutions(&self) -> u64 {
        self.element_orders.get(&2).copied().unwrap_or(0)
    }
}

/// Image of a group on a block system, with the kernel of the action.
#[derive(Clone, Debug)]
pub struct InducedAction {
    pub image: PermGroup,
    pub kernel: PermGroup,
    pub kernel_order: BigUint,
}

/// A permutation group on `0..degree` given by generators.
#[derive(Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let chain = OnceLock::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(c.clone());
        }
        PermGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            chain,
        }
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, GroupError> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(GroupError::DomainMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
        Ok(PermGroup {
            degree,
            generators,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            chain: OnceLock::new(),
        }
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::from_cycles(n, &[&[0, 1]]).unwrap());
            let cycle: Vec<usize> = (0..n).collect();
            gens.push(Permutation::from_cycles(n, &[&cycle]).unwrap());
        }
        PermGroup::new(n, gens).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::new(self.degree, &self.generators, &[]))
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool, GroupError> {
        if g.degree() != self.degree {
            return Err(GroupError::DomainMismatch {
                expected: self.degree,
                found: g.degree(),
            });
        }
        Ok(self.chain().contains(g))
    }

    /// Orbit partition, cells sorted internally and by minimum element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.degree).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for g in &self.generators {
            for x in 0..self.degree {
                let (a, b) = (find(&mut parent, x), find(&mut parent, g.apply(x)));
                if a != b {
                    let (lo, hi) = (a.min(b), a.max(b));
                    parent[hi] = lo;
                }
            }
        }
        let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..self.degree {
            let r = find(&mut parent, x);
            cells.entry(r).or_default().push(x);
        }
        cells.into_values().collect()
    }

    fn check_bound(&self, bound: u64) -> Result<u64, GroupError> {
        let order = self.order();
        match order.to_u64() {
            Some(o) if o <= bound => Ok(o),
            _ => Err(GroupError::TooLarge { order, bound }),
        }
    }

    /// All elements, sorted lexicographically by image array.
    pub fn enumerate_elements(&self, bound: u64) -> Result<Vec<Permutation>, GroupError> {
        self.check_bound(bound)?;
        let mut elements = self.chain().elements();
        elements.sort();
        Ok(elements)
    }

    pub fn fingerprint(&self, bound: u64) -> Result<GroupFingerprint, GroupError> {
        let elements = self.enumerate_elements(bound)?;
        let mut element_orders = BTreeMap::new();
        let mut center_order = 0;
        for g in &elements {
            *element_orders.entry(g.order()).or_insert(0) += 1;
            if self.generators.iter().all(|s| s.commutes_with(g)) {
                center_order += 1;
            }
        }
        Ok(GroupFingerprint {
            order: elements.len() as u64,
            element_orders,
            center_order,
        })
    }

    /// Action on a family of disjoint blocks. The kernel is computed from a
    /// stabilizer chain whose base starts with the block points.
    pub fn induced_action(&self, blocks: &[Vec<usize>]) -> Result<InducedAction, GroupError> {
        let mut block_of = vec![usize::MAX; self.degree];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(GroupError::BadBlocks);
            }
            for &x in block {
                if x >= self.degree {
                    return Err(GroupError::OutOfDomain {
                        point: x,
                        degree: self.degree,
                    });
                }
                if block_of[x] != usize::MAX {
                    return Err(GroupError::BadBlocks);
                }
                block_of[x] = b;
            }
        }

        let nb = blocks.len();
        let mut image_gens = Vec::with_capacity(self.generators.len());
        let mut extended = Vec::with_capacity(self.generators.len());
        for (gi, g) in self.generators.iter().enumerate() {
            let mut on_blocks = Vec::with_capacity(nb);
            for (b, block) in blocks.iter().enumerate() {
                let target = block_of[g.apply(block[0])];
                if target == usize::MAX
                    || block.iter().any(|&x| block_of[g.apply(x)] != target)
                    || blocks[target].len() != block.len()
                {
                    return Err(GroupError::BlockSplit {
                        generator: gi,
                        block: b,
                    });
                }
                on_blocks.push(target as u32);
            }
            let image = Permutation::from_images(on_blocks.clone())?;
            let mut ext: Vec<u32> = g.images().to_vec();
            ext.extend(on_blocks.iter().map(|&b| b + self.degree as u32));
            extended.push(Permutation::from_images(ext)?);
            image_gens.push(image);
        }

        let prefix: Vec<usize> = (self.degree..self.degree + nb).collect();
        let chain = StabChain::new(self.degree + nb, &extended, &prefix);
        let kernel_order = chain.stabilizer_order(nb);
        let kernel_gens = chain
            .stabilizer_generators(nb)
            .iter()
            .map(|g| g.restrict_prefix(self.degree))
            .collect::<Result<Vec<_>, _>>()?;
        let image = PermGroup::new(nb, image_gens)?;
        debug_assert_eq!(image.order() * &kernel_order, self.order());
        Ok(InducedAction {
            image,
            kernel: PermGroup::new(self.degree, kernel_gens)?,
            kernel_order,
        })
    }

    /// Pointwise stabilizer of `points`.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Result<PermGroup, GroupError> {
        if let Some(&p) = points.iter().find(|&&p| p >= self.degree) {
            return Err(GroupError::OutOfDomain {
                point: p,
                degree: self.degree,
            });
        }
        let chain = StabChain::new(self.degree, &self.generators, points);
        PermGroup::new(self.degree, chain.stabilizer_generators(points.len()))
    }

    /// Whether the action on ordered tuples has a single orbit on `tuples`.
    pub fn is_transitive_on(&self, tuples: &[Vec<usize>]) -> Result<bool, GroupError> {
        self.transitive_impl(tuples, false)
    }

    /// As [`is_transitive_on`](Self::is_transitive_on) but for unordered sets.
    pub fn is_transitive_on_sets(&self, sets: &[Vec<usize>]) -> Result<bool, GroupError> {
        self.transitive_impl(sets, true)
    }

    fn transitive_impl(&self, tuples: &[Vec<usize>], unordered: bool) -> Result<bool, GroupError> {
        if tuples.is_empty() {
            return Err(GroupError::EmptyTuples);
        }
        for t in tuples {
            if let Some(&p) = t.iter().find(|&&p| p >= self.degree) {
                return Err(GroupError::OutOfDomain {
                    point: p,
                    degree: self.degree,
                });
            }
        }
        let norm = |mut t: Vec<usize>| {
            if unordered {
                t.sort_unstable();
            }
            t
        };
        let targets: HashSet<Vec<usize>> = tuples.iter().cloned().map(norm).collect();
        let start = norm(tuples[0].clone());
        let mut seen: HashSet<Vec<usize>> = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        let mut hit = 0usize;
        while let Some(t) = queue.pop_front() {
            if targets.contains(&t) {
                hit += 1;
            }
            for g in &self.generators {
                let image = norm(t.iter().map(|&x| g.apply(x)).collect());
                if seen.insert(image.clone()) {
                    queue.push_back(image);
                }
            }
        }
        Ok(hit == targets.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn cyclic_and_symmetric_orders() {
        let c5 = PermGroup::new(5, vec![cyc(5, &[&[0, 1, 2, 3, 4]])]).unwrap();
        assert_eq!(c5.order(), BigUint::from(5u32));
        let s6 = PermGroup::new(6, vec![cyc(6, &[&[0, 1]]), cyc(6, &[&[0, 1, 2, 3, 4, 5]])]).unwrap();
        assert_eq!(s6.order(), BigUint::from(720u32));
    }

    #[test]
    fn membership() {
        let c3 = PermGroup::new(3, vec![cyc(3, &[&[0, 1, 2]])]).unwrap();
        assert!(c3.contains(&Permutation::identity(3)).unwrap());
        assert!(!c3.contains(&cyc(3, &[&[0, 1]])).unwrap());
        assert!(matches!(
            c3.contains(&Permutation::identity(4)),
            Err(GroupError::DomainMismatch { .. })
        ));
    }

    #[test]
    fn orbits_sorted_by_minimum() {
        assert_eq!(PermGroup::trivial(3).orbits(), vec![vec![0], vec![1], vec![2]]);
        let g = PermGroup::new(5, vec![cyc(5, &[&[4, 1]]), cyc(5, &[&[3, 0]])]).unwrap();
        assert_eq!(g.orbits(), vec![vec![0, 3], vec![1, 4], vec![2]]);
    }

    #[test]
    fn enumeration_is_sorted_and_bounded() {
        let g = PermGroup::new(2, vec![cyc(2, &[&[0, 1]])]).unwrap();
        let els = g.enumerate_elements(10).unwrap();
        assert_eq!(els, vec![Permutation::identity(2), cyc(2, &[&[0, 1]])]);
        let s6 = PermGroup::symmetric(6);
        assert!(matches!(s6.enumerate_elements(100), Err(GroupError::TooLarge { .. })));
    }

    #[test]
    fn s3_fingerprint() {
        let fp = PermGroup::symmetric(3).fingerprint(100).unwrap();
        assert_eq!(fp.order, 6);
        assert_eq!(fp.element_orders, BTreeMap::from([(1, 1), (2, 3), (3, 2)]));
        assert_eq!(fp.center_order, 1);
    }

    #[test]
    fn induced_action_kernel() {
        // C2 x C2 acting on {0,1} and {2,3}, blocks {0,1},{2,3}.
        let g = PermGroup::new(4, vec![cyc(4, &[&[0, 1]]), cyc(4, &[&[0, 2], &[1, 3]])]).unwrap();
        let act = g.induced_action(&[vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(act.image.order(), BigUint::from(2u32));
        assert_eq!(act.kernel_order, BigUint::from(4u32));
        assert_eq!(act.kernel.order(), BigUint::from(4u32));

        let split = g.induced_action(&[vec![0, 2], vec![1, 3]]);
        assert!(matches!(split, Err(GroupError::BlockSplit { .. })));
    }

    #[test]
    fn transitivity_on_tuples() {
        let s3 = PermGroup::symmetric(3);
        let pairs: Vec<Vec<usize>> = (0..3)
            .flat_map(|a| (0..3).filter(move |&b| b != a).map(move |b| vec![a, b]))
            .collect();
        assert!(s3.is_transitive_on(&pairs).unwrap());
        let t = PermGroup::trivial(2);
        assert!(!t.is_transitive_on(&[vec![0], vec![1]]).unwrap());
        assert!(t.is_transitive_on(&[vec![5]]).is_err());
    }

    #[test]
    fn forced_base_prefix_gives_pointwise_stabilizer() {
        let s5 = PermGroup::symmetric(5);
        let stab = s5.pointwise_stabilizer(&[4, 3]).unwrap();
        assert_eq!(stab.order(), BigUint::from(6u32));
        assert!(stab.generators().iter().all(|g| g.apply(4) == 4 && g.apply(3) == 3));
    }
}
