//! Automorphisms of vertex-colored graphs by individualization and
//! refinement.
//!
//! The first path of the search tree fixes a base `b_0, b_1, ..`. Levels are
//! then processed deepest first: at depth `d`, for every vertex `w` of the
//! first-path target cell not yet in the orbit of `b_d` under the
//! generators found so far that fix `b_0..b_{d-1}`, the subtree rooted at
//! `w` is searched for one automorphism. The generators collected this way
//! generate the full automorphism group.

use std::collections::BTreeMap;

use crate::perm::Permutation;

/// Undirected graph with a coloring; color classes become the cells of the
/// initial partition, ordered by color value.
#[derive(Clone, Debug)]
pub struct ColoredGraph {
    adjacency: Vec<Vec<usize>>,
    colors: Vec<usize>,
}

impl ColoredGraph {
    pub fn new(
        node_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        colors: Vec<usize>,
    ) -> Self {
        assert_eq!(colors.len(), node_count);
        let mut adjacency = vec![Vec::new(); node_count];
        for (a, b) in edges {
            if a != b {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        ColoredGraph { adjacency, colors }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    fn is_automorphism(&self, g: &[usize]) -> bool {
        (0..self.node_count()).all(|v| {
            self.colors[v] == self.colors[g[v]]
                && self.adjacency[v].len() == self.adjacency[g[v]].len()
                && self.adjacency[v].iter().all(|&w| self.has_edge(g[v], g[w]))
        })
    }

    fn initial_partition(&self) -> Partition {
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &c) in self.colors.iter().enumerate() {
            classes.entry(c).or_default().push(v);
        }
        Partition::from_cells(self.node_count(), classes.into_values().collect())
    }
}

/// Ordered partition of the vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Partition {
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
}

impl Partition {
    fn from_cells(n: usize, cells: Vec<Vec<usize>>) -> Self {
        let mut cell_of = vec![0; n];
        for (c, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = c;
            }
        }
        Partition { cells, cell_of }
    }

    fn is_discrete(&self) -> bool {
        self.cells.len() == self.cell_of.len()
    }

    fn shape(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// First smallest non-singleton cell.
    fn target_cell(&self) -> Option<usize> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|&(i, c)| (c.len(), i))
            .map(|(i, _)| i)
    }

    /// Moves `v` into a singleton cell placed just before the rest of its
    /// cell.
    fn individualize(&self, v: usize) -> Partition {
        let c = self.cell_of[v];
        let mut cells = Vec::with_capacity(self.cells.len() + 1);
        for (i, cell) in self.cells.iter().enumerate() {
            if i == c {
                cells.push(vec![v]);
                cells.push(cell.iter().copied().filter(|&x| x != v).collect());
            } else {
                cells.push(cell.clone());
            }
        }
        Partition::from_cells(self.cell_of.len(), cells)
    }

    /// Color refinement to the coarsest equitable partition finer than
    /// `self`. New cells are ordered by (old cell, neighbour-count
    /// signature), which is invariant under relabelling.
    fn refine(mut self, graph: &ColoredGraph) -> Partition {
        loop {
            let mut signatures: Vec<Vec<(usize, usize)>> = Vec::with_capacity(graph.node_count());
            for v in 0..graph.node_count() {
                let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
                for &w in &graph.adjacency[v] {
                    *counts.entry(self.cell_of[w]).or_insert(0) += 1;
                }
                signatures.push(counts.into_iter().collect());
            }
            let mut cells = Vec::with_capacity(self.cells.len());
            for cell in &self.cells {
                let mut groups: BTreeMap<&Vec<(usize, usize)>, Vec<usize>> = BTreeMap::new();
                for &v in cell {
                    groups.entry(&signatures[v]).or_default().push(v);
                }
                cells.extend(groups.into_values());
            }
            let changed = cells.len() != self.cells.len();
            self = Partition::from_cells(graph.node_count(), cells);
            if !changed {
                return self;
            }
        }
    }

    /// Neighbour counts between cells; well defined for equitable
    /// partitions and invariant under isomorphism.
    fn quotient(&self, graph: &ColoredGraph) -> Vec<Vec<usize>> {
        self.cells
            .iter()
            .map(|cell| {
                let mut row = vec![0; self.cells.len()];
                for &w in &graph.adjacency[cell[0]] {
                    row[self.cell_of[w]] += 1;
                }
                row
            })
            .collect()
    }

    fn leaf_order(&self) -> Vec<usize> {
        self.cells.iter().map(|c| c[0]).collect()
    }
}

struct PathNode {
    partition: Partition,
    shape: Vec<usize>,
    quotient: Vec<Vec<usize>>,
}

/// Generators of the automorphism group of a colored graph, with the base
/// of the search.
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub generators: Vec<Permutation>,
    pub base: Vec<usize>,
    pub leaves_visited: usize,
}

pub fn automorphisms(graph: &ColoredGraph) -> SearchResult {
    let n = graph.node_count();
    let mut path = Vec::new();
    let mut base = Vec::new();
    let mut p = graph.initial_partition().refine(graph);
    loop {
        path.push(PathNode {
            shape: p.shape(),
            quotient: p.quotient(graph),
            partition: p.clone(),
        });
        let Some(c) = p.target_cell() else { break };
        let b = p.cells[c][0];
        base.push(b);
        p = p.individualize(b).refine(graph);
    }
    let first_leaf = path.last().expect("nonempty path").partition.leaf_order();

    let mut search = Search {
        graph,
        path: &path,
        first_leaf: &first_leaf,
        leaves: 0,
    };
    let mut generators: Vec<Permutation> = Vec::new();
    for d in (0..base.len()).rev() {
        let node = &path[d];
        let target = node.partition.target_cell().expect("non-discrete above leaf");
        let fixing: Vec<&Permutation> = generators
            .iter()
            .filter(|g| base[..d].iter().all(|&b| g.apply(b) == b))
            .collect();
        let mut orbit = Orbits::new(n, &fixing);
        let mut failed: Vec<usize> = Vec::new();
        for &w in &node.partition.cells[target] {
            if orbit.same(w, base[d]) || failed.iter().any(|&f| orbit.same(f, w)) {
                continue;
            }
            let child = node.partition.individualize(w).refine(graph);
            match search.find(child, d + 1) {
                Some(g) => {
                    orbit.add(&g);
                    generators.push(g);
                }
                None => failed.push(w),
            }
        }
    }
    SearchResult {
        generators,
        base,
        leaves_visited: search.leaves,
    }
}

struct Search<'a> {
    graph: &'a ColoredGraph,
    path: &'a [PathNode],
    first_leaf: &'a [usize],
    leaves: usize,
}

impl Search<'_> {
    fn find(&mut self, p: Partition, depth: usize) -> Option<Permutation> {
        let reference = self.path.get(depth)?;
        if p.shape() != reference.shape || p.quotient(self.graph) != reference.quotient {
            return None;
        }
        if p.is_discrete() {
            self.leaves += 1;
            let leaf = p.leaf_order();
            let mut images = vec![0usize; leaf.len()];
            for (pos, &v) in self.first_leaf.iter().enumerate() {
                images[v] = leaf[pos];
            }
            return if self.graph.is_automorphism(&images) {
                Some(Permutation::from_usize_images(&images).expect("leaf is a bijection"))
            } else {
                None
            };
        }
        let c = p.target_cell()?;
        for &w in &p.cells[c] {
            let child = p.individualize(w).refine(self.graph);
            if let Some(g) = self.find(child, depth + 1) {
                return Some(g);
            }
        }
        None
    }
}

struct Orbits {
    parent: Vec<usize>,
}

impl Orbits {
    fn new(n: usize, gens: &[&Permutation]) -> Self {
        let mut o = Orbits {
            parent: (0..n).collect(),
        };
        for g in gens {
            o.add(g);
        }
        o
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    fn add(&mut self, g: &Permutation) {
        for x in 0..self.parent.len() {
            let (a, b) = (self.find(x), self.find(g.apply(x)));
            if a != b {
                self.parent[a.max(b)] = a.min(b);
            }
        }
    }
}
