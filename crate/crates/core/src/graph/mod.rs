//! Graph representation, independent-set state and exact α oracles.

mod alpha;
pub mod io;
mod state;

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use alpha::{
    alpha_bipartite, alpha_bruteforce, alpha_bruteforce_with_cap, alpha_tree, AlphaCertificate,
    AlphaMethod, BRUTE_FORCE_CAP,
};
pub use state::IndependentSetState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::L => "L",
            Side::R => "R",
        })
    }
}

/// Instance family a graph was generated from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GraphKind {
    #[default]
    Generic,
    BaseBipartite { n: usize, k: usize },
    CliqueBlowup { n: usize, k: usize, ell: usize },
    BipartiteBlowup { cloud_size: usize, copies: usize },
    StarTree { k: usize },
    HardTree { k: usize, copies: usize, apex: bool },
    BalancedBipartite { n: usize },
    AppendixAnchor { n: usize },
    AppendixMulticopy { n: usize, set_size: usize },
}

impl GraphKind {
    /// Families whose side labels must form a proper bipartition.
    pub fn is_bipartite_family(&self) -> bool {
        matches!(
            self,
            GraphKind::BaseBipartite { .. }
                | GraphKind::BipartiteBlowup { .. }
                | GraphKind::BalancedBipartite { .. }
        )
    }
}

/// Immutable undirected simple graph in compressed-row layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    sides: Vec<Option<Side>>,
    groups: Vec<Option<u32>>,
    kind: GraphKind,
}

/// Builds a graph from an edge list; duplicate edges in either orientation
/// collapse to one.
pub fn build_graph(
    num_vertices: usize,
    edges: &[(usize, usize)],
    sides: Option<Vec<Option<Side>>>,
) -> Result<Graph> {
    let g = Graph::from_edges(num_vertices, edges.iter().copied())?;
    match sides {
        Some(s) => g.with_sides(s),
        None => Ok(g),
    }
}

impl Graph {
    pub fn from_edges<I>(num_vertices: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        assert!(num_vertices < u32::MAX as usize, "vertex count exceeds u32 range");
        let mut arcs: Vec<(u32, u32)> = Vec::new();
        for (u, v) in edges {
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::InvalidEdge(u, v, "endpoint out of range"));
            }
            if u == v {
                return Err(Error::InvalidEdge(u, v, "self-loop"));
            }
            arcs.push((u as u32, v as u32));
            arcs.push((v as u32, u as u32));
        }
        arcs.sort_unstable();
        arcs.dedup();

        let mut offsets = vec![0usize; num_vertices + 1];
        for &(u, _) in &arcs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..num_vertices {
            offsets[i + 1] += offsets[i];
        }
        let targets = arcs.into_iter().map(|(_, v)| v).collect();
        Ok(Graph {
            offsets,
            targets,
            sides: vec![None; num_vertices],
            groups: vec![None; num_vertices],
            kind: GraphKind::Generic,
        })
    }

    pub fn empty(num_vertices: usize) -> Graph {
        Graph::from_edges(num_vertices, std::iter::empty()).expect("edgeless graph is valid")
    }

    pub fn with_sides(mut self, sides: Vec<Option<Side>>) -> Result<Graph> {
        if sides.len() != self.num_vertices() {
            return Err(Error::InvalidParams(format!(
                "{} side labels for {} vertices",
                sides.len(),
                self.num_vertices()
            )));
        }
        self.sides = sides;
        self.check_kind()?;
        Ok(self)
    }

    pub fn with_groups(mut self, groups: Vec<Option<u32>>) -> Result<Graph> {
        if groups.len() != self.num_vertices() {
            return Err(Error::InvalidParams(format!(
                "{} group ids for {} vertices",
                groups.len(),
                self.num_vertices()
            )));
        }
        self.groups = groups;
        Ok(self)
    }

    pub fn with_kind(mut self, kind: GraphKind) -> Result<Graph> {
        self.kind = kind;
        self.check_kind()?;
        Ok(self)
    }

    fn check_kind(&self) -> Result<()> {
        if self.kind.is_bipartite_family() && self.has_sides() {
            self.check_labeled_bipartition()?;
        }
        Ok(())
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.num_vertices()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.num_vertices()).map(|v| self.degree(v)).collect()
    }

    pub fn side(&self, v: usize) -> Option<Side> {
        self.sides[v]
    }

    pub fn sides(&self) -> &[Option<Side>] {
        &self.sides
    }

    pub fn has_sides(&self) -> bool {
        self.sides.iter().any(Option::is_some)
    }

    pub fn group(&self, v: usize) -> Option<u32> {
        self.groups[v]
    }

    pub fn groups(&self) -> &[Option<u32>] {
        &self.groups
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn vertices_on(&self, side: Side) -> Vec<usize> {
        (0..self.num_vertices()).filter(|&v| self.sides[v] == Some(side)).collect()
    }

    /// Checks that every vertex carries a side label and no edge joins two
    /// vertices on the same side.
    pub fn check_labeled_bipartition(&self) -> Result<()> {
        for v in 0..self.num_vertices() {
            let Some(sv) = self.sides[v] else {
                return Err(Error::NotBipartite(format!("vertex {v} has no side label")));
            };
            for &u in self.neighbors(v) {
                if self.sides[u as usize] == Some(sv) {
                    return Err(Error::NotBipartite(format!(
                        "edge ({v}, {u}) joins two {sv} vertices"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Proper two-colouring by BFS, lowest index of each component on `L`.
    pub fn two_coloring(&self) -> Option<Vec<Side>> {
        let n = self.num_vertices();
        let mut color: Vec<Option<Side>> = vec![None; n];
        let mut queue = std::collections::VecDeque::new();
        for s in 0..n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(Side::L);
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                let cv = color[v].unwrap();
                for &u in self.neighbors(v) {
                    let u = u as usize;
                    match color[u] {
                        None => {
                            color[u] = Some(cv.opposite());
                            queue.push_back(u);
                        }
                        Some(cu) if cu == cv => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(Option::unwrap).collect())
    }

    pub fn is_forest(&self) -> bool {
        let mut dsu = Dsu::new(self.num_vertices());
        self.edges().all(|(u, v)| dsu.union(u, v))
    }

    /// Occupancy bitset of a vertex list.
    pub fn bitset_of(&self, set: &[usize]) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.num_vertices());
        for &v in set {
            bits.insert(v);
        }
        bits
    }
}

/// True iff `set` spans no edge of `g`.
pub fn is_independent(g: &Graph, set: &[usize]) -> bool {
    first_covered_edge(g, set).is_none()
}

pub(crate) fn first_covered_edge(g: &Graph, set: &[usize]) -> Option<(usize, usize)> {
    let bits = g.bitset_of(set);
    set.iter().find_map(|&v| {
        g.neighbors(v)
            .iter()
            .find(|&&u| bits.contains(u as usize))
            .map(|&u| (v.min(u as usize), v.max(u as usize)))
    })
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already connected.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        build_graph(n, &edges, None).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        build_graph(n, &edges, None).unwrap()
    }

    #[test]
    fn path_degree_sequence() {
        let g = path(3);
        assert_eq!(g.degrees(), vec![1, 2, 1]);
        assert_eq!(g.num_edges(), 2);
    }

    #[test]
    fn symmetric_duplicates_collapse() {
        let g = build_graph(2, &[(0, 1), (1, 0)], None).unwrap();
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.neighbors(0), &[1]);
        assert_eq!(g.neighbors(1), &[0]);
    }

    #[test]
    fn empty_graph() {
        let g = build_graph(5, &[], None).unwrap();
        assert_eq!(g.num_edges(), 0);
        assert_eq!(g.num_vertices(), 5);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(build_graph(3, &[(0, 3)], None), Err(Error::InvalidEdge(0, 3, _))));
        assert!(matches!(build_graph(3, &[(1, 1)], None), Err(Error::InvalidEdge(1, 1, _))));
    }

    #[test]
    fn independence_checks() {
        let g = path(3);
        assert!(is_independent(&g, &[0, 2]));
        assert!(!is_independent(&g, &[0, 1]));
        let k5 = complete(5);
        for u in 0..5 {
            for v in u + 1..5 {
                assert!(!is_independent(&k5, &[u, v]));
            }
        }
        assert!(is_independent(&k5, &[]));
    }

    #[test]
    fn bipartite_family_rejects_same_side_edge() {
        let g = build_graph(2, &[(0, 1)], Some(vec![Some(Side::L), Some(Side::L)])).unwrap();
        assert!(matches!(
            g.with_kind(GraphKind::BalancedBipartite { n: 1 }),
            Err(Error::NotBipartite(_))
        ));
    }

    #[test]
    fn forest_detection() {
        assert!(path(6).is_forest());
        assert!(!complete(3).is_forest());
        assert!(Graph::empty(4).is_forest());
    }

    #[test]
    fn two_coloring_of_odd_cycle_fails() {
        let c5 = build_graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], None).unwrap();
        assert!(c5.two_coloring().is_none());
        let c4 = build_graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], None).unwrap();
        assert_eq!(
            c4.two_coloring().unwrap(),
            vec![Side::L, Side::R, Side::L, Side::R]
        );
    }

    #[test]
    fn construction_is_order_independent() {
        let a = build_graph(4, &[(2, 3), (0, 1), (1, 2)], None).unwrap();
        let b = build_graph(4, &[(1, 0), (3, 2), (2, 1), (0, 1)], None).unwrap();
        assert_eq!(a, b);
    }
}
