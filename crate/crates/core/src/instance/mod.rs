//! Seeded generators for the hard-instance families.
//!
//! Every generator is a pure function of its arguments. Random structures
//! draw from dedicated counter-based streams of the master seed (see
//! [`crate::rng`]), so e.g. side assignment and edge sampling never share
//! draws.

mod params;
mod sidecar;

use rand::Rng;
use rand_distr::{Distribution, Geometric};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphKind, Side};
use crate::rng::{self, streams};

pub use params::{
    derive_dense_params, validate_relations, BlowupParams, DenseDerivation, DenseParams,
    RelationReport,
};
pub use sidecar::InstanceMeta;

/// Indices in `0..total` selected independently with probability `p`,
/// sampled by geometric gap skipping.
fn bernoulli_indices<R: Rng>(rng: &mut R, total: u64, p: f64) -> Vec<u64> {
    if total == 0 || p <= 0.0 {
        return Vec::new();
    }
    if p >= 1.0 {
        return (0..total).collect();
    }
    let gap = Geometric::new(p).expect("p in (0, 1)");
    let mut out = Vec::with_capacity(((total as f64) * p * 1.1) as usize + 8);
    let mut next = gap.sample(rng);
    while next < total {
        out.push(next);
        next = match next.checked_add(1 + gap.sample(rng)) {
            Some(x) => x,
            None => break,
        };
    }
    out
}

fn check_prob(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// Random bipartite graph with `|L| = n` (vertices `0..n`) and
/// `|R| = k n` (vertices `n..n + k n`); each cross pair is an edge with
/// probability `p`.
pub fn gen_base_bipartite(n: usize, k: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidParams("n and k must be at least 1".into()));
    }
    check_prob(p)?;
    let right = k * n;
    let mut rng = rng::stream(seed, streams::BASE_EDGES);
    let edges = bernoulli_indices(&mut rng, (n * right) as u64, p)
        .into_iter()
        .map(|i| ((i / right as u64) as usize, n + (i % right as u64) as usize));
    let sides = (0..n + right).map(|v| Some(if v < n { Side::L } else { Side::R })).collect();
    Graph::from_edges(n + right, edges)?
        .with_sides(sides)?
        .with_kind(GraphKind::BaseBipartite { n, k })
}

/// Explicit clique blowup together with the base graph it came from.
#[derive(Debug, Clone)]
pub struct CliqueBlowup {
    pub graph: Graph,
    pub base: Graph,
    pub meta: CliqueMeta,
}

/// Maps every blowup vertex back to its base vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueMeta {
    pub ell: usize,
    base_of: Vec<u32>,
}

impl CliqueMeta {
    pub fn base_vertex(&self, v: usize) -> usize {
        self.base_of[v] as usize
    }

    pub fn num_blowup_vertices(&self) -> usize {
        self.base_of.len()
    }
}

pub fn gen_clique_blowup(params: &BlowupParams) -> Result<CliqueBlowup> {
    let base = gen_base_bipartite(params.n, params.k, params.p, params.seed)?;
    let mut out = clique_blowup_of(&base, params.ell)?;
    out.graph = out.graph.with_kind(GraphKind::CliqueBlowup {
        n: params.n,
        k: params.k,
        ell: params.ell,
    })?;
    Ok(out)
}

/// Replaces every `L` vertex of a side-labelled base by an `ell`-clique
/// joined to the vertex's whole neighbourhood. Cliques come first, in `L`
/// order, followed by the `R` vertices in index order.
pub fn clique_blowup_of(base: &Graph, ell: usize) -> Result<CliqueBlowup> {
    if ell == 0 {
        return Err(Error::InvalidParams("clique size must be at least 1".into()));
    }
    base.check_labeled_bipartition()?;
    let left = base.vertices_on(Side::L);
    let right = base.vertices_on(Side::R);
    let total = left.len() * ell + right.len();

    let mut first = vec![0usize; base.num_vertices()];
    let mut base_of = Vec::with_capacity(total);
    for (i, &u) in left.iter().enumerate() {
        first[u] = i * ell;
        base_of.extend(std::iter::repeat_n(u as u32, ell));
    }
    for (j, &v) in right.iter().enumerate() {
        first[v] = left.len() * ell + j;
        base_of.push(v as u32);
    }

    let mut edges = Vec::new();
    for &u in &left {
        let lo = first[u];
        for a in lo..lo + ell {
            for b in a + 1..lo + ell {
                edges.push((a, b));
            }
            for &v in base.neighbors(u) {
                edges.push((a, first[v as usize]));
            }
        }
    }
    let sides = base_of.iter().map(|&b| base.side(b as usize)).collect();
    let groups = base_of
        .iter()
        .map(|&b| (base.side(b as usize) == Some(Side::L)).then_some(b))
        .collect();
    let graph = Graph::from_edges(total, edges)?.with_sides(sides)?.with_groups(groups)?;
    Ok(CliqueBlowup {
        graph,
        base: base.clone(),
        meta: CliqueMeta { ell, base_of },
    })
}

/// Cloud layout of a bipartite `K, M` blowup: cloud `c = m * n_base + i`
/// holds vertices `c K .. (c + 1) K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CloudMeta {
    pub cloud_size: usize,
    pub copies: usize,
    pub base_vertices: usize,
}

impl CloudMeta {
    pub fn num_clouds(&self) -> usize {
        self.copies * self.base_vertices
    }

    #[inline]
    pub fn cloud_of(&self, v: usize) -> usize {
        v / self.cloud_size
    }

    pub fn members(&self, cloud: usize) -> std::ops::Range<usize> {
        cloud * self.cloud_size..(cloud + 1) * self.cloud_size
    }

    pub fn copy_of(&self, cloud: usize) -> usize {
        cloud / self.base_vertices
    }

    pub fn base_vertex_of(&self, cloud: usize) -> usize {
        cloud % self.base_vertices
    }
}

/// `M` disjoint copies of `base`, each vertex blown up into an independent
/// cloud of size `K` and each edge into a complete `K x K` join.
pub fn gen_bipartite_blowup(base: &Graph, cloud_size: usize, copies: usize) -> Result<(Graph, CloudMeta)> {
    if cloud_size == 0 || copies == 0 {
        return Err(Error::InvalidParams("cloud size and copy count must be at least 1".into()));
    }
    let base_sides: Vec<Side> = if base.has_sides() {
        base.check_labeled_bipartition()?;
        base.sides().iter().map(|s| s.unwrap()).collect()
    } else {
        base.two_coloring()
            .ok_or_else(|| Error::NotBipartite("base graph has an odd cycle".into()))?
    };
    let meta = CloudMeta {
        cloud_size,
        copies,
        base_vertices: base.num_vertices(),
    };
    let total = meta.num_clouds() * cloud_size;
    let mut edges = Vec::with_capacity(copies * base.num_edges() * cloud_size * cloud_size);
    for m in 0..copies {
        let off = m * base.num_vertices();
        for (u, v) in base.edges() {
            for a in meta.members(off + u) {
                for b in meta.members(off + v) {
                    edges.push((a, b));
                }
            }
        }
    }
    let sides = (0..total)
        .map(|x| Some(base_sides[meta.base_vertex_of(meta.cloud_of(x))]))
        .collect();
    let groups = (0..total).map(|x| Some(meta.cloud_of(x) as u32)).collect();
    let g = Graph::from_edges(total, edges)?
        .with_sides(sides)?
        .with_groups(groups)?
        .with_kind(GraphKind::BipartiteBlowup { cloud_size, copies })?;
    Ok((g, meta))
}

/// `T_k`: root `0`, `a_i = i` and leaf `b_i = k + i` for `i in 1..=k`.
pub fn gen_star_tree(k: usize) -> Result<Graph> {
    if k == 0 {
        return Err(Error::InvalidParams("star tree needs k >= 1".into()));
    }
    let mut edges = Vec::with_capacity(2 * k);
    push_star(&mut edges, 0, k);
    Graph::from_edges(2 * k + 1, edges)?.with_kind(GraphKind::StarTree { k })
}

fn push_star(edges: &mut Vec<(usize, usize)>, off: usize, k: usize) {
    for i in 1..=k {
        edges.push((off, off + i));
        edges.push((off + i, off + k + i));
    }
}

/// Star-tree `A` vertices (`a_1..a_k`) of copy `copy`.
pub fn star_tree_a_vertices(k: usize, copy: usize) -> std::ops::RangeInclusive<usize> {
    let off = copy * (2 * k + 1);
    off + 1..=off + k
}

/// `copies` disjoint `T_k`, copy `c` occupying `c (2k+1) .. (c+1)(2k+1)`;
/// with `apex`, one extra last vertex adjacent to every copy root.
pub fn gen_hard_tree(k: usize, copies: usize, apex: bool) -> Result<Graph> {
    if k == 0 || copies == 0 {
        return Err(Error::InvalidParams("hard tree needs k, copies >= 1".into()));
    }
    let block = 2 * k + 1;
    let n = copies * block + usize::from(apex);
    let mut edges = Vec::with_capacity(copies * (2 * k + 1));
    for c in 0..copies {
        push_star(&mut edges, c * block, k);
        if apex {
            edges.push((copies * block, c * block));
        }
    }
    let groups = (0..n).map(|v| (v < copies * block).then_some((v / block) as u32)).collect();
    Graph::from_edges(n, edges)?
        .with_groups(groups)?
        .with_kind(GraphKind::HardTree { k, copies, apex })
}

/// Random bipartite graph on `2n` vertices with uniformly random sides and
/// cross edges of probability `d / n`.
pub fn gen_random_balanced_bipartite(n: usize, d: f64, seed: u64) -> Result<Graph> {
    if n == 0 || !(0.0..n as f64).contains(&d) {
        return Err(Error::InvalidParams(format!("need n >= 1 and 0 <= d < n, got n={n}, d={d}")));
    }
    let mut side_rng = rng::stream(seed, streams::SIDES);
    let sides: Vec<Side> = (0..2 * n)
        .map(|_| if side_rng.random::<bool>() { Side::L } else { Side::R })
        .collect();
    let left: Vec<usize> = (0..2 * n).filter(|&v| sides[v] == Side::L).collect();
    let right: Vec<usize> = (0..2 * n).filter(|&v| sides[v] == Side::R).collect();
    let mut edge_rng = rng::stream(seed, streams::CROSS_EDGES);
    let r = right.len() as u64;
    let edges = bernoulli_indices(&mut edge_rng, left.len() as u64 * r, d / n as f64)
        .into_iter()
        .map(|i| (left[(i / r) as usize], right[(i % r) as usize]));
    Graph::from_edges(2 * n, edges)?
        .with_sides(sides.into_iter().map(Some).collect())?
        .with_kind(GraphKind::BalancedBipartite { n })
}

/// Degree-greedy trap: independent `I = 0..n`, clique `C = n..2n`, `I x C`
/// complete, and `r = 2n` adjacent to all of `I`.
pub fn gen_appendix_anchor(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParams("anchor graph needs n >= 2".into()));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for c in n..2 * n {
            edges.push((i, c));
        }
        edges.push((i, 2 * n));
    }
    for a in n..2 * n {
        for b in a + 1..2 * n {
            edges.push((a, b));
        }
    }
    let groups = (0..=2 * n).map(|v| Some(if v < n { 0 } else if v < 2 * n { 1 } else { 2 })).collect();
    Graph::from_edges(2 * n + 1, edges)?
        .with_groups(groups)?
        .with_kind(GraphKind::AppendixAnchor { n })
}

/// `⌊n^ε⌋`, tolerant to `powf` landing just below an exact integer.
pub fn multicopy_set_size(n: usize, epsilon: f64) -> usize {
    let x = (n as f64).powf(epsilon);
    (x * (1.0 + 1e-12)).floor() as usize
}

/// Randomized-greedy trap: `n` disjoint copies of an independent set of
/// size `⌊n^ε⌋` completely joined to its own `n`-clique. Copy `c` uses
/// `c (n + s) .. (c + 1)(n + s)`, independent set first.
pub fn gen_appendix_multicopy(n: usize, epsilon: f64) -> Result<Graph> {
    let s = multicopy_set_size(n, epsilon);
    if n == 0 || s == 0 {
        return Err(Error::InvalidParams(format!("need n^eps >= 1, got n={n}, eps={epsilon}")));
    }
    let block = n + s;
    let mut edges = Vec::new();
    for c in 0..n {
        let off = c * block;
        for i in off..off + s {
            for q in off + s..off + block {
                edges.push((i, q));
            }
        }
        for a in off + s..off + block {
            for b in a + 1..off + block {
                edges.push((a, b));
            }
        }
    }
    let groups = (0..n * block).map(|v| Some((v / block) as u32)).collect();
    Graph::from_edges(n * block, edges)?
        .with_groups(groups)?
        .with_kind(GraphKind::AppendixMulticopy { n, set_size: s })
}

/// Multicopy independent-set vertices (the optimum).
pub fn multicopy_set_vertices(n: usize, set_size: usize) -> Vec<usize> {
    let block = n + set_size;
    (0..n).flat_map(|c| c * block..c * block + set_size).collect()
}

/// Closed-form α for families where it is known from the construction.
pub fn formula_alpha(kind: GraphKind) -> Option<usize> {
    match kind {
        GraphKind::StarTree { k } => Some(k + 1),
        GraphKind::HardTree { k, copies, apex } => {
            let forest = copies * (k + 1);
            Some(if apex { forest.max(1 + copies * k) } else { forest })
        }
        GraphKind::AppendixAnchor { n } => Some(n),
        GraphKind::AppendixMulticopy { n, set_size } => Some(n * set_size),
        _ => None,
    }
}
