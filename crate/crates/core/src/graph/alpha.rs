//! Exact independence-number oracles.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{is_independent, Graph, Side};
use crate::error::{Error, Result};

/// Largest graph the exhaustive oracle accepts.
pub const BRUTE_FORCE_CAP: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaMethod {
    BruteForce,
    BipartiteMatching,
    TreeDp,
    /// Closed form known for the generating family.
    Formula,
    LowerBoundOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaCertificate {
    pub alpha: usize,
    pub witness: Option<Vec<usize>>,
    pub method: AlphaMethod,
}

impl AlphaCertificate {
    /// Witness is independent in `g` and has cardinality `alpha`.
    pub fn is_consistent(&self, g: &Graph) -> bool {
        match &self.witness {
            Some(w) => w.len() == self.alpha && is_independent(g, w),
            None => true,
        }
    }
}

pub fn alpha_bruteforce(g: &Graph) -> Result<AlphaCertificate> {
    alpha_bruteforce_with_cap(g, BRUTE_FORCE_CAP)
}

/// Exhaustive search; the witness is the lexicographically smallest
/// maximum independent set.
pub fn alpha_bruteforce_with_cap(g: &Graph, cap: usize) -> Result<AlphaCertificate> {
    let n = g.num_vertices();
    let cap = cap.min(64);
    if n > cap {
        return Err(Error::CapExceeded(n, cap));
    }
    let adj: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | (1u64 << u)))
        .collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let alpha = mis_size(&adj, all) as usize;

    // Greedy reconstruction in index order yields the lexicographically
    // smallest optimum.
    let mut witness = Vec::with_capacity(alpha);
    let mut cand = all;
    let mut need = alpha as u32;
    for v in 0..n {
        if need == 0 {
            break;
        }
        let bit = 1u64 << v;
        if cand & bit == 0 {
            continue;
        }
        let rest = cand & !(adj[v] | bit);
        if 1 + mis_size(&adj, rest) == need {
            witness.push(v);
            need -= 1;
            cand = rest;
        } else {
            cand &= !bit;
        }
    }
    debug_assert_eq!(witness.len(), alpha);
    Ok(AlphaCertificate {
        alpha,
        witness: Some(witness),
        method: AlphaMethod::BruteForce,
    })
}

fn mis_size(adj: &[u64], cand: u64) -> u32 {
    let mut best = 0;
    mis_branch(adj, cand, 0, &mut best);
    best
}

/// Branch on a maximum-degree vertex; vertices of degree <= 1 in the
/// remaining candidate set are always safe to take.
fn mis_branch(adj: &[u64], mut cand: u64, mut size: u32, best: &mut u32) {
    loop {
        if size + cand.count_ones() <= *best {
            return;
        }
        if cand == 0 {
            *best = size;
            return;
        }
        let mut forced = None;
        let mut pivot = (0usize, 0u32);
        let mut bits = cand;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let d = (adj[v] & cand).count_ones();
            if d <= 1 {
                forced = Some(v);
                break;
            }
            if d > pivot.1 {
                pivot = (v, d);
            }
        }
        if let Some(v) = forced {
            cand &= !(adj[v] | (1u64 << v));
            size += 1;
            continue;
        }
        let v = pivot.0;
        mis_branch(adj, cand & !(adj[v] | (1u64 << v)), size + 1, best);
        cand &= !(1u64 << v);
    }
}

/// α of a side-labelled bipartite graph via maximum matching and König's
/// theorem; the witness is the complement of a minimum vertex cover.
pub fn alpha_bipartite(g: &Graph) -> Result<AlphaCertificate> {
    g.check_labeled_bipartition()?;
    let n = g.num_vertices();
    let left: Vec<usize> = g.vertices_on(Side::L);
    let mate = hopcroft_karp(g, &left);
    let matching = left.iter().filter(|&&u| mate[u] != NONE).count();

    // Alternating BFS from unmatched left vertices.
    let mut visited = vec![false; n];
    let mut queue: VecDeque<usize> = left.iter().copied().filter(|&u| mate[u] == NONE).collect();
    for &u in &queue {
        visited[u] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &r in g.neighbors(u) {
            let r = r as usize;
            if visited[r] {
                continue;
            }
            visited[r] = true;
            let m = mate[r];
            if m != NONE && !visited[m] {
                visited[m] = true;
                queue.push_back(m);
            }
        }
    }
    // Cover = (L \ Z) ∪ (R ∩ Z); independent set = (L ∩ Z) ∪ (R \ Z).
    let witness: Vec<usize> = (0..n)
        .filter(|&v| match g.side(v) {
            Some(Side::L) => visited[v],
            _ => !visited[v],
        })
        .collect();
    debug_assert_eq!(witness.len(), n - matching);
    Ok(AlphaCertificate {
        alpha: n - matching,
        witness: Some(witness),
        method: AlphaMethod::BipartiteMatching,
    })
}

const NONE: usize = usize::MAX;

/// Maximum matching between `left` and its neighbourhoods. Returns the
/// partner of every vertex (or `NONE`).
fn hopcroft_karp(g: &Graph, left: &[usize]) -> Vec<usize> {
    let n = g.num_vertices();
    let mut mate = vec![NONE; n];
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    let mut cursor = vec![0usize; n];
    let mut stack: Vec<usize> = Vec::new();

    loop {
        // Layer the left vertices by alternating distance from free ones.
        queue.clear();
        for &u in left {
            if mate[u] == NONE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = u32::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &r in g.neighbors(u) {
                let m = mate[r as usize];
                if m == NONE {
                    found = true;
                } else if dist[m] == u32::MAX {
                    dist[m] = dist[u] + 1;
                    queue.push_back(m);
                }
            }
        }
        if !found {
            break;
        }

        // Vertex-disjoint shortest augmenting paths, iterative DFS.
        for &u in left {
            cursor[u] = 0;
        }
        for &root in left {
            if mate[root] != NONE {
                continue;
            }
            stack.clear();
            stack.push(root);
            while let Some(&u) = stack.last() {
                let nbrs = g.neighbors(u);
                let mut advanced = false;
                while cursor[u] < nbrs.len() {
                    let r = nbrs[cursor[u]] as usize;
                    cursor[u] += 1;
                    let m = mate[r];
                    if m == NONE {
                        // Augment along the stack.
                        let mut r = r;
                        for &x in stack.iter().rev() {
                            let prev = mate[x];
                            mate[x] = r;
                            mate[r] = x;
                            r = prev;
                        }
                        stack.clear();
                        advanced = true;
                        break;
                    }
                    if dist[m] == dist[u] + 1 {
                        stack.push(m);
                        advanced = true;
                        break;
                    }
                }
                if !advanced {
                    dist[u] = u32::MAX;
                    stack.pop();
                }
            }
        }
    }
    mate
}

/// α of a forest by two-state dynamic programming on each component.
pub fn alpha_tree(g: &Graph) -> Result<AlphaCertificate> {
    if !g.is_forest() {
        return Err(Error::NotAForest);
    }
    let n = g.num_vertices();
    let mut parent = vec![NONE; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut stack = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        stack.push(root);
        while let Some(v) = stack.pop() {
            order.push(v);
            for &u in g.neighbors(v) {
                let u = u as usize;
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = v;
                    stack.push(u);
                }
            }
        }
    }

    // take[v]: best with v in the set; skip[v]: best with v out.
    let mut take = vec![1usize; n];
    let mut skip = vec![0usize; n];
    for &v in order.iter().rev() {
        let p = parent[v];
        if p != NONE {
            take[p] += skip[v];
            skip[p] += take[v].max(skip[v]);
        }
    }
    let mut chosen = vec![false; n];
    let mut alpha = 0;
    for &v in &order {
        let p = parent[v];
        if p == NONE {
            alpha += take[v].max(skip[v]);
        }
        chosen[v] = (p == NONE || !chosen[p]) && take[v] >= skip[v];
    }
    let witness: Vec<usize> = (0..n).filter(|&v| chosen[v]).collect();
    debug_assert_eq!(witness.len(), alpha);
    Ok(AlphaCertificate {
        alpha,
        witness: Some(witness),
        method: AlphaMethod::TreeDp,
    })
}
