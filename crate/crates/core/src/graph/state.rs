use fixedbitset::FixedBitSet;

use super::{first_covered_edge, Graph};
use crate::error::{Error, Result};

/// Occupancy of one trial: the current independent set `I_t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependentSetState {
    occupied: FixedBitSet,
    size: usize,
    max_size_seen: usize,
    step: u64,
}

impl IndependentSetState {
    pub fn empty(num_vertices: usize) -> Self {
        IndependentSetState {
            occupied: FixedBitSet::with_capacity(num_vertices),
            size: 0,
            max_size_seen: 0,
            step: 0,
        }
    }

    pub fn from_set(g: &Graph, set: &[usize]) -> Result<Self> {
        if let Some((u, v)) = first_covered_edge(g, set) {
            return Err(Error::NotIndependent(u, v));
        }
        let occupied = g.bitset_of(set);
        let size = occupied.count_ones(..);
        Ok(IndependentSetState {
            occupied,
            size,
            max_size_seen: size,
            step: 0,
        })
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.occupied.contains(v)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn max_size_seen(&self) -> usize {
        self.max_size_seen
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn occupied(&self) -> &FixedBitSet {
        &self.occupied
    }

    pub fn members(&self) -> Vec<usize> {
        self.occupied.ones().collect()
    }

    /// True iff no neighbour of `v` is occupied.
    #[inline]
    pub fn is_free(&self, g: &Graph, v: usize) -> bool {
        g.neighbors(v).iter().all(|&u| !self.occupied.contains(u as usize))
    }

    #[inline]
    pub(crate) fn insert(&mut self, v: usize) {
        debug_assert!(!self.occupied.contains(v));
        self.occupied.insert(v);
        self.size += 1;
        if self.size > self.max_size_seen {
            self.max_size_seen = self.size;
        }
    }

    #[inline]
    pub(crate) fn remove(&mut self, v: usize) {
        debug_assert!(self.occupied.contains(v));
        self.occupied.set(v, false);
        self.size -= 1;
    }

    #[inline]
    pub(crate) fn tick(&mut self) {
        self.step += 1;
    }

    /// Full check of the defining invariants against `g`.
    pub fn is_valid(&self, g: &Graph) -> bool {
        self.occupied.len() == g.num_vertices()
            && self.size == self.occupied.count_ones(..)
            && self.max_size_seen >= self.size
            && self
                .occupied
                .ones()
                .all(|v| g.neighbors(v).iter().all(|&u| !self.occupied.contains(u as usize)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    #[test]
    fn from_set_rejects_dependent_sets() {
        let g = build_graph(3, &[(0, 1), (1, 2)], None).unwrap();
        assert!(matches!(
            IndependentSetState::from_set(&g, &[0, 1]),
            Err(Error::NotIndependent(0, 1))
        ));
        let s = IndependentSetState::from_set(&g, &[0, 2]).unwrap();
        assert_eq!(s.size(), 2);
        assert!(s.is_valid(&g));
    }

    #[test]
    fn max_size_tracks_history() {
        let g = build_graph(3, &[], None).unwrap();
        let mut s = IndependentSetState::empty(3);
        s.insert(0);
        s.insert(2);
        s.remove(0);
        assert_eq!(s.size(), 1);
        assert_eq!(s.max_size_seen(), 2);
        assert_eq!(s.members(), vec![2]);
        assert!(s.is_valid(&g));
    }
}
