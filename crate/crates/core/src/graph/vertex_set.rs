use std::fmt;

use fixedbitset::FixedBitSet;

use super::Vertex;
use crate::error::{invalid, Result};

/// Dense set of vertices drawn from the universe `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        Self {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        Self { bits }
    }

    /// Builds a set, rejecting members outside the universe.
    pub fn from_vertices(universe: usize, vertices: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut set = Self::new(universe);
        for v in vertices {
            if v >= universe {
                return Err(invalid(format!("vertex {v} outside 0..{universe}")));
            }
            set.bits.insert(v);
        }
        Ok(set)
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        self.bits.contains(v)
    }

    /// Inserts `v`; returns whether it was absent.
    ///
    /// Panics if `v` is outside the universe.
    pub fn insert(&mut self, v: Vertex) -> bool {
        assert!(v < self.universe(), "vertex {v} outside 0..{}", self.universe());
        !self.bits.put(v)
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        let was = self.contains(v);
        self.bits.set(v, false);
        was
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<Vertex> {
        self.bits.minimum()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn intersection_count(&self, other: &VertexSet) -> usize {
        self.bits.intersection_count(&other.bits)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    /// Complement within the universe.
    pub fn complement(&self) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        Self { bits }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_membership() {
        let mut s = VertexSet::new(5);
        assert!(s.insert(3));
        assert!(!s.insert(3));
        assert!(s.insert(0));
        assert_eq!(s.to_vec(), vec![0, 3]);
        assert_eq!(s.len(), 2);
        assert_eq!(s.complement().to_vec(), vec![1, 2, 4]);
        assert!(s.remove(3));
        assert!(!s.remove(3));
        assert_eq!(s.min(), Some(0));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(VertexSet::from_vertices(3, [0, 3]).is_err());
    }

    #[test]
    #[should_panic]
    fn insert_out_of_range_panics() {
        VertexSet::new(2).insert(2);
    }
}
