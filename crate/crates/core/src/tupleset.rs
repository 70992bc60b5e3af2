use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::model::{Instance, TupleId};

/// A set of tuple positions of one instance.
///
/// Ordering is lexicographic on the ascending position lists, which is the
/// canonical output order for families of repairs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TupleSet(FixedBitSet);

/// A subset of an instance proposed or computed as a repair.
pub type RepairSet = TupleSet;

impl TupleSet {
    pub fn empty(universe: usize) -> Self {
        TupleSet(FixedBitSet::with_capacity(universe))
    }

    pub fn full(universe: usize) -> Self {
        let mut s = FixedBitSet::with_capacity(universe);
        s.insert_range(..);
        TupleSet(s)
    }

    pub fn from_positions(universe: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(universe);
        for p in positions {
            s.insert(p);
        }
        s
    }

    pub fn from_ids<'a>(inst: &Instance, ids: impl IntoIterator<Item = &'a TupleId>) -> crate::Result<Self> {
        let mut s = Self::empty(inst.len());
        for id in ids {
            s.insert(inst.position(id)?);
        }
        Ok(s)
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, pos: usize) {
        self.0.insert(pos);
    }

    pub fn remove(&mut self, pos: usize) {
        self.0.set(pos, false);
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.0.contains(pos)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.ones().next()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        !self.0.is_disjoint(&other.0)
    }

    pub fn union_with(&mut self, other: &Self) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &Self) {
        self.0.intersect_with(&other.0);
    }

    pub fn difference_with(&mut self, other: &Self) {
        self.0.difference_with(&other.0);
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn ids(&self, inst: &Instance) -> Vec<TupleId> {
        self.iter().map(|p| inst.id(p).clone()).collect()
    }
}

impl Ord for TupleSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for TupleSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for TupleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
