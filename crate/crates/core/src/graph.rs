//! Conflict graphs and repair enumeration.
//!
//! The repairs of an instance are exactly the maximal independent sets of its
//! conflict graph, so everything downstream (preferred repairs, query
//! answering) enumerates through [`for_each_repair`].

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::model::{FdSet, Instance};
use crate::priority::Priority;
use crate::tupleset::{RepairSet, TupleSet};

/// Caps on exponential enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_vertices: usize,
    pub max_repairs: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_vertices: 64,
            max_repairs: 20_000,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_vertices: usize::MAX,
            max_repairs: usize::MAX,
        }
    }

    pub(crate) fn check_vertices(&self, n: usize) -> Result<()> {
        if n > self.max_vertices {
            return Err(Error::InstanceTooLarge(format!(
                "{n} tuples exceed the vertex budget of {}",
                self.max_vertices
            )));
        }
        Ok(())
    }

    pub(crate) fn check_repairs(&self, count: usize) -> Result<()> {
        if count > self.max_repairs {
            return Err(Error::InstanceTooLarge(format!(
                "more than {} repairs",
                self.max_repairs
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    adj: Vec<TupleSet>,
    edges: Vec<(usize, usize)>,
}

impl ConflictGraph {
    pub fn build(inst: &Instance, fds: &FdSet) -> Self {
        let n = inst.len();
        let mut adj = vec![TupleSet::empty(n); n];
        let mut edges = Vec::new();
        let t = inst.tuples();
        for i in 0..n {
            for j in i + 1..n {
                if fds.conflict(&t[i], &t[j]) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                    edges.push((i, j));
                }
            }
        }
        ConflictGraph { adj, edges }
    }

    /// Graph over `n` vertices from an explicit edge list.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![TupleSet::empty(n); n];
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            assert!(a != b && a < n && b < n, "bad edge ({a}, {b})");
            adj[a].insert(b);
            adj[b].insert(a);
            set.insert((a.min(b), a.max(b)));
        }
        ConflictGraph {
            adj,
            edges: set.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Conflict edges as `(a, b)` with `a < b`, ascending.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn neighbors(&self, x: usize) -> &TupleSet {
        &self.adj[x]
    }

    /// `x` together with every tuple conflicting with it.
    pub fn closed_neighborhood(&self, x: usize) -> TupleSet {
        let mut v = self.adj[x].clone();
        v.insert(x);
        v
    }

    pub fn all(&self) -> TupleSet {
        TupleSet::full(self.len())
    }

    pub fn is_independent(&self, s: &TupleSet) -> bool {
        s.iter().all(|x| self.adj[x].is_disjoint(s))
    }

    /// Independent and no excluded tuple can be added.
    pub fn is_repair(&self, s: &TupleSet) -> bool {
        self.is_independent(s) && (0..self.len()).all(|x| s.contains(x) || self.adj[x].intersects(s))
    }

    /// `NotARepair` unless `s` is a repair of this graph.
    pub fn require_repair(&self, s: &TupleSet) -> Result<()> {
        if s.universe() != self.len() {
            return Err(Error::NotARepair(format!(
                "candidate ranges over {} tuples, instance has {}",
                s.universe(),
                self.len()
            )));
        }
        if !self.is_independent(s) {
            return Err(Error::NotARepair("candidate contains conflicting tuples".into()));
        }
        if let Some(x) = (0..self.len()).find(|&x| !s.contains(x) && !self.adj[x].intersects(s)) {
            return Err(Error::NotARepair(format!(
                "candidate is not maximal: tuple at position {x} can be added"
            )));
        }
        Ok(())
    }

    /// DOT rendering; prioritized edges point from the dominated tuple to
    /// the dominating one.
    pub fn to_dot(&self, inst: &Instance, priority: Option<&Priority>) -> String {
        let mut out = String::from("graph conflicts {\n");
        for p in 0..self.len() {
            let _ = writeln!(out, "  \"{}\" [label=\"{}\"];", inst.id(p), inst.tuple(p));
        }
        for &(a, b) in &self.edges {
            match priority {
                Some(pr) if pr.dominated_by(a, b) => {
                    let _ = writeln!(out, "  \"{}\" -- \"{}\" [dir=forward];", inst.id(a), inst.id(b));
                }
                Some(pr) if pr.dominated_by(b, a) => {
                    let _ = writeln!(out, "  \"{}\" -- \"{}\" [dir=forward];", inst.id(b), inst.id(a));
                }
                _ => {
                    let _ = writeln!(out, "  \"{}\" -- \"{}\";", inst.id(a), inst.id(b));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Visits every repair (maximal independent set) of `graph`.
///
/// Branches on a vertex of highest remaining degree: either it joins the
/// set (and its neighbours leave the candidates) or it is excluded, in which
/// case some neighbour must eventually be chosen.
pub fn for_each_repair<F>(graph: &ConflictGraph, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&RepairSet) -> ControlFlow<()>,
{
    let n = graph.len();
    mis_rec(
        graph,
        TupleSet::empty(n),
        graph.all(),
        TupleSet::empty(n),
        &mut visit,
    )
}

fn mis_rec<F>(
    graph: &ConflictGraph,
    chosen: TupleSet,
    candidates: TupleSet,
    excluded: TupleSet,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&RepairSet) -> ControlFlow<()>,
{
    // An excluded vertex with no neighbour left to pick can never be covered.
    for x in excluded.iter() {
        let adj = graph.neighbors(x);
        if !adj.intersects(&chosen) && !adj.intersects(&candidates) {
            return ControlFlow::Continue(());
        }
    }
    let Some(pivot) = candidates
        .iter()
        .max_by_key(|&v| (graph.neighbors(v).intersection(&candidates).len(), usize::MAX - v))
    else {
        return visit(&chosen);
    };

    let mut with = chosen.clone();
    with.insert(pivot);
    let mut cand_with = candidates.clone();
    cand_with.difference_with(&graph.closed_neighborhood(pivot));
    let excl_with = excluded.difference(graph.neighbors(pivot));
    mis_rec(graph, with, cand_with, excl_with, visit)?;

    let mut cand_without = candidates;
    cand_without.remove(pivot);
    let mut excl_without = excluded;
    excl_without.insert(pivot);
    mis_rec(graph, chosen, cand_without, excl_without, visit)
}

/// All repairs in canonical order.
pub fn enumerate_repairs(graph: &ConflictGraph, budget: &Budget) -> Result<Vec<RepairSet>> {
    budget.check_vertices(graph.len())?;
    let mut out = BTreeSet::new();
    let mut over = false;
    let _ = for_each_repair(graph, |r| {
        out.insert(r.clone());
        if out.len() > budget.max_repairs {
            over = true;
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    if over {
        budget.check_repairs(out.len())?;
    }
    Ok(out.into_iter().collect())
}

/// Convenience wrapper building the conflict graph first.
pub fn repairs_of(inst: &Instance, fds: &FdSet, budget: &Budget) -> Result<Vec<RepairSet>> {
    enumerate_repairs(&ConflictGraph::build(inst, fds), budget)
}
