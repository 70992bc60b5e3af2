//! Globally preferred repairs.
//!
//! `r1 ≪ r2` holds when every tuple of `r1` missing from `r2` is dominated by
//! some tuple of `r2` missing from `r1`. Globally preferred repairs are the
//! repairs with no distinct repair above them. `≪` need not be transitive,
//! so maximality is decided pairwise.

use std::ops::ControlFlow;

use crate::error::Result;
use crate::graph::{enumerate_repairs, for_each_repair, Budget, ConflictGraph};
use crate::priority::Priority;
use crate::tupleset::RepairSet;

/// `r1 ≪ r2` without checking that the sets are repairs.
pub fn preferred_over(priority: &Priority, r1: &RepairSet, r2: &RepairSet) -> bool {
    let gained = r2.difference(r1);
    r1.difference(r2)
        .iter()
        .all(|x| priority.dominators(x).intersects(&gained))
}

/// `r1 ≪ r2` for two repairs of the graph.
pub fn prefers(graph: &ConflictGraph, priority: &Priority, r1: &RepairSet, r2: &RepairSet) -> Result<bool> {
    graph.require_repair(r1)?;
    graph.require_repair(r2)?;
    Ok(preferred_over(priority, r1, r2))
}

/// The `≪`-maximal repairs among `repairs`.
pub fn maximal_repairs(priority: &Priority, repairs: &[RepairSet]) -> Vec<RepairSet> {
    repairs
        .iter()
        .filter(|r| {
            !repairs
                .iter()
                .any(|other| other != *r && preferred_over(priority, r, other))
        })
        .cloned()
        .collect()
}

/// All globally preferred repairs, in canonical order.
pub fn enumerate_grepairs(
    graph: &ConflictGraph,
    priority: &Priority,
    budget: &Budget,
) -> Result<Vec<RepairSet>> {
    priority.require_acyclic()?;
    let repairs = enumerate_repairs(graph, budget)?;
    Ok(maximal_repairs(priority, &repairs))
}

/// Whether `cand` is a globally preferred repair. Searches the repairs for
/// one strictly above `cand`, stopping at the first hit.
pub fn is_grepair(
    graph: &ConflictGraph,
    priority: &Priority,
    cand: &RepairSet,
    budget: &Budget,
) -> Result<bool> {
    priority.require_acyclic()?;
    graph.require_repair(cand)?;
    budget.check_vertices(graph.len())?;
    let mut seen = 0usize;
    let mut beaten = false;
    let _ = for_each_repair(graph, |r| {
        seen += 1;
        if seen > budget.max_repairs {
            return ControlFlow::Break(());
        }
        if r != cand && preferred_over(priority, cand, r) {
            beaten = true;
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    if !beaten {
        budget.check_repairs(seen)?;
    }
    Ok(!beaten)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::tupleset::TupleSet;

    fn set(n: usize, p: &[usize]) -> TupleSet {
        TupleSet::from_positions(n, p.iter().copied())
    }

    #[test]
    fn cyclic_priority_makes_repairs_mutually_preferred() {
        let (inst, fds, p) = fixtures::four_cycle();
        let g = ConflictGraph::build(&inst, &fds);
        let (r1, r2) = (set(4, &[0, 2]), set(4, &[1, 3]));
        assert!(prefers(&g, &p, &r1, &r2).unwrap());
        assert!(prefers(&g, &p, &r2, &r1).unwrap());
        assert_eq!(
            enumerate_grepairs(&g, &p, &Budget::default()).unwrap_err().kind(),
            "CyclicPriority"
        );
    }

    #[test]
    fn reflexive() {
        let (inst, fds, p) = fixtures::local_global_gap();
        let g = ConflictGraph::build(&inst, &fds);
        for r in enumerate_repairs(&g, &Budget::default()).unwrap() {
            assert!(prefers(&g, &p, &r, &r).unwrap());
        }
    }

    #[test]
    fn not_transitive_without_transitive_priority() {
        let (inst, fds, p) = fixtures::non_transitive_chain();
        let g = ConflictGraph::build(&inst, &fds);
        let (a, b, c) = (set(3, &[0]), set(3, &[1]), set(3, &[2]));
        assert!(prefers(&g, &p, &a, &b).unwrap());
        assert!(prefers(&g, &p, &b, &c).unwrap());
        assert!(!prefers(&g, &p, &a, &c).unwrap());
    }

    #[test]
    fn every_repair_is_global_when_local_misses_one() {
        let (inst, fds, p) = fixtures::local_global_gap();
        let g = ConflictGraph::build(&inst, &fds);
        let gr = enumerate_grepairs(&g, &p, &Budget::default()).unwrap();
        assert_eq!(gr, vec![set(4, &[0]), set(4, &[1]), set(4, &[2, 3])]);
        assert!(is_grepair(&g, &p, &set(4, &[2, 3]), &Budget::default()).unwrap());
    }

    #[test]
    fn single_global_repair_despite_cyclic_extension() {
        let (inst, fds, p) = fixtures::cyclic_extension_yet_equal();
        let g = ConflictGraph::build(&inst, &fds);
        let gr = enumerate_grepairs(&g, &p, &Budget::default()).unwrap();
        assert_eq!(gr, vec![set(4, &[0, 1])]);
        assert!(!is_grepair(&g, &p, &set(4, &[2, 3]), &Budget::default()).unwrap());
    }

    #[test]
    fn empty_priority_keeps_all() {
        let (inst, fds) = fixtures::emp_mgr();
        let g = ConflictGraph::build(&inst, &fds);
        let gr = enumerate_grepairs(&g, &Priority::empty(5), &Budget::default()).unwrap();
        assert_eq!(gr.len(), 4);
        let consistent = ConflictGraph::from_edges(3, []);
        assert!(is_grepair(
            &consistent,
            &Priority::empty(3),
            &TupleSet::full(3),
            &Budget::default()
        )
        .unwrap());
    }

    #[test]
    fn non_repair_candidates() {
        let (inst, fds, p) = fixtures::local_global_gap();
        let g = ConflictGraph::build(&inst, &fds);
        let err = is_grepair(&g, &p, &set(4, &[2]), &Budget::default()).unwrap_err();
        assert_eq!(err.kind(), "NotARepair");
        let err = prefers(&g, &p, &set(4, &[0, 1]), &set(4, &[0])).unwrap_err();
        assert_eq!(err.kind(), "NotARepair");
    }
}
