//! Locally preferred repairs.
//!
//! The construction keeps a shrinking set `s` of undecided tuples, starting
//! from the whole instance. Each step keeps some tuple `x` that no tuple in
//! `s` dominates and discards `x` with everything conflicting with it. For an
//! acyclic priority the process stops exactly when `s` is empty.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::graph::{Budget, ConflictGraph};
use crate::priority::Priority;
use crate::tupleset::{RepairSet, TupleSet};

/// All locally preferred repairs, in canonical order.
///
/// The tuples kept from a state depend only on the undecided set, so
/// completions are memoized per undecided set instead of per choice sequence.
pub fn enumerate_lrepairs(
    graph: &ConflictGraph,
    priority: &Priority,
    budget: &Budget,
) -> Result<Vec<RepairSet>> {
    priority.require_acyclic()?;
    budget.check_vertices(graph.len())?;
    let mut memo = HashMap::new();
    let all = completions(graph, priority, graph.all(), &mut memo, budget)?;
    let mut out: Vec<_> = all.iter().cloned().collect();
    out.sort();
    Ok(out)
}

type Memo = HashMap<TupleSet, Rc<Vec<TupleSet>>>;

fn completions(
    graph: &ConflictGraph,
    priority: &Priority,
    undecided: TupleSet,
    memo: &mut Memo,
    budget: &Budget,
) -> Result<Rc<Vec<TupleSet>>> {
    if let Some(hit) = memo.get(&undecided) {
        return Ok(Rc::clone(hit));
    }
    let choices = priority.winnow(&undecided);
    let result = if choices.is_empty() {
        vec![TupleSet::empty(graph.len())]
    } else {
        let mut found = HashSet::new();
        for x in choices.iter() {
            let mut rest = undecided.clone();
            rest.difference_with(&graph.closed_neighborhood(x));
            for c in completions(graph, priority, rest, memo, budget)?.iter() {
                let mut kept = c.clone();
                kept.insert(x);
                found.insert(kept);
            }
            budget.check_repairs(found.len())?;
        }
        found.into_iter().collect()
    };
    let result = Rc::new(result);
    memo.insert(undecided, Rc::clone(&result));
    Ok(result)
}

/// Membership test by replaying the construction with choices restricted to
/// the candidate. Any candidate tuple that is currently undominated is a
/// valid pick, since the state after a set of picks does not depend on their
/// order.
pub fn is_lrepair(graph: &ConflictGraph, priority: &Priority, cand: &RepairSet) -> Result<bool> {
    priority.require_acyclic()?;
    graph.require_repair(cand)?;
    let mut undecided = graph.all();
    let mut pending = cand.clone();
    loop {
        let choices = priority.winnow(&undecided);
        if choices.is_empty() {
            return Ok(pending.is_empty());
        }
        let Some(x) = choices.intersection(&pending).first() else {
            return Ok(false);
        };
        pending.remove(x);
        undecided.difference_with(&graph.closed_neighborhood(x));
    }
}

/// The unique preferred repair under a total acyclic priority, computed by
/// one deterministic run of the construction (smallest undominated position
/// first).
pub fn clean(graph: &ConflictGraph, priority: &Priority) -> Result<RepairSet> {
    if !priority.is_total(graph) {
        return Err(Error::PriorityNotTotal);
    }
    priority.require_acyclic()?;
    Ok(run_first_choice(graph, priority))
}

fn run_first_choice(graph: &ConflictGraph, priority: &Priority) -> RepairSet {
    let mut undecided = graph.all();
    let mut kept = TupleSet::empty(graph.len());
    while let Some(x) = priority.winnow(&undecided).first() {
        kept.insert(x);
        undecided.difference_with(&graph.closed_neighborhood(x));
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::enumerate_repairs;

    fn set(n: usize, p: &[usize]) -> TupleSet {
        TupleSet::from_positions(n, p.iter().copied())
    }

    #[test]
    fn emp_mgr_with_timestamp_priority() {
        let (inst, fds) = fixtures::emp_mgr();
        let g = ConflictGraph::build(&inst, &fds);
        let p = Priority::from_pairs(5, [(3, 4)]).unwrap();
        let l = enumerate_lrepairs(&g, &p, &Budget::default()).unwrap();
        // I3 = {Emp#0, Mgr#0, Mgr#2}, I4 = {Emp#1, Mgr#0, Mgr#2}
        assert_eq!(l, vec![set(5, &[0, 2, 4]), set(5, &[1, 2, 4])]);
        assert!(is_lrepair(&g, &p, &set(5, &[0, 2, 4])).unwrap());
        assert!(!is_lrepair(&g, &p, &set(5, &[0, 2, 3])).unwrap());
    }

    #[test]
    fn empty_priority_gives_every_repair() {
        let (inst, fds) = fixtures::emp_mgr();
        let g = ConflictGraph::build(&inst, &fds);
        let l = enumerate_lrepairs(&g, &Priority::empty(5), &Budget::default()).unwrap();
        assert_eq!(l, enumerate_repairs(&g, &Budget::default()).unwrap());
    }

    #[test]
    fn dominated_pair_is_never_kept() {
        let (inst, fds, p) = fixtures::local_global_gap();
        let g = ConflictGraph::build(&inst, &fds);
        let l = enumerate_lrepairs(&g, &p, &Budget::default()).unwrap();
        assert_eq!(l, vec![set(4, &[0]), set(4, &[1])]);
        assert!(!is_lrepair(&g, &p, &set(4, &[2, 3])).unwrap());
    }

    #[test]
    fn non_repairs_are_reported_separately() {
        let (inst, fds, p) = fixtures::local_global_gap();
        let g = ConflictGraph::build(&inst, &fds);
        assert_eq!(
            is_lrepair(&g, &p, &set(4, &[0, 1])).unwrap_err().kind(),
            "NotARepair"
        );
        assert_eq!(
            is_lrepair(&g, &p, &set(4, &[2])).unwrap_err().kind(),
            "NotARepair"
        );
    }

    #[test]
    fn cyclic_priority_is_rejected() {
        let (inst, fds, p) = fixtures::four_cycle();
        let g = ConflictGraph::build(&inst, &fds);
        assert_eq!(
            enumerate_lrepairs(&g, &p, &Budget::default()).unwrap_err().kind(),
            "CyclicPriority"
        );
        assert_eq!(
            is_lrepair(&g, &p, &set(4, &[0, 2])).unwrap_err().kind(),
            "CyclicPriority"
        );
    }

    #[test]
    fn clean_cases() {
        let (inst, fds) = fixtures::emp_mgr();
        let g = ConflictGraph::build(&inst, &fds);
        let total = Priority::from_pairs(5, [(1, 0), (3, 4)]).unwrap();
        assert_eq!(clean(&g, &total).unwrap(), set(5, &[0, 2, 4]));
        let partial = Priority::from_pairs(5, [(3, 4)]).unwrap();
        assert_eq!(clean(&g, &partial).unwrap_err().kind(), "PriorityNotTotal");

        let (inst, fds, p) = fixtures::cyclic_extension_yet_equal();
        let g = ConflictGraph::build(&inst, &fds);
        let total = p.extended([(3, 0), (2, 1)]).unwrap();
        assert_eq!(clean(&g, &total).unwrap(), set(4, &[0, 1]));

        let edgeless = ConflictGraph::from_edges(3, []);
        assert_eq!(clean(&edgeless, &Priority::empty(3)).unwrap(), TupleSet::full(3));

        let (inst, fds, cyc) = fixtures::four_cycle();
        let g = ConflictGraph::build(&inst, &fds);
        assert_eq!(clean(&g, &cyc).unwrap_err().kind(), "CyclicPriority");
    }
}
