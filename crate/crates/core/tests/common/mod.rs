//! Random instance generation and brute-force oracles shared by the
//! integration tests. The oracles work from the FDs and priority pairs
//! directly and do not use the library's graph, winnow or repair code.

#![allow(dead_code)]

use std::collections::HashSet;

use prefrep::graph::ConflictGraph;
use prefrep::model::{AttrType, Fd, FdSet, Instance, RelationSchema, Schema, Value};
use prefrep::priority::Priority;
use prefrep::reductions::{CnfFormula, Qbf2Formula};
use prefrep::tupleset::TupleSet;
use rand::seq::SliceRandom;
use rand::Rng;

pub const ATTRS: [&str; 4] = ["A", "B", "C", "D"];

/// A random instance with its conflict graph and an acyclic priority.
pub struct Case {
    pub inst: Instance,
    pub fds: FdSet,
    pub graph: ConflictGraph,
    pub priority: Priority,
}

/// Up to `max_tuples` distinct rows of `R(A,B,C,D)` over a small value
/// range, one to three random FDs, and a priority orienting a random share
/// of the conflicts along a random ranking (hence acyclic).
pub fn random_case(rng: &mut impl Rng, max_tuples: usize) -> Case {
    let range: i64 = rng.gen_range(2..=3);
    let n = rng.gen_range(0..=max_tuples).min(range.pow(4) as usize);
    case_with(rng, n, range)
}

/// Exactly `n` distinct rows over values `0..range` (`range^4 >= n`), with
/// FDs and priority drawn as in [`random_case`].
pub fn case_with(rng: &mut impl Rng, n: usize, range: i64) -> Case {
    assert!(range.pow(4) as usize >= n);
    let schema = Schema::new([RelationSchema::new(
        "R",
        ATTRS.iter().map(|&a| (a, AttrType::Nat)),
    )])
    .unwrap();
    let mut rows = HashSet::new();
    let mut b = Instance::builder(schema.clone());
    while rows.len() < n {
        let row: Vec<i64> = (0..4).map(|_| rng.gen_range(0..range)).collect();
        if rows.insert(row.clone()) {
            b.push("R", row.into_iter().map(Value::Nat).collect()).unwrap();
        }
    }
    let inst = b.build().unwrap();

    let fd_count = rng.gen_range(1..=3);
    let fds = FdSet::new((0..fd_count).map(|_| {
        let rhs = rng.gen_range(0..4);
        let mut lhs: Vec<&str> = (0..4)
            .filter(|&i| i != rhs && rng.gen_bool(0.4))
            .map(|i| ATTRS[i])
            .collect();
        if lhs.is_empty() {
            lhs.push(ATTRS[(rhs + 1) % 4]);
        }
        Fd::new(&schema, "R", &lhs, &[ATTRS[rhs]]).unwrap()
    }));
    let graph = ConflictGraph::build(&inst, &fds);
    let priority = random_acyclic_priority(rng, &graph, None);
    Case {
        inst,
        fds,
        graph,
        priority,
    }
}

/// Orients each conflict edge with probability `share` (random if `None`)
/// from the lower to the higher entry of a random ranking.
pub fn random_acyclic_priority(rng: &mut impl Rng, graph: &ConflictGraph, share: Option<f64>) -> Priority {
    let mut rank: Vec<usize> = (0..graph.len()).collect();
    rank.shuffle(rng);
    let share = share.unwrap_or_else(|| [0.0, 0.3, 0.6, 1.0][rng.gen_range(0..4)]);
    let pairs = graph
        .edges()
        .iter()
        .filter(|_| rng.gen_bool(share))
        .map(|&(a, b)| if rank[a] < rank[b] { (a, b) } else { (b, a) });
    Priority::from_pairs(graph.len(), pairs.collect::<Vec<_>>()).unwrap()
}

/// A total acyclic priority.
pub fn random_total_priority(rng: &mut impl Rng, graph: &ConflictGraph) -> Priority {
    random_acyclic_priority(rng, graph, Some(1.0))
}

pub fn positions(set: &TupleSet) -> Vec<usize> {
    set.iter().collect()
}

/// Pairwise conflict test straight from the FDs.
pub fn conflict(inst: &Instance, fds: &FdSet, a: usize, b: usize) -> bool {
    let (ta, tb) = (inst.tuple(a), inst.tuple(b));
    fds.iter().any(|fd| {
        ta.rel == fd.rel
            && tb.rel == fd.rel
            && fd.lhs.iter().all(|&i| ta.values[i] == tb.values[i])
            && fd.rhs.iter().any(|&i| ta.values[i] != tb.values[i])
    })
}

fn consistent(inst: &Instance, fds: &FdSet, members: &[usize]) -> bool {
    members
        .iter()
        .enumerate()
        .all(|(i, &a)| members[i + 1..].iter().all(|&b| !conflict(inst, fds, a, b)))
}

/// Every maximal consistent subset, by filtering all `2^n` subsets.
pub fn brute_repairs(inst: &Instance, fds: &FdSet) -> Vec<TupleSet> {
    let n = inst.len();
    assert!(n <= 20, "brute force is exponential");
    let mut out = Vec::new();
    for mask in 0u32..1 << n {
        let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if !consistent(inst, fds, &members) {
            continue;
        }
        let maximal = (0..n)
            .filter(|&i| mask >> i & 1 == 0)
            .all(|i| members.iter().any(|&m| conflict(inst, fds, i, m)));
        if maximal {
            out.push(TupleSet::from_positions(n, members));
        }
    }
    out.sort();
    out
}

fn dominated(pairs: &HashSet<(usize, usize)>, x: usize, s: &[usize]) -> bool {
    s.iter().any(|&y| pairs.contains(&(x, y)))
}

fn pair_set(p: &Priority) -> HashSet<(usize, usize)> {
    p.pairs().collect()
}

/// Whether some ordering `x_1..x_k` of `cand` has every `x_{i+1}`
/// undominated among the tuples not yet excluded by `x_1..x_i`, with no
/// undominated tuple left at the end. Tries all orderings.
pub fn has_valid_ordering(inst: &Instance, fds: &FdSet, p: &Priority, cand: &TupleSet) -> bool {
    let pairs = pair_set(p);
    let n = inst.len();
    let cand: Vec<usize> = cand.iter().collect();
    fn go(
        inst: &Instance,
        fds: &FdSet,
        pairs: &HashSet<(usize, usize)>,
        left: &mut Vec<usize>,
        remaining: Vec<usize>,
    ) -> bool {
        let winnow =
            |s: &[usize]| -> Vec<usize> { s.iter().copied().filter(|&x| !dominated(pairs, x, s)).collect() };
        if left.is_empty() {
            return winnow(&remaining).is_empty();
        }
        let undominated = winnow(&remaining);
        for i in 0..left.len() {
            let x = left[i];
            if !undominated.contains(&x) {
                continue;
            }
            left.swap_remove(i);
            let rest: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&y| y != x && !conflict(inst, fds, x, y))
                .collect();
            let ok = go(inst, fds, pairs, left, rest);
            left.push(x);
            let last = left.len() - 1;
            left.swap(i, last);
            if ok {
                return true;
            }
        }
        false
    }
    let mut left = cand;
    go(inst, fds, &pairs, &mut left, (0..n).collect())
}

/// `r1 ≪ r2` from the definition.
pub fn brute_preferred(p: &Priority, r1: &TupleSet, r2: &TupleSet) -> bool {
    let pairs = pair_set(p);
    let gained: Vec<usize> = r2.iter().filter(|&y| !r1.contains(y)).collect();
    r1.iter()
        .filter(|&x| !r2.contains(x))
        .all(|x| gained.iter().any(|&y| pairs.contains(&(x, y))))
}

/// Repairs with no distinct repair preferred over them.
pub fn brute_grepairs(inst: &Instance, fds: &FdSet, p: &Priority) -> Vec<TupleSet> {
    let reps = brute_repairs(inst, fds);
    reps.iter()
        .filter(|r| !reps.iter().any(|o| o != *r && brute_preferred(p, r, o)))
        .cloned()
        .collect()
}

fn has_cycle(n: usize, arcs: &[(usize, usize)]) -> bool {
    // Kahn's algorithm: a cycle remains iff some vertex is never freed.
    let mut indeg = vec![0usize; n];
    let mut out = vec![Vec::new(); n];
    for &(a, b) in arcs {
        out[a].push(b);
        indeg[b] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut freed = 0;
    while let Some(v) = ready.pop() {
        freed += 1;
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.push(w);
            }
        }
    }
    freed < n
}

/// Whether every total extension of `p` over the conflicts is acyclic.
/// A cyclic partial extension extends to a cyclic total one, so total
/// extensions suffice.
pub fn brute_only_acyclic_extensions(inst: &Instance, fds: &FdSet, p: &Priority) -> bool {
    let n = inst.len();
    let pairs = pair_set(p);
    let free: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| conflict(inst, fds, a, b))
        .filter(|&(a, b)| !pairs.contains(&(a, b)) && !pairs.contains(&(b, a)))
        .collect();
    assert!(free.len() <= 16, "brute force is exponential");
    let base: Vec<_> = pairs.into_iter().collect();
    (0u32..1 << free.len()).all(|mask| {
        let mut arcs = base.clone();
        for (i, &(a, b)) in free.iter().enumerate() {
            arcs.push(if mask >> i & 1 == 1 { (a, b) } else { (b, a) });
        }
        !has_cycle(n, &arcs)
    })
}

/// Random 3-CNF with `1..=max_vars` variables and `1..=max_clauses`
/// clauses; literals are drawn independently, so repeats occur.
pub fn random_cnf(rng: &mut impl Rng, max_vars: usize, max_clauses: usize) -> CnfFormula {
    let n = rng.gen_range(1..=max_vars);
    let k = rng.gen_range(1..=max_clauses);
    let clauses = (0..k).map(|_| random_clause(rng, n)).collect();
    CnfFormula::new(n, clauses).unwrap()
}

fn random_clause(rng: &mut impl Rng, n: usize) -> [i32; 3] {
    [(); 3].map(|_| {
        let v = rng.gen_range(1..=n as i32);
        if rng.gen_bool(0.5) {
            v
        } else {
            -v
        }
    })
}

/// Random `∀∃` QBF with at least one variable in each block and
/// `n + m <= max_vars`.
pub fn random_qbf(rng: &mut impl Rng, max_vars: usize, max_clauses: usize) -> Qbf2Formula {
    let total = rng.gen_range(2..=max_vars);
    let n = rng.gen_range(1..total);
    let k = rng.gen_range(1..=max_clauses);
    let clauses = (0..k).map(|_| random_clause(rng, total)).collect();
    Qbf2Formula::new(n, total - n, CnfFormula::new(total, clauses).unwrap()).unwrap()
}
