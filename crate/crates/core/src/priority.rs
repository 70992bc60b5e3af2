//! Priorities: asymmetric orientations of conflict edges.
//!
//! A pair `(x, y)` means `x ≺ y`: `y` dominates `x`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::model::{Instance, TupleId};
use crate::tupleset::TupleSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Priority {
    pairs: BTreeSet<(usize, usize)>,
    /// `dominators[x]` = every `y` with `x ≺ y`.
    dominators: Vec<TupleSet>,
}

impl Priority {
    pub fn empty(n: usize) -> Self {
        Priority {
            pairs: BTreeSet::new(),
            dominators: vec![TupleSet::empty(n); n],
        }
    }

    /// Builds a priority over `n` tuples, checking asymmetry only.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut p = Priority::empty(n);
        for (x, y) in pairs {
            p.insert(x, y)
                .map_err(|_| Error::AsymmetryViolation(format!("#{x}"), format!("#{y}")))?;
        }
        Ok(p)
    }

    fn insert(&mut self, x: usize, y: usize) -> std::result::Result<(), ()> {
        if x == y || self.pairs.contains(&(y, x)) {
            return Err(());
        }
        self.pairs.insert((x, y));
        self.dominators[x].insert(y);
        Ok(())
    }

    /// Number of tuples the priority ranges over.
    pub fn universe(&self) -> usize {
        self.dominators.len()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    /// `x ≺ y`.
    pub fn dominated_by(&self, x: usize, y: usize) -> bool {
        self.dominators[x].contains(y)
    }

    pub fn dominators(&self, x: usize) -> &TupleSet {
        &self.dominators[x]
    }

    /// Whether the pair `{a, b}` is oriented either way.
    pub fn orients(&self, a: usize, b: usize) -> bool {
        self.dominated_by(a, b) || self.dominated_by(b, a)
    }

    /// A copy with extra pairs; fails if the result is not asymmetric.
    pub fn extended(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut p = self.clone();
        for (x, y) in pairs {
            p.insert(x, y)
                .map_err(|_| Error::AsymmetryViolation(format!("#{x}"), format!("#{y}")))?;
        }
        Ok(p)
    }

    pub fn to_ids(&self, inst: &Instance) -> Vec<(TupleId, TupleId)> {
        self.pairs()
            .map(|(x, y)| (inst.id(x).clone(), inst.id(y).clone()))
            .collect()
    }

    /// Winnow: the elements of `s` not dominated by another element of `s`.
    pub fn winnow(&self, s: &TupleSet) -> TupleSet {
        let mut out = s.clone();
        for x in s.iter() {
            if self.dominators[x].intersects(s) {
                out.remove(x);
            }
        }
        out
    }

    pub fn is_acyclic(&self) -> bool {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Open,
            Done,
        }
        let n = self.universe();
        let mut mark = vec![Mark::New; n];
        for root in 0..n {
            if mark[root] != Mark::New {
                continue;
            }
            let mut stack = vec![(root, self.dominators[root].iter().collect::<Vec<_>>())];
            mark[root] = Mark::Open;
            while let Some((node, next)) = stack.last_mut() {
                match next.pop() {
                    Some(y) => match mark[y] {
                        Mark::Open => return false,
                        Mark::New => {
                            mark[y] = Mark::Open;
                            let succ = self.dominators[y].iter().collect();
                            stack.push((y, succ));
                        }
                        Mark::Done => {}
                    },
                    None => {
                        mark[*node] = Mark::Done;
                        stack.pop();
                    }
                }
            }
        }
        true
    }

    pub(crate) fn require_acyclic(&self) -> Result<()> {
        if self.is_acyclic() {
            Ok(())
        } else {
            Err(Error::CyclicPriority)
        }
    }

    /// Every conflict edge of `graph` is oriented.
    pub fn is_total(&self, graph: &ConflictGraph) -> bool {
        graph.edges().iter().all(|&(a, b)| self.orients(a, b))
    }

    /// `self` is an extension of `other` (superset of its pairs).
    pub fn extends(&self, other: &Priority) -> bool {
        other.pairs.is_subset(&self.pairs)
    }

    /// Conflict edges left unoriented, ascending.
    pub fn unoriented_edges(&self, graph: &ConflictGraph) -> Vec<(usize, usize)> {
        graph
            .edges()
            .iter()
            .copied()
            .filter(|&(a, b)| !self.orients(a, b))
            .collect()
    }

    /// Whether every extension of this (acyclic) priority is acyclic.
    ///
    /// Orient each prioritized edge forward and give every unoriented
    /// conflict edge both directions. An extension can close a cycle iff this
    /// digraph has a simple cycle of length at least three, and the only
    /// 2-cycles are the unoriented edges themselves. So a strongly connected
    /// component is harmless exactly when it contains no prioritized arc and
    /// its unoriented edges form a tree.
    pub fn has_only_acyclic_extensions(&self, graph: &ConflictGraph) -> Result<bool> {
        self.require_acyclic()?;
        let n = graph.len();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (x, y) in self.pairs() {
            succ[x].push(y);
        }
        let loose = self.unoriented_edges(graph);
        for &(a, b) in &loose {
            succ[a].push(b);
            succ[b].push(a);
        }
        let comp = strongly_connected_components(&succ);
        if self.pairs().any(|(x, y)| comp[x] == comp[y]) {
            return Ok(false);
        }
        let mut size = vec![0usize; n];
        let mut inner_edges = vec![0usize; n];
        for &c in &comp {
            size[c] += 1;
        }
        for &(a, b) in &loose {
            if comp[a] == comp[b] {
                inner_edges[comp[a]] += 1;
            }
        }
        Ok((0..n).all(|c| size[c] == 0 || inner_edges[c] < size[c]))
    }
}

/// Tarjan's algorithm; returns a component index per vertex.
fn strongly_connected_components(succ: &[Vec<usize>]) -> Vec<usize> {
    struct State<'a> {
        succ: &'a [Vec<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        comp: Vec<usize>,
        ncomp: usize,
    }

    fn visit(st: &mut State<'_>, v: usize) {
        st.index[v] = Some(st.next);
        st.low[v] = st.next;
        st.next += 1;
        st.stack.push(v);
        st.on_stack[v] = true;
        for i in 0..st.succ[v].len() {
            let w = st.succ[v][i];
            match st.index[w] {
                None => {
                    visit(st, w);
                    st.low[v] = st.low[v].min(st.low[w]);
                }
                Some(iw) if st.on_stack[w] => st.low[v] = st.low[v].min(iw),
                Some(_) => {}
            }
        }
        if Some(st.low[v]) == st.index[v] {
            loop {
                let w = st.stack.pop().expect("tarjan stack");
                st.on_stack[w] = false;
                st.comp[w] = st.ncomp;
                if w == v {
                    break;
                }
            }
            st.ncomp += 1;
        }
    }

    let n = succ.len();
    let mut st = State {
        succ,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        comp: vec![0; n],
        ncomp: 0,
    };
    for v in 0..n {
        if st.index[v].is_none() {
            visit(&mut st, v);
        }
    }
    st.comp
}

/// Drops every pair that is not a conflict edge.
pub fn restrict_to_conflicts(
    pairs: impl IntoIterator<Item = (usize, usize)>,
    graph: &ConflictGraph,
) -> Vec<(usize, usize)> {
    pairs
        .into_iter()
        .filter(|&(x, y)| x != y && graph.adjacent(x, y))
        .collect()
}

/// Checks user-supplied pairs against the instance. In strict mode a
/// non-conflicting pair is an error; otherwise such pairs are dropped.
pub fn validate_priority(
    pairs: &[(TupleId, TupleId)],
    inst: &Instance,
    graph: &ConflictGraph,
    strict: bool,
) -> Result<Priority> {
    let mut resolved = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        let (x, y) = (inst.position(a)?, inst.position(b)?);
        if x == y || !graph.adjacent(x, y) {
            if strict {
                return Err(Error::NonConflictingPair(a.to_string(), b.to_string()));
            }
            continue;
        }
        resolved.push((x, y));
    }
    let mut p = Priority::empty(inst.len());
    for (x, y) in resolved {
        if p.insert(x, y).is_err() {
            return Err(Error::AsymmetryViolation(
                inst.id(x).to_string(),
                inst.id(y).to_string(),
            ));
        }
    }
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prefer {
    Max,
    Min,
}

/// `prefer Rel max Attr`: inside `Rel`, every conflict is resolved toward
/// the tuple with the larger (or smaller) `Attr`; ties stay unoriented.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorityRule {
    pub rel: String,
    pub attr: String,
    pub prefer: Prefer,
}

impl PriorityRule {
    pub fn pairs(&self, inst: &Instance, graph: &ConflictGraph) -> Result<Vec<(usize, usize)>> {
        let col = inst
            .schema()
            .relation(&self.rel)?
            .attr_index(&self.attr)
            .ok_or_else(|| Error::UnknownAttribute {
                rel: self.rel.clone(),
                attr: self.attr.clone(),
            })?;
        let mut out = Vec::new();
        for &(a, b) in graph.edges() {
            if inst.tuple(a).rel != self.rel {
                continue;
            }
            let (va, vb) = (&inst.tuple(a).values[col], &inst.tuple(b).values[col]);
            let (lo, hi) = match va.cmp(vb) {
                std::cmp::Ordering::Less => (a, b),
                std::cmp::Ordering::Greater => (b, a),
                std::cmp::Ordering::Equal => continue,
            };
            out.push(match self.prefer {
                Prefer::Max => (lo, hi),
                Prefer::Min => (hi, lo),
            });
        }
        Ok(out)
    }
}
