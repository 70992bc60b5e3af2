//! Instance generators from propositional formulas, and brute-force
//! deciders for the formulas themselves.
//!
//! Three constructions are provided:
//!
//! * [`reduce_3sat_lcqa`]: a 3-CNF formula is unsatisfiable iff `¬R(b)` holds
//!   in every locally preferred repair of the generated instance.
//! * [`reduce_3sat_gcheck`]: a 3-CNF formula is satisfiable iff the returned
//!   candidate repair is *not* globally preferred.
//! * [`reduce_qbf_gcqa`]: `∀x̄ ∃ȳ. φ` is true iff `R(Y)` holds in every
//!   globally preferred repair (equivalently, iff `¬R(X)` does).
//!
//! Literals are encoded by a variable index and a sign in `{1, -1}`; a tuple
//! of the form `(.., var, sgn, ..)` conflicts with a variable tuple carrying
//! the same index and the opposite sign marker. Clauses that would produce
//! identical tuples are generated once.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{AttrType, Fd, FdSet, Instance, RelationSchema, Schema, Value};
use crate::priority::Priority;
use crate::query::Query;
use crate::tupleset::TupleSet;

/// Default variable cap of the brute-force deciders.
pub const DEFAULT_VAR_CAP: usize = 20;

/// A formula in conjunctive normal form with exactly three literals per
/// clause. Literals are non-zero integers, `-i` meaning `¬x_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<[i32; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[i32; 3]>) -> Result<Self> {
        for c in &clauses {
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > num_vars {
                    return Err(Error::MalformedFormula(format!(
                        "literal {l} outside variables 1..={num_vars}"
                    )));
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }

    /// `assignment[i]` is the value of `x_{i+1}`.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }

    /// Parses DIMACS CNF: `c` comment lines, a `p cnf <vars> <clauses>`
    /// header, then zero-terminated clauses of exactly three literals.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let (header, body, _) = split_dimacs(text, false)?;
        let clauses = collect_clauses(&body, header.1)?;
        CnfFormula::new(header.0, clauses)
    }
}

impl fmt::Display for CnfFormula {
    /// DIMACS rendering.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p cnf {} {}", self.num_vars, self.clauses.len())?;
        for [a, b, c] in &self.clauses {
            writeln!(f, "{a} {b} {c} 0")?;
        }
        Ok(())
    }
}

/// `∀x_1..x_n ∃y_1..y_m. φ` with `φ` in 3-CNF over `n + m` variables;
/// matrix variables `1..=n` are the `x_i`, `n+1..=n+m` the `y_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Qbf2Formula {
    universal: usize,
    existential: usize,
    matrix: CnfFormula,
}

impl Qbf2Formula {
    pub fn new(universal: usize, existential: usize, matrix: CnfFormula) -> Result<Self> {
        if matrix.num_vars() != universal + existential {
            return Err(Error::MalformedFormula(format!(
                "matrix has {} variables, prefix binds {}",
                matrix.num_vars(),
                universal + existential
            )));
        }
        Ok(Qbf2Formula {
            universal,
            existential,
            matrix,
        })
    }

    pub fn universal(&self) -> usize {
        self.universal
    }

    pub fn existential(&self) -> usize {
        self.existential
    }

    pub fn matrix(&self) -> &CnfFormula {
        &self.matrix
    }

    /// Parses a DIMACS body preceded by a prefix of one `a ... 0` line
    /// (universal variables) followed by one `e ... 0` line (existential
    /// variables). Variables are renumbered so that universals come first,
    /// in prefix order. Every matrix variable must be bound.
    pub fn parse(text: &str) -> Result<Self> {
        let (header, body, prefix) = split_dimacs(text, true)?;
        let (a, e) = prefix;
        let mut map = vec![0i32; header.0 + 1];
        for (new, &old) in a.iter().chain(&e).enumerate() {
            if old == 0 || old > header.0 || map[old] != 0 {
                return Err(Error::MalformedFormula(format!(
                    "prefix variable {old} out of range or repeated"
                )));
            }
            map[old] = new as i32 + 1;
        }
        let clauses = collect_clauses(&body, header.1)?
            .into_iter()
            .map(|c| {
                let mut out = [0; 3];
                for (o, l) in out.iter_mut().zip(c) {
                    let v = map[l.unsigned_abs() as usize];
                    if v == 0 {
                        return Err(Error::MalformedFormula(format!(
                            "variable {} is not quantified",
                            l.abs()
                        )));
                    }
                    *o = v * l.signum();
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        Qbf2Formula::new(a.len(), e.len(), CnfFormula::new(a.len() + e.len(), clauses)?)
    }
}

impl fmt::Display for Qbf2Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, m) = (self.universal, self.existential);
        writeln!(f, "p cnf {} {}", n + m, self.matrix.clauses.len())?;
        let a: Vec<String> = (1..=n).map(|v| v.to_string()).collect();
        let e: Vec<String> = (n + 1..=n + m).map(|v| v.to_string()).collect();
        writeln!(f, "a {} 0", a.join(" "))?;
        writeln!(f, "e {} 0", e.join(" "))?;
        for [a, b, c] in &self.matrix.clauses {
            writeln!(f, "{a} {b} {c} 0")?;
        }
        Ok(())
    }
}

type DimacsParts = ((usize, usize), Vec<(usize, String)>, (Vec<usize>, Vec<usize>));

fn split_dimacs(text: &str, with_prefix: bool) -> Result<DimacsParts> {
    let mut header = None;
    let mut body = Vec::new();
    let mut prefix: (Option<Vec<usize>>, Option<Vec<usize>>) = (None, None);
    for (no, line) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let parts: Vec<_> = rest.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                _ => None,
            };
            let h = parsed.ok_or_else(|| Error::syntax(line_no, 1, "expected `p cnf <vars> <clauses>`"))?;
            if header.replace(h).is_some() {
                return Err(Error::syntax(line_no, 1, "repeated problem line"));
            }
            continue;
        }
        if header.is_none() {
            return Err(Error::syntax(line_no, 1, "clause before the `p cnf` line"));
        }
        if let Some(q @ ('a' | 'e')) = line.chars().next() {
            if !with_prefix {
                return Err(Error::syntax(line_no, 1, "quantifier prefix in a plain CNF file"));
            }
            let vars = parse_ints(&line[1..], line_no)?;
            let vars = match vars.split_last() {
                Some((0, rest)) if rest.iter().all(|&v| v > 0) => rest.iter().map(|&v| v as usize).collect(),
                _ => {
                    return Err(Error::syntax(
                        line_no,
                        1,
                        "prefix must list positive variables and end in 0",
                    ))
                }
            };
            let e_seen = prefix.1.is_some();
            let slot = if q == 'a' { &mut prefix.0 } else { &mut prefix.1 };
            if !body.is_empty() || slot.is_some() || (q == 'a' && e_seen) {
                return Err(Error::syntax(
                    line_no,
                    1,
                    "expected one `a` line then one `e` line before the clauses",
                ));
            }
            *slot = Some(vars);
            continue;
        }
        body.push((line_no, line.to_string()));
    }
    let header = header.ok_or_else(|| Error::syntax(1, 1, "missing `p cnf` line"))?;
    Ok((
        header,
        body,
        (prefix.0.unwrap_or_default(), prefix.1.unwrap_or_default()),
    ))
}

fn parse_ints(s: &str, line_no: usize) -> Result<Vec<i64>> {
    s.split_whitespace()
        .map(|w| {
            w.parse::<i64>()
                .map_err(|_| Error::syntax(line_no, 1, format!("`{w}` is not an integer")))
        })
        .collect()
}

fn collect_clauses(body: &[(usize, String)], expected: usize) -> Result<Vec<[i32; 3]>> {
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    let mut last_line = 1;
    for (line_no, line) in body {
        last_line = *line_no;
        for lit in parse_ints(line, *line_no)? {
            if lit == 0 {
                let clause: [i32; 3] = current.as_slice().try_into().map_err(|_| {
                    Error::MalformedFormula(format!(
                        "clause ending on line {line_no} has {} literals, expected 3",
                        current.len()
                    ))
                })?;
                clauses.push(clause);
                current.clear();
            } else {
                let lit =
                    i32::try_from(lit).map_err(|_| Error::syntax(*line_no, 1, "literal out of range"))?;
                current.push(lit);
            }
        }
    }
    if !current.is_empty() {
        return Err(Error::syntax(last_line, 1, "last clause is not terminated by 0"));
    }
    if clauses.len() != expected {
        return Err(Error::MalformedFormula(format!(
            "header announces {expected} clauses, found {}",
            clauses.len()
        )));
    }
    Ok(clauses)
}

/// Exhaustive satisfiability check.
pub fn sat_bruteforce(phi: &CnfFormula) -> Result<bool> {
    sat_bruteforce_capped(phi, DEFAULT_VAR_CAP)
}

pub fn sat_bruteforce_capped(phi: &CnfFormula, cap: usize) -> Result<bool> {
    let n = phi.num_vars();
    if n > cap {
        return Err(Error::TooManyVariables { found: n, cap });
    }
    Ok(assignments(n).any(|a| phi.satisfied_by(&a)))
}

/// Exhaustive evaluation: every universal assignment extends to a
/// satisfying one.
pub fn qbf_bruteforce(psi: &Qbf2Formula) -> Result<bool> {
    qbf_bruteforce_capped(psi, DEFAULT_VAR_CAP)
}

pub fn qbf_bruteforce_capped(psi: &Qbf2Formula, cap: usize) -> Result<bool> {
    let (n, m) = (psi.universal, psi.existential);
    if n + m > cap {
        return Err(Error::TooManyVariables { found: n + m, cap });
    }
    Ok(assignments(n).all(|outer| {
        assignments(m).any(|inner| {
            let full: Vec<bool> = outer.iter().chain(&inner).copied().collect();
            psi.matrix.satisfied_by(&full)
        })
    }))
}

fn assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u64..1 << n).map(move |bits| (0..n).map(|i| bits >> i & 1 == 1).collect())
}

/// A generated instance together with what the construction is about.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub instance: Instance,
    pub fds: FdSet,
    pub priority: Priority,
    /// Construction-level name of each tuple, indexed by position
    /// (`v_1`, `vbar_1`, `d_2`, `b`, ...).
    pub labels: Vec<String>,
    /// The query whose consistent answer encodes the formula, if any.
    pub query: Option<Query>,
    /// A second query with the same answer, if the construction has one.
    pub alt_query: Option<Query>,
    /// The candidate repair whose membership encodes the formula, if any.
    pub candidate: Option<TupleSet>,
}

impl Reduction {
    /// Position of the tuple carrying `label`.
    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Collects labelled rows of a single relation `R(A1,B1,..,Ak,Bk)` of nats
/// with FDs `Ai -> Bi`, then resolves label pairs into a priority.
struct Builder {
    pairs: usize,
    rows: Vec<(String, Vec<i64>)>,
    prio: Vec<(String, String)>,
}

impl Builder {
    fn new(pairs: usize) -> Self {
        Builder {
            pairs,
            rows: Vec::new(),
            prio: Vec::new(),
        }
    }

    fn row(&mut self, label: impl Into<String>, values: Vec<i64>) {
        debug_assert_eq!(values.len(), 2 * self.pairs);
        self.rows.push((label.into(), values));
    }

    fn below(&mut self, lo: impl Into<String>, hi: impl Into<String>) {
        self.prio.push((lo.into(), hi.into()));
    }

    fn finish(self) -> Result<(Reduction, Schema)> {
        let attrs: Vec<(String, AttrType)> = (1..=self.pairs)
            .flat_map(|i| [(format!("A{i}"), AttrType::Nat), (format!("B{i}"), AttrType::Nat)])
            .collect();
        let schema = Schema::new([RelationSchema::new("R", attrs)])?;
        let mut b = Instance::builder(schema.clone());
        for (_, values) in &self.rows {
            b.push("R", values.iter().map(|&v| Value::Nat(v)).collect())?;
        }
        let instance = b.build()?;
        let fds = FdSet::new(
            (1..=self.pairs)
                .map(|i| Fd::new(&schema, "R", &[&format!("A{i}")], &[&format!("B{i}")]))
                .collect::<Result<Vec<_>>>()?,
        );
        let labels: Vec<String> = self.rows.into_iter().map(|(l, _)| l).collect();
        let at = |l: &str| labels.iter().position(|x| x == l).expect("label was added");
        let pairs: Vec<_> = self.prio.iter().map(|(lo, hi)| (at(lo), at(hi))).collect();
        let priority = Priority::from_pairs(instance.len(), pairs)?;
        Ok((
            Reduction {
                instance,
                fds,
                priority,
                labels,
                query: None,
                alt_query: None,
                candidate: None,
            },
            schema,
        ))
    }
}

/// How clause literals are laid out in the generated tuples.
///
/// With [`Layout::Compact`], literal `i` of a clause occupies column pair
/// `i`. Two clauses holding `x_v` and `¬x_v` in the same position then
/// conflict with each other, which the constructions do not account for:
/// the g-check candidate stops being a repair and the QBF equivalence can
/// fail. [`Layout::SignSeparated`] gives positive and negative literals
/// three column pairs each (unused pairs hold `0, 0`), so clause tuples never
/// conflict among themselves while every other conflict is unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Layout {
    Compact,
    #[default]
    SignSeparated,
}

impl Layout {
    fn slots(self) -> usize {
        match self {
            Layout::Compact => 3,
            Layout::SignSeparated => 6,
        }
    }

    /// Literal columns of a clause tuple.
    fn clause_columns(self, clause: &[i32; 3]) -> Vec<i64> {
        let pair = |l: i32| {
            let (v, s) = var_sgn(l);
            [v, s]
        };
        match self {
            Layout::Compact => clause.iter().flat_map(|&l| pair(l)).collect(),
            Layout::SignSeparated => {
                let mut cols = Vec::with_capacity(12);
                for positive in [true, false] {
                    let lits: Vec<_> = clause.iter().filter(|&&l| (l > 0) == positive).collect();
                    for k in 0..3 {
                        cols.extend(lits.get(k).map_or([0, 0], |&&l| pair(l)));
                    }
                }
                cols
            }
        }
    }

    /// Literal columns of a variable tuple: `(index, sign)` in every pair.
    fn variable_columns(self, index: i64, sign: i64) -> Vec<i64> {
        (0..self.slots()).flat_map(|_| [index, sign]).collect()
    }

    /// Clauses whose tuples differ; the dropped ones repeat an earlier
    /// clause's literals and change nothing logically.
    fn distinct_clauses(self, phi: &CnfFormula) -> Vec<[i32; 3]> {
        let mut seen = HashSet::new();
        phi.clauses()
            .iter()
            .copied()
            .filter(|c| seen.insert(self.clause_columns(c)))
            .collect()
    }

    fn zeros(self) -> Vec<i64> {
        vec![0; 2 * self.slots()]
    }
}

fn var_sgn(lit: i32) -> (i64, i64) {
    (i64::from(lit.unsigned_abs()), if lit > 0 { 1 } else { -1 })
}

fn row(head: &[i64], tail: Vec<i64>) -> Vec<i64> {
    let mut r = head.to_vec();
    r.extend(tail);
    r
}

fn ground_atom(rel: &str, values: &[i64]) -> String {
    let args: Vec<String> = values.iter().map(i64::to_string).collect();
    format!("{rel}({})", args.join(","))
}

/// Variable tuple label for a literal: `v_i` for `x_i`, `vbar_i` for `¬x_i`.
fn literal_label(prefix: &str, index: i64, positive: bool) -> String {
    if positive {
        format!("{prefix}_{index}")
    } else {
        format!("{prefix}bar_{index}")
    }
}

/// 3-CNF to consistent answers over locally preferred repairs.
///
/// Tuples, in load order: `v_1, vbar_1, ..., v_n, vbar_n, d_1..d_k, b`.
/// The query is `¬R(b)`. With `with_b_prime`, a tuple `b'` conflicting only
/// with `b` and dominated by it is appended, and `alt_query` is `R(b')`,
/// which has the same consistent answer.
pub fn reduce_3sat_lcqa(phi: &CnfFormula, layout: Layout, with_b_prime: bool) -> Result<Reduction> {
    let n = phi.num_vars() as i64;
    let clauses = layout.distinct_clauses(phi);
    let mut bld = Builder::new(1 + layout.slots());
    for i in 1..=n {
        bld.row(format!("v_{i}"), row(&[i, 1], layout.variable_columns(i, -1)));
        bld.row(format!("vbar_{i}"), row(&[i, 2], layout.variable_columns(i, 1)));
    }
    for (j, c) in clauses.iter().enumerate() {
        let d = format!("d_{}", j + 1);
        bld.row(d.clone(), row(&[0, 1], layout.clause_columns(c)));
        for &l in c {
            let (v, s) = var_sgn(l);
            bld.below(d.clone(), literal_label("v", v, s > 0));
        }
        bld.below("b", d);
    }
    let b = row(&[0, 0], layout.zeros());
    bld.row("b", b.clone());
    let b_prime = row(&[0, 1], layout.zeros());
    if with_b_prime {
        bld.row("b'", b_prime.clone());
        bld.below("b'", "b");
    }
    dedup_priority(&mut bld);
    let (mut red, schema) = bld.finish()?;
    red.query = Some(Query::parse(&format!("!{}", ground_atom("R", &b)), &schema)?);
    if with_b_prime {
        red.alt_query = Some(Query::parse(&ground_atom("R", &b_prime), &schema)?);
    }
    Ok(red)
}

/// 3-CNF to membership of a candidate among globally preferred repairs.
///
/// Tuples, in load order: `v_1, vbar_1, ..., w_1..w_n, d_1..d_k, s, t`.
/// The candidate is `{w_1..w_n, d_1..d_k, s}`; it is a repair whenever no
/// two clause tuples conflict, which [`Layout::SignSeparated`] guarantees.
pub fn reduce_3sat_gcheck(phi: &CnfFormula, layout: Layout) -> Result<Reduction> {
    let n = phi.num_vars() as i64;
    let clauses = layout.distinct_clauses(phi);
    let mut bld = Builder::new(2 + layout.slots());
    for i in 1..=n {
        bld.row(
            format!("v_{i}"),
            row(&[1, 1, i, 1], layout.variable_columns(i, -1)),
        );
        bld.row(
            format!("vbar_{i}"),
            row(&[1, 1, i, 2], layout.variable_columns(i, 1)),
        );
    }
    for i in 1..=n {
        bld.row(format!("w_{i}"), row(&[2, 2, i, 3], layout.zeros()));
        bld.below(format!("w_{i}"), format!("v_{i}"));
        bld.below(format!("w_{i}"), format!("vbar_{i}"));
    }
    for (j, c) in clauses.iter().enumerate() {
        let d = format!("d_{}", j + 1);
        bld.row(d.clone(), row(&[2, 2, 0, 0], layout.clause_columns(c)));
        for &l in c {
            let (v, s) = var_sgn(l);
            bld.below(d.clone(), literal_label("v", v, s > 0));
        }
    }
    bld.row("s", row(&[1, 2, n + 1, 1], layout.zeros()));
    bld.row("t", row(&[2, 1, n + 1, 2], layout.zeros()));
    bld.below("s", "t");
    dedup_priority(&mut bld);
    let (mut red, _) = bld.finish()?;
    let cand = red
        .labels
        .iter()
        .enumerate()
        .filter(|(_, l)| l.starts_with("w_") || l.starts_with("d_") || *l == "s")
        .map(|(p, _)| p);
    red.candidate = Some(TupleSet::from_positions(red.instance.len(), cand));
    Ok(red)
}

/// `∀∃` QBF to consistent answers over globally preferred repairs.
///
/// Tuples, in load order: `p_1, pbar_1, ..., q_1, qbar_1, ..., Y, X,
/// d_1..d_s`. The query is `R(Y)`; `alt_query` is `¬R(X)`.
///
/// In the compact layout a clause repeating one negated universal variable
/// three times would coincide with that variable's `p_i` tuple; such
/// formulas are rejected there.
pub fn reduce_qbf_gcqa(psi: &Qbf2Formula, layout: Layout) -> Result<Reduction> {
    let n = psi.universal() as i64;
    let m = psi.existential() as i64;
    let clauses = layout.distinct_clauses(psi.matrix());
    let mut bld = Builder::new(1 + layout.slots());
    for i in 1..=n {
        bld.row(format!("p_{i}"), row(&[1, 2], layout.variable_columns(i, -1)));
        bld.row(format!("pbar_{i}"), row(&[1, 2], layout.variable_columns(i, 1)));
        bld.below(format!("p_{i}"), "Y");
        bld.below(format!("pbar_{i}"), "Y");
    }
    for j in 1..=m {
        let v = n + j;
        bld.row(format!("q_{j}"), row(&[1, 1], layout.variable_columns(v, -1)));
        bld.row(format!("qbar_{j}"), row(&[1, 1], layout.variable_columns(v, 1)));
    }
    let y = row(&[1, 1], layout.zeros());
    let x = row(&[1, 2], layout.zeros());
    bld.row("Y", y.clone());
    bld.row("X", x.clone());
    bld.below("X", "Y");
    for (k, c) in clauses.iter().enumerate() {
        let universal_negation = c[0] < 0 && i64::from(c[0].unsigned_abs()) <= n;
        if layout == Layout::Compact && universal_negation && c.iter().all(|&l| l == c[0]) {
            return Err(Error::MalformedFormula(format!(
                "clause {} repeats the universal literal {} three times",
                k + 1,
                c[0]
            )));
        }
        let d = format!("d_{}", k + 1);
        bld.row(d.clone(), row(&[1, 2], layout.clause_columns(c)));
        for &l in c {
            let (v, s) = var_sgn(l);
            let target = if v <= n {
                literal_label("p", v, s > 0)
            } else {
                literal_label("q", v - n, s > 0)
            };
            bld.below(d.clone(), target);
        }
    }
    dedup_priority(&mut bld);
    let (mut red, schema) = bld.finish()?;
    red.query = Some(Query::parse(&ground_atom("R", &y), &schema)?);
    red.alt_query = Some(Query::parse(&format!("!{}", ground_atom("R", &x)), &schema)?);
    Ok(red)
}

/// Repeated literals yield repeated priority pairs; keep the first of each.
fn dedup_priority(bld: &mut Builder) {
    let mut seen = HashSet::new();
    bld.prio.retain(|p| seen.insert(p.clone()));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Budget, ConflictGraph};
    use crate::grepair::is_grepair;
    use crate::lrepair::enumerate_lrepairs;
    use crate::priority::validate_priority;
    use crate::query::{cqa, Mode};

    fn cnf(n: usize, c: &[[i32; 3]]) -> CnfFormula {
        CnfFormula::new(n, c.to_vec()).unwrap()
    }

    #[test]
    fn brute_force_deciders() {
        assert!(sat_bruteforce(&cnf(1, &[[1, 1, 1]])).unwrap());
        assert!(!sat_bruteforce(&cnf(1, &[[1, 1, 1], [-1, -1, -1]])).unwrap());
        let psi = Qbf2Formula::new(1, 1, cnf(2, &[[1, 2, 2], [-1, -2, -2]])).unwrap();
        assert!(qbf_bruteforce(&psi).unwrap());
        let psi = Qbf2Formula::new(1, 1, cnf(2, &[[1, 2, 2], [1, -2, -2]])).unwrap();
        assert!(!qbf_bruteforce(&psi).unwrap());
        assert_eq!(
            sat_bruteforce_capped(&cnf(3, &[[1, 2, 3]]), 2)
                .unwrap_err()
                .kind(),
            "TooManyVariables"
        );
    }

    #[test]
    fn malformed_formulas() {
        assert_eq!(
            CnfFormula::new(2, vec![[1, 3, 2]]).unwrap_err().kind(),
            "MalformedFormula"
        );
        assert_eq!(
            CnfFormula::new(2, vec![[1, 0, 2]]).unwrap_err().kind(),
            "MalformedFormula"
        );
        assert_eq!(
            Qbf2Formula::new(1, 0, cnf(2, &[[1, 2, 2]])).unwrap_err().kind(),
            "MalformedFormula"
        );
        let psi = Qbf2Formula::new(1, 1, cnf(2, &[[-1, -1, -1]])).unwrap();
        assert_eq!(
            reduce_qbf_gcqa(&psi, Layout::Compact).unwrap_err().kind(),
            "MalformedFormula"
        );
    }

    #[test]
    fn dimacs_round_trip() {
        let text = "c example\np cnf 3 2\n1 -2 3 0\n-1\n2 -3 0\n";
        let phi = CnfFormula::parse_dimacs(text).unwrap();
        assert_eq!(phi, cnf(3, &[[1, -2, 3], [-1, 2, -3]]));
        assert_eq!(CnfFormula::parse_dimacs(&phi.to_string()).unwrap(), phi);

        let err = |t: &str| CnfFormula::parse_dimacs(t).unwrap_err().kind();
        assert_eq!(err("p cnf 2 1\n1 2 0\n"), "MalformedFormula");
        assert_eq!(err("p cnf 2 2\n1 2 2 0\n"), "MalformedFormula");
        assert_eq!(err("1 2 2 0\n"), "SyntaxError");
        assert_eq!(err("p cnf 2 1\n1 2 2\n"), "SyntaxError");
        assert_eq!(err("p cnf 2 1\na 1 0\n1 2 2 0\n"), "SyntaxError");
    }

    #[test]
    fn qbf_prefix_renumbers() {
        let text = "p cnf 3 1\na 3 0\ne 1 2 0\n3 -1 2 0\n";
        let psi = Qbf2Formula::parse(text).unwrap();
        assert_eq!((psi.universal(), psi.existential()), (1, 2));
        assert_eq!(psi.matrix().clauses(), &[[1, -2, 3]]);
        assert_eq!(Qbf2Formula::parse(&psi.to_string()).unwrap(), psi);
        let unbound = Qbf2Formula::parse("p cnf 2 1\na 1 0\n1 2 2 0\n").unwrap_err();
        assert_eq!(unbound.kind(), "MalformedFormula");
    }

    #[test]
    fn generated_priorities_are_valid() {
        let phi = cnf(3, &[[1, -2, 3], [-1, -1, 2], [1, -2, 3]]);
        let psi = Qbf2Formula::new(2, 1, phi.clone()).unwrap();
        let reds = [Layout::Compact, Layout::SignSeparated]
            .into_iter()
            .flat_map(|layout| {
                [
                    reduce_3sat_lcqa(&phi, layout, false).unwrap(),
                    reduce_3sat_lcqa(&phi, layout, true).unwrap(),
                    reduce_3sat_gcheck(&phi, layout).unwrap(),
                    reduce_qbf_gcqa(&psi, layout).unwrap(),
                ]
            });
        for red in reds {
            let g = ConflictGraph::build(&red.instance, &red.fds);
            let pairs = red.priority.to_ids(&red.instance);
            assert!(validate_priority(&pairs, &red.instance, &g, true).is_ok());
            assert!(red.priority.is_acyclic());
        }
    }

    #[test]
    fn single_clause_lcqa() {
        let phi = cnf(1, &[[1, 1, 1]]);
        let red = reduce_3sat_lcqa(&phi, Layout::default(), false).unwrap();
        assert_eq!(red.instance.len(), 4);
        let g = ConflictGraph::build(&red.instance, &red.fds);
        let b = red.position("b").unwrap();
        let l = enumerate_lrepairs(&g, &red.priority, &Budget::default()).unwrap();
        assert!(l.iter().any(|r| r.contains(b)));
    }

    #[test]
    fn unsatisfiable_lcqa_with_positive_query() {
        let phi = cnf(1, &[[1, 1, 1], [-1, -1, -1]]);
        let red = reduce_3sat_lcqa(&phi, Layout::default(), true).unwrap();
        let g = ConflictGraph::build(&red.instance, &red.fds);
        let budget = Budget::default();
        for q in [red.query.as_ref().unwrap(), red.alt_query.as_ref().unwrap()] {
            assert!(cqa(&red.instance, &g, &red.priority, q, Mode::Local, &budget).unwrap());
        }
        let sat = reduce_3sat_lcqa(&cnf(1, &[[1, 1, 1]]), Layout::default(), true).unwrap();
        let g = ConflictGraph::build(&sat.instance, &sat.fds);
        let q = sat.alt_query.as_ref().unwrap();
        assert!(!cqa(&sat.instance, &g, &sat.priority, q, Mode::Local, &budget).unwrap());
    }

    #[test]
    fn gcheck_candidate() {
        let budget = Budget::default();
        for (phi, sat) in [
            (cnf(1, &[[1, 1, 1]]), true),
            (cnf(1, &[[1, 1, 1], [-1, -1, -1]]), false),
        ] {
            let red = reduce_3sat_gcheck(&phi, Layout::default()).unwrap();
            let g = ConflictGraph::build(&red.instance, &red.fds);
            let x = red.candidate.as_ref().unwrap();
            assert!(g.is_repair(x));
            assert_eq!(is_grepair(&g, &red.priority, x, &budget).unwrap(), !sat);
        }
    }

    #[test]
    fn qbf_gcqa_small() {
        let budget = Budget::default();
        for (clauses, truth) in [
            (vec![[1, 2, 2], [-1, 2, 2]], true),
            (vec![[2, 2, 2], [-2, -2, -2]], false),
        ] {
            let psi = Qbf2Formula::new(1, 1, cnf(2, &clauses)).unwrap();
            assert_eq!(qbf_bruteforce(&psi).unwrap(), truth);
            let red = reduce_qbf_gcqa(&psi, Layout::default()).unwrap();
            let g = ConflictGraph::build(&red.instance, &red.fds);
            for q in [red.query.as_ref().unwrap(), red.alt_query.as_ref().unwrap()] {
                assert_eq!(
                    cqa(&red.instance, &g, &red.priority, q, Mode::Global, &budget).unwrap(),
                    truth
                );
            }
        }
    }

    #[test]
    fn compact_layout_lets_clause_tuples_conflict() {
        let phi = cnf(1, &[[1, 1, 1], [-1, -1, -1]]);
        let compact = reduce_3sat_gcheck(&phi, Layout::Compact).unwrap();
        let g = ConflictGraph::build(&compact.instance, &compact.fds);
        let (d1, d2) = (compact.position("d_1").unwrap(), compact.position("d_2").unwrap());
        assert!(g.adjacent(d1, d2));
        assert!(!g.is_repair(compact.candidate.as_ref().unwrap()));

        let split = reduce_3sat_gcheck(&phi, Layout::SignSeparated).unwrap();
        let g = ConflictGraph::build(&split.instance, &split.fds);
        assert!(!g.adjacent(d1, d2));
        assert!(g.is_repair(split.candidate.as_ref().unwrap()));
    }

    #[test]
    fn sign_separated_columns() {
        let cols = Layout::SignSeparated.clause_columns(&[-2, 1, 3]);
        assert_eq!(cols, vec![1, 1, 3, 1, 0, 0, 2, -1, 0, 0, 0, 0]);
        assert_eq!(
            Layout::Compact.clause_columns(&[-2, 1, 3]),
            vec![2, -1, 1, 1, 3, 1]
        );
    }
}
