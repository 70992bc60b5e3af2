//! Closed first-order queries and (preferred) consistent query answering.
//!
//! Quantifiers range over the active domain of the evaluated subset together
//! with the constants of the query, restricted to the variable's sort when
//! the sort is fixed by an atom position, a constant or an order comparison.

mod eval;
mod parser;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{for_each_repair, Budget, ConflictGraph};
use crate::grepair::enumerate_grepairs;
use crate::lrepair::enumerate_lrepairs;
use crate::model::{AttrType, Instance, Schema, Value};
use crate::priority::Priority;
use crate::tupleset::TupleSet;

pub use eval::eval_query;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Const(Value),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Gt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Atom {
        rel: String,
        args: Vec<Term>,
    },
    Cmp {
        op: CmpOp,
        lhs: Term,
        rhs: Term,
    },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// `sort` is filled in by [`Query::parse`]; `None` means unconstrained.
    Exists {
        var: String,
        sort: Option<AttrType>,
        body: Box<Formula>,
    },
    Forall {
        var: String,
        sort: Option<AttrType>,
        body: Box<Formula>,
    },
}

/// A closed, well-typed query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    formula: Formula,
}

impl Query {
    /// Parses and checks a query against `schema`: every variable bound,
    /// atom arities and argument sorts as declared, `<`/`>` only on nats.
    pub fn parse(text: &str, schema: &Schema) -> Result<Self> {
        let mut formula = parser::parse_formula(text)?;
        let mut ck = SortCheck::default();
        ck.visit(&formula, schema, &mut Vec::new())?;
        let sorts: Vec<_> = (0..ck.parent.len()).map(|s| ck.sort_of(s)).collect();
        fill_sorts(&mut formula, &mut sorts.into_iter());
        Ok(Query { formula })
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    /// Constants mentioned in the query.
    pub fn constants(&self) -> Vec<Value> {
        fn walk(f: &Formula, out: &mut Vec<Value>) {
            let mut term = |t: &Term| {
                if let Term::Const(v) = t {
                    out.push(v.clone());
                }
            };
            match f {
                Formula::Atom { args, .. } => args.iter().for_each(term),
                Formula::Cmp { lhs, rhs, .. } => {
                    term(lhs);
                    term(rhs);
                }
                Formula::Not(g) => walk(g, out),
                Formula::And(a, b) | Formula::Or(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Formula::Exists { body, .. } | Formula::Forall { body, .. } => walk(body, out),
            }
        }
        let mut out = Vec::new();
        walk(&self.formula, &mut out);
        out.sort();
        out.dedup();
        out
    }
}

/// Free function form of [`Query::parse`].
pub fn parse_query(text: &str, schema: &Schema) -> Result<Query> {
    Query::parse(text, schema)
}

fn fill_sorts(f: &mut Formula, sorts: &mut impl Iterator<Item = Option<AttrType>>) {
    match f {
        Formula::Atom { .. } | Formula::Cmp { .. } => {}
        Formula::Not(g) => fill_sorts(g, sorts),
        Formula::And(a, b) | Formula::Or(a, b) => {
            fill_sorts(a, sorts);
            fill_sorts(b, sorts);
        }
        Formula::Exists { sort, body, .. } | Formula::Forall { sort, body, .. } => {
            *sort = sorts.next().expect("one sort per quantifier");
            fill_sorts(body, sorts);
        }
    }
}

/// Union-find over quantified variables, one slot per quantifier in
/// pre-order.
#[derive(Default)]
struct SortCheck {
    parent: Vec<usize>,
    sort: Vec<Option<AttrType>>,
}

impl SortCheck {
    fn find(&mut self, mut s: usize) -> usize {
        while self.parent[s] != s {
            self.parent[s] = self.parent[self.parent[s]];
            s = self.parent[s];
        }
        s
    }

    fn sort_of(&mut self, s: usize) -> Option<AttrType> {
        let r = self.find(s);
        self.sort[r]
    }

    fn constrain(&mut self, s: usize, ty: AttrType, what: &dyn Fn() -> String) -> Result<()> {
        let r = self.find(s);
        match self.sort[r] {
            Some(t) if t != ty => Err(Error::TypeMismatch(format!("{} must be {t}, not {ty}", what()))),
            _ => {
                self.sort[r] = Some(ty);
                Ok(())
            }
        }
    }

    fn unify(&mut self, a: usize, b: usize, what: &dyn Fn() -> String) -> Result<()> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return Ok(());
        }
        match (self.sort[ra], self.sort[rb]) {
            (Some(x), Some(y)) if x != y => {
                Err(Error::TypeMismatch(format!("{} compares {x} with {y}", what())))
            }
            (x, y) => {
                self.parent[rb] = ra;
                self.sort[ra] = x.or(y);
                Ok(())
            }
        }
    }

    fn slot(scope: &[(String, usize)], var: &str) -> Result<usize> {
        scope
            .iter()
            .rev()
            .find(|(v, _)| v == var)
            .map(|&(_, s)| s)
            .ok_or_else(|| Error::FreeVariable(var.to_string()))
    }

    fn visit(&mut self, f: &Formula, schema: &Schema, scope: &mut Vec<(String, usize)>) -> Result<()> {
        match f {
            Formula::Atom { rel, args } => {
                let r = schema.relation(rel)?;
                if r.arity() != args.len() {
                    return Err(Error::ArityMismatch {
                        rel: rel.clone(),
                        expected: r.arity(),
                        found: args.len(),
                    });
                }
                for (attr, arg) in r.attrs.iter().zip(args) {
                    let what = || format!("argument {}.{}", rel, attr.name);
                    match arg {
                        Term::Var(v) => {
                            let s = Self::slot(scope, v)?;
                            self.constrain(s, attr.ty, &what)?;
                        }
                        Term::Const(c) if c.ty() != attr.ty => {
                            return Err(Error::TypeMismatch(format!(
                                "{} must be {}, got {c}",
                                what(),
                                attr.ty
                            )))
                        }
                        Term::Const(_) => {}
                    }
                }
                Ok(())
            }
            Formula::Cmp { op, lhs, rhs } => {
                let what = || "comparison".to_string();
                let ordered = matches!(op, CmpOp::Lt | CmpOp::Gt);
                match (lhs, rhs) {
                    (Term::Var(a), Term::Var(b)) => {
                        let (sa, sb) = (Self::slot(scope, a)?, Self::slot(scope, b)?);
                        self.unify(sa, sb, &what)?;
                        if ordered {
                            self.constrain(sa, AttrType::Nat, &|| "operand of < or >".into())?;
                        }
                    }
                    (Term::Var(v), Term::Const(c)) | (Term::Const(c), Term::Var(v)) => {
                        let s = Self::slot(scope, v)?;
                        self.constrain(s, c.ty(), &what)?;
                        if ordered {
                            self.constrain(s, AttrType::Nat, &|| "operand of < or >".into())?;
                        }
                    }
                    (Term::Const(a), Term::Const(b)) => {
                        if a.ty() != b.ty() {
                            return Err(Error::TypeMismatch(format!("comparison of {a} with {b}")));
                        }
                        if ordered && a.ty() != AttrType::Nat {
                            return Err(Error::TypeMismatch("< and > apply to nats only".into()));
                        }
                    }
                }
                Ok(())
            }
            Formula::Not(g) => self.visit(g, schema, scope),
            Formula::And(a, b) | Formula::Or(a, b) => {
                self.visit(a, schema, scope)?;
                self.visit(b, schema, scope)
            }
            Formula::Exists { var, body, .. } | Formula::Forall { var, body, .. } => {
                let s = self.parent.len();
                self.parent.push(s);
                self.sort.push(None);
                scope.push((var.clone(), s));
                let r = self.visit(body, schema, scope);
                scope.pop();
                r
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(Value::Nat(n)) => write!(f, "{n}"),
            Term::Const(Value::Name(s)) => {
                write!(f, "\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom { rel, args } => {
                write!(f, "{rel}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Formula::Cmp { op, lhs, rhs } => {
                let op = match op {
                    CmpOp::Eq => "=",
                    CmpOp::Ne => "!=",
                    CmpOp::Lt => "<",
                    CmpOp::Gt => ">",
                };
                write!(f, "{lhs} {op} {rhs}")
            }
            Formula::Not(g) => write!(f, "!({g})"),
            Formula::And(a, b) => write!(f, "({a}) & ({b})"),
            Formula::Or(a, b) => write!(f, "({a}) | ({b})"),
            Formula::Exists { var, body, .. } => write!(f, "(exists {var}. {body})"),
            Formula::Forall { var, body, .. } => write!(f, "(forall {var}. {body})"),
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.formula.fmt(f)
    }
}

/// Which family of repairs a consistent answer quantifies over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Every repair.
    All,
    /// Locally preferred repairs.
    Local,
    /// Globally preferred repairs.
    Global,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "all" => Ok(Mode::All),
            "l" | "local" => Ok(Mode::Local),
            "g" | "global" => Ok(Mode::Global),
            other => Err(format!("unknown mode `{other}` (expected all, l or g)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::All => "all",
            Mode::Local => "l",
            Mode::Global => "g",
        })
    }
}

/// Whether `query` holds in every repair of the family selected by `mode`.
/// The priority is ignored for [`Mode::All`].
pub fn cqa(
    inst: &Instance,
    graph: &ConflictGraph,
    priority: &Priority,
    query: &Query,
    mode: Mode,
    budget: &Budget,
) -> Result<bool> {
    let holds = |r: &TupleSet| eval_query(inst, r, query);
    match mode {
        Mode::All => {
            budget.check_vertices(graph.len())?;
            let mut seen = 0usize;
            let mut answer = true;
            let mut over = false;
            let _ = for_each_repair(graph, |r| {
                seen += 1;
                if seen > budget.max_repairs {
                    over = true;
                    return std::ops::ControlFlow::Break(());
                }
                if !holds(r) {
                    answer = false;
                    return std::ops::ControlFlow::Break(());
                }
                std::ops::ControlFlow::Continue(())
            });
            if over {
                budget.check_repairs(seen)?;
            }
            Ok(answer)
        }
        Mode::Local => Ok(enumerate_lrepairs(graph, priority, budget)?.iter().all(holds)),
        Mode::Global => Ok(enumerate_grepairs(graph, priority, budget)?.iter().all(holds)),
    }
}
