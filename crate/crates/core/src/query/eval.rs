//! Model checking of closed queries against a subset of an instance.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::model::{AttrType, Instance, Tuple, Value};
use crate::tupleset::TupleSet;

use super::{CmpOp, Formula, Query, Term};

struct Model<'a> {
    facts: HashSet<&'a Tuple>,
    domain: Vec<Value>,
}

impl Model<'_> {
    fn range(&self, sort: Option<AttrType>) -> impl Iterator<Item = &Value> {
        self.domain
            .iter()
            .filter(move |v| sort.is_none_or(|s| v.ty() == s))
    }
}

/// Whether the tuples of `inst` selected by `subset` satisfy `query`.
/// Quantifiers range over the values occurring in the subset plus the
/// query's constants.
pub fn eval_query(inst: &Instance, subset: &TupleSet, query: &Query) -> bool {
    let mut domain: BTreeSet<Value> = query.constants().into_iter().collect();
    let mut facts = HashSet::new();
    for p in subset.iter() {
        let t = inst.tuple(p);
        domain.extend(t.values.iter().cloned());
        facts.insert(t);
    }
    let model = Model {
        facts,
        domain: domain.into_iter().collect(),
    };
    holds(&model, query.formula(), &mut HashMap::new())
}

fn value<'v>(t: &'v Term, env: &'v HashMap<String, Vec<Value>>) -> &'v Value {
    match t {
        Term::Const(c) => c,
        Term::Var(v) => env
            .get(v)
            .and_then(|stack| stack.last())
            .expect("closed query binds every variable"),
    }
}

fn holds(m: &Model<'_>, f: &Formula, env: &mut HashMap<String, Vec<Value>>) -> bool {
    match f {
        Formula::Atom { rel, args } => {
            let probe = Tuple {
                rel: rel.clone(),
                values: args.iter().map(|a| value(a, env).clone()).collect(),
            };
            m.facts.contains(&probe)
        }
        Formula::Cmp { op, lhs, rhs } => {
            let (a, b) = (value(lhs, env), value(rhs, env));
            match op {
                CmpOp::Eq => a == b,
                CmpOp::Ne => a != b,
                CmpOp::Lt => a < b,
                CmpOp::Gt => a > b,
            }
        }
        Formula::Not(g) => !holds(m, g, env),
        Formula::And(a, b) => holds(m, a, env) && holds(m, b, env),
        Formula::Or(a, b) => holds(m, a, env) || holds(m, b, env),
        Formula::Exists { var, sort, body } => quantify(m, var, *sort, body, env, true),
        Formula::Forall { var, sort, body } => quantify(m, var, *sort, body, env, false),
    }
}

fn quantify(
    m: &Model<'_>,
    var: &str,
    sort: Option<AttrType>,
    body: &Formula,
    env: &mut HashMap<String, Vec<Value>>,
    existential: bool,
) -> bool {
    for v in m.range(sort) {
        env.entry(var.to_string()).or_default().push(v.clone());
        let r = holds(m, body, env);
        env.get_mut(var).expect("just pushed").pop();
        if r == existential {
            return existential;
        }
    }
    !existential
}
