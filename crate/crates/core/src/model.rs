//! Schemas, typed values, instances and functional dependencies.
//!
//! Tuples of an [`Instance`] live at dense *positions* `0..len()`. Every other
//! module addresses tuples by position; [`TupleId`] (`Rel#index`) is the stable
//! external name. Positions are ordered by relation name first and load index
//! second, so sorting positions sorts tuple ids.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AttrType {
    Name,
    Nat,
}

impl fmt::Display for AttrType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttrType::Name => f.write_str("name"),
            AttrType::Nat => f.write_str("nat"),
        }
    }
}

impl FromStr for AttrType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "name" => Ok(AttrType::Name),
            "nat" => Ok(AttrType::Nat),
            other => Err(format!("unknown attribute type `{other}` (expected name or nat)")),
        }
    }
}

/// A domain value. `Nat` is stored signed because generated instances
/// use `-1` as a sign marker; ordering is the ordinary integer order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Name(String),
    Nat(i64),
}

impl Value {
    pub fn name(s: impl Into<String>) -> Self {
        Value::Name(s.into())
    }

    pub fn ty(&self) -> AttrType {
        match self {
            Value::Name(_) => AttrType::Name,
            Value::Nat(_) => AttrType::Nat,
        }
    }

    /// Parses a raw field according to the attribute type.
    pub fn parse_as(raw: &str, ty: AttrType) -> Result<Self> {
        match ty {
            AttrType::Name => Ok(Value::Name(raw.to_string())),
            AttrType::Nat => raw
                .trim()
                .parse::<i64>()
                .map(Value::Nat)
                .map_err(|_| Error::TypeMismatch(format!("`{raw}` is not a nat"))),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Name(s) => f.write_str(s),
            Value::Nat(n) => write!(f, "{n}"),
        }
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::Nat(n)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Name(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    pub name: String,
    pub ty: AttrType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSchema {
    pub name: String,
    pub attrs: Vec<Attribute>,
}

impl RelationSchema {
    pub fn new<S: Into<String>>(
        name: impl Into<String>,
        attrs: impl IntoIterator<Item = (S, AttrType)>,
    ) -> Self {
        RelationSchema {
            name: name.into(),
            attrs: attrs
                .into_iter()
                .map(|(n, ty)| Attribute { name: n.into(), ty })
                .collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.attrs.len()
    }

    pub fn attr_index(&self, attr: &str) -> Option<usize> {
        self.attrs.iter().position(|a| a.name == attr)
    }
}

impl fmt::Display for RelationSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, a) in self.attrs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}:{}", a.name, a.ty)?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    relations: BTreeMap<String, RelationSchema>,
}

impl Schema {
    pub fn new(relations: impl IntoIterator<Item = RelationSchema>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for rel in relations {
            if rel.attrs.is_empty() {
                return Err(Error::Schema(format!("relation {} has no attributes", rel.name)));
            }
            let mut seen = HashSet::new();
            for a in &rel.attrs {
                if !seen.insert(a.name.as_str()) {
                    return Err(Error::Schema(format!(
                        "attribute {} repeated in relation {}",
                        a.name, rel.name
                    )));
                }
            }
            if map.contains_key(&rel.name) {
                return Err(Error::Schema(format!("relation {} declared twice", rel.name)));
            }
            map.insert(rel.name.clone(), rel);
        }
        if map.is_empty() {
            return Err(Error::Schema("schema declares no relation".into()));
        }
        Ok(Schema { relations: map })
    }

    pub fn relation(&self, name: &str) -> Result<&RelationSchema> {
        self.relations
            .get(name)
            .ok_or_else(|| Error::UnknownRelation(name.to_string()))
    }

    /// Relations in name order.
    pub fn relations(&self) -> impl Iterator<Item = &RelationSchema> {
        self.relations.values()
    }
}

/// Stable tuple identifier: relation name and 0-based load index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TupleId {
    pub rel: String,
    pub index: usize,
}

impl TupleId {
    pub fn new(rel: impl Into<String>, index: usize) -> Self {
        TupleId {
            rel: rel.into(),
            index,
        }
    }
}

impl fmt::Display for TupleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.rel, self.index)
    }
}

impl FromStr for TupleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (rel, idx) = s
            .rsplit_once('#')
            .ok_or_else(|| Error::UnknownTupleId(s.to_string()))?;
        let index = idx.parse().map_err(|_| Error::UnknownTupleId(s.to_string()))?;
        if rel.is_empty() {
            return Err(Error::UnknownTupleId(s.to_string()));
        }
        Ok(TupleId::new(rel, index))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tuple {
    pub rel: String,
    pub values: Vec<Value>,
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.rel)?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// A multi-relation database instance with set semantics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    schema: Schema,
    tuples: Vec<Tuple>,
    ids: Vec<TupleId>,
    positions: HashMap<TupleId, usize>,
}

impl Instance {
    pub fn builder(schema: Schema) -> InstanceBuilder {
        InstanceBuilder {
            schema,
            rows: BTreeMap::new(),
        }
    }

    pub fn empty(schema: Schema) -> Self {
        Instance::builder(schema)
            .build()
            .expect("empty instance is valid")
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuple(&self, pos: usize) -> &Tuple {
        &self.tuples[pos]
    }

    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn id(&self, pos: usize) -> &TupleId {
        &self.ids[pos]
    }

    pub fn position(&self, id: &TupleId) -> Result<usize> {
        self.positions
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownTupleId(id.to_string()))
    }

    /// Positions of the tuples of one relation, in load order.
    pub fn relation_positions(&self, rel: &str) -> impl Iterator<Item = usize> + '_ {
        let rel = rel.to_string();
        (0..self.len()).filter(move |&p| self.ids[p].rel == rel)
    }
}

pub struct InstanceBuilder {
    schema: Schema,
    rows: BTreeMap<String, Vec<Vec<Value>>>,
}

impl InstanceBuilder {
    /// Appends a row; its load index is the number of rows already
    /// pushed to the same relation.
    pub fn push(&mut self, rel: &str, values: Vec<Value>) -> Result<TupleId> {
        let schema = self.schema.relation(rel)?;
        if schema.arity() != values.len() {
            return Err(Error::ArityMismatch {
                rel: rel.to_string(),
                expected: schema.arity(),
                found: values.len(),
            });
        }
        for (attr, v) in schema.attrs.iter().zip(&values) {
            if attr.ty != v.ty() {
                return Err(Error::TypeMismatch(format!(
                    "{rel}.{} is {} but got {}",
                    attr.name,
                    attr.ty,
                    v.ty()
                )));
            }
        }
        let rows = self.rows.entry(rel.to_string()).or_default();
        rows.push(values);
        Ok(TupleId::new(rel, rows.len() - 1))
    }

    pub fn with(mut self, rel: &str, values: Vec<Value>) -> Result<Self> {
        self.push(rel, values)?;
        Ok(self)
    }

    pub fn build(self) -> Result<Instance> {
        let mut tuples = Vec::new();
        let mut ids = Vec::new();
        let mut positions = HashMap::new();
        for (rel, rows) in self.rows {
            let mut seen: HashMap<&[Value], usize> = HashMap::new();
            for (index, values) in rows.iter().enumerate() {
                if let Some(first) = seen.insert(values.as_slice(), index) {
                    return Err(Error::DuplicateTuple(format!(
                        "{rel}#{index} repeats {rel}#{first}"
                    )));
                }
            }
            for (index, values) in rows.into_iter().enumerate() {
                let id = TupleId::new(rel.clone(), index);
                positions.insert(id.clone(), tuples.len());
                ids.push(id);
                tuples.push(Tuple {
                    rel: rel.clone(),
                    values,
                });
            }
        }
        Ok(Instance {
            schema: self.schema,
            tuples,
            ids,
            positions,
        })
    }
}

/// `rel: lhs -> rhs`, attributes stored as column indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fd {
    pub rel: String,
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
}

impl Fd {
    pub fn new(schema: &Schema, rel: &str, lhs: &[&str], rhs: &[&str]) -> Result<Self> {
        let r = schema.relation(rel)?;
        let resolve = |names: &[&str]| -> Result<Vec<usize>> {
            if names.is_empty() {
                return Err(Error::InvalidFd(format!("{rel}: empty attribute set")));
            }
            let set: BTreeSet<usize> = names
                .iter()
                .map(|n| {
                    r.attr_index(n.trim()).ok_or_else(|| Error::UnknownAttribute {
                        rel: rel.to_string(),
                        attr: n.trim().to_string(),
                    })
                })
                .collect::<Result<_>>()?;
            Ok(set.into_iter().collect())
        };
        Ok(Fd {
            rel: rel.to_string(),
            lhs: resolve(lhs)?,
            rhs: resolve(rhs)?,
        })
    }

    /// Whether two tuples violate this dependency together.
    pub fn violated_by(&self, a: &Tuple, b: &Tuple) -> bool {
        a.rel == self.rel
            && b.rel == self.rel
            && self.lhs.iter().all(|&i| a.values[i] == b.values[i])
            && self.rhs.iter().any(|&i| a.values[i] != b.values[i])
    }

    pub fn display<'a>(&'a self, schema: &'a Schema) -> impl fmt::Display + 'a {
        FdDisplay { fd: self, schema }
    }
}

struct FdDisplay<'a> {
    fd: &'a Fd,
    schema: &'a Schema,
}

impl fmt::Display for FdDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = self.schema.relation(&self.fd.rel).map_err(|_| fmt::Error)?;
        let names = |cols: &[usize]| {
            cols.iter()
                .map(|&c| rel.attrs[c].name.as_str())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "{}: {} -> {}",
            self.fd.rel,
            names(&self.fd.lhs),
            names(&self.fd.rhs)
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FdSet {
    fds: Vec<Fd>,
}

impl FdSet {
    pub fn new(fds: impl IntoIterator<Item = Fd>) -> Self {
        FdSet {
            fds: fds.into_iter().collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &Fd> {
        self.fds.iter()
    }

    pub fn len(&self) -> usize {
        self.fds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fds.is_empty()
    }

    /// Conflict test on raw tuples: same relation and some dependency
    /// of that relation is violated by the pair.
    pub fn conflict(&self, a: &Tuple, b: &Tuple) -> bool {
        a.rel == b.rel && self.fds.iter().any(|fd| fd.violated_by(a, b))
    }
}

/// Whether tuples `a` and `b` are conflicting with respect to `fds`.
pub fn conflicting(inst: &Instance, fds: &FdSet, a: &TupleId, b: &TupleId) -> Result<bool> {
    let a = inst.position(a)?;
    let b = inst.position(b)?;
    Ok(fds.conflict(inst.tuple(a), inst.tuple(b)))
}

pub fn is_consistent(inst: &Instance, fds: &FdSet) -> bool {
    let t = inst.tuples();
    (0..t.len()).all(|i| (i + 1..t.len()).all(|j| !fds.conflict(&t[i], &t[j])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn emp_mgr_conflicts() {
        let (inst, fds) = fixtures::emp_mgr();
        let e = |i| TupleId::new("Emp", i);
        let m = |i| TupleId::new("Mgr", i);
        assert!(conflicting(&inst, &fds, &e(0), &e(1)).unwrap());
        assert!(conflicting(&inst, &fds, &m(1), &m(2)).unwrap());
        // lhs differs
        assert!(!conflicting(&inst, &fds, &m(0), &m(1)).unwrap());
        assert!(!conflicting(&inst, &fds, &e(0), &m(0)).unwrap());
        for p in 0..inst.len() {
            let id = inst.id(p).clone();
            assert!(!conflicting(&inst, &fds, &id, &id).unwrap());
        }
        assert!(!is_consistent(&inst, &fds));
    }

    #[test]
    fn unknown_id_is_reported() {
        let (inst, fds) = fixtures::emp_mgr();
        let err = conflicting(&inst, &fds, &TupleId::new("Emp", 7), &TupleId::new("Emp", 0)).unwrap_err();
        assert_eq!(err.kind(), "UnknownTupleId");
    }

    #[test]
    fn consistency_of_small_instances() {
        let (inst, fds) = fixtures::emp_mgr();
        assert!(is_consistent(&Instance::empty(inst.schema().clone()), &fds));

        let i3 = Instance::builder(inst.schema().clone())
            .with("Emp", vec!["Alice".into(), "A".into()])
            .unwrap()
            .with("Mgr", vec!["A".into(), "Mary".into(), 2.into()])
            .unwrap()
            .with("Mgr", vec!["B".into(), "Mary".into(), 3.into()])
            .unwrap()
            .build()
            .unwrap();
        assert!(is_consistent(&i3, &fds));
    }

    #[test]
    fn duplicates_and_bad_rows_are_rejected() {
        let (inst, _) = fixtures::emp_mgr();
        let schema = inst.schema().clone();
        let dup = Instance::builder(schema.clone())
            .with("Emp", vec!["Alice".into(), "A".into()])
            .unwrap()
            .with("Emp", vec!["Alice".into(), "A".into()])
            .unwrap()
            .build();
        assert_eq!(dup.unwrap_err().kind(), "DuplicateTuple");

        let mut b = Instance::builder(schema);
        assert_eq!(
            b.push("Emp", vec!["Alice".into()]).unwrap_err().kind(),
            "ArityMismatch"
        );
        assert_eq!(
            b.push("Mgr", vec!["A".into(), "Mary".into(), "x".into()])
                .unwrap_err()
                .kind(),
            "TypeMismatch"
        );
    }

    #[test]
    fn positions_follow_id_order() {
        let (inst, _) = fixtures::emp_mgr();
        let ids: Vec<_> = (0..inst.len()).map(|p| inst.id(p).clone()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
        assert_eq!("Mgr#2".parse::<TupleId>().unwrap(), TupleId::new("Mgr", 2));
        assert!("Mgr2".parse::<TupleId>().is_err());
    }
}
