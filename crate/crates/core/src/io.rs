//! Text and CSV file formats.
//!
//! A data directory holds one `<Rel>.csv` per relation, whose header row
//! names the relation's attributes (in any order). The other files are line
//! based; blank lines and lines starting with `#` are ignored.
//!
//! ```text
//! # schema.txt
//! Emp(Name:name, Dept:name)
//! Mgr(Dept:name, Name:name, T:nat)
//!
//! # fds.txt
//! Emp: Name -> Dept
//! Mgr: Dept -> Name
//!
//! # priority.txt: Mgr#1 is dominated by Mgr#2
//! Mgr#1 < Mgr#2
//! prefer Mgr max T
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::ConflictGraph;
use crate::model::{AttrType, Fd, FdSet, Instance, RelationSchema, Schema, TupleId, Value};
use crate::priority::{validate_priority, Prefer, Priority, PriorityRule};
use crate::tupleset::TupleSet;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Parses a schema file of lines `Rel(Attr:type, ...)`, types being `name`
/// or `nat`.
pub fn parse_schema(text: &str) -> Result<Schema> {
    let mut rels = Vec::new();
    for (line, l) in content_lines(text) {
        let open = l
            .find('(')
            .ok_or_else(|| Error::syntax(line, 1, "expected `Rel(Attr:type, ...)`"))?;
        if !l.ends_with(')') {
            return Err(Error::syntax(line, l.len(), "missing closing `)`"));
        }
        let name = l[..open].trim();
        if !is_identifier(name) {
            return Err(Error::syntax(line, 1, format!("`{name}` is not a relation name")));
        }
        let mut attrs = Vec::new();
        for part in l[open + 1..l.len() - 1].split(',') {
            let (attr, ty) = part
                .split_once(':')
                .ok_or_else(|| Error::syntax(line, open + 2, format!("`{}` lacks `:type`", part.trim())))?;
            let attr = attr.trim();
            if !is_identifier(attr) {
                return Err(Error::syntax(
                    line,
                    open + 2,
                    format!("`{attr}` is not an attribute name"),
                ));
            }
            let ty: AttrType = ty
                .trim()
                .parse()
                .map_err(|e: String| Error::syntax(line, open + 2, e))?;
            attrs.push((attr.to_string(), ty));
        }
        rels.push(RelationSchema::new(name, attrs));
    }
    Schema::new(rels)
}

/// Parses an FD file of lines `Rel: A1,A2 -> B1,B2`.
pub fn parse_fds(text: &str, schema: &Schema) -> Result<FdSet> {
    let mut fds = Vec::new();
    for (line, l) in content_lines(text) {
        let (rel, body) = l
            .split_once(':')
            .ok_or_else(|| Error::syntax(line, 1, "expected `Rel: A,B -> C`"))?;
        let (lhs, rhs) = body
            .split_once("->")
            .ok_or_else(|| Error::syntax(line, rel.len() + 2, "missing `->`"))?;
        let lhs: Vec<&str> = lhs.split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
        let rhs: Vec<&str> = rhs.split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
        fds.push(Fd::new(schema, rel.trim(), &lhs, &rhs)?);
    }
    Ok(FdSet::new(fds))
}

/// The contents of a priority file before it is checked against an
/// instance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrioritySpec {
    /// `(x, y)` means `x` is dominated by `y`.
    pub pairs: Vec<(TupleId, TupleId)>,
    pub rules: Vec<PriorityRule>,
}

impl PrioritySpec {
    /// Expands the rules over the conflict graph and validates the union.
    /// Explicit pairs that are not conflicts are errors when `strict`.
    pub fn resolve(&self, inst: &Instance, graph: &ConflictGraph, strict: bool) -> Result<Priority> {
        let mut pairs = self.pairs.clone();
        for rule in &self.rules {
            pairs.extend(
                rule.pairs(inst, graph)?
                    .into_iter()
                    .map(|(x, y)| (inst.id(x).clone(), inst.id(y).clone())),
            );
        }
        pairs.sort();
        pairs.dedup();
        validate_priority(&pairs, inst, graph, strict)
    }
}

/// Parses a priority file: lines `Rel#i < Rel#j` and
/// `prefer Rel max|min Attr`.
pub fn parse_priority(text: &str) -> Result<PrioritySpec> {
    let mut spec = PrioritySpec::default();
    for (line, l) in content_lines(text) {
        let words: Vec<&str> = l.split_whitespace().collect();
        if words.first() == Some(&"prefer") {
            let [_, rel, dir, attr] = words.as_slice() else {
                return Err(Error::syntax(line, 1, "expected `prefer Rel max|min Attr`"));
            };
            let prefer = match *dir {
                "max" => Prefer::Max,
                "min" => Prefer::Min,
                other => {
                    return Err(Error::syntax(
                        line,
                        1,
                        format!("`{other}` is neither max nor min"),
                    ))
                }
            };
            spec.rules.push(PriorityRule {
                rel: rel.to_string(),
                attr: attr.to_string(),
                prefer,
            });
            continue;
        }
        let (lo, hi) = l
            .split_once('<')
            .ok_or_else(|| Error::syntax(line, 1, "expected `Rel#i < Rel#j`"))?;
        let id = |s: &str, col: usize| {
            s.trim()
                .parse::<TupleId>()
                .map_err(|_| Error::syntax(line, col, format!("`{}` is not a tuple id", s.trim())))
        };
        spec.pairs.push((id(lo, 1)?, id(hi, lo.len() + 2)?));
    }
    Ok(spec)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_schema(path: &Path) -> Result<Schema> {
    parse_schema(&read(path)?)
}

pub fn read_fds(path: &Path, schema: &Schema) -> Result<FdSet> {
    parse_fds(&read(path)?, schema)
}

pub fn read_priority(path: &Path) -> Result<PrioritySpec> {
    parse_priority(&read(path)?)
}

fn relation_file(dir: &Path, rel: &str) -> PathBuf {
    dir.join(format!("{rel}.csv"))
}

/// Loads `<Rel>.csv` for every relation of the schema. Rows keep file
/// order, which fixes the tuple ids.
pub fn read_instance(schema: &Schema, dir: &Path) -> Result<Instance> {
    let mut b = Instance::builder(schema.clone());
    for rel in schema.relations() {
        let path = relation_file(dir, &rel.name);
        let csv_err = |source| Error::Csv {
            path: path.clone(),
            source,
        };
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::Headers)
            .from_path(&path)
            .map_err(csv_err)?;
        let header = rdr.headers().map_err(csv_err)?.clone();
        let mut columns = Vec::with_capacity(rel.arity());
        for a in &rel.attrs {
            let col = header.iter().position(|h| h == a.name).ok_or_else(|| {
                Error::Schema(format!("{}: header lacks attribute {}", path.display(), a.name))
            })?;
            columns.push((col, a.ty));
        }
        if header.len() != rel.arity() {
            return Err(Error::Schema(format!(
                "{}: header has {} columns, {} declares {}",
                path.display(),
                header.len(),
                rel.name,
                rel.arity()
            )));
        }
        for record in rdr.records() {
            let record = record.map_err(csv_err)?;
            let values = columns
                .iter()
                .map(|&(col, ty)| Value::parse_as(&record[col], ty))
                .collect::<Result<Vec<_>>>()?;
            b.push(&rel.name, values)?;
        }
    }
    b.build()
}

pub fn schema_text(schema: &Schema) -> String {
    schema.relations().map(|r| format!("{r}\n")).collect()
}

pub fn fds_text(fds: &FdSet, schema: &Schema) -> String {
    fds.iter().map(|fd| format!("{}\n", fd.display(schema))).collect()
}

/// Extensional form of a priority, one `Rel#i < Rel#j` line per pair.
pub fn priority_text(priority: &Priority, inst: &Instance) -> String {
    priority
        .to_ids(inst)
        .iter()
        .map(|(lo, hi)| format!("{lo} < {hi}\n"))
        .collect()
}

/// Writes the tuples of `subset` as one CSV file per relation (empty
/// relations get a header only), plus `schema.txt`.
pub fn write_relations(dir: &Path, inst: &Instance, subset: &TupleSet) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    write(&dir.join("schema.txt"), &schema_text(inst.schema()))?;
    for rel in inst.schema().relations() {
        let path = relation_file(dir, &rel.name);
        let csv_err = |source| Error::Csv {
            path: path.clone(),
            source,
        };
        let mut w = csv::Writer::from_path(&path).map_err(csv_err)?;
        w.write_record(rel.attrs.iter().map(|a| a.name.as_str()))
            .map_err(csv_err)?;
        for p in inst.relation_positions(&rel.name).filter(|&p| subset.contains(p)) {
            w.write_record(inst.tuple(p).values.iter().map(Value::to_string))
                .map_err(csv_err)?;
        }
        w.flush().map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
    }
    Ok(())
}

/// Writes a complete data directory: relations, `schema.txt`, `fds.txt`
/// and `priority.txt`.
pub fn write_fixture(dir: &Path, inst: &Instance, fds: &FdSet, priority: &Priority) -> Result<()> {
    write_relations(dir, inst, &TupleSet::full(inst.len()))?;
    write(&dir.join("fds.txt"), &fds_text(fds, inst.schema()))?;
    write(&dir.join("priority.txt"), &priority_text(priority, inst))
}

/// Writes an auxiliary text file into a fixture directory.
pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<()> {
    write(&dir.join(name), text)
}
