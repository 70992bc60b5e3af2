//! Small hand-built instances used by tests, docs and the CLI smoke fixtures.
//!
//! Single-relation fixtures name their tuples `t_a, t_b, ...`, which occupy
//! positions `0, 1, ...` in that order.

use crate::graph::ConflictGraph;
use crate::model::{AttrType, Fd, FdSet, Instance, RelationSchema, Schema, Value};
use crate::priority::Priority;

/// `Emp(Name, Dept)` with `Name -> Dept` and `Mgr(Dept, Name, T)` with
/// `Dept -> Name`; two independent conflicts and four repairs.
///
/// Positions: `Emp#0 (Alice,A)`, `Emp#1 (Alice,B)`, `Mgr#0 (A,Mary,2)`,
/// `Mgr#1 (B,Bob,1)`, `Mgr#2 (B,Mary,3)`.
pub fn emp_mgr() -> (Instance, FdSet) {
    let schema = Schema::new([
        RelationSchema::new("Emp", [("Name", AttrType::Name), ("Dept", AttrType::Name)]),
        RelationSchema::new(
            "Mgr",
            [
                ("Dept", AttrType::Name),
                ("Name", AttrType::Name),
                ("T", AttrType::Nat),
            ],
        ),
    ])
    .expect("valid schema");
    let mut b = Instance::builder(schema.clone());
    for row in [["Alice", "A"], ["Alice", "B"]] {
        b.push("Emp", row.iter().map(|&s| s.into()).collect())
            .expect("valid row");
    }
    for (d, n, t) in [("A", "Mary", 2), ("B", "Bob", 1), ("B", "Mary", 3)] {
        b.push("Mgr", vec![d.into(), n.into(), t.into()])
            .expect("valid row");
    }
    let fds = FdSet::new([
        Fd::new(&schema, "Emp", &["Name"], &["Dept"]).expect("valid fd"),
        Fd::new(&schema, "Mgr", &["Dept"], &["Name"]).expect("valid fd"),
    ]);
    (b.build().expect("valid instance"), fds)
}

/// [`emp_mgr`] with a priority given as position pairs.
pub fn emp_mgr_with(pairs: &[(usize, usize)]) -> (Instance, FdSet, Priority) {
    let (inst, fds) = emp_mgr();
    let p = Priority::from_pairs(inst.len(), pairs.iter().copied()).expect("asymmetric");
    (inst, fds, p)
}

fn nat_relation(rows: &[&[i64]], attrs: &[&str], fds: &[(&[&str], &[&str])]) -> (Instance, FdSet) {
    let schema = Schema::new([RelationSchema::new(
        "R",
        attrs.iter().map(|&a| (a, AttrType::Nat)),
    )])
    .expect("valid schema");
    let mut b = Instance::builder(schema.clone());
    for row in rows {
        b.push("R", row.iter().map(|&v| Value::Nat(v)).collect())
            .expect("valid row");
    }
    let fds = FdSet::new(
        fds.iter()
            .map(|(l, r)| Fd::new(&schema, "R", l, r).expect("valid fd")),
    );
    (b.build().expect("valid instance"), fds)
}

/// `R(A, B)` with `A -> B`, `B -> A`: a 4-cycle of conflicts with a total
/// cyclic priority `t_a ≺ t_b ≺ t_c ≺ t_d ≺ t_a`.
pub fn four_cycle() -> (Instance, FdSet, Priority) {
    let (inst, fds) = nat_relation(
        &[&[1, 1], &[1, 2], &[2, 2], &[2, 1]],
        &["A", "B"],
        &[(&["A"], &["B"]), (&["B"], &["A"])],
    );
    let p = Priority::from_pairs(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).expect("asymmetric");
    (inst, fds, p)
}

/// `R(A, B, C)` with `B -> C` and `t_c ≺ t_a`, `t_d ≺ t_b`. Three repairs,
/// all globally preferred, but `{t_c, t_d}` is not locally preferred.
pub fn local_global_gap() -> (Instance, FdSet, Priority) {
    let (inst, fds) = nat_relation(
        &[&[1, 1, 1], &[2, 1, 2], &[3, 1, 3], &[4, 1, 3]],
        &["A", "B", "C"],
        &[(&["B"], &["C"])],
    );
    let p = Priority::from_pairs(4, [(2, 0), (3, 1)]).expect("asymmetric");
    (inst, fds, p)
}

/// `R(A, B, C)` with `B -> C` and `t_c ≺ t_a`, `t_d ≺ t_b` over a 4-cycle:
/// the priority has a cyclic extension, yet both preferred families are
/// `{{t_a, t_b}}`.
pub fn cyclic_extension_yet_equal() -> (Instance, FdSet, Priority) {
    let (inst, fds) = nat_relation(
        &[&[1, 1, 1], &[2, 1, 1], &[3, 1, 2], &[4, 1, 2]],
        &["A", "B", "C"],
        &[(&["B"], &["C"])],
    );
    let p = Priority::from_pairs(4, [(2, 0), (3, 1)]).expect("asymmetric");
    (inst, fds, p)
}

/// `R(A, B)` with `A -> B`, three pairwise conflicting tuples and the chain
/// `t_a ≺ t_b ≺ t_c`; the induced order on repairs is not transitive.
pub fn non_transitive_chain() -> (Instance, FdSet, Priority) {
    let (inst, fds) = nat_relation(&[&[1, 1], &[1, 2], &[1, 3]], &["A", "B"], &[(&["A"], &["B"])]);
    let p = Priority::from_pairs(3, [(0, 1), (1, 2)]).expect("asymmetric");
    (inst, fds, p)
}

/// Conflict graph helper for fixtures.
pub fn graph_of(inst: &Instance, fds: &FdSet) -> ConflictGraph {
    ConflictGraph::build(inst, fds)
}
