//! Checks of the four properties expected from a family of preferred
//! repairs, for a given instance and priority:
//!
//! * P1, non-emptiness: an acyclic priority selects at least one repair.
//! * P2, non-discrimination: the empty priority selects every repair.
//! * P3, monotonicity: extending the priority never adds a repair.
//! * P4, categoricity: a total acyclic priority selects exactly one repair.
//!
//! P3 and P4 quantify over extensions of the priority. Each unoriented
//! conflict edge can stay unoriented or take either direction, giving `3^u`
//! extensions for `u` unoriented edges (of which `2^u` are total). Below a
//! configurable number of unoriented edges all of them are visited;
//! otherwise a seeded random sample is drawn. Cyclic extensions are skipped
//! since neither family is defined for them.

use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::Result;
use crate::graph::{enumerate_repairs, Budget, ConflictGraph};
use crate::grepair::maximal_repairs;
use crate::lrepair::enumerate_lrepairs;
use crate::priority::Priority;
use crate::tupleset::RepairSet;

/// A family of preferred repairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Local,
    Global,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Local => "l",
            Family::Global => "g",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Postulate {
    NonEmptiness,
    NonDiscrimination,
    Monotonicity,
    Categoricity,
}

impl Postulate {
    pub const ALL: [Postulate; 4] = [
        Postulate::NonEmptiness,
        Postulate::NonDiscrimination,
        Postulate::Monotonicity,
        Postulate::Categoricity,
    ];

    /// Short code, `P1` to `P4`.
    pub fn code(self) -> &'static str {
        match self {
            Postulate::NonEmptiness => "P1",
            Postulate::NonDiscrimination => "P2",
            Postulate::Monotonicity => "P3",
            Postulate::Categoricity => "P4",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Postulate::NonEmptiness => "non-emptiness",
            Postulate::NonDiscrimination => "non-discrimination",
            Postulate::Monotonicity => "monotonicity",
            Postulate::Categoricity => "categoricity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PostulateConfig {
    /// Visit every extension when there are fewer unoriented edges than this.
    pub exhaustive_below: usize,
    /// Number of random extensions drawn otherwise.
    pub samples: usize,
    pub seed: u64,
}

impl Default for PostulateConfig {
    fn default() -> Self {
        PostulateConfig {
            exhaustive_below: 10,
            samples: 500,
            seed: 0,
        }
    }
}

/// A counterexample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// The priority the offending family was computed for, as position
    /// pairs `(dominated, dominating)`.
    pub priority: Vec<(usize, usize)>,
    /// The offending repairs: for P2 and P3 the ones selected without
    /// justification, for P4 the whole (non-singleton) family.
    pub repairs: Vec<RepairSet>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub postulate: Postulate,
    pub family: Family,
    /// Whether every relevant priority was visited (as opposed to sampled).
    pub exhaustive: bool,
    /// Number of priorities the postulate was evaluated on.
    pub cases: usize,
    pub violation: Option<Violation>,
}

impl Outcome {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

struct FamilyOracle<'a> {
    graph: &'a ConflictGraph,
    budget: &'a Budget,
    family: Family,
    repairs: Vec<RepairSet>,
}

impl FamilyOracle<'_> {
    fn select(&self, priority: &Priority) -> Result<Vec<RepairSet>> {
        match self.family {
            Family::Local => enumerate_lrepairs(self.graph, priority, self.budget),
            Family::Global => Ok(maximal_repairs(priority, &self.repairs)),
        }
    }
}

/// Evaluates P1 to P4 for one family on the given acyclic priority.
pub fn check_postulates(
    graph: &ConflictGraph,
    priority: &Priority,
    family: Family,
    config: &PostulateConfig,
    budget: &Budget,
) -> Result<Vec<Outcome>> {
    priority.require_acyclic()?;
    let oracle = FamilyOracle {
        graph,
        budget,
        family,
        repairs: enumerate_repairs(graph, budget)?,
    };
    let outcome = |postulate, exhaustive, cases, violation| Outcome {
        postulate,
        family,
        exhaustive,
        cases,
        violation,
    };
    let pairs = |p: &Priority| p.pairs().collect::<Vec<_>>();

    let base = oracle.select(priority)?;
    let p1 = outcome(
        Postulate::NonEmptiness,
        true,
        1,
        base.is_empty().then(|| Violation {
            priority: pairs(priority),
            repairs: Vec::new(),
        }),
    );

    let none = Priority::empty(graph.len());
    let unprioritized = oracle.select(&none)?;
    let missing: Vec<_> = oracle
        .repairs
        .iter()
        .filter(|r| !unprioritized.contains(r))
        .cloned()
        .collect();
    let extra: Vec<_> = unprioritized
        .iter()
        .filter(|r| !oracle.repairs.contains(r))
        .cloned()
        .collect();
    let p2 = outcome(
        Postulate::NonDiscrimination,
        true,
        1,
        (!missing.is_empty() || !extra.is_empty()).then(|| Violation {
            priority: Vec::new(),
            repairs: missing.into_iter().chain(extra).collect(),
        }),
    );

    let free = priority.unoriented_edges(graph);
    let exhaustive = free.len() < config.exhaustive_below;
    let mut p3_cases = 0;
    let mut p4_cases = 0;
    let mut p3_violation = None;
    let mut p4_violation = None;
    let mut visit = |choice: &[u8]| -> Result<()> {
        let added = free.iter().zip(choice).filter_map(|(&(a, b), &c)| match c {
            1 => Some((a, b)),
            2 => Some((b, a)),
            _ => None,
        });
        let ext = priority.extended(added).expect("orients unoriented edges only");
        if !ext.is_acyclic() {
            return Ok(());
        }
        let selected = oracle.select(&ext)?;
        p3_cases += 1;
        if p3_violation.is_none() {
            let gained: Vec<_> = selected.iter().filter(|r| !base.contains(r)).cloned().collect();
            if !gained.is_empty() {
                p3_violation = Some(Violation {
                    priority: pairs(&ext),
                    repairs: gained,
                });
            }
        }
        if choice.iter().all(|&c| c != 0) {
            p4_cases += 1;
            if p4_violation.is_none() && selected.len() != 1 {
                p4_violation = Some(Violation {
                    priority: pairs(&ext),
                    repairs: selected,
                });
            }
        }
        Ok(())
    };
    let mut choice = vec![0u8; free.len()];
    if exhaustive {
        loop {
            visit(&choice)?;
            if !advance(&mut choice, 3) {
                break;
            }
        }
    } else {
        let mut rng = StdRng::seed_from_u64(config.seed);
        for _ in 0..config.samples {
            choice.iter_mut().for_each(|c| *c = rng.gen_range(0..3));
            visit(&choice)?;
            choice.iter_mut().for_each(|c| *c = rng.gen_range(1..3));
            visit(&choice)?;
        }
    }
    Ok(vec![
        p1,
        p2,
        outcome(Postulate::Monotonicity, exhaustive, p3_cases, p3_violation),
        outcome(Postulate::Categoricity, exhaustive, p4_cases, p4_violation),
    ])
}

/// Odometer step over `{0..base}^len`; false after the last combination.
fn advance(digits: &mut [u8], base: u8) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}
