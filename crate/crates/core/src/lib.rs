//! Repairs of relational databases violating functional dependencies, with
//! tuple-level priorities selecting preferred repairs.
//!
//! The pieces, bottom up:
//!
//! * [`model`]: schemas, typed values, instances and functional dependencies.
//! * [`graph`]: the conflict graph and enumeration of repairs, which are its
//!   maximal independent sets.
//! * [`priority`]: priorities over conflicting tuples, winnow, acyclicity and
//!   extension analysis.
//! * [`lrepair`] and [`grepair`]: locally and globally preferred repairs.
//! * [`query`]: closed first-order queries and consistent query answers.
//! * [`reductions`]: instance generators from 3-CNF and two-level QBF,
//!   with brute-force oracles.
//! * [`postulates`]: checks of the four properties expected from a family of
//!   preferred repairs.
//! * [`io`]: the text and CSV file formats.
//!
//! ```
//! use prefrep::{fixtures, graph::{Budget, ConflictGraph}, lrepair, priority::Priority};
//!
//! let (inst, fds) = fixtures::emp_mgr();
//! let g = ConflictGraph::build(&inst, &fds);
//! // Mgr#1 is older than Mgr#2, so only repairs keeping Mgr#2 are preferred.
//! let older = Priority::from_pairs(inst.len(), [(3, 4)]).unwrap();
//! let preferred = lrepair::enumerate_lrepairs(&g, &older, &Budget::default()).unwrap();
//! assert_eq!(preferred.len(), 2);
//! assert!(preferred.iter().all(|r| r.contains(4)));
//! ```

pub mod error;
pub mod fixtures;
pub mod graph;
pub mod grepair;
pub mod io;
pub mod lrepair;
pub mod model;
pub mod postulates;
pub mod priority;
pub mod query;
pub mod reductions;
pub mod tupleset;

pub use error::{Error, Result};
pub use graph::{Budget, ConflictGraph};
pub use model::{AttrType, Fd, FdSet, Instance, RelationSchema, Schema, Tuple, TupleId, Value};
pub use priority::Priority;
pub use query::{Mode, Query};
pub use tupleset::{RepairSet, TupleSet};
