//! Tournament toolkit: constructive Hamilton cycle machinery for dense digraphs.
//!
//! The crate is organised around a dense bit-matrix digraph type and a set of
//! cooperating solvers:
//!
//! - [`graph`]: digraphs, tournaments, paths/cycles, deterministic generators
//!   and the on-disk text format.
//! - [`connectivity`]: vertex-disjoint path (Menger) solver and exact strong
//!   vertex connectivity via unit-capacity flows.
//! - [`hamilton`]: classical Hamilton paths/cycles in tournaments plus
//!   independent validators and a brute-force oracle.
//! - [`sortnet`]: Batcher odd-even comparator networks, the zero-one sorting
//!   oracle, and permutation tracing.
//! - [`linkage`]: comparator networks embedded into tournaments as switch
//!   gadgets, and the k-linkage solvers built on them.
//! - [`pathcover`]: path covers with degree-based size guarantees and the
//!   head/tail extension transformations.
//! - [`domination`]: covering edges and small transitive almost-dominating
//!   sets and families.
//! - [`engine`]: the full pipeline extracting k edge-disjoint Hamilton cycles
//!   from a highly connected tournament, with machine-checkable certificates.
//! - [`extremal`]: the layered tournament family whose regular-subdigraph
//!   ceiling shows the connectivity requirements are close to sharp.
//!
//! Everything is deterministic: identical inputs, seeds and configuration
//! produce identical outputs, byte for byte.

pub mod bits;
pub mod connectivity;
pub mod domination;
pub mod engine;
pub mod error;
pub mod extremal;
pub mod flow;
pub mod graph;
pub mod hamilton;
pub mod linkage;
pub mod pathcover;
pub mod rng;
pub mod sortnet;

pub use error::Error;
pub use graph::{Cycle, Digraph, Path, PathSystem};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
