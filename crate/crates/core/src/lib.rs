//! Shortest cycles under monotone submodular costs.
//!
//! The crate is organised around a value-oracle interface ([`oracle::SetFunction`])
//! and a shared [`graph::Multigraph`] type. On top of that sit
//!
//! * [`cycle`]: the rooted Dijkstra-like 2-approximation, path-family branching,
//!   the recursive approximation scheme, the exact solver for integer oracles
//!   and the edge-cost wrapper;
//! * [`planar`]: submodular min-cut on embedded planar multigraphs via the dual;
//! * [`adversary`]: the `G(k, p)` lower-bound instance, its cost functions and a
//!   query-recording adversary;
//! * [`wfh`]: Wide Family Hitting solvers and the reductions to and from
//!   hedge minimum cycle;
//! * [`corpus`] and [`io`]: seeded instance generators and the text formats used
//!   by the command-line front end.

pub mod adversary;
pub mod corpus;
pub mod cycle;
mod error;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod planar;
pub mod wfh;

pub use error::{Error, Result};
pub use fixedbitset::FixedBitSet;

/// Subsets of an oracle's ground set.
pub type ElementSet = FixedBitSet;

/// Builds an [`ElementSet`] over a ground set of `size` elements.
pub fn element_set<I: IntoIterator<Item = usize>>(size: usize, elements: I) -> ElementSet {
    let mut set = ElementSet::with_capacity(size);
    for e in elements {
        set.insert(e);
    }
    set
}
