//! Fast subset convolution and the subset-lattice product family.
//!
//! Set functions over an `n`-element ground set are stored densely, indexed
//! by bitmask (element `i` of `{1, …, n}` is bit `i - 1`). On top of the
//! zeta/Möbius and Walsh–Hadamard transforms the crate provides ring-valued
//! products (subset convolution, covering, packing, intersecting covering,
//! exact-intersection and XOR), their min-sum / max-sum counterparts through
//! an integer embedding, and a handful of exact solvers built on them:
//! Steiner trees, partition and coloring counts, hierarchical branching
//! expectations, color-coding pathway search and hypergraph spanning
//! problems.
//!
//! Everything is exact. Rings are passed explicitly as context objects so
//! that an operation-counting wrapper can be slotted in without touching the
//! kernels.

pub mod combi;
pub mod error;
pub mod graph;
pub mod hyper;
pub mod mask;
pub mod optimize;
pub mod oracle;
pub mod par;
pub mod products;
pub mod ring;
pub mod setfn;
pub mod steiner;
pub mod transform;
mod word;

pub use error::{Error, Result};
pub use mask::{iterate_subsets, GroundSet, Mask, MAX_GROUND};
pub use optimize::{ExtendedWeight, ExtendedWeightFunction, OptMode};
pub use products::ProductMode;
pub use ring::{BigIntRing, CheckedWord, Counting, OpCounter, RationalRing, Ring};
pub use setfn::SetFunction;
pub use transform::RankedTable;
