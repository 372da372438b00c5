//! Exact-arithmetic sandpile groups of polygon chains and polygon flowers.
//!
//! A polygon chain stacks polygons edge-to-edge; a polygon flower glues a
//! chain onto every edge of a central cycle. Their sandpile (critical)
//! groups admit closed forms driven entirely by per-petal spanning-tree
//! counts, so the group of a large graph falls out of a t x t relation
//! matrix instead of the n x n reduced Laplacian. This crate implements
//! those closed forms next to independent brute-force oracles (matrix-tree
//! counts and Smith normal forms of two different presentations) so that
//! every formula can be checked against ground truth on the same graphs.
//!
//! Modules:
//! * [`graph`]: labeled multigraphs, chain/flower builders, deletion,
//!   contraction, Laplacians.
//! * [`matrix`]: arbitrary-precision matrices, Smith normal form,
//!   determinants, determinant divisors.
//! * [`group`]: finite abelian groups in invariant-factor form.
//! * [`chain`]: spanning-tree recurrences and edge orders for chains.
//! * [`flower`]: the flower relation matrix, group structure, generator
//!   classification, prime partitions.
//! * [`oracle`]: matrix-tree and SNF ground truth.
//! * [`sweep`]: exhaustive formula-vs-oracle verification over small specs.
//! * [`report`]: spec files and report types used by the CLI.

pub mod chain;
pub mod error;
pub mod flower;
pub mod graph;
pub mod group;
pub mod matrix;
pub mod oracle;
pub mod report;
pub mod sweep;

pub use error::{Error, Result};
pub use graph::{build_chain, build_flower, ChainSpec, EdgeLabel, FlowerSpec, Multigraph};
pub use group::AbelianGroup;
pub use matrix::{group_from_matrix, IntMatrix};
