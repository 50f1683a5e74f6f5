//! Two-dimensional nearest-neighbor backend.
//!
//! The log-depth staircase recursion is a binary tree: level `l` combines the
//! bottoms of two level-`l - 1` groups. Data wires sit on the leaves of an
//! H-tree embedded in a grid and every other cell holds a routing ancilla.
//! Each gate of a level gathers its qubits next to its target by swapping
//! along a short path and then swaps back; path lengths shrink geometrically
//! towards the leaves, so the total depth is `O(sqrt(m))`. The base case is
//! reached through a full row-column-row permutation network.

mod compile;
mod embed;
mod route;

pub use compile::{compile_mn_2d, lightcone_bound, GridLayout};
pub use embed::{embed_tree, Cell, EdgePath, TreeEmbedding};
pub use route::{route_permutation, route_swaps};

#[derive(Debug, thiserror::Error)]
pub enum Grid2dError {
    #[error("a tree needs at least one leaf")]
    NoLeaves,
    #[error("not a bijection on {cells} cells: {detail}")]
    NotABijection { cells: usize, detail: String },
    #[error("no free path to cell ({0}, {1})")]
    Unroutable(usize, usize),
    #[error("staircase has no gates")]
    Empty,
    #[error(transparent)]
    Parallel(#[from] qcasc_parallel::ParallelError),
    #[error(transparent)]
    Ir(#[from] qcasc_ir::IrError),
}
