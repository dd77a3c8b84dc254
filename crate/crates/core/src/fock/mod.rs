//! Truncated Fock-space states over labelled modes.
//!
//! States are stored sparsely: a [`DensityMatrix`] keeps its nonzero entries
//! as sorted `(row, col, value)` triplets over a mixed-radix [`Layout`]. The
//! channel states built here are extremely sparse (excitation-number selection
//! rules leave at most a handful of coherences per row), so spectra are
//! obtained block by block: the sparsity graph is split into connected
//! components and each component is diagonalised on its own, with a fast path
//! for components that are tridiagonal in index order.

mod blocks;
mod density;
mod layout;
mod pure;

pub use blocks::{BlockEigen, BlockVectors, JointBlocks};
pub use density::{hermitian_eigendecomposition, partial_trace, tensor_product, DensityMatrix, Marginals};
pub use layout::{Layout, ModeLabel, ModeName, Split};
pub use pure::{BranchSum, PureState};
