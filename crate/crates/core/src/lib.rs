//! Field states and information measures for inertial-to-accelerated
//! communication through a two-mode-squeezing (Unruh) channel.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs; IO, CLI and parallel sweeps live in the `rqichan`
//! companion crate.
//!
//! Module map:
//! - [`numerics`]: convergence-tested series, polylog / Lerch / pFq, acceleration maps
//! - [`linalg`]: small dense complex matrices and Hermitian eigensolvers
//! - [`fock`]: sparse multi-mode density matrices over truncated Fock spaces
//! - [`channel`]: squeezed states and encoded channel outputs
//! - [`infotheory`]: entropies, Holevo/coherent information, fidelity, closed forms
//! - [`estimation`]: quantum Fisher information and the Cramér-Rao bound
//! - [`optimize`]: sweeps, adaptive truncation, capacity optimisation, decay fits

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod channel;
pub mod error;
pub mod estimation;
pub mod fock;
pub mod infotheory;
pub mod linalg;
pub mod numerics;
pub mod optimize;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
