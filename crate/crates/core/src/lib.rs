//! Exact combinatorial engine for convolutions of the kernels `P_{ℓ,n}` built
//! from partial diagonals.
//!
//! Everything here is exact rational arithmetic over `alloc`; the crate is `no_std`.
//! IO, caching and the command line live in the companion `fmkernel-cli` crate.

#![no_std]

extern crate alloc;

pub mod cech;
pub mod diagcomb;
pub mod error;
pub mod fock;
pub mod kernelcalc;
pub mod lambda;
pub mod linalg;
pub mod permgroup;
pub mod wedge;

pub use error::{Error, Result};
pub use linalg::{Matrix, Q};
