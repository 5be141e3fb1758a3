//! Spectral theory toolkit for the non-commutative matrix harmonic oscillator
//!
//! ```text
//! H_{A,B} = B(-d²/dx²) + A x²   on L²(R; C²)
//! ```
//!
//! with `A`, `B` positive definite 2×2 Hermitian matrices.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs: pair validation and canonical reduction
//! ([`matrix`]), the Hermite-basis block-tridiagonal representation of the two
//! parity sectors ([`operator`]), a dense Hermitian eigensolver ([`eigen`]),
//! truncated spectra and their classical oracles ([`spectrum`]), the
//! closed-form four-term eigenfunctions ([`closed_form`]) and the geometry of
//! the parameter sets on which those exist ([`region`]).

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod closed_form;
pub mod eigen;
mod error;
pub mod matrix;
pub mod operator;
pub mod region;
pub mod roots;
pub mod spectrum;

pub use error::{Error, Result, Which};
pub use num_complex::Complex64;

/// A vector in C².
pub type C2 = [Complex64; 2];

pub use closed_form::{BetaRoot, BetaRoots, BetaSign, ClosedFormSolution};
pub use matrix::{CanonicalParams, Herm2, HermitianPair};
pub use operator::{CoeffVector, Parity, SectorOperator};
pub use region::{RegionSample, ScanGrid, Tetrad};
pub use spectrum::SpectralResult;
