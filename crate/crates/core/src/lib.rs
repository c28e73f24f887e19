//! Exact q-expansion workbench for the f-invariant of circle and quaternionic
//! transfers.
//!
//! The crate is layered bottom-up:
//!
//! * [`exactnum`]: rationals, cyclotomic numbers of level `N`, Bernoulli
//!   numbers, integer polynomials and polynomials in the formal parameter ε.
//! * [`qseries`]: truncated q-series with ε-polynomial coefficients.
//! * [`genus`]: level-`N` Eisenstein data of the Hirzebruch elliptic genus and
//!   floating point oracles built from the theta-type product `Φ(τ, x)`.
//! * [`divcong`]: bases of modular forms, Hermite normal forms and the
//!   equivalence test modulo divided congruences.
//! * [`fassembly`]: assembly of representatives from twisted spectral data,
//!   known representatives and end-to-end example pipelines.
//! * [`geometry`]: the spectral and geometric input for the examples.

pub mod divcong;
pub mod error;
pub mod exactnum;
pub mod fassembly;
pub mod genus;
pub mod geometry;
pub mod qseries;

pub use error::{Error, Result};
