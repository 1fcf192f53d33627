//! Fusion-closed sets of a rational modular tensor category, computed from
//! fusion rules and conformal weights with exact cyclotomic arithmetic.
//!
//! The pipeline: [`fusion`] builds exact modular data, [`fcsets`] enumerates
//! the lattice of fusion-closed sets, [`partition`] splits primaries into
//! classes and blocks, [`center`] and [`galois`] study the center and the
//! Galois action, and [`local`] deconstructs local sets into twisted sectors.
//! Numerics ([`numeric`]) are only used to locate exact answers, which are
//! then verified in [`cyclo`].

#![allow(clippy::needless_range_loop)]

pub mod center;
pub mod config;
pub mod cyclo;
pub mod error;
pub mod fcsets;
pub mod fusion;
pub mod galois;
pub mod io;
pub mod linalg;
pub mod local;
pub mod numeric;
pub mod partition;
pub mod report;
pub mod suite;

pub use config::RunConfig;
pub use error::{Error, Result};

/// Exact rationals.
pub type Rational = num_rational::BigRational;
/// Elements of a cyclotomic field.
pub type Cyclo = cyclo::Cyclotomic;
/// Polynomials with cyclotomic coefficients, as used for spectra.
pub type SpectrumPoly = linalg::Poly<cyclo::Cyclotomic>;
/// Complex numbers at arbitrary binary precision.
pub type ComplexBig = num_complex::Complex<numeric::BigFloat>;
