//! Eisenstein–Kronecker numbers and Kronecker theta expansions for elliptic
//! curves with complex multiplication.
//!
//! The crate has three arithmetic regimes that share one power-series layer:
//!
//! * exact rational and imaginary-quadratic coefficients ([`coeffring::ExactScalar`]),
//! * arbitrary-precision complex numbers ([`coeffring::BigComplex`]),
//! * fixed-precision unramified p-adic numbers ([`coeffring::PadicScalar`]).
//!
//! [`curvelattice`] holds the curve catalog, Weierstrass/sigma/theta series and
//! period lattices, [`eklerch`] evaluates Eisenstein–Kronecker–Lerch series
//! numerically, [`kronecker`] builds and checks expansions of the two-variable
//! theta function, and [`padicmeasure`] turns the composed expansion into a
//! p-adic measure.

pub mod coeffring;
pub mod curvelattice;
pub mod eklerch;
pub mod error;
pub mod kronecker;
pub mod padicmeasure;
pub mod powerseries;

pub use error::{Error, Result};
