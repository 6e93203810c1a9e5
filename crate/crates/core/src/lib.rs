//! Exact series calculus for the cyclic and Hochschild homology of graded
//! connected algebras.
//!
//! The crate has two halves that check each other:
//!
//! * a **series calculus**: truncated arithmetic in `Q[[z]][y]/(y^2-1)` and
//!   `Q[[x,z]][y]/(y^2-1)` ([`series`]), the exponential/logarithm
//!   transforms between the additive and multiplicative groups of such
//!   series ([`transforms`]), and the closed homology-series identities
//!   (degree-shift relation, Koszul duality remaps, HKR, strongly-free
//!   quotients, generic quadratic presets) in [`calculus`];
//! * a **brute-force oracle**: weighted signed alphabets and a
//!   degree-truncated noncommutative rewriting engine ([`words`],
//!   [`rewrite`]) feeding exact rational rank computations on truncated bar
//!   and Connes complexes ([`oracle`], [`linalg`]).
//!
//! All coefficients are exact rationals; there is no floating point
//! anywhere. Series arithmetic is generic over the [`scalar::Scalar`]
//! field; the concrete aliases below fix `num_rational::BigRational`.

pub mod calculus;
pub mod linalg;
pub mod oracle;
pub mod rewrite;
pub mod scalar;
pub mod series;
pub mod transforms;
pub mod words;

pub use scalar::{Parity, Scalar};

/// The coefficient field used throughout the artifact.
pub type Rat = num_rational::BigRational;

/// Two-variable series over [`Rat`].
pub type RatSeries = series::SignedSeries<Rat>;

/// Three-variable series over [`Rat`].
pub type RatTriSeries = series::TriSeries<Rat>;
