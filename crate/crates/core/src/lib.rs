//! Exact construction and certified verification of arbitrary-order
//! two-sided Shafer-type bounds for `arctan x`.
//!
//! Three bound families refine Shafer's inequality `3x/(1+2 sqrt(1+x²)) < arctan x`:
//!
//! * [`Theorem::T1`]: `arctan x - 3x/(1+2 sqrt(1+x²))` bracketed by partial
//!   sums of `Σ (-1)^m C(m) x^(2m+1)` on `(0, sqrt(3)/2]`;
//! * [`Theorem::T2`]: `(3x + Σ (-1)^m E(m) x^(2m+1)) / (1+2 sqrt(1+x²))`
//!   bracketing `arctan x` on `(0, 1]`;
//! * [`Theorem::T3`]: `arctan x - 2x/(1+sqrt(1+x²))` bracketed by partial
//!   sums on `(0, 1]`.
//!
//! All coefficients are exact rationals ([`coefficients`]), every identity the
//! constructions rely on is machine-checked ([`identities`]), and
//! [`bounds`] evaluates the families with certified rational intervals against
//! an independent arctangent enclosure.

pub mod bounds;
pub mod coefficients;
pub mod exact;
pub mod identities;

pub use bounds::{BoundFamily, BoundsError, DomainEnd, Side, Theorem, Verdict, VerificationReport};
pub use coefficients::{CoefficientError, CoefficientTable, Family, SeriesEnclosure};
pub use exact::{ArithError, ExactRational, RationalInterval};
pub use identities::{IdentityId, IdentityVerdict};
