//! Exact Heegaard Floer computations for rational Dehn surgeries on knots in
//! the three-sphere.
//!
//! The input is a finite model of the bifiltered complex `CFK∞(S³, K)`
//! ([`cfk::KnotComplex`]). From it the crate builds truncated quotient
//! complexes `A⁺ₛ` and `B⁺` ([`acomplex`]), assembles the truncated mapping
//! cone for a slope `p/q` ([`surgery`]) and reads off correction terms and
//! reduced homology per Spin^c structure. [`detect`] layers the genus-one
//! detection diagnostics on top, and [`cli`] is the command-line front end.
//!
//! All arithmetic is exact: integer linear algebra falls back to
//! arbitrary-precision integers on overflow, degrees are rationals.

pub mod acomplex;
pub mod cfk;
pub mod cli;
pub mod detect;
pub mod homology;
pub mod par;
pub mod surgery;

mod error;

pub use error::{Error, Result};

/// Exact rational number used for all gradings.
pub type Rational = num_rational::Ratio<i64>;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n)
}
