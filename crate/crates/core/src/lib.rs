//! Exact computer algebra around fadelian rings.
//!
//! A ring is *fadelian* when every `x` can be written `x = a·b + c·a` for any
//! nonzero `a`, and *weakly fadelian* when this holds for `x = 1`. This crate
//! makes the constructive side of that theory executable:
//!
//! - [`field`]: the differential field `(ℚ(t), d/dt)`;
//! - [`ore`]: the operator ring `R[δ]` with `δ·a = a·δ + a'`, Euclidean
//!   division on both sides and common multiples;
//! - [`diag`] and [`oracle`]: reduction of square operator systems to
//!   diagonal form and their solution through pluggable scalar solvers;
//! - [`witness`]: weak and full fadelian witnesses in `R[δ]`, always verified
//!   before they are returned;
//! - [`series`]: lazy power and Laurent series, witness lifting and descent;
//! - [`finite`]: exhaustive checks of the general theorems on finite rings.

pub mod diag;
pub mod field;
pub mod finite;
mod linalg;
pub mod oracle;
pub mod ore;
pub mod ring;
pub mod series;
pub mod witness;

pub use field::{FieldError, Poly, RatFun};
pub use ore::{OrePoly, Side, Theta};
pub use ring::{DifferentialField, Rational, Ring};

/// Operators over the rational-function field, the crate's working ring.
pub type Op = OrePoly<RatFun>;
