//! The differential field `(ℚ(t), d/dt)`: exact polynomials and rational
//! functions in one variable over arbitrary-precision rationals.

mod poly;
mod ratfun;

pub use poly::Poly;
pub use ratfun::RatFun;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
}
