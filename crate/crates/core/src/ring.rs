//! Algebraic contracts shared by every layer of the crate.
//!
//! [`Ring`] is deliberately minimal: unital, not assumed commutative, with
//! exact equality. [`DifferentialField`] adds field inversion and a derivation;
//! its implementors are commutative fields, which is what the operator layer
//! relies on when it moves scalars past each other.

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// A unital ring with exact, decidable equality.
pub trait Ring: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Image of an integer under the unique ring morphism from ℤ.
    fn from_int(n: i64) -> Self {
        let mut acc = Self::zero();
        let unit = if n < 0 { Self::one().neg() } else { Self::one() };
        for _ in 0..n.unsigned_abs() {
            acc = acc.add(&unit);
        }
        acc
    }
}

/// A commutative field equipped with a derivation `a ↦ a'`.
///
/// The derivation must be additive and satisfy the Leibniz rule
/// `(ab)' = a'b + ab'`.
pub trait DifferentialField: Ring {
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn derive(&self) -> Self;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    /// Rough size of the representation; only used to prefer small pivots.
    fn size_hint(&self) -> usize {
        0
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
}

/// `ℚ` with the zero derivation.
impl DifferentialField for Rational {
    fn inv(&self) -> Option<Self> {
        rational_inv(self)
    }

    fn derive(&self) -> Self {
        Zero::zero()
    }
}

/// Field inverse of a rational, `None` for zero.
pub fn rational_inv(q: &Rational) -> Option<Rational> {
    if Zero::is_zero(q) {
        None
    } else {
        Some(q.recip())
    }
}

/// Binomial coefficients `C(m, k)` as ring elements, zero outside `0 ≤ k ≤ m`.
///
/// Rows are built by Pascal's rule, so the table is exact in any ring.
#[derive(Clone, Debug)]
pub struct Binomials<R> {
    rows: Vec<Vec<R>>,
}

impl<R: Ring> Binomials<R> {
    pub fn new() -> Self {
        Binomials { rows: vec![vec![R::one()]] }
    }

    pub fn get(&mut self, m: i64, k: i64) -> R {
        if m < 0 || k < 0 || k > m {
            return R::zero();
        }
        let (m, k) = (m as usize, k as usize);
        while self.rows.len() <= m {
            let prev = self.rows.last().expect("row 0 always present");
            let mut next = Vec::with_capacity(prev.len() + 1);
            next.push(R::one());
            for w in prev.windows(2) {
                next.push(w[0].add(&w[1]));
            }
            next.push(R::one());
            self.rows.push(next);
        }
        self.rows[m][k].clone()
    }
}

impl<R: Ring> Default for Binomials<R> {
    fn default() -> Self {
        Self::new()
    }
}

pub(crate) fn rational_is_negative(q: &Rational) -> bool {
    q.is_negative()
}
