//! Scalar solvers for `P(b) = g` with `P ∈ R[δ]` and `g, b ∈ R`.
//!
//! Over a differentially closed field every nonzero operator is surjective
//! and such equations always have solutions. `ℚ(t)` is far from that, so the
//! solvers here are partial: a returned value always satisfies the equation,
//! while `None` only means that this solver found nothing.

use crate::field::{Poly, RatFun};
use crate::linalg::solve_rational;
use crate::ore::OrePoly;
use crate::ring::{DifferentialField, Rational, Ring};

/// Default degree bound of [`PolynomialOracle`].
pub const DEFAULT_POLY_BOUND: usize = 16;

pub trait SurjectivityOracle<F> {
    /// A solution of `op(b) = rhs`, or `None` if none was found.
    fn solve_scalar(&self, op: &OrePoly<F>, rhs: &F) -> Option<F>;
}

impl<F, O: SurjectivityOracle<F> + ?Sized> SurjectivityOracle<F> for &O {
    fn solve_scalar(&self, op: &OrePoly<F>, rhs: &F) -> Option<F> {
        (**self).solve_scalar(op, rhs)
    }
}

impl<F, O: SurjectivityOracle<F> + ?Sized> SurjectivityOracle<F> for Box<O> {
    fn solve_scalar(&self, op: &OrePoly<F>, rhs: &F) -> Option<F> {
        (**self).solve_scalar(op, rhs)
    }
}

/// Tries the first oracle, then the second.
impl<F, A, B> SurjectivityOracle<F> for (A, B)
where
    A: SurjectivityOracle<F>,
    B: SurjectivityOracle<F>,
{
    fn solve_scalar(&self, op: &OrePoly<F>, rhs: &F) -> Option<F> {
        self.0.solve_scalar(op, rhs).or_else(|| self.1.solve_scalar(op, rhs))
    }
}

/// Solves order-zero equations `a·b = g` by field division.
#[derive(Clone, Copy, Debug, Default)]
pub struct Order0Oracle;

impl<F: DifferentialField> SurjectivityOracle<F> for Order0Oracle {
    fn solve_scalar(&self, op: &OrePoly<F>, rhs: &F) -> Option<F> {
        match op.coeffs() {
            [a] => rhs.div(a),
            _ => None,
        }
    }
}

/// Looks for a polynomial solution of degree at most `bound` by undetermined
/// coefficients, returning one of minimal degree. Free coefficients are set
/// to zero, so the answer is deterministic.
#[derive(Clone, Copy, Debug)]
pub struct PolynomialOracle {
    pub bound: usize,
}

impl Default for PolynomialOracle {
    fn default() -> Self {
        PolynomialOracle { bound: DEFAULT_POLY_BOUND }
    }
}

impl PolynomialOracle {
    pub fn new(bound: usize) -> Self {
        PolynomialOracle { bound }
    }
}

fn lcm(a: &Poly, b: &Poly) -> Poly {
    let g = a.gcd(b);
    a.mul(b).div_exact(&g).expect("gcd divides").monic()
}

impl SurjectivityOracle<RatFun> for PolynomialOracle {
    fn solve_scalar(&self, op: &OrePoly<RatFun>, rhs: &RatFun) -> Option<RatFun> {
        if op.is_zero() {
            return rhs.is_zero().then(RatFun::zero);
        }
        // Clear every denominator once; images of t^k then become polynomials.
        let den = op.coeffs().iter().fold(rhs.denom().clone(), |acc, c| lcm(&acc, c.denom()));
        let scale = RatFun::from_poly(den);
        let target = (&scale * rhs).numer().clone();
        let images: Vec<Poly> = (0..=self.bound)
            .map(|k| {
                let img = &scale * &op.apply(&RatFun::from_poly(Poly::monomial(Rational::one(), k)));
                debug_assert!(img.is_polynomial());
                img.numer().clone()
            })
            .collect();
        for degree in 0..=self.bound {
            let cols = degree + 1;
            let height =
                images[..cols].iter().filter_map(Poly::degree).chain(target.degree()).max().map_or(0, |d| d + 1);
            let matrix: Vec<Vec<Rational>> =
                (0..height).map(|row| images[..cols].iter().map(|img| img.coeff(row)).collect()).collect();
            let rhs_col: Vec<Rational> = (0..height).map(|row| target.coeff(row)).collect();
            if let Some(beta) = solve_rational(matrix, rhs_col, cols) {
                let sol = RatFun::from_poly(Poly::new(beta));
                debug_assert_eq!(&op.apply(&sol), rhs);
                return Some(sol);
            }
        }
        None
    }
}

/// Order-zero division first, then polynomial search with the given bound.
pub fn standard_oracle(bound: usize) -> (Order0Oracle, PolynomialOracle) {
    (Order0Oracle, PolynomialOracle::new(bound))
}

/// Always gives up; exercises the failure paths.
#[derive(Clone, Copy, Debug, Default)]
pub struct NullOracle;

impl<F> SurjectivityOracle<F> for NullOracle {
    fn solve_scalar(&self, _: &OrePoly<F>, _: &F) -> Option<F> {
        None
    }
}
