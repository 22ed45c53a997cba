//! Seeded random generators and proptest strategies for the fadel test
//! suites. Every generator keeps coefficients small so that exact
//! arithmetic stays fast.

use fadel_core::diag::LinearDiffSystem;
use fadel_core::{Op, Poly, RatFun, Rational, Ring};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn random_rational(rng: &mut TestRng, bound: i64) -> Rational {
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=bound.max(1));
    rational(num, den)
}

pub fn random_nonzero_rational(rng: &mut TestRng, bound: i64) -> Rational {
    loop {
        let q = random_rational(rng, bound);
        if !q.is_zero() {
            return q;
        }
    }
}

/// Polynomial of degree at most `degree`.
pub fn random_poly(rng: &mut TestRng, degree: usize, bound: i64) -> Poly {
    Poly::new((0..=degree).map(|_| random_rational(rng, bound)).collect())
}

/// Polynomial of degree at most `degree` with integer coefficients.
pub fn random_int_poly(rng: &mut TestRng, degree: usize, bound: i64) -> Poly {
    Poly::new((0..=degree).map(|_| Rational::from_int(rng.gen_range(-bound..=bound))).collect())
}

/// Rational function with numerator and denominator of degree at most 2.
pub fn random_ratfun(rng: &mut TestRng) -> RatFun {
    let num = random_poly(rng, 2, 4);
    loop {
        let den = random_int_poly(rng, 2, 3);
        if !den.is_zero() {
            return RatFun::new(num, den).expect("nonzero denominator");
        }
    }
}

pub fn random_nonzero_ratfun(rng: &mut TestRng) -> RatFun {
    loop {
        let f = random_ratfun(rng);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Operator of degree exactly `theta` with coefficients from `coeff`; the
/// leading coefficient is redrawn until nonzero.
pub fn random_op_with(rng: &mut TestRng, theta: usize, mut coeff: impl FnMut(&mut TestRng) -> RatFun) -> Op {
    let mut coeffs: Vec<RatFun> = (0..theta).map(|_| coeff(rng)).collect();
    let lead = loop {
        let c = coeff(rng);
        if !c.is_zero() {
            break c;
        }
    };
    coeffs.push(lead);
    Op::new(coeffs)
}

/// Operator of degree exactly `theta` with rational-function coefficients.
pub fn random_op(rng: &mut TestRng, theta: usize) -> Op {
    random_op_with(rng, theta, random_ratfun)
}

/// Operator of degree exactly `theta` with polynomial coefficients of
/// degree at most 2.
pub fn random_poly_op(rng: &mut TestRng, theta: usize) -> Op {
    random_op_with(rng, theta, |r| RatFun::from_poly(random_int_poly(r, 2, 3)))
}

/// Operator of degree exactly `theta` with constant coefficients.
pub fn random_const_op(rng: &mut TestRng, theta: usize) -> Op {
    random_op_with(rng, theta, |r| RatFun::from_rational(random_rational(r, 3)))
}

/// Square system whose diagonal has degree `degrees[i]` and whose
/// off-diagonal entries in row `i` have degree below `degrees[i]`, built with
/// `entry(rng, theta)`. The right-hand side is `rhs`.
pub fn dominant_system(
    rng: &mut TestRng,
    degrees: &[usize],
    mut entry: impl FnMut(&mut TestRng, usize) -> Op,
    rhs: Vec<RatFun>,
) -> LinearDiffSystem<RatFun> {
    let n = degrees.len();
    let matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        entry(rng, degrees[i])
                    } else if degrees[i] == 0 || rng.gen_bool(0.3) {
                        Op::zero()
                    } else {
                        let theta = rng.gen_range(0..degrees[i]);
                        entry(rng, theta)
                    }
                })
                .collect()
        })
        .collect();
    LinearDiffSystem::new(matrix, rhs).expect("square by construction")
}

pub fn arb_rational(bound: i64) -> impl Strategy<Value = Rational> {
    (-bound..=bound, 1..=bound.max(1)).prop_map(|(n, d)| rational(n, d))
}

pub fn arb_poly(max_degree: usize, bound: i64) -> impl Strategy<Value = Poly> {
    prop::collection::vec(arb_rational(bound), 0..=max_degree + 1).prop_map(Poly::new)
}

pub fn arb_ratfun() -> impl Strategy<Value = RatFun> {
    let den = prop::collection::vec(-3i64..=3, 1..=3)
        .prop_map(|c| Poly::from_ints(&c))
        .prop_filter("nonzero denominator", |p| !p.is_zero());
    (arb_poly(2, 4), den).prop_map(|(n, d)| RatFun::new(n, d).expect("nonzero denominator"))
}

pub fn arb_nonzero_ratfun() -> impl Strategy<Value = RatFun> {
    arb_ratfun().prop_filter("nonzero", |f| !f.is_zero())
}

/// Operators of degree at most `max_theta` (possibly zero).
pub fn arb_op(max_theta: usize) -> impl Strategy<Value = Op> {
    prop::collection::vec(arb_ratfun(), 0..=max_theta + 1).prop_map(Op::new)
}

pub fn arb_nonzero_op(max_theta: usize) -> impl Strategy<Value = Op> {
    arb_op(max_theta).prop_filter("nonzero", |op| !op.is_zero())
}

/// Nonzero operators with integer polynomial coefficients.
pub fn arb_poly_op(max_theta: usize) -> impl Strategy<Value = Op> {
    let coeff = prop::collection::vec(-3i64..=3, 0..=3).prop_map(|c| RatFun::from_ints(&c));
    prop::collection::vec(coeff, 1..=max_theta + 1).prop_map(Op::new).prop_filter("nonzero", |op| !op.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_seeded() {
        let a = random_op(&mut rng(7), 3);
        let b = random_op(&mut rng(7), 3);
        assert_eq!(a, b);
        assert_eq!(a.theta(), fadel_core::Theta::Finite(3));
    }

    #[test]
    fn dominant_systems_are_dominant() {
        let mut r = rng(1);
        for _ in 0..20 {
            let sys = dominant_system(&mut r, &[2, 1, 3], random_poly_op, vec![RatFun::one(); 3]);
            assert!(sys.check_dominance());
        }
    }
}
