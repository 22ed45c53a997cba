use std::fmt;
use std::ops;

use super::poly::Poly;
use super::FieldError;
use crate::ring::{DifferentialField, Rational, Ring};

/// Element of the differential field `(ℚ(t), d/dt)`.
///
/// Canonical form: the denominator is monic and coprime to the numerator,
/// and zero is `0/1`. Two values are equal iff their representations are.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFun { num, den: Poly::one() };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() { (num, den) } else { (exact(&num, &g), exact(&den, &g)) };
        let lead = den.leading().expect("nonzero denominator").clone();
        if lead.is_one() {
            RatFun { num, den }
        } else {
            let inv = lead.recip();
            RatFun { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn from_rational(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// Integer-coefficient polynomial, ascending powers.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_poly(Poly::from_ints(coeffs))
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        Self::from_poly(Poly::t())
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value as a rational constant, if it is one.
    pub fn as_constant(&self) -> Option<Rational> {
        (self.is_polynomial() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn try_inv(&self) -> Result<Self, FieldError> {
        if self.num.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn try_div(&self, rhs: &RatFun) -> Result<Self, FieldError> {
        Ok(Ring::mul(self, &rhs.try_inv()?))
    }

    /// True when the value prints as one signed product, so it can appear as
    /// an operator coefficient without parentheses.
    pub(crate) fn is_atomic(&self) -> bool {
        self.num.is_monomial() && self.den.is_one()
    }
}

fn exact(p: &Poly, d: &Poly) -> Poly {
    if d.is_one() {
        return p.clone();
    }
    p.div_exact(d).expect("divisor of a gcd")
}

impl Ring for RatFun {
    fn zero() -> Self {
        RatFun { num: Poly::zero(), den: Poly::one() }
    }

    fn one() -> Self {
        RatFun { num: Poly::one(), den: Poly::one() }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return Self::normalized(self.num.add(&rhs.num), self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        let ld = exact(&self.den, &g);
        let rd = exact(&rhs.den, &g);
        let num = self.num.mul(&rd).add(&rhs.num.mul(&ld));
        Self::normalized(num, ld.mul(&rhs.den))
    }

    fn neg(&self) -> Self {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = exact(&self.num, &g1);
        let d2 = exact(&rhs.den, &g1);
        let n2 = exact(&rhs.num, &g2);
        let d1 = exact(&self.den, &g2);
        // Cross-cancelled factors of canonical inputs are already coprime.
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lead = den.leading().expect("nonzero denominator").clone();
        if lead.is_one() {
            RatFun { num, den }
        } else {
            let inv = lead.recip();
            RatFun { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_int(n))
    }
}

impl DifferentialField for RatFun {
    fn inv(&self) -> Option<Self> {
        self.try_inv().ok()
    }

    /// Quotient rule with `g = gcd(d, d')`:
    /// `(n/d)' = (n'·(d/g) - n·(d'/g)) / (d·(d/g))`.
    fn derive(&self) -> Self {
        if self.den.is_one() {
            return Self::from_poly(self.num.derivative());
        }
        let dd = self.den.derivative();
        let g = self.den.gcd(&dd);
        let (d_g, dd_g) = if g.is_one() { (self.den.clone(), dd) } else { (exact(&self.den, &g), exact(&dd, &g)) };
        let num = self.num.derivative().mul(&d_g).sub(&self.num.mul(&dd_g));
        Self::normalized(num, self.den.mul(&d_g))
    }

    fn size_hint(&self) -> usize {
        let bits = |p: &Poly| p.coeffs().iter().map(|c| (c.numer().bits() + c.denom().bits()) as usize).sum::<usize>();
        bits(&self.num) + bits(&self.den)
    }
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl From<i64> for RatFun {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for RatFun {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

macro_rules! forward_binop {
    ($imp:ident, $method:ident, $ring:path) => {
        impl ops::$imp<&RatFun> for &RatFun {
            type Output = RatFun;
            fn $method(self, rhs: &RatFun) -> RatFun {
                $ring(self, rhs)
            }
        }
        impl ops::$imp<RatFun> for RatFun {
            type Output = RatFun;
            fn $method(self, rhs: RatFun) -> RatFun {
                $ring(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, Ring::add);
forward_binop!(Sub, sub, Ring::sub);
forward_binop!(Mul, mul, Ring::mul);

impl ops::Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        Ring::neg(&self)
    }
}

impl ops::Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        Ring::neg(self)
    }
}

/// Compact form accepted by the CLI grammar, e.g. `2*t/(t^2-1)`.
impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.is_monomial() {
            write!(f, "{}", self.num)?;
        } else {
            write!(f, "({})", self.num)?;
        }
        // A monic monomial denominator is t^k.
        if self.den.is_monomial() {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> RatFun {
        RatFun::t()
    }

    fn p(c: &[i64]) -> RatFun {
        RatFun::from_ints(c)
    }

    #[test]
    fn inverse_law() {
        assert_eq!(&t() * &t().try_inv().unwrap(), RatFun::one());
        let q = p(&[1, 0, 1]);
        assert_eq!(&q.try_inv().unwrap() * &q, RatFun::one());
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        assert_eq!(RatFun::zero().try_inv(), Err(FieldError::DivisionByZero));
        assert!(RatFun::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn partial_fractions_combine() {
        // Cross-multiplication by hand: (t+1 + t-1) / ((t-1)(t+1)) = 2t/(t^2-1).
        let a = p(&[-1, 1]).try_inv().unwrap();
        let b = p(&[1, 1]).try_inv().unwrap();
        let expected = RatFun::new(Poly::from_ints(&[0, 2]), Poly::from_ints(&[-1, 0, 1])).unwrap();
        assert_eq!(&a + &b, expected);
        assert_eq!(expected.to_string(), "2*t/(t^2-1)");
    }

    #[test]
    fn canonical_form() {
        // (2t^2 - 2) / (4t - 4) = (1/2 t + 1/2) / 1
        let f = RatFun::new(Poly::from_ints(&[-2, 0, 2]), Poly::from_ints(&[-4, 4])).unwrap();
        assert!(f.is_polynomial());
        assert_eq!(f.numer(), &Poly::new(vec![Rational::new(1.into(), 2.into()); 2]));
        let g = RatFun::new(Poly::from_ints(&[3]), Poly::from_ints(&[0, -2])).unwrap();
        assert!(g.denom().is_monic());
        assert_eq!(g.to_string(), "-3/2/t");
    }

    #[test]
    fn derivatives() {
        assert!(RatFun::one().derive().is_zero());
        assert_eq!(t().derive(), RatFun::one());
        // (1/t)' = -1/t^2
        let inv_t = t().try_inv().unwrap();
        let expected = (&t() * &t()).try_inv().unwrap().neg();
        assert_eq!(inv_t.derive(), expected);
        assert_eq!(expected.to_string(), "-1/t^2");
    }

    #[test]
    fn display_forms() {
        let f = RatFun::new(Poly::from_ints(&[1, 0, 1]), Poly::from_ints(&[-1, 1])).unwrap();
        assert_eq!(f.to_string(), "(t^2+1)/(t-1)");
        assert_eq!(RatFun::zero().to_string(), "0");
    }
}
