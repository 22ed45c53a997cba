use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;

use crate::ring::{rational_is_negative, Rational, Ring};

/// Dense univariate polynomial in `t` over ℚ, coefficients stored by ascending
/// power. The highest stored coefficient is never zero; the zero polynomial
/// is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Ring::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, power: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); power + 1];
        coeffs[power] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Ring::is_one)
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let (ca, a) = content_split(self);
        let (cb, b) = content_split(rhs);
        let scale = ca * cb;
        let mut out = vec![BigInt::from(0); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if is_zero_int(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Poly::new(out.into_iter().map(|c| Rational::from_integer(c) * &scale).collect())
    }

    /// `self / divisor` when the division is exact, else `None`.
    ///
    /// # Panics
    ///
    /// Panics if `divisor` is zero.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        // Over ℤ, a primitive divisor of a primitive polynomial has an
        // integral cofactor.
        let (ca, mut a) = content_split(self);
        let (cd, d) = content_split(divisor);
        if a.len() < d.len() {
            return None;
        }
        let n = d.len() - 1;
        let lead = &d[n];
        let mut quot = vec![BigInt::from(0); a.len() - n];
        for k in (n..a.len()).rev() {
            let (q, r) = a[k].div_rem(lead);
            if !is_zero_int(&r) {
                return None;
            }
            if is_zero_int(&q) {
                continue;
            }
            for (i, c) in d.iter().enumerate() {
                a[k - n + i] -= &q * c;
            }
            quot[k - n] = q;
        }
        if !a[..n].iter().all(is_zero_int) {
            return None;
        }
        let scale = ca / cd;
        Some(Poly::new(quot.into_iter().map(|c| Rational::from_integer(c) * &scale).collect()))
    }

    /// Quotient and remainder of division by a nonzero polynomial.
    ///
    /// # Panics
    ///
    /// Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lead_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree().filter(|&s| s >= dd) else {
            return (Poly::zero(), self.clone());
        };
        let mut quot = vec![Rational::zero(); sd - dd + 1];
        for k in (dd..=sd).rev() {
            let c = &rem[k] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + i] -= &c * d;
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Scales to leading coefficient one; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) if !l.is_one() => self.scale(&l.recip()),
            _ => self.clone(),
        }
    }

    /// Monic greatest common divisor. `gcd(0, 0) = 0`.
    ///
    /// Computed from images modulo word-sized primes, combined by the
    /// Chinese remainder theorem and confirmed by trial division.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Poly::one();
        }
        modular_gcd(self, other)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_int(i as i64)).collect())
    }

    pub fn eval(&self, at: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * at + c)
    }

    /// True when the polynomial prints as a single signed term.
    pub(crate) fn is_monomial(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() <= 1
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for b in BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for b in BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Primes below 2^61 in decreasing order.
fn primes() -> impl Iterator<Item = u64> {
    (1..(1u64 << 61)).rev().step_by(2).filter(|&n| is_prime(n))
}

fn int_mod(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.iter_u64_digits().next().unwrap_or(0)
}

/// Monic gcd of two nonempty polynomials over ℤ/p.
fn gcd_mod(mut x: Vec<u64>, mut y: Vec<u64>, p: u64) -> Vec<u64> {
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let lead_inv = inv_mod(*y.last().expect("nonempty"), p);
        while x.len() >= y.len() {
            let f = mul_mod(*x.last().expect("nonempty"), lead_inv, p);
            let off = x.len() - y.len();
            for (i, c) in y.iter().enumerate() {
                x[off + i] = (x[off + i] + p - mul_mod(f, *c, p)) % p;
            }
            while x.last() == Some(&0) {
                x.pop();
            }
        }
        std::mem::swap(&mut x, &mut y);
    }
    let lead_inv = inv_mod(*x.last().expect("nonempty"), p);
    x.iter().map(|&c| mul_mod(c, lead_inv, p)).collect()
}

/// Representative of `v mod m` in `(-m/2, m/2]`.
fn symmetric(v: &BigInt, m: &BigInt) -> BigInt {
    let r = v.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn divides(d: &Poly, p: &Poly) -> bool {
    p.div_exact(d).is_some()
}

/// Brown-style modular gcd. The target is `lc · G / lc(G)`, where `G` is the
/// primitive gcd and `lc = gcd(lc(a), lc(b))`, whose image mod `p` is
/// `lc · gcd_p(a, b)` for all but finitely many primes.
fn modular_gcd(a: &Poly, b: &Poly) -> Poly {
    let (ia, ib) = (primitive_part(a), primitive_part(b));
    let (la, lb) = (ia.last().expect("nonzero"), ib.last().expect("nonzero"));
    let lc = la.gcd(lb);
    let mut modulus = BigInt::from(1);
    let mut acc: Vec<BigInt> = Vec::new();
    let mut degree = usize::MAX;
    let mut last: Option<Vec<BigInt>> = None;
    for p in primes() {
        if int_mod(la, p) == 0 || int_mod(lb, p) == 0 {
            continue;
        }
        let xa: Vec<u64> = ia.iter().map(|c| int_mod(c, p)).collect();
        let xb: Vec<u64> = ib.iter().map(|c| int_mod(c, p)).collect();
        let g = gcd_mod(xa, xb, p);
        let d = g.len() - 1;
        if d == 0 {
            return Poly::one();
        }
        if d > degree {
            continue;
        }
        let lc_p = int_mod(&lc, p);
        let image: Vec<u64> = g.iter().map(|&c| mul_mod(c, lc_p, p)).collect();
        if d < degree {
            degree = d;
            modulus = BigInt::from(p);
            acc = image.into_iter().map(BigInt::from).collect();
            last = None;
            continue;
        }
        // x ≡ acc (mod M), x ≡ image (mod p)
        let m_inv = inv_mod(int_mod(&modulus, p), p);
        for (c, &r) in acc.iter_mut().zip(&image) {
            let diff = (r + p - int_mod(c, p)) % p;
            *c += &modulus * BigInt::from(mul_mod(diff, m_inv, p));
        }
        modulus *= BigInt::from(p);
        let candidate: Vec<BigInt> = acc.iter().map(|c| symmetric(c, &modulus)).collect();
        if last.as_ref() == Some(&candidate) {
            let g = from_integers(primitive_part_int(candidate.clone())).monic();
            if divides(&g, a) && divides(&g, b) {
                return g;
            }
        }
        last = Some(candidate);
    }
    unreachable!("infinitely many primes")
}

/// Integer coefficients of `p` scaled to content one.
fn primitive_part(p: &Poly) -> Vec<BigInt> {
    content_split(p).1
}

/// `(c, P)` with `p = c·P` and `P` a primitive integer polynomial.
fn content_split(p: &Poly) -> (Rational, Vec<BigInt>) {
    let den = p.coeffs.iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    let g = ints.iter().fold(BigInt::from(0), |acc, c| acc.gcd(c));
    let ints = if g == BigInt::from(1) { ints } else { ints.into_iter().map(|c| c / &g).collect() };
    (Rational::new(g, den), ints)
}

fn primitive_part_int(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| is_zero_int(c)) {
        v.pop();
    }
    let g = v.iter().fold(BigInt::from(0), |acc, c| acc.gcd(c));
    if !is_zero_int(&g) && g != BigInt::from(1) {
        for c in &mut v {
            *c /= &g;
        }
    }
    v
}

fn from_integers(v: Vec<BigInt>) -> Poly {
    Poly::new(v.into_iter().map(Rational::from_integer).collect())
}

fn is_zero_int(c: &BigInt) -> bool {
    c.sign() == Sign::NoSign
}

fn write_term(f: &mut fmt::Formatter<'_>, c: &Rational, power: usize) -> fmt::Result {
    match power {
        0 => write!(f, "{c}"),
        _ => {
            if c.is_one() {
            } else if (-c).is_one() {
                f.write_str("-")?;
            } else {
                write!(f, "{c}*")?;
            }
            if power == 1 {
                f.write_str("t")
            } else {
                write!(f, "t^{power}")
            }
        }
    }
}

/// Compact form accepted by the CLI grammar, e.g. `3/2*t^2-t+1`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (power, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first && !rational_is_negative(c) {
                f.write_str("+")?;
            }
            write_term(f, c, power)?;
            first = false;
        }
        Ok(())
    }
}
