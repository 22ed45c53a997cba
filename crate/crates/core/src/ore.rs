//! The ring `R[δ]` of formal differential operators over a differential
//! field `R`.
//!
//! Every operator has a unique normal form `Σ cᵢ δⁱ` with all `δ` on the
//! right; products are brought back to normal form with the Leibniz rule
//!
//! ```text
//! δᵐ · a = Σ_{k=0}^{m} C(m,k) a^{(m-k)} δᵏ
//! ```
//!
//! The degree `θ` is the degree of the normal form. It is a Euclidean
//! valuation, and `R[δ]` has Euclidean division with the quotient on either
//! side (see [`Side`]).

use std::fmt;
use std::ops;

use thiserror::Error;

use crate::field::RatFun;
use crate::ring::{Binomials, DifferentialField, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum OreError {
    #[error("division by the zero operator")]
    DivisionByZeroOperator,
    #[error("common multiples need two nonzero operators")]
    ZeroArgument,
}

/// Degree of an operator; the zero operator has degree `-∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Theta {
    MinusInfinity,
    Finite(usize),
}

impl Theta {
    pub fn value(self) -> Option<usize> {
        match self {
            Theta::MinusInfinity => None,
            Theta::Finite(n) => Some(n),
        }
    }

    /// Degree of a product.
    pub fn plus(self, other: Theta) -> Theta {
        match (self, other) {
            (Theta::Finite(a), Theta::Finite(b)) => Theta::Finite(a + b),
            _ => Theta::MinusInfinity,
        }
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theta::MinusInfinity => f.write_str("-inf"),
            Theta::Finite(n) => write!(f, "{n}"),
        }
    }
}

/// Which side the quotient (or cofactor) multiplies on.
///
/// `Left` division writes `x = q·y + r`; `Right` division writes
/// `x = y·q + r`. For common multiples, `Right` produces an element of
/// `aR ∩ xR` and `Left` one of `Ra ∩ Rx`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// An operator `Σ cᵢ δⁱ` in normal form. The highest stored coefficient is
/// nonzero; the zero operator has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OrePoly<F> {
    coeffs: Vec<F>,
}

/// Result of [`OrePoly::common_multiple`]: `m = a·b = x·c` (right) or
/// `m = b·a = c·x` (left).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonMultiple<F> {
    pub b: OrePoly<F>,
    pub c: OrePoly<F>,
    pub m: OrePoly<F>,
}

impl<F: DifferentialField> OrePoly<F> {
    /// Builds `Σ coeffs[i] δⁱ`.
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        OrePoly { coeffs }
    }

    pub fn zero() -> Self {
        OrePoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::embed(F::one())
    }

    /// The left-multiplication operator `y ↦ x·y`.
    pub fn embed(x: F) -> Self {
        Self::new(vec![x])
    }

    /// The derivation itself.
    pub fn delta() -> Self {
        Self::monomial(F::one(), 1)
    }

    /// `c·δᵏ`.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut coeffs = vec![F::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn theta(&self) -> Theta {
        match self.coeffs.len() {
            0 => Theta::MinusInfinity,
            n => Theta::Finite(n - 1),
        }
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    /// The field element this operator multiplies by, if `θ ≤ 0`.
    pub fn as_scalar(&self) -> Option<F> {
        match self.coeffs.len() {
            0 => Some(F::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn add_op(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).add(&rhs.coeff(i))).collect())
    }

    pub fn neg_op(&self) -> Self {
        OrePoly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn sub_op(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).sub(&rhs.coeff(i))).collect())
    }

    /// `f·u` for a field element `f`.
    pub fn scale_left(&self, f: &F) -> Self {
        Self::new(self.coeffs.iter().map(|c| f.mul(c)).collect())
    }

    /// Composition `self ∘ rhs` in normal form.
    pub fn compose(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let du = self.coeffs.len() - 1;
        let dv = rhs.coeffs.len() - 1;
        // derivs[j][m] = v_j^{(m)} for m ≤ du
        let derivs: Vec<Vec<F>> = rhs
            .coeffs
            .iter()
            .map(|v| {
                let mut col = Vec::with_capacity(du + 1);
                let mut cur = v.clone();
                for _ in 0..du {
                    let next = cur.derive();
                    col.push(cur);
                    cur = next;
                }
                col.push(cur);
                col
            })
            .collect();
        let mut binom = Binomials::<F>::new();
        let mut out = vec![F::zero(); du + dv + 1];
        for (i, u) in self.coeffs.iter().enumerate() {
            if u.is_zero() {
                continue;
            }
            for k in 0..=i {
                let c = u.mul(&binom.get(i as i64, k as i64));
                for (j, dj) in derivs.iter().enumerate() {
                    let d = &dj[i - k];
                    if d.is_zero() {
                        continue;
                    }
                    out[k + j] = out[k + j].add(&c.mul(d));
                }
            }
        }
        Self::new(out)
    }

    /// Evaluates the operator as an endomorphism: `Σ cᵢ f^{(i)}`.
    pub fn apply(&self, f: &F) -> F {
        let mut acc = F::zero();
        let mut d = f.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                d = d.derive();
            }
            if !c.is_zero() && !d.is_zero() {
                acc = acc.add(&c.mul(&d));
            }
        }
        acc
    }

    /// Euclidean division of `x` by `y`: `x = q·y + r` for [`Side::Left`],
    /// `x = y·q + r` for [`Side::Right`], with `θ(r) < θ(y)` in both cases.
    pub fn divide(side: Side, x: &Self, y: &Self) -> Result<(Self, Self), OreError> {
        let Theta::Finite(ry) = y.theta() else {
            return Err(OreError::DivisionByZeroOperator);
        };
        let y_lead_inv = y.leading().and_then(F::inv).expect("nonzero leading coefficient");
        let mut q = Self::zero();
        let mut r = x.clone();
        while let Theta::Finite(s) = r.theta() {
            if s < ry {
                break;
            }
            // Over a commutative field the seed is the same on both sides.
            let seed = Self::monomial(r.coeffs[s].mul(&y_lead_inv), s - ry);
            let cancel = match side {
                Side::Left => seed.compose(y),
                Side::Right => y.compose(&seed),
            };
            r = r.sub_op(&cancel);
            debug_assert!(r.theta() < Theta::Finite(s));
            q = q.add_op(&seed);
        }
        Ok((q, r))
    }

    /// Nonzero `b, c` with `a·b = x·c` ([`Side::Right`]) or `b·a = c·x`
    /// ([`Side::Left`]), by the extended Euclidean algorithm on the matching
    /// division side.
    ///
    /// The multiple is normalised so that `c` is monic; it is not claimed to
    /// be of minimal degree.
    pub fn common_multiple(side: Side, a: &Self, x: &Self) -> Result<CommonMultiple<F>, OreError> {
        if a.is_zero() || x.is_zero() {
            return Err(OreError::ZeroArgument);
        }
        // Invariant: r = a·s + x·t (right) or r = s·a + t·x (left).
        let (mut r0, mut r1) = (a.clone(), x.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        loop {
            let (q, rem) = Self::divide(side, &r0, &r1)?;
            let step = |prev: &Self, cur: &Self| match side {
                Side::Right => prev.sub_op(&cur.compose(&q)),
                Side::Left => prev.sub_op(&q.compose(cur)),
            };
            let s2 = step(&s0, &s1);
            let t2 = step(&t0, &t1);
            if rem.is_zero() {
                let b = s2;
                let c = t2.neg_op();
                let lead_inv = c.leading().and_then(F::inv).expect("cofactor of a domain is nonzero");
                let unit = Self::embed(lead_inv);
                let (b, c, m) = match side {
                    Side::Right => {
                        let (b, c) = (b.compose(&unit), c.compose(&unit));
                        let m = a.compose(&b);
                        (b, c, m)
                    }
                    Side::Left => {
                        let (b, c) = (unit.compose(&b), unit.compose(&c));
                        let m = b.compose(a);
                        (b, c, m)
                    }
                };
                return Ok(CommonMultiple { b, c, m });
            }
            (r0, r1) = (r1, rem);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
    }

    /// The commutator `[self, rhs] = self∘rhs − rhs∘self`.
    pub fn bracket(&self, rhs: &Self) -> Self {
        self.compose(rhs).sub_op(&rhs.compose(self))
    }
}

impl<F: DifferentialField> Ring for OrePoly<F> {
    fn zero() -> Self {
        OrePoly::zero()
    }

    fn one() -> Self {
        OrePoly::one()
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add(&self, rhs: &Self) -> Self {
        self.add_op(rhs)
    }

    fn neg(&self) -> Self {
        self.neg_op()
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.compose(rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.sub_op(rhs)
    }

    fn from_int(n: i64) -> Self {
        Self::embed(F::from_int(n))
    }
}

macro_rules! forward_binop {
    ($imp:ident, $method:ident, $inner:ident) => {
        impl<F: DifferentialField> ops::$imp<&OrePoly<F>> for &OrePoly<F> {
            type Output = OrePoly<F>;
            fn $method(self, rhs: &OrePoly<F>) -> OrePoly<F> {
                self.$inner(rhs)
            }
        }
        impl<F: DifferentialField> ops::$imp<OrePoly<F>> for OrePoly<F> {
            type Output = OrePoly<F>;
            fn $method(self, rhs: OrePoly<F>) -> OrePoly<F> {
                self.$inner(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_op);
forward_binop!(Sub, sub, sub_op);
forward_binop!(Mul, mul, compose);

impl<F: DifferentialField> ops::Neg for OrePoly<F> {
    type Output = OrePoly<F>;
    fn neg(self) -> OrePoly<F> {
        self.neg_op()
    }
}

impl<F: DifferentialField> ops::Neg for &OrePoly<F> {
    type Output = OrePoly<F>;
    fn neg(self) -> OrePoly<F> {
        self.neg_op()
    }
}

/// Source form of the CLI grammar, e.g. `(t^2+1)*D^2 + t*D + 3`.
impl fmt::Display for OrePoly<RatFun> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let term = if i == 0 {
                c.to_string()
            } else {
                let d = if i == 1 { "D".to_string() } else { format!("D^{i}") };
                if c.is_one() {
                    d
                } else if c.neg().is_one() {
                    format!("-{d}")
                } else if c.is_atomic() {
                    format!("{c}*{d}")
                } else {
                    format!("({c})*{d}")
                }
            };
            match (first, term.strip_prefix('-')) {
                (true, _) => f.write_str(&term)?,
                (false, Some(rest)) => write!(f, " - {rest}")?,
                (false, None) => write!(f, " + {term}")?,
            }
            first = false;
        }
        Ok(())
    }
}
