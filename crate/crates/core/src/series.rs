//! Formal power series `R[[X]]` and Laurent series `R((X))` over a possibly
//! noncommutative base ring, with `X` central.
//!
//! Series are lazy: a coefficient is computed the first time it is asked
//! for and then cached, so an expensive generator runs once per index.
//! Series share their cache through `Rc` and are confined to one thread.
//!
//! Two constructions connect fadelian witnesses in `R` and in `R((X))`:
//!
//! - [`laurent_witness`] solves `P = Q·B + C·Q` coefficient by coefficient,
//!   each step being one base-ring witness for `q_0`;
//! - [`witness_descend`] turns `x·X^r = X^j P·a + a·X^k Q` back into a
//!   base-ring identity by repeatedly evaluating at zero and dividing by `X`.

use std::cell::RefCell;
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::oracle::SurjectivityOracle;
use crate::ore::OrePoly;
use crate::ring::{DifferentialField, Ring};
use crate::witness::fadelian_witness;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,
    #[error("product of leading coefficients vanishes")]
    ZeroDivisor,
    #[error("base oracle found no witness for coefficient {index}")]
    OracleFailure { index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DescentError {
    #[error("evaluation at zero does not cancel after {step} steps")]
    MalformedWitness { step: usize },
    #[error("descent needs {needed} steps, limit is {limit}")]
    StepLimit { needed: usize, limit: usize },
}

struct Stream<R> {
    cache: RefCell<Vec<R>>,
    generator: Box<dyn Fn(usize) -> R>,
}

/// A power series `Σ_{n≥0} a_n X^n` with memoised coefficients.
pub struct PowerSeries<R> {
    inner: Rc<Stream<R>>,
}

impl<R> Clone for PowerSeries<R> {
    fn clone(&self) -> Self {
        PowerSeries { inner: Rc::clone(&self.inner) }
    }
}

impl<R: Ring + 'static> PowerSeries<R> {
    /// Coefficient `n` is `generator(n)`; indices are generated in order.
    pub fn from_fn(generator: impl Fn(usize) -> R + 'static) -> Self {
        PowerSeries { inner: Rc::new(Stream { cache: RefCell::new(Vec::new()), generator: Box::new(generator) }) }
    }

    /// The polynomial with the given coefficients.
    pub fn from_coeffs(coeffs: Vec<R>) -> Self {
        Self::from_fn(move |n| coeffs.get(n).cloned().unwrap_or_else(R::zero))
    }

    pub fn constant(c: R) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn zero() -> Self {
        Self::from_coeffs(Vec::new())
    }

    pub fn one() -> Self {
        Self::constant(R::one())
    }

    /// The indeterminate `X`.
    pub fn x() -> Self {
        Self::from_coeffs(vec![R::zero(), R::one()])
    }

    pub fn coeff(&self, n: usize) -> R {
        if let Some(c) = self.inner.cache.borrow().get(n) {
            return c.clone();
        }
        let start = self.inner.cache.borrow().len();
        for i in start..=n {
            let c = (self.inner.generator)(i);
            self.inner.cache.borrow_mut().push(c);
        }
        self.inner.cache.borrow()[n].clone()
    }

    /// Coefficients `0..n`.
    pub fn truncate(&self, n: usize) -> Vec<R> {
        (0..n).map(|i| self.coeff(i)).collect()
    }

    /// Number of coefficients computed so far.
    pub fn forced(&self) -> usize {
        self.inner.cache.borrow().len()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let (a, b) = (self.clone(), rhs.clone());
        Self::from_fn(move |n| a.coeff(n).add(&b.coeff(n)))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let (a, b) = (self.clone(), rhs.clone());
        Self::from_fn(move |n| a.coeff(n).sub(&b.coeff(n)))
    }

    pub fn neg(&self) -> Self {
        let a = self.clone();
        Self::from_fn(move |n| a.coeff(n).neg())
    }

    /// Cauchy product `Σ_n (Σ_{i≤n} a_i b_{n−i}) X^n`, order preserved.
    pub fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = (self.clone(), rhs.clone());
        Self::from_fn(move |n| (0..=n).fold(R::zero(), |acc, i| acc.add(&a.coeff(i).mul(&b.coeff(n - i)))))
    }

    /// `c·self`.
    pub fn scale_left(&self, c: &R) -> Self {
        let (a, c) = (self.clone(), c.clone());
        Self::from_fn(move |n| c.mul(&a.coeff(n)))
    }

    /// `self·c`.
    pub fn scale_right(&self, c: &R) -> Self {
        let (a, c) = (self.clone(), c.clone());
        Self::from_fn(move |n| a.coeff(n).mul(&c))
    }

    /// `X^k · self`.
    pub fn shift_up(&self, k: usize) -> Self {
        let a = self.clone();
        Self::from_fn(move |n| if n < k { R::zero() } else { a.coeff(n - k) })
    }

    /// `(self − Σ_{n<k} a_n X^n) / X^k`.
    pub fn shift_down(&self, k: usize) -> Self {
        let a = self.clone();
        Self::from_fn(move |n| a.coeff(n + k))
    }
}

impl<R: fmt::Debug> fmt::Debug for PowerSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PowerSeries").field("forced", &*self.inner.cache.borrow()).finish_non_exhaustive()
    }
}

/// Either zero or `X^valuation · body` with `body(0) ≠ 0`.
#[derive(Clone, Debug)]
pub enum LaurentSeries<R> {
    Zero,
    Nonzero { valuation: i64, body: PowerSeries<R> },
}

impl<R: Ring + 'static> LaurentSeries<R> {
    /// Only coefficient 0 of `body` is checked; later ones stay lazy.
    pub fn new(valuation: i64, body: PowerSeries<R>) -> Result<Self, LaurentError> {
        if body.coeff(0).is_zero() {
            return Err(LaurentError::ZeroLeadingCoefficient);
        }
        Ok(LaurentSeries::Nonzero { valuation, body })
    }

    pub fn valuation(&self) -> Option<i64> {
        match self {
            LaurentSeries::Zero => None,
            LaurentSeries::Nonzero { valuation, .. } => Some(*valuation),
        }
    }

    /// Coefficient of `X^n`.
    pub fn coeff(&self, n: i64) -> R {
        match self {
            LaurentSeries::Nonzero { valuation, body } if n >= *valuation => body.coeff((n - valuation) as usize),
            _ => R::zero(),
        }
    }

    /// `(X^j P)(X^k Q) = X^{j+k} (PQ)`. Fails only over a base with zero
    /// divisors.
    pub fn mul(&self, rhs: &Self) -> Result<Self, LaurentError> {
        match (self, rhs) {
            (LaurentSeries::Nonzero { valuation: j, body: p }, LaurentSeries::Nonzero { valuation: k, body: q }) => {
                Self::new(j + k, p.mul(q)).map_err(|_| LaurentError::ZeroDivisor)
            }
            _ => Ok(LaurentSeries::Zero),
        }
    }
}

/// Fadelian witnesses in a base ring.
pub trait FadelianOracle<R> {
    /// `(b, c)` with `x = a·b + c·a`, or `None` if none was found. `a` is
    /// nonzero.
    fn witness(&self, x: &R, a: &R) -> Option<(R, R)>;
}

/// A field is fadelian: `x = a·(a⁻¹x) + 0·a`.
#[derive(Clone, Copy, Debug, Default)]
pub struct FieldOracle;

impl<F: DifferentialField> FadelianOracle<F> for FieldOracle {
    fn witness(&self, x: &F, a: &F) -> Option<(F, F)> {
        Some((x.div(a)?, F::zero()))
    }
}

/// Witnesses in `R[δ]` from [`fadelian_witness`].
#[derive(Clone, Copy, Debug, Default)]
pub struct OreFadelianOracle<O> {
    pub oracle: O,
}

impl<F, O> FadelianOracle<OrePoly<F>> for OreFadelianOracle<O>
where
    F: DifferentialField,
    O: SurjectivityOracle<F>,
{
    fn witness(&self, x: &OrePoly<F>, a: &OrePoly<F>) -> Option<(OrePoly<F>, OrePoly<F>)> {
        fadelian_witness(x, a, &self.oracle).ok().map(|w| (w.b, w.c))
    }
}

struct Induction<R> {
    p: PowerSeries<R>,
    q: PowerSeries<R>,
    oracle: Box<dyn FadelianOracle<R>>,
    b: Vec<R>,
    c: Vec<R>,
}

impl<R: Ring + 'static> Induction<R> {
    fn ensure(&mut self, n: usize) -> Result<(), LaurentError> {
        let q0 = self.q.coeff(0);
        while self.b.len() <= n {
            let m = self.b.len();
            let mut rhs = self.p.coeff(m);
            for i in 1..=m {
                let qi = self.q.coeff(i);
                rhs = rhs.sub(&qi.mul(&self.b[m - i])).sub(&self.c[m - i].mul(&qi));
            }
            let (bm, cm) = if rhs.is_zero() {
                (R::zero(), R::zero())
            } else {
                self.oracle.witness(&rhs, &q0).ok_or(LaurentError::OracleFailure { index: m })?
            };
            if q0.mul(&bm).add(&cm.mul(&q0)) != rhs {
                return Err(LaurentError::OracleFailure { index: m });
            }
            self.b.push(bm);
            self.c.push(cm);
        }
        Ok(())
    }
}

/// Series `B, C` with `P = Q·B + C·Q`, from [`laurent_witness`].
#[derive(Clone)]
pub struct SeriesWitness<R> {
    state: Rc<RefCell<Induction<R>>>,
    pub b: PowerSeries<R>,
    pub c: PowerSeries<R>,
}

impl<R: Ring + 'static> SeriesWitness<R> {
    /// `(b_n, c_n)`, running the induction as far as needed.
    pub fn try_coeff(&self, n: usize) -> Result<(R, R), LaurentError> {
        let mut st = self.state.borrow_mut();
        st.ensure(n)?;
        Ok((st.b[n].clone(), st.c[n].clone()))
    }

    /// Coefficients `0..n` of `Q·B + C·Q − P`.
    pub fn residual(&self, n: usize) -> Vec<R> {
        let (p, q) = {
            let st = self.state.borrow();
            (st.p.clone(), st.q.clone())
        };
        let lhs = q.mul(&self.b).add(&self.c.mul(&q));
        (0..n).map(|i| lhs.coeff(i).sub(&p.coeff(i))).collect()
    }
}

/// Solves `P = Q·B + C·Q` for `Q(0) ≠ 0`:
///
/// ```text
/// q_0 b_n + c_n q_0 = p_n − Σ_{i=1}^{n} (q_i b_{n−i} + c_{n−i} q_i)
/// ```
///
/// Coefficients below `prec` are computed and checked now, so oracle
/// failures there are reported. `B` and `C` stay lazy beyond `prec`;
/// reading them there panics if the oracle fails, use
/// [`SeriesWitness::try_coeff`] to get an error instead.
pub fn laurent_witness<R, O>(
    p: &PowerSeries<R>,
    q: &PowerSeries<R>,
    oracle: O,
    prec: usize,
) -> Result<SeriesWitness<R>, LaurentError>
where
    R: Ring + 'static,
    O: FadelianOracle<R> + 'static,
{
    if q.coeff(0).is_zero() {
        return Err(LaurentError::ZeroLeadingCoefficient);
    }
    let state = Rc::new(RefCell::new(Induction {
        p: p.clone(),
        q: q.clone(),
        oracle: Box::new(oracle),
        b: Vec::new(),
        c: Vec::new(),
    }));
    if prec > 0 {
        state.borrow_mut().ensure(prec - 1)?;
    }
    let series = |pick: fn(&Induction<R>, usize) -> R| {
        let st = Rc::clone(&state);
        PowerSeries::from_fn(move |n| {
            let mut s = st.borrow_mut();
            if let Err(e) = s.ensure(n) {
                panic!("series witness coefficient {n}: {e}");
            }
            pick(&s, n)
        })
    };
    let b = series(|s, n| s.b[n].clone());
    let c = series(|s, n| s.c[n].clone());
    Ok(SeriesWitness { state, b, c })
}

/// `x·X^r = X^j·P·a + a·X^k·Q` in `R((X))`.
#[derive(Clone, Debug)]
pub struct SeriesIdentity<R> {
    pub j: i64,
    pub p: PowerSeries<R>,
    pub k: i64,
    pub q: PowerSeries<R>,
    pub r: i64,
}

/// Base-ring identity `x = b·a + a·c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Descent<R> {
    pub b: R,
    pub c: R,
    /// Number of evaluate-and-divide steps taken.
    pub steps: usize,
}

/// Recovers `x = b·a + a·c` in `R` from a series identity.
///
/// All exponents are first made nonnegative by a common shift and the
/// powers `X^j`, `X^k` are absorbed into the series. While `r > 0` the
/// constant terms must cancel, `P(0)·a + a·Q(0) = 0`, and both series are
/// divided by `X`. At `r = 0` the constant terms are the answer. The result
/// is checked before it is returned.
pub fn witness_descend<R: Ring + 'static>(
    x: &R,
    a: &R,
    identity: &SeriesIdentity<R>,
    max_steps: usize,
) -> Result<Descent<R>, DescentError> {
    let shift = 0.max(-identity.j).max(-identity.k).max(-identity.r);
    let (j, k, r) = ((identity.j + shift) as usize, (identity.k + shift) as usize, (identity.r + shift) as usize);
    if r > max_steps {
        return Err(DescentError::StepLimit { needed: r, limit: max_steps });
    }
    let mut p = identity.p.shift_up(j);
    let mut q = identity.q.shift_up(k);
    for step in 0..r {
        let constant = p.coeff(0).mul(a).add(&a.mul(&q.coeff(0)));
        if !constant.is_zero() {
            return Err(DescentError::MalformedWitness { step });
        }
        p = p.shift_down(1);
        q = q.shift_down(1);
    }
    let (b, c) = (p.coeff(0), q.coeff(0));
    if b.mul(a).add(&a.mul(&c)) != *x {
        return Err(DescentError::MalformedWitness { step: r });
    }
    Ok(Descent { b, c, steps: r })
}
