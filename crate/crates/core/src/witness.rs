//! Weak and full fadelian witnesses in `R[δ]`.
//!
//! For `x = Σ_{j≤n} x_j δ^j` with `n ≥ 1`, a weak witness `1 = b·x + x·c`
//! with `θ(b), θ(c) ≤ n − 1` is found by comparing coefficients of `δ^d`:
//!
//! ```text
//! Σ_{i<n} Σ_{j≤n} b_i C(i,k) x_j^{(k)} + x_j C(j,k) c_i^{(k)} = [d = 0],   k = i + j − d
//! ```
//!
//! The equations for `d = 2n−1, …, n` each contain `b_{d−n}` with the
//! invertible coefficient `x_n`, so they express every `b_i` through the
//! `c_j`. The remaining `n` equations form a row-dominant system in the
//! `c_j` alone, which is handed to [`diag::solve`].
//!
//! Nothing is returned without an exact check of the defining identity.

use thiserror::Error;

use crate::diag::{self, LinearDiffSystem, SolveError};
use crate::oracle::SurjectivityOracle;
use crate::ore::{OrePoly, Side, Theta};
use crate::ring::{Binomials, DifferentialField};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("the zero operator has no witness")]
    ZeroTarget,
    #[error("the coefficient equations need an operator of degree at least one")]
    DegreeZeroTarget,
    #[error("the anchor must be nonzero")]
    ZeroArgument,
    #[error("the oracle found no solution of diagonal equation {index}")]
    OracleIncomplete { index: usize },
    #[error("coefficient system could not be solved: {0}")]
    System(SolveError),
    #[error("candidate witness failed verification")]
    Unverified,
}

impl From<SolveError> for WitnessError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::OracleIncomplete { index } => WitnessError::OracleIncomplete { index },
            other => WitnessError::System(other),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Flavor<F> {
    /// `1 = b·target + target·c`.
    Weak,
    /// `target = anchor·b + c·anchor`.
    Full { anchor: OrePoly<F> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessPair<F> {
    pub b: OrePoly<F>,
    pub c: OrePoly<F>,
    pub target: OrePoly<F>,
    pub flavor: Flavor<F>,
}

/// Coefficient of `δ^degree` in `b·x + x·c`, as a linear form in the
/// coefficients of `b` and `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientEquation<F> {
    pub degree: usize,
    /// `b[i]` multiplies the unknown `b_i`.
    pub b: Vec<F>,
    /// `c[i]` is applied to the unknown `c_i`.
    pub c: Vec<OrePoly<F>>,
    /// Kronecker delta `[degree = 0]`.
    pub rhs: F,
}

/// Upper-triangular table with `b_i = Σ_{j≥i} A[i][j](c_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationTable<F> {
    entries: Vec<Vec<OrePoly<F>>>,
}

impl<F: DifferentialField> EliminationTable<F> {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Entry `(i, j)`; zero below the diagonal.
    pub fn get(&self, i: usize, j: usize) -> &OrePoly<F> {
        &self.entries[i][j]
    }

    /// The `b_i` determined by the given `c_j`.
    pub fn recover_b(&self, c: &[F]) -> Vec<F> {
        self.entries.iter().map(|row| row.iter().zip(c).fold(F::zero(), |acc, (p, cj)| acc.add(&p.apply(cj)))).collect()
    }
}

impl<F: DifferentialField> WitnessPair<F> {
    pub fn weak(target: OrePoly<F>, b: OrePoly<F>, c: OrePoly<F>) -> Self {
        WitnessPair { b, c, target, flavor: Flavor::Weak }
    }

    pub fn full(target: OrePoly<F>, anchor: OrePoly<F>, b: OrePoly<F>, c: OrePoly<F>) -> Self {
        WitnessPair { b, c, target, flavor: Flavor::Full { anchor } }
    }
}

/// Exact check of the identity named by the witness flavour.
pub fn verify_witness<F: DifferentialField>(w: &WitnessPair<F>) -> bool {
    match &w.flavor {
        Flavor::Weak => w.b.compose(&w.target).add_op(&w.target.compose(&w.c)) == OrePoly::one(),
        Flavor::Full { anchor } => anchor.compose(&w.b).add_op(&w.c.compose(anchor)) == w.target,
    }
}

fn degree_of<F: DifferentialField>(x: &OrePoly<F>) -> Result<usize, WitnessError> {
    match x.theta() {
        Theta::MinusInfinity => Err(WitnessError::ZeroTarget),
        Theta::Finite(0) => Err(WitnessError::DegreeZeroTarget),
        Theta::Finite(n) => Ok(n),
    }
}

/// The `2n` coefficient equations of `1 = b·x + x·c`, indexed by degree.
pub fn build_coefficient_equations<F: DifferentialField>(
    x: &OrePoly<F>,
) -> Result<Vec<CoefficientEquation<F>>, WitnessError> {
    let n = degree_of(x)?;
    let mut eqs: Vec<CoefficientEquation<F>> = (0..2 * n)
        .map(|d| CoefficientEquation {
            degree: d,
            b: vec![F::zero(); n],
            c: vec![OrePoly::zero(); n],
            rhs: if d == 0 { F::one() } else { F::zero() },
        })
        .collect();
    let mut binom = Binomials::<F>::new();
    // derivs[j][k] = x_j^{(k)}
    let derivs: Vec<Vec<F>> = (0..=n)
        .map(|j| {
            let mut col = vec![x.coeff(j)];
            for k in 1..n {
                let next = col[k - 1].derive();
                col.push(next);
            }
            col
        })
        .collect();
    for i in 0..n {
        for (j, xj) in derivs.iter().enumerate() {
            for k in 0..=i.max(j) {
                let d = i + j - k;
                let eq = &mut eqs[d];
                if k <= i {
                    let term = binom.get(i as i64, k as i64).mul(&xj[k]);
                    eq.b[i] = eq.b[i].add(&term);
                }
                if k <= j {
                    let term = OrePoly::monomial(binom.get(j as i64, k as i64).mul(&xj[0]), k);
                    eq.c[i] = eq.c[i].add_op(&term);
                }
            }
        }
    }
    Ok(eqs)
}

/// Eliminates the `b_i` using the equations of degree `2n−1` down to `n`,
/// returning the elimination table and the system in `c_0, …, c_{n−1}`
/// formed by the equations of degree `0, …, n−1`.
pub fn eliminate_b<F: DifferentialField>(
    eqs: &[CoefficientEquation<F>],
    x: &OrePoly<F>,
) -> Result<(EliminationTable<F>, LinearDiffSystem<F>), WitnessError> {
    let n = degree_of(x)?;
    debug_assert_eq!(eqs.len(), 2 * n);
    let lead_inv = OrePoly::embed(x.leading().and_then(F::inv).expect("nonzero leading coefficient"));
    let mut table = vec![vec![OrePoly::zero(); n]; n];
    for d in (n..2 * n).rev() {
        let p = d - n;
        let eq = &eqs[d];
        debug_assert!(eq.b[..p].iter().all(|v| v.is_zero()));
        debug_assert_eq!(Some(&eq.b[p]), x.leading());
        for j in p..n {
            let mut sum = eq.c[j].clone();
            for i in p + 1..n {
                sum = sum.add_op(&OrePoly::embed(eq.b[i].clone()).compose(&table[i][j]));
            }
            table[p][j] = lead_inv.compose(&sum).neg_op();
        }
    }
    let matrix = eqs[..n]
        .iter()
        .map(|eq| {
            (0..n)
                .map(|col| {
                    (0..n).fold(eq.c[col].clone(), |acc, i| {
                        acc.add_op(&OrePoly::embed(eq.b[i].clone()).compose(&table[i][col]))
                    })
                })
                .collect()
        })
        .collect();
    let rhs = eqs[..n].iter().map(|eq| eq.rhs.clone()).collect();
    let system = LinearDiffSystem::new(matrix, rhs)?;
    Ok((EliminationTable { entries: table }, system))
}

/// Finds `b, c` with `1 = b·x + x·c`.
///
/// Degree-zero `x` is a unit and gets `b = x⁻¹, c = 0`. Otherwise the
/// coefficient system is solved; over a field that is not differentially
/// closed the oracle may come back empty, which is reported as
/// [`WitnessError::OracleIncomplete`].
pub fn weak_witness<F, O>(x: &OrePoly<F>, oracle: &O) -> Result<WitnessPair<F>, WitnessError>
where
    F: DifferentialField,
    O: SurjectivityOracle<F> + ?Sized,
{
    let w = match x.theta() {
        Theta::MinusInfinity => return Err(WitnessError::ZeroTarget),
        Theta::Finite(0) => {
            let inv = x.coeff(0).inv().expect("nonzero scalar");
            WitnessPair::weak(x.clone(), OrePoly::embed(inv), OrePoly::zero())
        }
        Theta::Finite(_) => {
            let eqs = build_coefficient_equations(x)?;
            let (table, system) = eliminate_b(&eqs, x)?;
            let c = diag::solve(&system, oracle)?;
            let b = table.recover_b(&c);
            WitnessPair::weak(x.clone(), OrePoly::new(b), OrePoly::new(c))
        }
    };
    if verify_witness(&w) {
        Ok(w)
    } else {
        Err(WitnessError::Unverified)
    }
}

/// Finds `B, C` with `x = a·B + C·a`.
///
/// Exact divisibility of `x` by `a` on either side is used directly, and
/// `x = 1` reduces to a weak witness of `a`. In general, with `a·b = x·c`
/// from [`OrePoly::common_multiple`] and `1 = k'·(c·a) + (c·a)·k`,
///
/// ```text
/// x = x·k'·c·a + a·b·a·k,   B = b·a·k,   C = x·k'·c.
/// ```
pub fn fadelian_witness<F, O>(x: &OrePoly<F>, a: &OrePoly<F>, oracle: &O) -> Result<WitnessPair<F>, WitnessError>
where
    F: DifferentialField,
    O: SurjectivityOracle<F> + ?Sized,
{
    if a.is_zero() {
        return Err(WitnessError::ZeroArgument);
    }
    let full = |b: OrePoly<F>, c: OrePoly<F>| WitnessPair::full(x.clone(), a.clone(), b, c);
    let w = if x.is_zero() {
        full(OrePoly::zero(), OrePoly::zero())
    } else if let Some(w) = divisible(x, a) {
        full(w.0, w.1)
    } else if *x == OrePoly::one() {
        let weak = weak_witness(a, oracle)?;
        full(weak.c, weak.b)
    } else {
        let cm = OrePoly::common_multiple(Side::Right, a, x).map_err(|_| WitnessError::ZeroArgument)?;
        let ca = cm.c.compose(a);
        let weak = weak_witness(&ca, oracle)?;
        let big_b = cm.b.compose(a).compose(&weak.c);
        let big_c = x.compose(&weak.b).compose(&cm.c);
        full(big_b, big_c)
    };
    if verify_witness(&w) {
        Ok(w)
    } else {
        Err(WitnessError::Unverified)
    }
}

/// `(B, 0)` if `x = a·B`, `(0, C)` if `x = C·a`.
fn divisible<F: DifferentialField>(x: &OrePoly<F>, a: &OrePoly<F>) -> Option<(OrePoly<F>, OrePoly<F>)> {
    let (q, r) = OrePoly::divide(Side::Right, x, a).ok()?;
    if r.is_zero() {
        return Some((q, OrePoly::zero()));
    }
    let (q, r) = OrePoly::divide(Side::Left, x, a).ok()?;
    r.is_zero().then(|| (OrePoly::zero(), q))
}

/// Reads off `a⁻¹` from a verified weak witness of `a·δ`: applying
/// `1 = b·aδ + aδ·c` to the constant `1` gives `a·(c(1))' = 1`.
///
/// `None` if `w` is not a verified weak witness of an operator `a·δ`.
pub fn inverse_by_evaluation<F: DifferentialField>(w: &WitnessPair<F>) -> Option<F> {
    let [zero, a] = w.target.coeffs() else {
        return None;
    };
    if !zero.is_zero() || w.flavor != Flavor::Weak || !verify_witness(w) {
        return None;
    }
    let u = w.c.apply(&F::one()).derive();
    debug_assert!(a.mul(&u) == F::one());
    Some(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{standard_oracle, NullOracle, DEFAULT_POLY_BOUND};
    use crate::ring::Ring;
    use crate::{Op, Poly, RatFun};

    fn t() -> RatFun {
        RatFun::t()
    }

    fn oracle() -> impl SurjectivityOracle<RatFun> {
        standard_oracle(DEFAULT_POLY_BOUND)
    }

    #[test]
    fn equations_for_delta() {
        let eqs = build_coefficient_equations(&Op::delta()).unwrap();
        assert_eq!(eqs.len(), 2);
        // d = 1: b_0 + c_0 = 0
        assert_eq!(eqs[1].b, vec![RatFun::one()]);
        assert_eq!(eqs[1].c, vec![Op::one()]);
        assert!(eqs[1].rhs.is_zero());
        // d = 0: c_0' = 1
        assert_eq!(eqs[0].b, vec![RatFun::zero()]);
        assert_eq!(eqs[0].c, vec![Op::delta()]);
        assert_eq!(eqs[0].rhs, RatFun::one());
    }

    #[test]
    fn degree_zero_has_no_equations() {
        assert_eq!(build_coefficient_equations(&Op::embed(t())), Err(WitnessError::DegreeZeroTarget));
        assert_eq!(build_coefficient_equations(&Op::zero()), Err(WitnessError::ZeroTarget));
    }

    #[test]
    fn elimination_for_delta() {
        let x = Op::delta();
        let eqs = build_coefficient_equations(&x).unwrap();
        let (table, system) = eliminate_b(&eqs, &x).unwrap();
        assert_eq!(table.get(0, 0), &Op::from_int(-1));
        assert_eq!(system.matrix, vec![vec![Op::delta()]]);
        assert_eq!(system.rhs, vec![RatFun::one()]);
    }

    #[test]
    fn built_system_is_dominant() {
        let x = Op::new(vec![t(), RatFun::zero(), RatFun::one()]);
        let eqs = build_coefficient_equations(&x).unwrap();
        let (_, system) = eliminate_b(&eqs, &x).unwrap();
        assert!(system.check_dominance());
    }

    #[test]
    fn weak_witness_of_delta() {
        let w = weak_witness(&Op::delta(), &oracle()).unwrap();
        assert_eq!(w.b, Op::embed(-t()));
        assert_eq!(w.c, Op::embed(t()));
        assert!(verify_witness(&w));
    }

    #[test]
    fn weak_witness_of_unit() {
        let w = weak_witness(&Op::embed(t()), &NullOracle).unwrap();
        assert_eq!(w.b, Op::embed(t().try_inv().unwrap()));
        assert!(w.c.is_zero());
    }

    #[test]
    fn weak_witness_of_delta_squared() {
        let x = Op::monomial(RatFun::one(), 2);
        let w = weak_witness(&x, &oracle()).unwrap();
        assert!(verify_witness(&w));
        assert!(w.b.theta() <= Theta::Finite(1) && w.c.theta() <= Theta::Finite(1));
    }

    #[test]
    fn oracle_failure_is_reported() {
        assert_eq!(weak_witness(&Op::delta(), &NullOracle), Err(WitnessError::OracleIncomplete { index: 0 }));
        // t·δ needs log t.
        let x = Op::monomial(t(), 1);
        assert!(matches!(weak_witness(&x, &oracle()), Err(WitnessError::OracleIncomplete { .. })));
    }

    #[test]
    fn zero_pair_does_not_verify() {
        assert!(!verify_witness(&WitnessPair::weak(Op::delta(), Op::zero(), Op::zero())));
    }

    #[test]
    fn fadelian_trivial_cases() {
        let a = Op::new(vec![t(), RatFun::one()]);
        let x = Op::monomial(t(), 3);
        let w = fadelian_witness(&Op::zero(), &a, &NullOracle).unwrap();
        assert!(w.b.is_zero() && w.c.is_zero());
        let w = fadelian_witness(&x, &Op::one(), &NullOracle).unwrap();
        assert_eq!((w.b, w.c), (x.clone(), Op::zero()));
        assert_eq!(fadelian_witness(&x, &Op::zero(), &NullOracle), Err(WitnessError::ZeroArgument));
    }

    #[test]
    fn fadelian_one_uses_weak_witness() {
        let w = fadelian_witness(&Op::one(), &Op::delta(), &oracle()).unwrap();
        assert!(verify_witness(&w));
        assert_eq!((w.b, w.c), (Op::embed(t()), Op::embed(-t())));
    }

    #[test]
    fn fadelian_general_is_verified_or_incomplete() {
        // a·b = x·c with (b, c) = (t, δ + 1/t); c·a = δ² + (1/t)·δ.
        let w = fadelian_witness(&Op::embed(t()), &Op::delta(), &oracle()).unwrap();
        assert!(verify_witness(&w));
        let x = Op::embed(RatFun::from_ints(&[1, 0, 1]));
        match fadelian_witness(&x, &Op::delta(), &oracle()) {
            Ok(w) => assert!(verify_witness(&w)),
            Err(e) => assert!(matches!(e, WitnessError::OracleIncomplete { .. })),
        }
        assert!(matches!(fadelian_witness(&x, &Op::delta(), &NullOracle), Err(WitnessError::OracleIncomplete { .. })));
    }

    #[test]
    fn inverse_from_witness() {
        let a = RatFun::new(Poly::one(), Poly::from_ints(&[-1, 1])).unwrap();
        let w = weak_witness(&Op::monomial(a.clone(), 1), &oracle()).unwrap();
        let u = inverse_by_evaluation(&w).unwrap();
        assert_eq!(&a * &u, RatFun::one());
        let w = weak_witness(&Op::delta(), &oracle()).unwrap();
        assert_eq!(inverse_by_evaluation(&w), Some(RatFun::one()));
        assert_eq!(inverse_by_evaluation(&weak_witness(&Op::embed(t()), &oracle()).unwrap()), None);
    }
}
