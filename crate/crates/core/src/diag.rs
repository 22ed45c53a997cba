//! Square systems of linear differential equations `Σ_i P[j][i](b_i) = rhs[j]`
//! with operator coefficients, their reduction to diagonal form by Euclidean
//! elimination, and their solution through a [`SurjectivityOracle`].
//!
//! The reduction repeats, on the trailing square block starting at `k`:
//!
//! 1. move a nonzero entry of minimal degree to position `(k, k)`, or stop if
//!    the block is zero;
//! 2. clear column `k` below the pivot with left divisions (row operations)
//!    and row `k` right of the pivot with right divisions (column
//!    operations), leaving remainders of smaller degree;
//! 3. if a remainder survived, swap it into the pivot position and go back
//!    to 2; the pivot degree strictly decreases, so this terminates;
//! 4. continue with `k + 1`.
//!
//! Row operations act on the right-hand side, column operations are a change
//! of unknowns and are accumulated in a recovery matrix.

use thiserror::Error;

use crate::oracle::SurjectivityOracle;
use crate::ore::{OrePoly, Side, Theta};
use crate::ring::DifferentialField;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("system is not square: {rows} equations, row {row} has {len} coefficients, {rhs} right-hand sides")]
    NotSquare { rows: usize, row: usize, len: usize, rhs: usize },
    #[error("the oracle found no solution of diagonal equation {index}")]
    OracleIncomplete { index: usize },
    #[error("diagonal equation {index} has a zero operator and a nonzero right-hand side")]
    Inconsistent { index: usize },
    #[error("recovered solution does not satisfy the original system")]
    Unverified,
}

/// Equation `j` reads `Σ_i matrix[j][i](b_i) = rhs[j]`; the unknowns are
/// field elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearDiffSystem<F> {
    pub matrix: Vec<Vec<OrePoly<F>>>,
    pub rhs: Vec<F>,
}

/// One elementary, invertible transformation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step<F> {
    RowSwap(usize, usize),
    ColSwap(usize, usize),
    /// `row[target] ← row[target] − factor ∘ row[source]`, same on the
    /// right-hand side with `factor` applied.
    RowSub {
        target: usize,
        source: usize,
        factor: OrePoly<F>,
    },
    /// `col[target] ← col[target] − col[source] ∘ factor`, i.e. the
    /// substitution `b_source ← b_source − factor(b_target)`.
    ColSub {
        target: usize,
        source: usize,
        factor: OrePoly<F>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ReductionTrace<F> {
    pub steps: Vec<Step<F>>,
}

/// Diagonal equations `diag[k](b̃_k) = rhs[k]`. If `b̃` solves them, then
/// `b_i = Σ_j recovery[i][j](b̃_j)` solves the original system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalSystem<F> {
    pub diag: Vec<OrePoly<F>>,
    pub rhs: Vec<F>,
    pub recovery: Vec<Vec<OrePoly<F>>>,
}

impl<F: DifferentialField> LinearDiffSystem<F> {
    pub fn new(matrix: Vec<Vec<OrePoly<F>>>, rhs: Vec<F>) -> Result<Self, SolveError> {
        let rows = matrix.len();
        if rhs.len() != rows {
            return Err(SolveError::NotSquare {
                rows,
                row: 0,
                len: matrix.first().map_or(0, Vec::len),
                rhs: rhs.len(),
            });
        }
        if let Some((row, r)) = matrix.iter().enumerate().find(|(_, r)| r.len() != rows) {
            return Err(SolveError::NotSquare { rows, row, len: r.len(), rhs: rhs.len() });
        }
        Ok(LinearDiffSystem { matrix, rhs })
    }

    pub fn size(&self) -> usize {
        self.matrix.len()
    }

    /// Left-hand sides evaluated at `b`.
    pub fn evaluate(&self, b: &[F]) -> Vec<F> {
        self.matrix.iter().map(|row| row.iter().zip(b).fold(F::zero(), |acc, (p, bi)| acc.add(&p.apply(bi)))).collect()
    }

    pub fn is_solution(&self, b: &[F]) -> bool {
        b.len() == self.size() && self.evaluate(b) == self.rhs
    }

    /// Strict row dominance: `θ(P[i][i]) > θ(P[i][j])` for every `j ≠ i`.
    pub fn check_dominance(&self) -> bool {
        self.matrix.iter().enumerate().all(|(i, row)| {
            let diag = row[i].theta();
            row.iter().enumerate().filter(|&(j, _)| j != i).all(|(_, p)| p.theta() < diag)
        })
    }
}

struct Work<F> {
    matrix: Vec<Vec<OrePoly<F>>>,
    rhs: Vec<F>,
    recovery: Vec<Vec<OrePoly<F>>>,
}

impl<F: DifferentialField> Work<F> {
    fn new(sys: &LinearDiffSystem<F>) -> Self {
        let n = sys.size();
        let recovery =
            (0..n).map(|i| (0..n).map(|j| if i == j { OrePoly::one() } else { OrePoly::zero() }).collect()).collect();
        Work { matrix: sys.matrix.clone(), rhs: sys.rhs.clone(), recovery }
    }

    fn apply(&mut self, step: &Step<F>) {
        match step {
            Step::RowSwap(a, b) => {
                self.matrix.swap(*a, *b);
                self.rhs.swap(*a, *b);
            }
            Step::ColSwap(a, b) => {
                for row in self.matrix.iter_mut().chain(self.recovery.iter_mut()) {
                    row.swap(*a, *b);
                }
            }
            Step::RowSub { target, source, factor } => {
                let src = self.matrix[*source].clone();
                for (dst, s) in self.matrix[*target].iter_mut().zip(&src) {
                    *dst = dst.sub_op(&factor.compose(s));
                }
                let shift = factor.apply(&self.rhs[*source]);
                self.rhs[*target] = self.rhs[*target].sub(&shift);
            }
            Step::ColSub { target, source, factor } => {
                for row in self.matrix.iter_mut().chain(self.recovery.iter_mut()) {
                    row[*target] = row[*target].sub_op(&row[*source].compose(factor));
                }
            }
        }
    }
}

impl<F: DifferentialField> ReductionTrace<F> {
    /// Re-applies every step to `sys`, returning the transformed system and
    /// the accumulated recovery matrix.
    pub fn replay(&self, sys: &LinearDiffSystem<F>) -> (LinearDiffSystem<F>, Vec<Vec<OrePoly<F>>>) {
        let mut work = Work::new(sys);
        for step in &self.steps {
            work.apply(step);
        }
        (LinearDiffSystem { matrix: work.matrix, rhs: work.rhs }, work.recovery)
    }
}

struct Reducer<F> {
    work: Work<F>,
    trace: Vec<Step<F>>,
}

impl<F: DifferentialField> Reducer<F> {
    fn step(&mut self, step: Step<F>) {
        self.work.apply(&step);
        self.trace.push(step);
    }

    fn entry(&self, i: usize, j: usize) -> &OrePoly<F> {
        &self.work.matrix[i][j]
    }

    fn min_theta<I: IntoIterator<Item = (usize, usize)>>(&self, cells: I) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), (Theta, usize))> = None;
        for (i, j) in cells {
            let th = self.entry(i, j).theta();
            if th == Theta::MinusInfinity {
                continue;
            }
            let key = (th, self.entry(i, j).coeffs().iter().map(F::size_hint).sum());
            if best.as_ref().is_none_or(|(_, b)| key < *b) {
                best = Some(((i, j), key));
            }
        }
        best.map(|(cell, _)| cell)
    }

    fn move_to_pivot(&mut self, k: usize, (i, j): (usize, usize)) {
        if i != k {
            self.step(Step::RowSwap(k, i));
        }
        if j != k {
            self.step(Step::ColSwap(k, j));
        }
    }

    fn reduce_block(&mut self, k: usize, n: usize) -> bool {
        let block = (k..n).flat_map(|i| (k..n).map(move |j| (i, j)));
        let Some(pivot) = self.min_theta(block) else {
            return false;
        };
        self.move_to_pivot(k, pivot);
        loop {
            for i in k + 1..n {
                if self.entry(i, k).is_zero() {
                    continue;
                }
                let (q, _) = OrePoly::divide(Side::Left, self.entry(i, k), self.entry(k, k)).expect("pivot is nonzero");
                if !q.is_zero() {
                    self.step(Step::RowSub { target: i, source: k, factor: q });
                }
            }
            for j in k + 1..n {
                if self.entry(k, j).is_zero() {
                    continue;
                }
                let (q, _) =
                    OrePoly::divide(Side::Right, self.entry(k, j), self.entry(k, k)).expect("pivot is nonzero");
                if !q.is_zero() {
                    self.step(Step::ColSub { target: j, source: k, factor: q });
                }
            }
            let leftovers = (k + 1..n).map(|i| (i, k)).chain((k + 1..n).map(|j| (k, j)));
            match self.min_theta(leftovers) {
                Some(cell) => self.move_to_pivot(k, cell),
                None => return true,
            }
        }
    }
}

/// Reduces `sys` to an equivalent diagonal system.
///
/// Always terminates. If `sys` is strictly row-dominant, every diagonal
/// entry of the result is nonzero.
pub fn diagonalize<F: DifferentialField>(sys: &LinearDiffSystem<F>) -> (DiagonalSystem<F>, ReductionTrace<F>) {
    let n = sys.size();
    let mut red = Reducer { work: Work::new(sys), trace: Vec::new() };
    for k in 0..n {
        if !red.reduce_block(k, n) {
            break;
        }
    }
    debug_assert!((0..n).all(|i| (0..n).all(|j| i == j || red.entry(i, j).is_zero())));
    let Reducer { work, trace } = red;
    let diag = work.matrix.into_iter().enumerate().map(|(i, mut row)| row.swap_remove(i)).collect();
    (DiagonalSystem { diag, rhs: work.rhs, recovery: work.recovery }, ReductionTrace { steps: trace })
}

/// Solves `sys` by diagonalising it, solving each diagonal equation with
/// `oracle` and mapping back through the recovery matrix. A returned vector
/// has been checked against the original system.
///
/// A zero diagonal equation with zero right-hand side leaves its unknown
/// free; it is set to zero.
pub fn solve<F, O>(sys: &LinearDiffSystem<F>, oracle: &O) -> Result<Vec<F>, SolveError>
where
    F: DifferentialField,
    O: SurjectivityOracle<F> + ?Sized,
{
    let (reduced, _) = diagonalize(sys);
    let mut reduced_sol = Vec::with_capacity(sys.size());
    for (index, (op, g)) in reduced.diag.iter().zip(&reduced.rhs).enumerate() {
        let value = if g.is_zero() {
            F::zero()
        } else if op.is_zero() {
            return Err(SolveError::Inconsistent { index });
        } else {
            oracle.solve_scalar(op, g).filter(|v| op.apply(v) == *g).ok_or(SolveError::OracleIncomplete { index })?
        };
        reduced_sol.push(value);
    }
    let sol: Vec<F> = reduced
        .recovery
        .iter()
        .map(|row| row.iter().zip(&reduced_sol).fold(F::zero(), |acc, (p, v)| acc.add(&p.apply(v))))
        .collect();
    if !sys.is_solution(&sol) {
        return Err(SolveError::Unverified);
    }
    Ok(sol)
}
