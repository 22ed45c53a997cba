use crate::ring::{Rational, Ring};

/// Solves `A·β = rhs` over ℚ by Gauss-Jordan elimination. Free variables are
/// set to zero; `None` when the system is inconsistent.
pub(crate) fn solve_rational(mut a: Vec<Vec<Rational>>, mut rhs: Vec<Rational>, cols: usize) -> Option<Vec<Rational>> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        rhs.swap(row, p);
        let inv = a[row][col].recip();
        for c in col..cols {
            a[row][c] *= &inv;
        }
        rhs[row] *= &inv;
        for r in 0..rows {
            if r == row || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..cols {
                let delta = &factor * &a[row][c];
                a[r][c] -= delta;
            }
            let delta = &factor * &rhs[row];
            rhs[r] -= delta;
        }
        pivots.push(col);
        row += 1;
    }
    if rhs[row..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut sol = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = rhs[r].clone();
    }
    Some(sol)
}
