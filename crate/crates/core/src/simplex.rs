//! Dense tableau simplex for small linear programs in standard form
//!
//! ```text
//! minimize c'x  subject to  A x = b,  x >= 0
//! ```
//!
//! The caller supplies a starting basis whose columns of `A` form an
//! identity matrix and `b >= 0`, so no phase-one is needed. Bland's rule
//! guarantees termination on degenerate problems.

use thiserror::Error;

/// Smallest pivot element accepted by the ratio test.
const PIVOT_EPS: f64 = 1e-9;
/// Reduced costs above `-OPTIMALITY_EPS` count as nonnegative.
const OPTIMALITY_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("starting basis is not an identity submatrix with nonnegative rhs")]
    InvalidBasis,
    #[error("objective is unbounded below")]
    Unbounded,
    #[error("pivot budget of {0} exhausted")]
    PivotLimit(usize),
}

#[derive(Debug, Clone)]
pub struct StandardForm {
    pub rows: usize,
    pub cols: usize,
    /// Row-major `rows x cols`.
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub basis: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

pub fn solve(lp: &StandardForm, max_pivots: usize) -> Result<LpSolution, LpError> {
    let (m, n) = (lp.rows, lp.cols);
    let w = n + 1;
    debug_assert_eq!(lp.a.len(), m * n);

    for (r, &bv) in lp.basis.iter().enumerate() {
        if lp.b[r] < 0.0 {
            return Err(LpError::InvalidBasis);
        }
        for i in 0..m {
            let want = if i == r { 1.0 } else { 0.0 };
            if lp.a[i * n + bv] != want {
                return Err(LpError::InvalidBasis);
            }
        }
    }

    // tableau rows 0..m are constraints, row m is reduced costs; last column rhs
    let mut t = vec![0.0; (m + 1) * w];
    for i in 0..m {
        t[i * w..i * w + n].copy_from_slice(&lp.a[i * n..(i + 1) * n]);
        t[i * w + n] = lp.b[i];
    }
    t[m * w..m * w + n].copy_from_slice(&lp.c);
    for (r, &bv) in lp.basis.iter().enumerate() {
        let cb = lp.c[bv];
        if cb != 0.0 {
            for j in 0..w {
                t[m * w + j] -= cb * t[r * w + j];
            }
        }
    }
    let mut basis = lp.basis.clone();

    let mut pivots = 0;
    loop {
        let Some(enter) = (0..n).find(|&j| t[m * w + j] < -OPTIMALITY_EPS) else {
            break;
        };
        if pivots == max_pivots {
            return Err(LpError::PivotLimit(max_pivots));
        }

        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let aij = t[i * w + enter];
            if aij > PIVOT_EPS {
                let ratio = t[i * w + n] / aij;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((r, best)) => {
                        if ratio < best - PIVOT_EPS
                            || (ratio <= best + PIVOT_EPS && basis[i] < basis[r])
                        {
                            Some((i, ratio))
                        } else {
                            Some((r, best))
                        }
                    }
                };
            }
        }
        let Some((row, _)) = leave else {
            return Err(LpError::Unbounded);
        };

        let p = t[row * w + enter];
        for j in 0..w {
            t[row * w + j] /= p;
        }
        for i in 0..=m {
            if i == row {
                continue;
            }
            let f = t[i * w + enter];
            if f != 0.0 {
                for j in 0..w {
                    t[i * w + j] -= f * t[row * w + j];
                }
            }
        }
        basis[row] = enter;
        pivots += 1;
    }

    let mut x = vec![0.0; n];
    for (r, &bv) in basis.iter().enumerate() {
        x[bv] = t[r * w + n];
    }
    let objective = lp.c.iter().zip(&x).map(|(c, x)| c * x).sum();
    Ok(LpSolution {
        x,
        objective,
        pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_problem() {
        // max 3x + 5y  s.t.  x <= 4, 2y <= 12, 3x + 2y <= 18  ->  (2, 6), 36
        let lp = StandardForm {
            rows: 3,
            cols: 5,
            a: vec![
                1., 0., 1., 0., 0., //
                0., 2., 0., 1., 0., //
                3., 2., 0., 0., 1.,
            ],
            b: vec![4., 12., 18.],
            c: vec![-3., -5., 0., 0., 0.],
            basis: vec![2, 3, 4],
        };
        let sol = solve(&lp, 50).unwrap();
        assert!((sol.objective + 36.0).abs() < 1e-12);
        assert!((sol.x[0] - 2.0).abs() < 1e-12 && (sol.x[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn detects_unbounded() {
        // min -x  s.t.  x - y + s = 1
        let lp = StandardForm {
            rows: 1,
            cols: 3,
            a: vec![1., -1., 1.],
            b: vec![1.],
            c: vec![0., -1., 0.],
            basis: vec![2],
        };
        assert_eq!(solve(&lp, 10), Err(LpError::Unbounded));
    }

    #[test]
    fn rejects_bad_basis() {
        let lp = StandardForm {
            rows: 1,
            cols: 2,
            a: vec![2., 1.],
            b: vec![1.],
            c: vec![1., 1.],
            basis: vec![0],
        };
        assert_eq!(solve(&lp, 10), Err(LpError::InvalidBasis));
    }

    #[test]
    fn respects_pivot_budget() {
        let lp = StandardForm {
            rows: 1,
            cols: 2,
            a: vec![1., 1.],
            b: vec![1.],
            c: vec![-1., 0.],
            basis: vec![1],
        };
        assert_eq!(solve(&lp, 0), Err(LpError::PivotLimit(0)));
        assert_eq!(solve(&lp, 1).unwrap().pivots, 1);
    }
}
