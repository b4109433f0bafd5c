//! Exact linear algebra over the integers and rationals: fraction-free rank
//! and unique-solution solving for small systems.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rank of an integer matrix (given as rows) by fraction-free Bareiss
/// elimination.
pub(crate) fn rank_bareiss(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    if m.is_empty() || m[0].is_empty() {
        return 0;
    }
    let (nr, nc) = (m.len(), m[0].len());
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut col = 0;
    while rank < nr && col < nc {
        // Find a pivot in this column at or below `rank`.
        let pivot = (rank..nr).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else {
            col += 1;
            continue;
        };
        m.swap(rank, p);
        for r in (rank + 1)..nr {
            for c in (col + 1)..nc {
                let val = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = &val / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        col += 1;
    }
    rank
}

/// Outcome of solving `A x = b` for a column subset.
pub(crate) enum SolveOutcome {
    /// The chosen columns are linearly dependent.
    Dependent,
    /// Independent columns but the system has no solution.
    Inconsistent,
    /// The unique solution.
    Solution(Vec<BigRational>),
}

/// Solves `sum_k x_k col_k = rhs` exactly when the columns are independent.
pub(crate) fn solve_unique(cols: &[&Vec<i64>], rhs: &[i64]) -> SolveOutcome {
    let nrows = rhs.len();
    let ncols = cols.len();
    // Augmented matrix [A | rhs] over the rationals.
    let mut m: Vec<Vec<BigRational>> = (0..nrows)
        .map(|r| {
            let mut row: Vec<BigRational> = cols
                .iter()
                .map(|c| BigRational::from_integer(BigInt::from(c[r])))
                .collect();
            row.push(BigRational::from_integer(BigInt::from(rhs[r])));
            row
        })
        .collect();

    let mut pivot_rows = Vec::with_capacity(ncols);
    let mut row = 0;
    for col in 0..ncols {
        let pivot = (row..nrows).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else {
            return SolveOutcome::Dependent;
        };
        m.swap(row, p);
        let inv = m[row][col].clone();
        for c in col..=ncols {
            let v = m[row][c].clone() / inv.clone();
            m[row][c] = v;
        }
        for r in 0..nrows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=ncols {
                    let v = m[r][c].clone() - f.clone() * m[row][c].clone();
                    m[r][c] = v;
                }
            }
        }
        pivot_rows.push(row);
        row += 1;
    }
    // Remaining rows must have zero right-hand side.
    for r in row..nrows {
        if !m[r][ncols].is_zero() {
            return SolveOutcome::Inconsistent;
        }
    }
    let x = (0..ncols).map(|c| m[c][ncols].clone()).collect();
    SolveOutcome::Solution(x)
}

/// True when `x >= 0` componentwise.
pub(crate) fn all_nonnegative(x: &[BigRational]) -> bool {
    x.iter().all(|v| !v.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank_bareiss(&[vec![1, 0], vec![0, 1]]), 2);
        assert_eq!(rank_bareiss(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank_bareiss(&[vec![0, 0], vec![0, 0]]), 0);
        // Type A incidence of a path on 3 vertices has rank 2.
        assert_eq!(
            rank_bareiss(&[vec![1, 0], vec![-1, 1], vec![0, -1]]),
            2
        );
        // Roots e1 - e2 and e1 + e2 are independent.
        assert_eq!(rank_bareiss(&[vec![1, 1], vec![-1, 1]]), 2);
    }

    #[test]
    fn solve_small_systems() {
        let c1 = vec![1, -1, 0];
        let c2 = vec![0, 1, -1];
        match solve_unique(&[&c1, &c2], &[2, 0, -2]) {
            SolveOutcome::Solution(x) => {
                assert_eq!(x[0], BigRational::from_integer(BigInt::from(2)));
                assert_eq!(x[1], BigRational::from_integer(BigInt::from(2)));
            }
            _ => panic!("expected a solution"),
        }
        match solve_unique(&[&c1, &c2], &[1, 1, 0]) {
            SolveOutcome::Inconsistent => {}
            _ => panic!("expected inconsistency"),
        }
        let c3 = vec![2, -2, 0];
        match solve_unique(&[&c1, &c3], &[1, -1, 0]) {
            SolveOutcome::Dependent => {}
            _ => panic!("expected dependence"),
        }
    }
}
