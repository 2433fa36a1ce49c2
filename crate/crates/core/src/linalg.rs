//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Reduced row echelon form in place; returns the pivot columns.
/// Pivots are the first nonzero entry in column order, so the result is
/// deterministic.
pub(crate) fn row_reduce(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub(crate) fn rank(rows: &[Vec<Rational>], cols: usize) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m, cols).len()
}

/// Rank of a sparse matrix given as `(row, col, value)` triplets.
pub(crate) fn sparse_rank(num_rows: usize, num_cols: usize, entries: &[(usize, usize, Rational)]) -> usize {
    if num_rows == 0 || num_cols == 0 {
        return 0;
    }
    let mut m = vec![vec![Rational::zero(); num_cols]; num_rows];
    for (r, c, v) in entries {
        m[*r][*c] += v;
    }
    rank(&m, num_cols)
}

/// The unique solution of `a x = b`, or `None` when the system is
/// inconsistent or underdetermined.
pub(crate) fn solve_unique(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, y)| {
            let mut r = row.clone();
            r.push(y.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut m, cols + 1);
    if pivots.len() != cols || pivots.contains(&cols) {
        return None;
    }
    Some((0..cols).map(|i| m[i][cols].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&mat(&[&[1, 2], &[2, 4]]), 2), 1);
        assert_eq!(rank(&mat(&[&[1, 2, 3], &[0, 1, 1], &[1, 3, 4]]), 3), 2);
        assert_eq!(rank(&mat(&[&[0, 0], &[0, 0]]), 2), 0);
        let entries = vec![(0, 0, int(1)), (1, 1, int(1)), (2, 0, int(1)), (2, 1, int(1))];
        assert_eq!(sparse_rank(3, 2, &entries), 2);
        assert_eq!(sparse_rank(0, 5, &[]), 0);
    }

    #[test]
    fn solving() {
        let a = mat(&[&[1, 1], &[1, -1], &[2, 0]]);
        let x = solve_unique(&a, &[int(3), int(1), int(4)]).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        assert!(solve_unique(&a, &[int(3), int(1), int(5)]).is_none());
        assert!(solve_unique(&mat(&[&[1, 1]]), &[int(1)]).is_none());
    }
}
