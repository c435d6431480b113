//! Exact Gaussian elimination.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Solves `A X = B` for the unique `X` (`cols × rhs`).
///
/// Fails with [`Error::Inconsistent`] if no solution exists or if the
/// columns of `A` are dependent.
pub(crate) fn solve_unique<C: Scalar>(a: &[Vec<C>], b: &[Vec<C>]) -> Result<Vec<Vec<C>>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let nrhs = b.first().map_or(0, Vec::len);
    assert_eq!(b.len(), rows, "right-hand side has wrong number of rows");
    let mut m: Vec<Vec<C>> = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().chain(rb).cloned().collect())
        .collect();

    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) else {
            return Err(Error::Inconsistent(format!(
                "probe system does not determine unknown {col}"
            )));
        };
        m.swap(pivot_row, p);
        let inv = C::one() / m[pivot_row][col].clone();
        for v in m[pivot_row][col..].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        let pivot: Vec<C> = m[pivot_row][col..].to_vec();
        for (r, row) in m.iter_mut().enumerate() {
            if r == pivot_row || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, pv) in row[col..].iter_mut().zip(&pivot) {
                *v = v.clone() - factor.clone() * pv.clone();
            }
        }
        pivot_row += 1;
    }
    for row in &m[pivot_row..] {
        if row[cols..].iter().any(|v| !v.is_zero()) {
            return Err(Error::Inconsistent(
                "overdetermined probe system has no solution".into(),
            ));
        }
    }
    Ok((0..cols)
        .map(|c| m[c][cols..cols + nrhs].to_vec())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_overdetermined_consistent_system() {
        let a = vec![vec![1.0, 1.0], vec![1.0, -1.0], vec![2.0, 0.0]];
        let b = vec![vec![3.0], vec![1.0], vec![4.0]];
        let x = solve_unique(&a, &b).unwrap();
        assert_eq!(x, vec![vec![2.0], vec![1.0]]);
    }

    #[test]
    fn rejects_inconsistent_and_singular() {
        let a = vec![vec![1.0], vec![1.0]];
        assert!(solve_unique(&a, &[vec![1.0], vec![2.0]]).is_err());
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve_unique(&a, &[vec![1.0], vec![2.0]]).is_err());
    }
}
