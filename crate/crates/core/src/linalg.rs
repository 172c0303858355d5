//! Exact dense linear algebra over the rationals.
//!
//! Sizes here are tiny (tens of unknowns), so plain fraction-arithmetic
//! Gaussian elimination is the right tool.

use crate::rat::Rat;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Zero;

/// Outcome of solving `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub enum Solve {
    /// The system is consistent with a unique solution.
    Unique(Vec<Rat>),
    /// Consistent but rank-deficient; one solution, free variables set to 0.
    Many(Vec<Rat>),
    /// Inconsistent.
    None,
}

/// Gaussian elimination on the augmented system; `a` is row-major with
/// `a.len()` rows of equal length, `b` the right-hand side.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Solve {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row = 0usize;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Rat::from_integer(1.into()) / m[row][col].clone();
        for c in col..=cols {
            let v = m[row][c].clone() * &inv;
            m[row][c] = v;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=cols {
                    let v = m[r][c].clone() - &f * &m[row][c];
                    m[r][c] = v;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }

    // Inconsistency: a zero row with nonzero rhs.
    for r in row..rows {
        if !m[r][cols].is_zero() {
            return Solve::None;
        }
    }

    let mut x = vec![Rat::zero(); cols];
    for (r, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    if pivot_cols.len() == cols {
        Solve::Unique(x)
    } else {
        Solve::Many(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_i};

    #[test]
    fn unique_2x2() {
        let a = vec![vec![rat_i(2), rat_i(1)], vec![rat_i(1), rat_i(-1)]];
        let b = vec![rat_i(5), rat_i(1)];
        assert_eq!(solve(&a, &b), Solve::Unique(vec![rat_i(2), rat_i(1)]));
    }

    #[test]
    fn overdetermined_consistent() {
        let a = vec![
            vec![rat_i(1), rat_i(0)],
            vec![rat_i(0), rat_i(1)],
            vec![rat_i(1), rat_i(1)],
        ];
        let b = vec![rat(1, 2), rat(1, 3), rat(5, 6)];
        assert_eq!(solve(&a, &b), Solve::Unique(vec![rat(1, 2), rat(1, 3)]));
    }

    #[test]
    fn overdetermined_inconsistent() {
        let a = vec![
            vec![rat_i(1), rat_i(0)],
            vec![rat_i(0), rat_i(1)],
            vec![rat_i(1), rat_i(1)],
        ];
        let b = vec![rat_i(1), rat_i(1), rat_i(3)];
        assert_eq!(solve(&a, &b), Solve::None);
    }

    #[test]
    fn underdetermined_gives_some_solution() {
        let a = vec![vec![rat_i(1), rat_i(1)]];
        let b = vec![rat_i(2)];
        match solve(&a, &b) {
            Solve::Many(x) => assert_eq!(x[0].clone() + x[1].clone(), rat_i(2)),
            other => panic!("expected Many, got {other:?}"),
        }
    }
}
