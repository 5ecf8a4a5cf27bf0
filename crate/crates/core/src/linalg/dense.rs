//! Fraction-free dense elimination on small integer matrices.
//!
//! Used to certify rank witnesses: the determinant of a minor is computed with
//! Bareiss' algorithm, so every intermediate value is an exact integer minor.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::field::Rational;

/// Clears denominators row by row, producing an integer matrix with the same row space.
pub fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
        })
        .collect()
}

/// Bareiss elimination in place; returns the rank and the signed last pivot.
fn bareiss(m: &mut [Vec<BigInt>]) -> (usize, BigInt) {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        if p != rank {
            m.swap(p, rank);
            sign = -sign;
        }
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let v = (&m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                m[r][c] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    (rank, sign * prev)
}

/// Rank of a dense rational matrix by fraction-free elimination.
pub fn fraction_free_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = integer_rows(rows);
    bareiss(&mut m).0
}

/// Exact determinant of a square integer matrix.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    assert!(
        m.iter().all(|r| r.len() == n),
        "determinant of a non-square matrix"
    );
    if n == 0 {
        return BigInt::one();
    }
    let mut work = m.to_vec();
    let (rank, last) = bareiss(&mut work);
    if rank < n {
        BigInt::zero()
    } else {
        last
    }
}

/// True when the square rational matrix has nonzero determinant.
pub fn is_nonsingular(rows: &[Vec<Rational>]) -> bool {
    let m = integer_rows(rows);
    !determinant(&m).is_zero()
}
