//! Exact integer linear algebra (fraction-free elimination).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Determinant by Bareiss elimination.
pub fn determinant(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), n, "determinant needs a square matrix");
            r.iter().map(|&v| BigInt::from(v)).collect()
        })
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &m[n - 1][n - 1]
}

/// Rank of a (possibly non-square) integer matrix.
#[allow(clippy::needless_range_loop)]
pub fn rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let (a, b) = (m[r][c].clone(), m[i][c].clone());
            for j in c..cols {
                let v = &m[i][j] * &a - &m[r][j] * &b;
                m[i][j] = v;
            }
            // keep entries small
            let g = m[i].iter().fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
            if !g.is_zero() && !g.is_one() {
                for x in m[i].iter_mut() {
                    *x /= &g;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Dimension of the affine hull of a point set.
pub fn affine_dimension(points: &[Vec<i64>]) -> usize {
    match points.split_first() {
        None => 0,
        Some((base, rest)) => {
            let diffs: Vec<Vec<i64>> = rest
                .iter()
                .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
                .collect();
            rank(&diffs)
        }
    }
}

pub fn abs_determinant(rows: &[Vec<i64>]) -> BigInt {
    determinant(rows).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(&[vec![2, 1], vec![1, 3]]), BigInt::from(5));
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(determinant(&[vec![1, 2], vec![2, 4]]), BigInt::from(0));
        let m = vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]];
        assert_eq!(determinant(&m), BigInt::from(4));
        assert_eq!(determinant(&[]), BigInt::from(1));
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&[vec![1, 2, 3], vec![2, 4, 6]]), 1);
        assert_eq!(rank(&[vec![1, 0], vec![0, 1], vec![1, 1]]), 2);
        assert_eq!(rank(&[vec![0, 0]]), 0);
        assert_eq!(affine_dimension(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]), 2);
        assert_eq!(affine_dimension(&[vec![3, 3]]), 0);
    }
}
