//! Exact integer and rational linear algebra on small dense matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type IntMatrix = Vec<Vec<i64>>;

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn det(matrix: &[Vec<i64>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = matrix.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Leading principal minors `det(Q[..k, ..k])` for `k = 1..=n`.
pub fn leading_minors(matrix: &[Vec<i64>]) -> Vec<BigInt> {
    (1..=matrix.len())
        .map(|k| {
            let sub: Vec<Vec<i64>> = matrix[..k].iter().map(|r| r[..k].to_vec()).collect();
            det(&sub)
        })
        .collect()
}

/// Exact inverse by Gauss-Jordan over the rationals; `None` if singular.
#[allow(clippy::needless_range_loop)]
pub fn inverse(matrix: &[Vec<i64>]) -> Option<Vec<Vec<BigRational>>> {
    let n = matrix.len();
    let mut a: Vec<Vec<BigRational>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let v = &f * &a[col][c];
                    a[r][c] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Rank of a small integer matrix (rows x cols), exact.
#[allow(clippy::needless_range_loop)]
pub fn rank(matrix: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigRational>> =
        matrix.iter().map(|row| row.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..rows {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                for j in c..cols {
                    let v = &f * &a[r][j];
                    a[i][j] -= v;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// `a * b` with an explicit result shape, so empty slices keep their dimensions.
pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>], rows: usize, cols: usize) -> IntMatrix {
    (0..rows).map(|r| (0..cols).map(|c| (0..b.len()).map(|k| a[r][k] * b[k][c]).sum()).collect()).collect()
}
