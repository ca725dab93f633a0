//! Dense exact linear algebra over a field.

use crate::scalar::Scalar;

/// Result of Gaussian elimination: the rank and one nonsingular
/// `rank x rank` submatrix, given by its row and column indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankProfile {
    pub rank: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// Rank of a row-major matrix by Gaussian elimination with row pivoting.
pub fn rank_profile<C: Scalar>(matrix: &[Vec<C>]) -> RankProfile {
    let nrows = matrix.len();
    let ncols = matrix.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<C>> = matrix.to_vec();
    let mut row_ids: Vec<usize> = (0..nrows).collect();
    let mut rows = Vec::new();
    let mut cols = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        row_ids.swap(r, p);
        let pivot = m[r][c].clone();
        for i in r + 1..nrows {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone() / pivot.clone();
            for j in c..ncols {
                let delta = factor.clone() * m[r][j].clone();
                m[i][j] = m[i][j].clone() - delta;
            }
        }
        rows.push(row_ids[r]);
        cols.push(c);
        r += 1;
    }
    rows.sort_unstable();
    RankProfile { rank: r, rows, cols }
}

pub fn rank<C: Scalar>(matrix: &[Vec<C>]) -> usize {
    rank_profile(matrix).rank
}

/// Determinant by Gaussian elimination. Panics on a non-square matrix.
pub fn determinant<C: Scalar>(matrix: &[Vec<C>]) -> C {
    let n = matrix.len();
    assert!(matrix.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    let mut m = matrix.to_vec();
    let mut det = C::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return C::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det = det * pivot.clone();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone() / pivot.clone();
            for j in c..n {
                let delta = factor.clone() * m[c][j].clone();
                m[i][j] = m[i][j].clone() - delta;
            }
        }
    }
    det
}

/// Determinant by cofactor expansion along rows, memoized over column
/// subsets: `O(n 2^n)` and division-free. Used to recheck certificates
/// independently of the elimination path.
pub fn determinant_by_expansion<C: Scalar>(matrix: &[Vec<C>]) -> C {
    let n = matrix.len();
    assert!(matrix.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    assert!(n < usize::BITS as usize, "matrix too large for subset expansion");
    // minors[mask] = det of rows (n - |mask|)..n restricted to columns in mask
    let full = (1usize << n) - 1;
    let mut minors: Vec<C> = vec![C::zero(); 1 << n];
    minors[0] = C::one();
    for mask in 1..=full {
        let k = mask.count_ones() as usize;
        let row = n - k;
        let mut acc = C::zero();
        let mut sign_neg = false;
        for col in 0..n {
            if mask & (1 << col) == 0 {
                continue;
            }
            let entry = &matrix[row][col];
            if !entry.is_zero() {
                let term = entry.clone() * minors[mask & !(1 << col)].clone();
                acc = if sign_neg { acc - term } else { acc + term };
            }
            sign_neg = !sign_neg;
        }
        minors[mask] = acc;
    }
    minors[full].clone()
}

pub fn submatrix<C: Clone>(matrix: &[Vec<C>], rows: &[usize], cols: &[usize]) -> Vec<Vec<C>> {
    rows.iter().map(|&r| cols.iter().map(|&c| matrix[r][c].clone()).collect()).collect()
}
