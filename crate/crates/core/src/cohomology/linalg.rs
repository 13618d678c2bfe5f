//! Dense exact linear algebra over Gaussian rationals.

use crate::scalars::GaussRat;

pub type Mat = Vec<Vec<GaussRat>>;

pub fn zeros(rows: usize, cols: usize) -> Mat {
    vec![vec![GaussRat::zero(); cols]; rows]
}

pub fn transpose(m: &Mat, cols: usize) -> Mat {
    let mut t = zeros(cols, m.len());
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            t[j][i] = x.clone();
        }
    }
    t
}

/// Conjugate transpose.
pub fn adjoint(m: &Mat, cols: usize) -> Mat {
    transpose(m, cols)
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.conj()).collect())
        .collect()
}

pub fn mul(a: &Mat, b: &Mat, b_cols: usize) -> Mat {
    let mut out = zeros(a.len(), b_cols);
    for (i, row) in a.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..b_cols {
                if !b[k][j].is_zero() {
                    out[i][j] += &(x * &b[k][j]);
                }
            }
        }
    }
    out
}

/// Reduced row echelon form by Gauss–Jordan elimination; returns the pivot
/// columns. Exact arithmetic makes the first nonzero entry a valid pivot.
pub fn rref(m: &mut Mat, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    if !m[r][j].is_zero() {
                        let delta = &f * &m[r][j];
                        m[i][j] = &m[i][j] - &delta;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

pub fn rank(m: &Mat, cols: usize) -> usize {
    let mut a = m.clone();
    rref(&mut a, cols).len()
}

/// Basis of the null space, one vector per free column.
pub fn nullspace(m: &Mat, cols: usize) -> Vec<Vec<GaussRat>> {
    let mut a = m.clone();
    let pivots = rref(&mut a, cols);
    let mut out = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![GaussRat::zero(); cols];
        v[f] = GaussRat::one();
        for (row, &pc) in a.iter().zip(&pivots) {
            v[pc] = -&row[f];
        }
        out.push(v);
    }
    out
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse(m: &Mat) -> Option<Mat> {
    let n = m.len();
    let mut aug: Mat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { GaussRat::one() } else { GaussRat::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}
