//! Small dense kernels: cyclic Jacobi eigensolver, Gaussian elimination with
//! partial pivoting, and Euclidean orthonormalization.
//!
//! Everything here works on tiny matrices (at most 12 columns), so plain
//! `Vec<Vec<f64>>` storage is used throughout.

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<f64>>,
    /// Frobenius norm of the off-diagonal part at exit.
    pub off_norm: f64,
    pub sweeps: usize,
}

const MAX_SWEEPS: usize = 100;

fn off_diagonal_norm(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i][j] * a[i][j];
            }
        }
    }
    s.sqrt()
}

fn frobenius(a: &[Vec<f64>]) -> f64 {
    a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

/// Cyclic Jacobi eigensolver for a real symmetric matrix.
///
/// Sweeps over all `(p, q)` pairs in row order, annihilating each
/// off-diagonal entry with a plane rotation, until the off-diagonal Frobenius
/// norm drops below `1e-15 * ||A||_F`. The input is symmetrized first.
pub fn jacobi_eigen(input: &[Vec<f64>]) -> SymEigen {
    let n = input.len();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| 0.5 * (input[i][j] + input[j][i])).collect())
        .collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let norm = frobenius(&a);
    let target = 1e-15 * norm;
    let mut sweeps = 0;

    while sweeps < MAX_SWEEPS && off_diagonal_norm(&a) > target {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }

    let off_norm = off_diagonal_norm(&a);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|i| v[i][k]).collect())
        .collect();
    SymEigen {
        values,
        vectors,
        off_norm,
        sweeps,
    }
}

/// Result of reducing a matrix to row echelon form.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rank: usize,
    /// Pivot column of each nonzero row, in order.
    pub pivots: Vec<usize>,
    /// Reduced row echelon form (pivot entries scaled to one).
    pub rref: Vec<Vec<f64>>,
}

/// Gauss-Jordan elimination with partial pivoting.
///
/// A candidate pivot counts as zero when its magnitude is at most
/// `tol * max(1, max|a_ij|)`.
pub fn echelon(rows: &[Vec<f64>], tol: f64) -> Echelon {
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let scale = a
        .iter()
        .flatten()
        .fold(1.0_f64, |acc, x| acc.max(x.abs()));
    let eps = tol * scale;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let (best, val) = (r..m)
            .map(|i| (i, a[i][c].abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= eps {
            for row in a.iter_mut().skip(r) {
                row[c] = 0.0;
            }
            continue;
        }
        a.swap(r, best);
        let p = a[r][c];
        for x in a[r].iter_mut() {
            *x /= p;
        }
        for i in 0..m {
            if i != r {
                let f = a[i][c];
                if f != 0.0 {
                    for j in 0..n {
                        a[i][j] -= f * a[r][j];
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Echelon {
        rank: r,
        pivots,
        rref: a,
    }
}

pub fn rank(rows: &[Vec<f64>], tol: f64) -> usize {
    echelon(rows, tol).rank
}

/// Basis of `{x : A x = 0}` read off the reduced echelon form, one vector per
/// free column in increasing column order.
pub fn nullspace(rows: &[Vec<f64>], ncols: usize, tol: f64) -> Vec<Vec<f64>> {
    if rows.is_empty() {
        return (0..ncols)
            .map(|k| (0..ncols).map(|j| if j == k { 1.0 } else { 0.0 }).collect())
            .collect();
    }
    let e = echelon(rows, tol);
    let free: Vec<usize> = (0..ncols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0.0; ncols];
            x[f] = 1.0;
            for (row, &pc) in e.pivots.iter().enumerate() {
                x[pc] = -e.rref[row][f];
            }
            x
        })
        .collect()
}

/// Solves the square system `A x = b` with partial pivoting.
pub fn solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let scale = a.iter().flatten().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    if scale == 0.0 {
        return None;
    }
    for c in 0..n {
        let best = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        if m[best][c].abs() <= 1e-14 * scale {
            return None;
        }
        m.swap(c, best);
        for i in (c + 1)..n {
            let f = m[i][c] / m[c][c];
            for j in c..=n {
                m[i][j] -= f * m[c][j];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = ((i + 1)..n).map(|j| m[i][j] * x[j]).sum();
        x[i] = (m[i][n] - s) / m[i][i];
    }
    Some(x)
}

/// Determinant by LU with partial pivoting.
pub fn determinant(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = 1.0;
    for c in 0..n {
        let best = (c..n)
            .max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))
            .unwrap_or(c);
        if m[best][c] == 0.0 {
            return 0.0;
        }
        if best != c {
            m.swap(c, best);
            det = -det;
        }
        det *= m[c][c];
        for i in (c + 1)..n {
            let f = m[i][c] / m[c][c];
            for j in c..n {
                m[i][j] -= f * m[c][j];
            }
        }
    }
    det
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Euclidean orthonormal basis of the span of `vectors` (modified
/// Gram-Schmidt with one re-orthogonalization pass). Vectors whose residual
/// falls below `tol` times their original length are dropped.
pub fn orthonormalize(vectors: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let len = norm(v);
        if len == 0.0 {
            continue;
        }
        let mut w: Vec<f64> = v.iter().map(|x| x / len).collect();
        for _ in 0..2 {
            for q in &out {
                let d = dot(&w, q);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= d * qi;
                }
            }
        }
        let r = norm(&w);
        if r > tol {
            out.push(w.iter().map(|x| x / r).collect());
        }
    }
    out
}
