//! Neutral inner-product spaces R^{2,2} and R^{3,3}.
//!
//! `Point22` carries the form x1y1 + x2y2 - x3y3 - x4y4 and `Vec33` carries
//! s0t0 + s1t1 + s2t2 - s3t3 - s4t4 - s5t5. The middle four components of a
//! `Vec33` are a `Point22`, so the (3,3) form restricts to the (2,2) form there.

use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Default relative tolerance for rank, eigenvalue and membership decisions.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Signs of the (3,3) form, J = diag(1, 1, 1, -1, -1, -1).
pub const J33: [f64; 6] = [1.0, 1.0, 1.0, -1.0, -1.0, -1.0];

/// Signs of the (2,2) form.
pub const G22: [f64; 4] = [1.0, 1.0, -1.0, -1.0];

/// A point (or vector) of R^{2,2}.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point22(pub [f64; 4]);

impl Point22 {
    pub const ZERO: Point22 = Point22([0.0; 4]);

    pub fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Point22([x1, x2, x3, x4])
    }

    pub fn basis(i: usize) -> Self {
        let mut x = [0.0; 4];
        x[i] = 1.0;
        Point22(x)
    }

    pub fn inner(&self, other: &Point22) -> f64 {
        inner22(self, other)
    }

    pub fn norm_sq(&self) -> f64 {
        norm22(self)
    }

    /// Euclidean length, used only for scale estimates.
    pub fn euclid(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scale(&self, k: f64) -> Self {
        Point22(self.0.map(|x| k * x))
    }
}

impl Index<usize> for Point22 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for Point22 {
    type Output = Point22;
    fn add(self, o: Point22) -> Point22 {
        Point22(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for Point22 {
    type Output = Point22;
    fn sub(self, o: Point22) -> Point22 {
        Point22(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for Point22 {
    type Output = Point22;
    fn neg(self) -> Point22 {
        self.scale(-1.0)
    }
}

impl Mul<Point22> for f64 {
    type Output = Point22;
    fn mul(self, p: Point22) -> Point22 {
        p.scale(self)
    }
}

/// Neutral (2,2) inner product.
pub fn inner22(x: &Point22, y: &Point22) -> f64 {
    x.0[0] * y.0[0] + x.0[1] * y.0[1] - x.0[2] * y.0[2] - x.0[3] * y.0[3]
}

/// Neutral quadratic form ||x||^2 = <x, x>.
pub fn norm22(x: &Point22) -> f64 {
    inner22(x, x)
}

/// A vector of R^{3,3}, written (s0, s1..s4, s5).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vec33(pub [f64; 6]);

impl Vec33 {
    pub fn new(s: [f64; 6]) -> Self {
        Vec33(s)
    }

    pub fn basis(i: usize) -> Self {
        let mut s = [0.0; 6];
        s[i] = 1.0;
        Vec33(s)
    }

    pub fn from_parts(s0: f64, mid: Point22, s5: f64) -> Self {
        Vec33([s0, mid.0[0], mid.0[1], mid.0[2], mid.0[3], s5])
    }

    /// The middle four components as a point of R^{2,2}.
    pub fn mid(&self) -> Point22 {
        Point22([self.0[1], self.0[2], self.0[3], self.0[4]])
    }

    pub fn s0(&self) -> f64 {
        self.0[0]
    }

    pub fn s5(&self) -> f64 {
        self.0[5]
    }

    /// s0 + s5, the coefficient that vanishes exactly on hyperplane coordinates.
    pub fn weight(&self) -> f64 {
        self.0[0] + self.0[5]
    }

    pub fn inner(&self, other: &Vec33) -> f64 {
        inner33(self, other)
    }

    pub fn euclid(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scale(&self, k: f64) -> Self {
        Vec33(self.0.map(|x| k * x))
    }

    /// J s, the Euclidean covector of `t -> inner33(s, t)`.
    pub fn lowered(&self) -> Vec33 {
        Vec33(std::array::from_fn(|i| J33[i] * self.0[i]))
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.0.to_vec()
    }

    pub fn from_slice(v: &[f64]) -> Self {
        Vec33(std::array::from_fn(|i| v[i]))
    }
}

impl Index<usize> for Vec33 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for Vec33 {
    type Output = Vec33;
    fn add(self, o: Vec33) -> Vec33 {
        Vec33(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for Vec33 {
    type Output = Vec33;
    fn sub(self, o: Vec33) -> Vec33 {
        Vec33(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for Vec33 {
    type Output = Vec33;
    fn neg(self) -> Vec33 {
        self.scale(-1.0)
    }
}

impl Mul<Vec33> for f64 {
    type Output = Vec33;
    fn mul(self, v: Vec33) -> Vec33 {
        v.scale(self)
    }
}

/// Neutral (3,3) inner product.
pub fn inner33(s: &Vec33, t: &Vec33) -> f64 {
    s.0[0] * t.0[0] + s.0[1] * t.0[1] + s.0[2] * t.0[2]
        - s.0[3] * t.0[3]
        - s.0[4] * t.0[4]
        - s.0[5] * t.0[5]
}

/// Metric type of a subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricClass {
    Definite,
    Indefinite,
    Degenerate,
}

/// Eigenvalue sign counts of a Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

impl Signature {
    pub fn class(&self) -> MetricClass {
        if self.zero > 0 {
            MetricClass::Degenerate
        } else if self.pos == 0 || self.neg == 0 {
            MetricClass::Definite
        } else {
            MetricClass::Indefinite
        }
    }

    pub fn dim(&self) -> usize {
        self.pos + self.neg + self.zero
    }

    /// Difference between the positive and negative counts.
    pub fn index(&self) -> isize {
        self.pos as isize - self.neg as isize
    }
}

/// Counts eigenvalue signs of a symmetric matrix; |lambda| <= tol * max(1, max|lambda|)
/// counts as zero.
pub fn signature_of_gram(gram: &[Vec<f64>], tol: f64) -> Signature {
    if gram.is_empty() {
        return Signature {
            pos: 0,
            neg: 0,
            zero: 0,
        };
    }
    let eig = linalg::jacobi_eigen(gram);
    let big = eig.values.iter().fold(1.0_f64, |a, l| a.max(l.abs()));
    let thr = tol * big;
    let mut sig = Signature {
        pos: 0,
        neg: 0,
        zero: 0,
    };
    for &l in &eig.values {
        if l.abs() <= thr {
            sig.zero += 1;
        } else if l > 0.0 {
            sig.pos += 1;
        } else {
            sig.neg += 1;
        }
    }
    sig
}

/// A linear subspace of R^{3,3} given by an ordered, independent basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace33 {
    basis: Vec<Vec33>,
    tol: f64,
}

/// Result of comparing two subspaces.
#[derive(Debug, Clone)]
pub struct SubspaceRelations {
    /// The first subspace contains the second.
    pub contains: bool,
    pub equal: bool,
    /// Trivial intersection and dimensions summing to six.
    pub complementary: bool,
    pub intersection: Subspace33,
}

impl Subspace33 {
    /// Builds a subspace, rejecting dependent bases at the default tolerance.
    pub fn new(basis: Vec<Vec33>) -> Result<Self> {
        Self::with_tol(basis, DEFAULT_TOL)
    }

    pub fn with_tol(basis: Vec<Vec33>, tol: f64) -> Result<Self> {
        let dim = basis.len();
        let r = normalized_rank(&basis, tol);
        if r < dim {
            return Err(Error::DependentBasis { rank: r, dim });
        }
        Ok(Subspace33 { basis, tol })
    }

    /// The zero subspace.
    pub fn zero(tol: f64) -> Self {
        Subspace33 {
            basis: Vec::new(),
            tol,
        }
    }

    /// Spanning set of any rank; redundant vectors are dropped.
    pub fn span(vectors: &[Vec33], tol: f64) -> Self {
        let mut basis: Vec<Vec33> = Vec::new();
        for v in vectors {
            let mut trial = basis.clone();
            trial.push(*v);
            if normalized_rank(&trial, tol) == trial.len() {
                basis = trial;
            }
        }
        Subspace33 { basis, tol }
    }

    pub fn full(tol: f64) -> Self {
        Subspace33 {
            basis: (0..6).map(Vec33::basis).collect(),
            tol,
        }
    }

    /// P = {s0 + s5 = 0}, the coordinates of hyperplanes together with the
    /// point at infinity.
    pub fn hyperplane_space(tol: f64) -> Self {
        let mut basis = vec![Vec33([1.0, 0.0, 0.0, 0.0, 0.0, -1.0])];
        basis.extend((1..5).map(Vec33::basis));
        Subspace33 { basis, tol }
    }

    /// P-perp, spanned by (1, 0, 0, 0, 0, -1).
    pub fn infinity_line(tol: f64) -> Self {
        Subspace33 {
            basis: vec![Vec33([1.0, 0.0, 0.0, 0.0, 0.0, -1.0])],
            tol,
        }
    }

    pub fn basis(&self) -> &[Vec33] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn set_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Euclidean-orthonormal basis of the same span.
    pub fn orthonormal(&self) -> Vec<Vec33> {
        let rows: Vec<Vec<f64>> = self.basis.iter().map(Vec33::to_vec).collect();
        linalg::orthonormalize(&rows, self.tol)
            .iter()
            .map(|v| Vec33::from_slice(v))
            .collect()
    }

    /// Gram matrix of the stored basis under the (3,3) form.
    pub fn gram(&self) -> Vec<Vec<f64>> {
        gram33(&self.basis)
    }

    /// Sign counts of the (3,3) form restricted to this subspace.
    ///
    /// The Gram matrix is taken on a Euclidean-orthonormal basis of the
    /// span, so the eigenvalues lie in [-1, 1] regardless of how the
    /// stored basis is scaled.
    pub fn signature(&self) -> Signature {
        signature_of_gram(&gram33(&self.orthonormal()), self.tol)
    }

    pub fn metric_class(&self) -> MetricClass {
        self.signature().class()
    }

    /// W with inner33(v, w) = 0 for all v in self, dim W = 6 - dim V.
    pub fn orthogonal_complement(&self) -> Subspace33 {
        let rows: Vec<Vec<f64>> = self
            .orthonormal()
            .iter()
            .map(|v| v.lowered().to_vec())
            .collect();
        let basis = linalg::nullspace(&rows, 6, self.tol)
            .iter()
            .map(|v| Vec33::from_slice(v))
            .collect();
        Subspace33 {
            basis,
            tol: self.tol,
        }
    }

    /// Whether `v` lies in the span, judged on unit-normalized vectors.
    pub fn contains_vector(&self, v: &Vec33) -> bool {
        let n = v.euclid();
        if n == 0.0 {
            return true;
        }
        self.residual(&v.scale(1.0 / n)) <= self.tol.sqrt().min(1e-6).max(self.tol * 10.0)
    }

    /// Euclidean distance from `v` to its orthogonal projection onto the span.
    pub fn residual(&self, v: &Vec33) -> f64 {
        let q = self.orthonormal();
        let mut w = *v;
        for _ in 0..2 {
            for b in &q {
                let d: f64 = linalg::dot(&w.0, &b.0);
                w = w - b.scale(d);
            }
        }
        w.euclid()
    }

    pub fn contains(&self, other: &Subspace33) -> bool {
        let mut stacked = self.basis.clone();
        stacked.extend_from_slice(&other.basis);
        normalized_rank(&stacked, self.tol) == normalized_rank(&self.basis, self.tol)
    }

    pub fn intersection(&self, other: &Subspace33) -> Subspace33 {
        let a = self.orthonormal();
        let b = other.orthonormal();
        let k = a.len();
        let l = b.len();
        if k == 0 || l == 0 {
            return Subspace33::zero(self.tol);
        }
        // Columns a_1..a_k, -b_1..-b_l; each null vector (c, d) gives sum c_i a_i.
        let rows: Vec<Vec<f64>> = (0..6)
            .map(|r| {
                a.iter()
                    .map(|v| v.0[r])
                    .chain(b.iter().map(|v| -v.0[r]))
                    .collect()
            })
            .collect();
        let ns = linalg::nullspace(&rows, k + l, self.tol);
        let vecs: Vec<Vec33> = ns
            .iter()
            .map(|c| {
                let mut s = Vec33::default();
                for (ci, v) in c.iter().take(k).zip(&a) {
                    s = s + v.scale(*ci);
                }
                s
            })
            .collect();
        Subspace33::span(&vecs, self.tol)
    }

    /// Sine-type distance between two subspaces: the largest Euclidean
    /// residual of either orthonormal basis projected onto the other span.
    /// Zero iff the spans agree; dimension mismatch yields at least one.
    pub fn distance(&self, other: &Subspace33) -> f64 {
        if self.dim() != other.dim() {
            return 1.0;
        }
        let d1 = other
            .orthonormal()
            .iter()
            .map(|v| self.residual(v))
            .fold(0.0, f64::max);
        let d2 = self
            .orthonormal()
            .iter()
            .map(|v| other.residual(v))
            .fold(0.0, f64::max);
        d1.max(d2)
    }

    /// Applies a linear map (6x6 row-major) to every basis vector.
    pub fn transform(&self, m: &[[f64; 6]; 6]) -> Subspace33 {
        let basis = self
            .basis
            .iter()
            .map(|v| Vec33(std::array::from_fn(|i| linalg::dot(&m[i], &v.0))))
            .collect();
        Subspace33 {
            basis,
            tol: self.tol,
        }
    }

    /// Re-spans with a coefficient matrix: new_i = sum_j c[i][j] b_j.
    pub fn respan(&self, c: &[Vec<f64>]) -> Result<Subspace33> {
        let basis: Vec<Vec33> = c
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.basis)
                    .fold(Vec33::default(), |acc, (ci, b)| acc + b.scale(*ci))
            })
            .collect();
        Subspace33::with_tol(basis, self.tol)
    }
}

/// Rank, equality, complementarity and intersection of two subspaces.
pub fn subspace_relations(v: &Subspace33, w: &Subspace33) -> SubspaceRelations {
    let intersection = v.intersection(w);
    let contains = v.contains(w);
    let equal = contains && w.contains(v);
    let complementary = intersection.dim() == 0 && v.dim() + w.dim() == 6;
    SubspaceRelations {
        contains,
        equal,
        complementary,
        intersection,
    }
}

/// Orthogonal complement under the (3,3) form.
pub fn orthogonal_complement(v: &Subspace33) -> Subspace33 {
    v.orthogonal_complement()
}

/// Signature of the (3,3) form restricted to `v`.
pub fn signature(v: &Subspace33) -> Signature {
    v.signature()
}

pub fn gram33(vs: &[Vec33]) -> Vec<Vec<f64>> {
    vs.iter()
        .map(|a| vs.iter().map(|b| inner33(a, b)).collect())
        .collect()
}

fn normalized_rank(vs: &[Vec33], tol: f64) -> usize {
    let rows: Vec<Vec<f64>> = vs
        .iter()
        .map(|v| {
            let n = v.euclid();
            if n == 0.0 {
                v.to_vec()
            } else {
                v.scale(1.0 / n).to_vec()
            }
        })
        .collect();
    linalg::rank(&rows, tol)
}
