//! Conformal maps of R^{2,2} as linear maps of R^{3,3}.
//!
//! A conformal map f is represented by a 6x6 matrix with
//! `L^T J L = sign * J`; it sends the DPC of the cone at x to a multiple of
//! the DPC of the cone at f(x).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dpc::phi;
use crate::error::{Error, Result};
use crate::neutral::{inner22, norm22, Point22, Vec33, DEFAULT_TOL, G22, J33};
use crate::rng;

pub type Mat6 = [[f64; 6]; 6];
pub type Mat4 = [[f64; 4]; 4];

/// Absolute validation tolerance on unit-scale entries.
pub const VALIDATE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConformalMap {
    #[serde(rename = "lambda_matrix")]
    m: Mat6,
    sign: i8,
}

fn identity6() -> Mat6 {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }))
}

fn mul6(a: &Mat6, b: &Mat6) -> Mat6 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..6).map(|k| a[i][k] * b[k][j]).sum()))
}

/// L^T J L.
fn pullback_form(m: &Mat6) -> Mat6 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..6).map(|k| m[k][i] * J33[k] * m[k][j]).sum())
    })
}

fn form_residual(m: &Mat6, sign: f64) -> f64 {
    let g = pullback_form(m);
    let mut worst = 0.0_f64;
    for i in 0..6 {
        for j in 0..6 {
            let target = if i == j { sign * J33[i] } else { 0.0 };
            worst = worst.max((g[i][j] - target).abs());
        }
    }
    worst
}

impl ConformalMap {
    /// Accepts any matrix with L^T J L = c J for some c != 0 and rescales it
    /// to |c| = 1.
    pub fn new(m: Mat6) -> Result<Self> {
        Self::with_tol(m, VALIDATE_TOL)
    }

    pub fn with_tol(m: Mat6, tol: f64) -> Result<Self> {
        if m.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NotConformal {
                residual: f64::INFINITY,
            });
        }
        let g = pullback_form(&m);
        let c = (0..6).map(|i| J33[i] * g[i][i]).sum::<f64>() / 6.0;
        if c == 0.0 {
            return Err(Error::NotConformal { residual: 1.0 });
        }
        let k = 1.0 / c.abs().sqrt();
        let m: Mat6 = m.map(|row| row.map(|x| k * x));
        let sign = if c > 0.0 { 1 } else { -1 };
        let residual = form_residual(&m, sign as f64);
        let scale = m.iter().flatten().fold(1.0_f64, |a, x| a.max(x.abs()));
        if residual > tol * scale * scale {
            return Err(Error::NotConformal { residual });
        }
        Ok(ConformalMap { m, sign })
    }

    pub fn identity() -> Self {
        ConformalMap {
            m: identity6(),
            sign: 1,
        }
    }

    /// The sign -1 map x -> (x3, x4, x1, x2), which multiplies the neutral
    /// metric by -1.
    pub fn anti_isometry() -> Self {
        let mut m = [[0.0; 6]; 6];
        m[0][5] = 1.0;
        m[5][0] = 1.0;
        m[1][3] = 1.0;
        m[2][4] = 1.0;
        m[3][1] = 1.0;
        m[4][2] = 1.0;
        ConformalMap { m, sign: -1 }
    }

    pub fn matrix(&self) -> &Mat6 {
        &self.m
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Largest entry of |L^T J L - sign J|.
    pub fn residual(&self) -> f64 {
        form_residual(&self.m, self.sign as f64)
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_tol(VALIDATE_TOL)
    }

    pub fn validate_tol(&self, tol: f64) -> Result<()> {
        let r = self.residual();
        let scale = self.m.iter().flatten().fold(1.0_f64, |a, x| a.max(x.abs()));
        if r <= tol * scale * scale {
            Ok(())
        } else {
            Err(Error::NotConformal { residual: r })
        }
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &ConformalMap) -> ConformalMap {
        ConformalMap {
            m: mul6(&self.m, &other.m),
            sign: self.sign * other.sign,
        }
    }

    /// L^{-1} = sign * J L^T J.
    pub fn inverse(&self) -> ConformalMap {
        let s = self.sign as f64;
        ConformalMap {
            m: std::array::from_fn(|i| std::array::from_fn(|j| s * J33[i] * self.m[j][i] * J33[j])),
            sign: self.sign,
        }
    }

    pub fn determinant(&self) -> f64 {
        let rows: Vec<Vec<f64>> = self.m.iter().map(|r| r.to_vec()).collect();
        crate::linalg::determinant(&rows)
    }

    pub fn apply(&self, s: &Vec33) -> Vec33 {
        Vec33(std::array::from_fn(|i| (0..6).map(|k| self.m[i][k] * s.0[k]).sum()))
    }

    /// f(x), or `None` when f(x) is the point at infinity.
    pub fn apply_point(&self, x: &Point22) -> Option<Point22> {
        self.apply_point_tol(x, DEFAULT_TOL)
    }

    pub fn apply_point_tol(&self, x: &Point22, tol: f64) -> Option<Point22> {
        let t = self.apply(&phi(x).0);
        let w = t.weight();
        if w.abs() > tol * t.euclid() {
            Some(t.mid().scale(1.0 / w))
        } else {
            None
        }
    }
}

/// Elementary conformal maps of R^{2,2}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    /// x -> x + v.
    Translation { v: Point22 },
    /// x -> M x with M^T g M = g.
    LinearIsometry { m: Mat4 },
    /// x -> lambda x, lambda > 0.
    Dilation { lambda: f64 },
    /// x -> x / ||x||^2.
    Inversion,
}

impl Generator {
    /// The classical point action; `None` where it is undefined.
    pub fn act(&self, x: &Point22) -> Option<Point22> {
        match self {
            Generator::Translation { v } => Some(*x + *v),
            Generator::LinearIsometry { m } => Some(Point22(std::array::from_fn(|i| {
                (0..4).map(|k| m[i][k] * x.0[k]).sum()
            }))),
            Generator::Dilation { lambda } => Some(x.scale(*lambda)),
            Generator::Inversion => {
                let n = norm22(x);
                (n != 0.0).then(|| x.scale(1.0 / n))
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Generator::Translation { v } => {
                if v.0.iter().all(|c| c.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::InvalidGenerator("non-finite translation".into()))
                }
            }
            Generator::Dilation { lambda } => {
                if lambda.is_finite() && *lambda > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidGenerator(format!("dilation factor {lambda}")))
                }
            }
            Generator::LinearIsometry { m } => {
                let scale = m.iter().flatten().fold(1.0_f64, |a, x| a.max(x.abs()));
                let mut worst = 0.0_f64;
                for i in 0..4 {
                    for j in 0..4 {
                        let g: f64 = (0..4).map(|k| m[k][i] * G22[k] * m[k][j]).sum();
                        let target = if i == j { G22[i] } else { 0.0 };
                        worst = worst.max((g - target).abs());
                    }
                }
                if worst.is_finite() && worst <= VALIDATE_TOL * scale * scale {
                    Ok(())
                } else {
                    Err(Error::InvalidGenerator(format!(
                        "matrix does not preserve the neutral form (residual {worst:e})"
                    )))
                }
            }
            Generator::Inversion => Ok(()),
        }
    }
}

/// The R^{3,3} matrix of a generator.
pub fn lift(g: &Generator) -> Result<ConformalMap> {
    g.validate()?;
    let mut m = identity6();
    match *g {
        Generator::Translation { v } => {
            let h = 0.5 * norm22(&v);
            // <s, v> as a row acting on the middle components.
            let row: [f64; 4] = std::array::from_fn(|i| G22[i] * v.0[i]);
            m[0][0] = 1.0 - h;
            m[0][5] = -h;
            m[5][0] = h;
            m[5][5] = 1.0 + h;
            for i in 0..4 {
                m[0][i + 1] = -row[i];
                m[5][i + 1] = row[i];
                m[i + 1][0] = v.0[i];
                m[i + 1][5] = v.0[i];
            }
        }
        Generator::Dilation { lambda } => {
            let l2 = lambda * lambda;
            let d = 2.0 * lambda;
            m[0][0] = (1.0 + l2) / d;
            m[0][5] = (1.0 - l2) / d;
            m[5][0] = (1.0 - l2) / d;
            m[5][5] = (1.0 + l2) / d;
        }
        Generator::Inversion => {
            m[0][0] = -1.0;
        }
        Generator::LinearIsometry { m: iso } => {
            for i in 0..4 {
                for j in 0..4 {
                    m[i + 1][j + 1] = iso[i][j];
                }
            }
        }
    }
    Ok(ConformalMap { m, sign: 1 })
}

/// Lifts a sequence of generators; the last one acts first.
pub fn lift_script(script: &[Generator]) -> Result<ConformalMap> {
    script
        .iter()
        .try_fold(ConformalMap::identity(), |acc, g| Ok(acc.compose(&lift(g)?)))
}

/// Rotation in a positive (or negative) coordinate plane, or a boost mixing
/// a positive and a negative coordinate.
pub fn plane_isometry(i: usize, j: usize, angle: f64) -> Mat4 {
    let mut m: Mat4 = std::array::from_fn(|a| std::array::from_fn(|b| if a == b { 1.0 } else { 0.0 }));
    if G22[i] == G22[j] {
        let (s, c) = angle.sin_cos();
        m[i][i] = c;
        m[i][j] = -s;
        m[j][i] = s;
        m[j][j] = c;
    } else {
        let (s, c) = (angle.sinh(), angle.cosh());
        m[i][i] = c;
        m[i][j] = s;
        m[j][i] = s;
        m[j][j] = c;
    }
    m
}

fn mul4(a: &Mat4, b: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| a[i][k] * b[k][j]).sum()))
}

/// Planes used for random isometries: two rotations and four boosts.
const ISOMETRY_PLANES: [(usize, usize); 6] = [(0, 1), (2, 3), (0, 2), (0, 3), (1, 2), (1, 3)];

pub fn random_isometry<R: Rng>(r: &mut R) -> Mat4 {
    ISOMETRY_PLANES.iter().fold(
        std::array::from_fn(|a| std::array::from_fn(|b| if a == b { 1.0 } else { 0.0 })),
        |acc, &(i, j)| mul4(&acc, &plane_isometry(i, j, rng::uniform(r, -1.0, 1.0))),
    )
}

/// One generator from the fixed test distribution: inversion with
/// probability 1/4, otherwise a translation, dilation or isometry with equal
/// probability.
pub fn random_generator<R: Rng>(r: &mut R) -> Generator {
    if r.random_bool(0.25) {
        return Generator::Inversion;
    }
    match r.random_range(0..3) {
        0 => Generator::Translation {
            v: Point22(std::array::from_fn(|_| rng::uniform(r, -1.0, 1.0))),
        },
        1 => Generator::Dilation {
            lambda: rng::uniform(r, 0.5_f64.ln(), 2.0_f64.ln()).exp(),
        },
        _ => Generator::LinearIsometry {
            m: random_isometry(r),
        },
    }
}

/// The generators behind [`random_map`], draw k taken from stream k.
pub fn random_script(seed: u64, n: usize) -> Vec<Generator> {
    (0..n)
        .map(|k| random_generator(&mut rng::stream(seed, k as u64)))
        .collect()
}

/// Product of `n` random generators, deterministic in `seed`.
pub fn random_map(seed: u64, n: usize) -> ConformalMap {
    lift_script(&random_script(seed, n)).expect("random generators are valid")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformalityReport {
    /// g(D e1, D e1), the conformal factor at x.
    pub lambda: f64,
    /// max |g(D e_i, D e_j) - lambda g(e_i, e_j)| over i <= j.
    pub max_residual: f64,
}

/// Central-difference check that the induced point map scales the neutral
/// metric by a single factor at x.
pub fn pointwise_conformality_check(map: &ConformalMap, x: &Point22, h: f64) -> Result<ConformalityReport> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("step {h}")));
    }
    map.apply_point(x).ok_or(Error::NearInfinity)?;
    let mut cols = [Point22::ZERO; 4];
    for (i, col) in cols.iter_mut().enumerate() {
        let e = Point22::basis(i).scale(h);
        let fp = map.apply_point(&(*x + e)).ok_or(Error::NearInfinity)?;
        let fm = map.apply_point(&(*x - e)).ok_or(Error::NearInfinity)?;
        *col = (fp - fm).scale(0.5 / h);
    }
    let lambda = inner22(&cols[0], &cols[0]);
    let mut max_residual = 0.0_f64;
    for i in 0..4 {
        for j in i..4 {
            let target = if i == j { lambda * G22[i] } else { 0.0 };
            max_residual = max_residual.max((inner22(&cols[i], &cols[j]) - target).abs());
        }
    }
    Ok(ConformalityReport {
        lambda,
        max_residual,
    })
}

/// Whether `t` is proportional to `u` up to relative `tol`.
pub fn proportional(t: &Vec33, u: &Vec33, tol: f64) -> bool {
    let nt = t.euclid();
    let nu = u.euclid();
    if nt == 0.0 || nu == 0.0 {
        return nt == nu;
    }
    let mut worst = 0.0_f64;
    for i in 0..6 {
        for j in (i + 1)..6 {
            worst = worst.max((t.0[i] * u.0[j] - t.0[j] * u.0[i]).abs());
        }
    }
    worst <= tol * nt * nu
}
