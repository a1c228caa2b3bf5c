//! Exact solutions of u11 + u22 - u33 - u44 = 0.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lines::abcd_from_john;
use crate::neutral::{inner22, norm22, Point22, G22};
use crate::rng;

/// One-variable profile of a plane wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// exp(-t²).
    Gaussian {},
    /// cos(ωt).
    Cosine { omega: f64 },
    /// t^degree, degree ≤ 4.
    Monomial { degree: u32 },
}

impl Profile {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Profile::Gaussian {} => (-t * t).exp(),
            Profile::Cosine { omega } => (omega * t).cos(),
            Profile::Monomial { degree } => t.powi(degree as i32),
        }
    }
}

/// A Gaussian blob in 3-space, w exp(-|X - c|²/σ²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gaussian3 {
    pub c: [f64; 3],
    pub sigma: f64,
    pub w: f64,
}

/// How fast a solution falls off at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decay {
    /// Bounded, not decaying in every direction.
    CompactIsh,
    /// Decays like a Gaussian wherever it decays.
    GaussianDecay,
    /// Grows or decays polynomially.
    Polynomial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Solution {
    /// profile(<k, x>) with null k.
    PlaneWave { k: Point22, profile: Profile },
    /// x^T Q x + <linear, x> + constant with neutral-trace-free Q.
    Quadratic {
        q: [[f64; 4]; 4],
        #[serde(default)]
        linear: Point22,
        #[serde(default)]
        constant: f64,
    },
    /// Line integrals of a Gaussian mixture, in John coordinates.
    XrayGaussians { components: Vec<Gaussian3> },
    Sum { terms: Vec<Solution> },
}

impl Solution {
    pub fn plane_wave(k: Point22, profile: Profile) -> Result<Self> {
        let s = Solution::PlaneWave { k, profile };
        s.validate()?;
        Ok(s)
    }

    pub fn quadratic(q: [[f64; 4]; 4], linear: Point22, constant: f64) -> Result<Self> {
        let s = Solution::Quadratic { q, linear, constant };
        s.validate()?;
        Ok(s)
    }

    pub fn xray(components: Vec<Gaussian3>) -> Result<Self> {
        let s = Solution::XrayGaussians { components };
        s.validate()?;
        Ok(s)
    }

    /// Constant solution.
    pub fn constant(c: f64) -> Self {
        Solution::Quadratic {
            q: [[0.0; 4]; 4],
            linear: Point22::ZERO,
            constant: c,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Solution::PlaneWave { k, profile } => {
                if norm22(k).abs() > 1e-12 * k.euclid().powi(2) {
                    return Err(Error::NonNullWaveVector);
                }
                if let Profile::Monomial { degree } = profile {
                    if *degree > 4 {
                        return Err(Error::InvalidParameter(format!("monomial degree {degree}")));
                    }
                }
                Ok(())
            }
            Solution::Quadratic { q, .. } => {
                let tr: f64 = (0..4).map(|i| G22[i] * q[i][i]).sum();
                let scale = q.iter().flatten().fold(1.0_f64, |a, x| a.max(x.abs()));
                if tr.abs() > 1e-12 * scale {
                    return Err(Error::NotTraceFree);
                }
                Ok(())
            }
            Solution::XrayGaussians { components } => {
                for g in components {
                    if !(g.sigma > 0.0) || !g.w.is_finite() {
                        return Err(Error::InvalidParameter(format!("gaussian component {g:?}")));
                    }
                }
                Ok(())
            }
            Solution::Sum { terms } => terms.iter().try_for_each(Solution::validate),
        }
    }

    pub fn decay(&self) -> Decay {
        match self {
            Solution::PlaneWave {
                profile: Profile::Gaussian {},
                ..
            } => Decay::GaussianDecay,
            Solution::PlaneWave {
                profile: Profile::Cosine { .. },
                ..
            } => Decay::CompactIsh,
            Solution::PlaneWave { .. } | Solution::Quadratic { .. } | Solution::XrayGaussians { .. } => {
                Decay::Polynomial
            }
            Solution::Sum { terms } => {
                if terms.iter().all(|t| t.decay() == Decay::GaussianDecay) {
                    Decay::GaussianDecay
                } else if terms.iter().any(|t| t.decay() == Decay::Polynomial) {
                    Decay::Polynomial
                } else {
                    Decay::CompactIsh
                }
            }
        }
    }

    pub fn eval(&self, x: &Point22) -> f64 {
        match self {
            Solution::PlaneWave { k, profile } => profile.eval(inner22(k, x)),
            Solution::Quadratic { q, linear, constant } => {
                let mut s = 0.0;
                for i in 0..4 {
                    for j in 0..4 {
                        s += x.0[i] * q[i][j] * x.0[j];
                    }
                }
                s + inner22(linear, x) + constant
            }
            Solution::XrayGaussians { components } => xray_u(components, x),
            Solution::Sum { terms } => terms.iter().map(|t| t.eval(x)).sum(),
        }
    }
}

/// Plane wave without the null check, for negative controls.
#[doc(hidden)]
pub fn plane_wave_unchecked(k: Point22, profile: Profile) -> Solution {
    Solution::PlaneWave { k, profile }
}

pub fn eval(u: &Solution, x: &Point22) -> f64 {
    u.eval(x)
}

/// Integral over z of the mixture along the line with John coordinates x,
/// in closed form.
pub fn xray_u(mix: &[Gaussian3], x: &Point22) -> f64 {
    let l = abcd_from_john(x);
    let q = [l.a, l.c, 1.0];
    let a = l.a * l.a + l.c * l.c + 1.0;
    mix.iter()
        .map(|g| {
            let r = [l.b - g.c[0], l.d - g.c[1], -g.c[2]];
            // |r × q|² / |q|², the squared distance from the center to the line.
            let cx = [
                r[1] * q[2] - r[2] * q[1],
                r[2] * q[0] - r[0] * q[2],
                r[0] * q[1] - r[1] * q[0],
            ];
            let d2 = (cx[0] * cx[0] + cx[1] * cx[1] + cx[2] * cx[2]) / a;
            g.w * g.sigma * (PI / a).sqrt() * (-d2 / (g.sigma * g.sigma)).exp()
        })
        .sum()
}

/// |u11 + u22 - u33 - u44| by central second differences of step h.
pub fn laplacian_residual(u: &Solution, x: &Point22, h: f64) -> f64 {
    let c = u.eval(x);
    let mut s = 0.0;
    for i in 0..4 {
        let e = Point22::basis(i).scale(h);
        s += G22[i] * (u.eval(&(*x + e)) - 2.0 * c + u.eval(&(*x - e)));
    }
    (s / (h * h)).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UheCertificate {
    pub n: usize,
    pub h: [f64; 2],
    pub max_residual: [f64; 2],
    /// log2 of the ratio of the two maximal residuals.
    pub order: f64,
}

/// Finite-difference residuals at n random points of [-2, 2]^4 for
/// h = 1e-2 and 5e-3.
pub fn uhe_certificate(u: &Solution, n: usize, seed: u64) -> UheCertificate {
    let h = [1e-2, 5e-3];
    let mut max_residual = [0.0_f64; 2];
    for i in 0..n {
        let mut r = rng::stream(seed, i as u64);
        let x = Point22(std::array::from_fn(|_| rng::uniform(&mut r, -2.0, 2.0)));
        for k in 0..2 {
            max_residual[k] = max_residual[k].max(laplacian_residual(u, &x, h[k]));
        }
    }
    UheCertificate {
        n,
        h,
        max_residual,
        order: (max_residual[0] / max_residual[1]).log2(),
    }
}

/// Null vector s (cos a, sin a, cos b, sin b).
pub fn null_vector(s: f64, a: f64, b: f64) -> Point22 {
    Point22::new(s * a.cos(), s * a.sin(), s * b.cos(), s * b.sin())
}

fn sym(entries: &[(usize, usize, f64)]) -> [[f64; 4]; 4] {
    let mut q = [[0.0; 4]; 4];
    for &(i, j, v) in entries {
        q[i][j] += v;
        if i != j {
            q[j][i] += v;
        }
    }
    q
}

/// Seed of the built-in X-ray mixtures.
const BUILTIN_SEED: u64 = 0x5eed;

/// The fixed test family: 5 quadratics, 10 null plane waves (5 Gaussian,
/// 3 cosine, 2 monomial) and 5 Gaussian X-ray mixtures.
pub fn builtin_solutions() -> Vec<(String, Solution)> {
    let mut out: Vec<(String, Solution)> = Vec::new();
    let quads = [
        (sym(&[(0, 0, 1.0), (2, 2, 1.0)]), Point22::ZERO, 0.0),
        (
            sym(&[(0, 1, 0.5), (2, 3, 0.5), (0, 2, -1.0)]),
            Point22::new(1.0, -0.5, 0.3, 0.2),
            3.0,
        ),
        (
            sym(&[(0, 0, 2.0), (1, 1, -1.0), (2, 2, 0.5), (3, 3, 0.5), (1, 3, 0.5)]),
            Point22::ZERO,
            3.0,
        ),
        (sym(&[(0, 0, 1.0), (1, 1, -1.0), (0, 3, 0.25)]), Point22::new(0.0, 0.4, 0.0, -0.6), 2.5),
        ([[0.0; 4]; 4], Point22::new(0.7, -0.2, 0.4, 0.1), 3.0),
    ];
    for (i, (q, l, c)) in quads.into_iter().enumerate() {
        out.push((format!("quad_{i}"), Solution::quadratic(q, l, c).unwrap()));
    }
    let gauss = [
        (1.0, PI / 2.0, PI / 2.0),
        (0.8, 0.3, 1.9),
        (0.6, 2.5, -0.7),
        (1.2, -1.1, 0.4),
        (0.5, 1.3, 3.0),
    ];
    for (i, (s, a, b)) in gauss.into_iter().enumerate() {
        let u = Solution::plane_wave(null_vector(s, a, b), Profile::Gaussian {}).unwrap();
        out.push((format!("wave_gauss_{i}"), u));
    }
    let cos = [(1.0, 0.2, 1.0, 1.0), (0.7, 1.7, -2.2, 1.5), (1.1, -0.6, 0.9, 2.0)];
    for (i, (s, a, b, omega)) in cos.into_iter().enumerate() {
        let u = Solution::plane_wave(null_vector(s, a, b), Profile::Cosine { omega }).unwrap();
        out.push((format!("wave_cos_{i}"), u));
    }
    let mono = [(0.9, 0.8, 2.4, 2), (0.6, -2.0, 0.5, 3)];
    for (i, (s, a, b, degree)) in mono.into_iter().enumerate() {
        let u = Solution::plane_wave(null_vector(s, a, b), Profile::Monomial { degree }).unwrap();
        out.push((format!("wave_mono_{i}"), u));
    }
    for i in 0..5 {
        let mut r = rng::stream(BUILTIN_SEED, i);
        let n = 1 + (i as usize % 3);
        let components = (0..n)
            .map(|_| Gaussian3 {
                c: std::array::from_fn(|_| rng::uniform(&mut r, -1.0, 1.0)),
                sigma: rng::uniform(&mut r, 0.7, 1.5),
                w: rng::uniform(&mut r, 0.5, 1.5),
            })
            .collect();
        out.push((format!("xray_{i}"), Solution::xray(components).unwrap()));
    }
    out
}
