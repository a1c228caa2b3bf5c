//! Hyperspheres of R^{2,2} and their diagonal polyspherical coordinates.
//!
//! A proper hypersphere ||x - p||^2 = rho has DPC
//! ((1 - ||p||^2 + rho)/2, p, (1 + ||p||^2 - rho)/2), the hyperplane
//! <a, x> = b has DPC (-b, a, b), and a point x is the zero-radius sphere
//! (the isotropic cone) at x, whose DPC is `phi(x)`. Membership of x in H is
//! orthogonality of `phi(x)` and the DPC of H.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::neutral::{inner22, inner33, norm22, Point22, Vec33, DEFAULT_TOL};

/// A hypersphere in R^{2,2}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Hypersphere {
    /// ||x - center||^2 = radius_sq; radius_sq = 0 is the isotropic cone.
    Proper { center: Point22, radius_sq: f64 },
    /// <normal, x> = offset under the neutral pairing.
    Plane { normal: Point22, offset: f64 },
    /// The coordinates proportional to (1, 0, 0, 0, 0, -1).
    Empty,
}

impl Hypersphere {
    pub fn proper(center: Point22, radius_sq: f64) -> Self {
        Hypersphere::Proper { center, radius_sq }
    }

    pub fn cone(center: Point22) -> Self {
        Hypersphere::Proper {
            center,
            radius_sq: 0.0,
        }
    }

    /// Plane with nonzero normal; a zero normal is rejected.
    pub fn plane(normal: Point22, offset: f64) -> Result<Self> {
        if normal.euclid() == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Hypersphere::Plane { normal, offset })
    }

    /// Scales a plane to unit Euclidean normal with first nonzero normal
    /// component positive. Proper spheres are returned unchanged.
    pub fn canonical(&self) -> Self {
        match *self {
            Hypersphere::Plane { normal, offset } => {
                let n = normal.euclid();
                let lead = normal.0.iter().copied().find(|c| c.abs() > 1e-12 * n).unwrap_or(1.0);
                let k = lead.signum() / n;
                Hypersphere::Plane {
                    normal: normal.scale(k),
                    offset: offset * k,
                }
            }
            other => other,
        }
    }

    /// Left-hand side of the defining equation minus its right-hand side.
    pub fn equation(&self, x: &Point22) -> f64 {
        match self {
            Hypersphere::Proper { center, radius_sq } => norm22(&(*x - *center)) - radius_sq,
            Hypersphere::Plane { normal, offset } => inner22(normal, x) - offset,
            Hypersphere::Empty => 1.0,
        }
    }
}

/// Kind read off a DPC vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DpcKind {
    Proper,
    Plane,
    Empty,
}

/// Diagonal polyspherical coordinates, defined up to a nonzero factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Dpc(pub Vec33);

impl Dpc {
    pub fn new(v: Vec33) -> Result<Self> {
        if v.euclid() == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Dpc(v))
    }

    pub fn vec(&self) -> &Vec33 {
        &self.0
    }

    /// s0 + s5 = 1 when that is possible at `tol`, otherwise unit Euclidean
    /// length with the first nonzero component positive.
    pub fn normalize(&self, tol: f64) -> Dpc {
        let v = self.0;
        let n = v.euclid();
        let w = v.weight();
        if w.abs() > tol * n {
            return Dpc(v.scale(1.0 / w));
        }
        let lead = v.0.iter().copied().find(|c| c.abs() > tol * n).unwrap_or(1.0);
        Dpc(v.scale(lead.signum() / n))
    }

    /// Null vector (an isotropic cone or the empty sphere).
    pub fn is_null(&self, tol: f64) -> bool {
        inner33(&self.0, &self.0).abs() <= tol * self.0.euclid().powi(2)
    }

    /// Null and normalized to s0 + s5 = 1, i.e. the DPC of a point.
    pub fn in_q1(&self, tol: f64) -> bool {
        self.is_null(tol) && (self.0.weight() - 1.0).abs() <= tol
    }
}

/// DPC of a hypersphere.
pub fn dpc_from_hypersphere(h: &Hypersphere) -> Result<Dpc> {
    match *h {
        Hypersphere::Proper { center, radius_sq } => {
            let p2 = norm22(&center);
            Ok(Dpc(Vec33::from_parts(
                0.5 * (1.0 - p2 + radius_sq),
                center,
                0.5 * (1.0 + p2 - radius_sq),
            )))
        }
        Hypersphere::Plane { normal, offset } => {
            if normal.euclid() == 0.0 {
                return Err(Error::ZeroVector);
            }
            Ok(Dpc(Vec33::from_parts(-offset, normal, offset)))
        }
        Hypersphere::Empty => Err(Error::EmptyHypersphere),
    }
}

/// The isotropic cone at `p`, a point of Q1.
pub fn phi(p: &Point22) -> Dpc {
    let p2 = norm22(p);
    Dpc(Vec33::from_parts(0.5 * (1.0 - p2), *p, 0.5 * (1.0 + p2)))
}

pub fn classify_dpc(s: &Dpc) -> DpcKind {
    classify_dpc_tol(s, DEFAULT_TOL)
}

pub fn classify_dpc_tol(s: &Dpc, tol: f64) -> DpcKind {
    let n = s.0.euclid();
    if s.0.weight().abs() > tol * n {
        DpcKind::Proper
    } else if s.0.mid().euclid() > tol * n {
        DpcKind::Plane
    } else {
        DpcKind::Empty
    }
}

/// Inverse of [`dpc_from_hypersphere`]; planes come back in canonical scale.
pub fn hypersphere_from_dpc(s: &Dpc) -> Result<Hypersphere> {
    hypersphere_from_dpc_tol(s, DEFAULT_TOL)
}

pub fn hypersphere_from_dpc_tol(s: &Dpc, tol: f64) -> Result<Hypersphere> {
    if s.0.euclid() == 0.0 {
        return Err(Error::ZeroVector);
    }
    match classify_dpc_tol(s, tol) {
        DpcKind::Proper => {
            let v = s.normalize(tol).0;
            Ok(Hypersphere::Proper {
                center: v.mid(),
                radius_sq: inner33(&v, &v),
            })
        }
        DpcKind::Plane => {
            let v = s.normalize(tol).0;
            Ok(Hypersphere::Plane {
                normal: v.mid(),
                offset: 0.5 * (v.s5() - v.s0()),
            }
            .canonical())
        }
        DpcKind::Empty => Ok(Hypersphere::Empty),
    }
}

/// Whether x lies on the hypersphere with DPC `s`.
pub fn point_on(s: &Dpc, x: &Point22) -> bool {
    point_on_tol(s, x, DEFAULT_TOL)
}

pub fn point_on_tol(s: &Dpc, x: &Point22, tol: f64) -> bool {
    let px = phi(x).0;
    inner33(&px, &s.0).abs() <= tol * px.euclid() * s.0.euclid()
}

/// ||a - b||^2.
pub fn separation(a: &Point22, b: &Point22) -> f64 {
    norm22(&(*a - *b))
}

/// Membership through the hyperplane s0 x0 + <s, x> - s5 x5 = 0 of R^6 cut
/// with the slice x0 + x5 = 1, evaluated coordinate by coordinate.
pub fn complementary_hyperplane_points(s: &Dpc, sample: &[Point22]) -> Vec<bool> {
    complementary_hyperplane_points_tol(s, sample, DEFAULT_TOL)
}

pub fn complementary_hyperplane_points_tol(s: &Dpc, sample: &[Point22], tol: f64) -> Vec<bool> {
    let c = s.0 .0;
    let sn = s.0.euclid();
    sample
        .iter()
        .map(|x| {
            let [x1, x2, x3, x4] = x.0;
            let q = x1 * x1 + x2 * x2 - x3 * x3 - x4 * x4;
            let x0 = 0.5 - 0.5 * q;
            let x5 = 1.0 - x0;
            let lhs = c[0] * x0 + c[1] * x1 + c[2] * x2 - c[3] * x3 - c[4] * x4 - c[5] * x5;
            let pn = (x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4 + x5 * x5).sqrt();
            lhs.abs() <= tol * pn * sn
        })
        .collect()
}

/// Which clause of the orthogonality criterion applies to a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrthoClause {
    /// Two proper hyperspheres of nonzero radius.
    Spheres,
    /// A proper hypersphere and an isotropic cone.
    SphereCone,
    /// Two isotropic cones.
    Cones,
    /// Two hyperplanes.
    Planes,
    /// A hyperplane and a hypersphere (cone included).
    PlaneSphere,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthoVerdict {
    pub by_dpc: bool,
    pub by_geometry: bool,
    pub clause: OrthoClause,
}

/// Orthogonality decided twice: from the DPC inner product and from the
/// geometric condition for the matching pair of kinds.
pub fn orthogonality_oracle(h: &Hypersphere, k: &Hypersphere) -> Result<OrthoVerdict> {
    orthogonality_oracle_tol(h, k, DEFAULT_TOL)
}

pub fn orthogonality_oracle_tol(h: &Hypersphere, k: &Hypersphere, tol: f64) -> Result<OrthoVerdict> {
    let sh = dpc_from_hypersphere(h)?.0;
    let sk = dpc_from_hypersphere(k)?.0;
    let scale = sh.euclid() * sk.euclid();
    let by_dpc = inner33(&sh, &sk).abs() <= tol * scale;

    let is_cone = |r: f64| r == 0.0;
    let (clause, residual) = match (*h, *k) {
        (
            Hypersphere::Proper { center: p, radius_sq: r },
            Hypersphere::Proper { center: q, radius_sq: s },
        ) => {
            let d = norm22(&(p - q));
            let clause = match (is_cone(r), is_cone(s)) {
                (true, true) => OrthoClause::Cones,
                (false, false) => OrthoClause::Spheres,
                _ => OrthoClause::SphereCone,
            };
            // Twice the DPC inner product in magnitude.
            (clause, 0.5 * (d - r - s))
        }
        (Hypersphere::Plane { normal: a, .. }, Hypersphere::Plane { normal: b, .. }) => {
            (OrthoClause::Planes, inner22(&a, &b))
        }
        (Hypersphere::Plane { normal, offset }, Hypersphere::Proper { center, .. })
        | (Hypersphere::Proper { center, .. }, Hypersphere::Plane { normal, offset }) => {
            (OrthoClause::PlaneSphere, inner22(&normal, &center) - offset)
        }
        _ => return Err(Error::EmptyHypersphere),
    };
    Ok(OrthoVerdict {
        by_dpc,
        by_geometry: residual.abs() <= tol * scale,
        clause,
    })
}
