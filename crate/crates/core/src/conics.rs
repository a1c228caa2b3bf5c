//! Conjugate conic pairs as complementary indefinite 3-subspaces of R^{3,3}.
//!
//! A conic S with associated subspace V is the set of x with `phi(x)` ⊥ V.
//! Its points are the null rays of W = V^⊥ that meet the slice s0 + s5 = 1.
//! After pseudo-orthonormalizing W into {e; f1, f2} with <e,e> = -<f,f>, the
//! null rays are v(θ) = e + cos θ f1 + sin θ f2 and x(θ) = mid(v)/λ(θ) with
//! λ = v0 + v5 = α + β cos θ + γ sin θ.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::conformal::ConformalMap;
use crate::dpc::{dpc_from_hypersphere, phi, separation, Dpc, Hypersphere};
use crate::error::{Error, Result};
use crate::linalg;
use crate::neutral::{
    gram33, inner22, inner33, signature_of_gram, MetricClass, Point22, Signature, Subspace33, Vec33,
    DEFAULT_TOL,
};

/// Relative tolerance for mutual orthogonality of the two sides of a pair.
pub const PAIR_TOL: f64 = 1e-8;

/// Relative tolerance of the root count of λ(θ).
pub const ROOT_TOL: f64 = 1e-8;

/// |λ| below this fraction of |α| + R counts as a point at infinity.
pub const FINITE_TOL: f64 = 1e-13;

/// A non-degenerate conic, stored as its associated subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct Conic {
    v: Subspace33,
}

impl Conic {
    pub fn new(v: Subspace33) -> Result<Self> {
        if v.dim() != 3 {
            return Err(Error::DependentSpheres { rank: v.dim() });
        }
        if v.metric_class() != MetricClass::Indefinite {
            return Err(Error::DegenerateConic);
        }
        Ok(Conic { v })
    }

    pub fn subspace(&self) -> &Subspace33 {
        &self.v
    }

    /// Whether x lies on every hypersphere of the associated subspace.
    pub fn contains_point(&self, x: &Point22, tol: f64) -> bool {
        let p = phi(x).0;
        self.v
            .orthonormal()
            .iter()
            .all(|b| inner33(&p, b).abs() <= tol * p.euclid())
    }

    pub fn parametrization(&self) -> Result<Parametrization> {
        Parametrization::new(self)
    }
}

/// One side of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    S,
    Sp,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::S => Side::Sp,
            Side::Sp => Side::S,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Side::S => 0,
            Side::Sp => 1,
        }
    }
}

/// Two complementary, mutually orthogonal indefinite 3-subspaces.
#[derive(Debug, Clone, PartialEq)]
pub struct ConicPair {
    v: Subspace33,
    vp: Subspace33,
}

impl ConicPair {
    pub fn new(v: Subspace33, vp: Subspace33) -> Result<Self> {
        if v.dim() != 3 || vp.dim() != 3 {
            return Err(Error::NotComplementary);
        }
        let a = v.orthonormal();
        let b = vp.orthonormal();
        let worst = a
            .iter()
            .flat_map(|x| b.iter().map(move |y| inner33(x, y).abs()))
            .fold(0.0, f64::max);
        if worst > PAIR_TOL {
            return Err(Error::NotComplementary);
        }
        let mut all = a.clone();
        all.extend(b);
        let rows: Vec<Vec<f64>> = all.iter().map(Vec33::to_vec).collect();
        if linalg::rank(&rows, v.tol()) < 6 {
            return Err(Error::NotComplementary);
        }
        if v.metric_class() != MetricClass::Indefinite || vp.metric_class() != MetricClass::Indefinite {
            return Err(Error::DegenerateConic);
        }
        Ok(ConicPair { v, vp })
    }

    pub fn v(&self) -> &Subspace33 {
        &self.v
    }

    pub fn vp(&self) -> &Subspace33 {
        &self.vp
    }

    pub fn subspace(&self, side: Side) -> &Subspace33 {
        match side {
            Side::S => &self.v,
            Side::Sp => &self.vp,
        }
    }

    pub fn conic(&self, side: Side) -> Conic {
        Conic {
            v: self.subspace(side).clone(),
        }
    }

    /// The same pair with the roles of the two sides exchanged.
    pub fn swapped(&self) -> ConicPair {
        ConicPair {
            v: self.vp.clone(),
            vp: self.v.clone(),
        }
    }
}

/// The four classes of non-degenerate conjugate pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairClass {
    /// One side is a line, the other lies at infinity; `line` names the line.
    LineEmpty { line: Side },
    Circles,
    Hyperbolae,
    Parabolae,
}

impl PairClass {
    pub fn name(&self) -> &'static str {
        match self {
            PairClass::LineEmpty { .. } => "line_empty",
            PairClass::Circles => "circles",
            PairClass::Hyperbolae => "hyperbolae",
            PairClass::Parabolae => "parabolae",
        }
    }

    pub fn is_line_empty(&self) -> bool {
        matches!(self, PairClass::LineEmpty { .. })
    }
}

impl std::fmt::Display for PairClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The affine 2-plane holding a conic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContainingPlane {
    pub base: Point22,
    pub span1: Point22,
    pub span2: Point22,
    pub metric_class: MetricClass,
}

impl ContainingPlane {
    /// Euclidean distance from x to the plane, measured in the spanning basis.
    pub fn distance(&self, x: &Point22) -> f64 {
        let d = *x - self.base;
        let mut r = d;
        for s in [self.span1, self.span2] {
            let k = linalg::dot(&r.0, &s.0);
            r = r - s.scale(k);
        }
        r.euclid()
    }
}

/// Per-side data behind a classification.
#[derive(Debug, Clone)]
pub struct SideData {
    /// V ∩ P, the hyperplanes through the conic.
    pub intersection: Subspace33,
    pub signature: Signature,
    pub plane: Option<ContainingPlane>,
}

#[derive(Debug, Clone)]
pub struct PairClassification {
    pub class: PairClass,
    pub sides: [SideData; 2],
}

/// The standard circles S0 = {x1² + x2² = 1, x3 = x4 = 0} and
/// S0⊥ = {x3² + x4² = 1, x1 = x2 = 0}.
pub fn standard_pair() -> ConicPair {
    let v = Subspace33::new(vec![Vec33::basis(0), Vec33::basis(3), Vec33::basis(4)]).unwrap();
    let vp = Subspace33::new(vec![Vec33::basis(5), Vec33::basis(1), Vec33::basis(2)]).unwrap();
    ConicPair { v, vp }
}

/// S = {x2² - x4² = 1, x1 = x3 = 0}, S⊥ = {x1² - x3² = -1, x2 = x4 = 0}.
pub fn hyperbola_pair() -> ConicPair {
    let v = Subspace33::new(vec![Vec33::basis(0), Vec33::basis(1), Vec33::basis(3)]).unwrap();
    let vp = Subspace33::new(vec![Vec33::basis(5), Vec33::basis(2), Vec33::basis(4)]).unwrap();
    ConicPair { v, vp }
}

/// S = {((1 - w²)/2, 0, (1 - w²)/2, w)}, S⊥ = {(1 - v²/2, v, -v²/2, 0)}.
pub fn parabola_pair() -> ConicPair {
    let v = Subspace33::new(vec![
        Vec33([0.0, 1.0, 0.0, 1.0, 0.0, 0.0]),
        Vec33([0.0, 0.0, 1.0, 0.0, 0.0, 0.0]),
        Vec33([0.0, 1.0, 0.0, 0.0, 0.0, 1.0]),
    ])
    .unwrap();
    let vp = v.orthogonal_complement();
    ConicPair { v, vp }
}

/// S is the x1-axis {x2 = x3 = x4 = 0}; S⊥ lies at infinity.
pub fn line_empty_pair() -> ConicPair {
    let v = Subspace33::new(vec![Vec33::basis(2), Vec33::basis(3), Vec33::basis(4)]).unwrap();
    let vp = v.orthogonal_complement();
    ConicPair { v, vp }
}

/// Conic cut out by three hyperspheres.
pub fn conic_from_hyperspheres(s1: &Dpc, s2: &Dpc, s3: &Dpc) -> Result<Conic> {
    let vs = vec![s1.0, s2.0, s3.0];
    let span = Subspace33::span(&vs, DEFAULT_TOL);
    if span.dim() < 3 {
        return Err(Error::DependentSpheres { rank: span.dim() });
    }
    Conic::new(Subspace33::new(vs)?)
}

/// Convenience wrapper over [`conic_from_hyperspheres`].
pub fn conic_from_spheres(h: [&Hypersphere; 3]) -> Result<Conic> {
    conic_from_hyperspheres(
        &dpc_from_hypersphere(h[0])?,
        &dpc_from_hypersphere(h[1])?,
        &dpc_from_hypersphere(h[2])?,
    )
}

/// The conic through which the isotropic cones at a, b and c intersect.
pub fn conic_from_three_cones(a: &Point22, b: &Point22, c: &Point22) -> Result<Conic> {
    let pts = [a, b, c];
    for i in 0..3 {
        for j in (i + 1)..3 {
            let scale = 1.0 + pts[i].euclid().powi(2) + pts[j].euclid().powi(2);
            if separation(pts[i], pts[j]).abs() <= DEFAULT_TOL * scale {
                return Err(Error::NullSeparatedCenters(i, j));
            }
        }
    }
    let v = Subspace33::new(pts.iter().map(|p| phi(p).0).collect())?;
    Conic::new(v)
}

/// det of the Gram matrix of phi(a), phi(b), phi(c) and the product formula
/// 2 (s, s')(s', s'')(s, s'').
pub fn three_cone_gram_det(a: &Point22, b: &Point22, c: &Point22) -> (f64, f64) {
    let v = [phi(a).0, phi(b).0, phi(c).0];
    let g = gram33(&v);
    (linalg::determinant(&g), 2.0 * g[0][1] * g[1][2] * g[0][2])
}

/// The pair whose first side is `s`.
pub fn pair_from_conic(s: &Conic) -> Result<ConicPair> {
    let vp = s.v.orthogonal_complement();
    if vp.metric_class() != MetricClass::Indefinite {
        return Err(Error::DegenerateComplement);
    }
    Ok(ConicPair { v: s.v.clone(), vp })
}

/// Image of a pair under a conformal map.
pub fn apply_map(map: &ConformalMap, pair: &ConicPair) -> ConicPair {
    ConicPair {
        v: pair.v.transform(map.matrix()),
        vp: pair.vp.transform(map.matrix()),
    }
}

fn side_data(v: &Subspace33, tol: f64) -> (Subspace33, Signature) {
    let p = Subspace33::hyperplane_space(tol);
    let i = v.intersection(&p);
    let sig = i.signature();
    (i, sig)
}

/// The affine plane cut out by two hyperplane DPCs.
fn plane_from_intersection(i: &Subspace33, tol: f64) -> Option<ContainingPlane> {
    if i.dim() != 2 {
        return None;
    }
    let b = i.orthonormal();
    let rows: Vec<Vec<f64>> = b
        .iter()
        .map(|s| {
            let a = s.mid();
            vec![a.0[0], a.0[1], -a.0[2], -a.0[3]]
        })
        .collect();
    let rhs: Vec<f64> = b.iter().map(|s| 0.5 * (s.s5() - s.s0())).collect();
    if linalg::rank(&rows, tol) < 2 {
        return None;
    }
    // Minimal-norm solution x = A^T (A A^T)^{-1} rhs.
    let aat: Vec<Vec<f64>> = (0..2)
        .map(|r| (0..2).map(|c| linalg::dot(&rows[r], &rows[c])).collect())
        .collect();
    let y = linalg::solve(&aat, &rhs)?;
    let base = Point22(std::array::from_fn(|k| rows[0][k] * y[0] + rows[1][k] * y[1]));
    let dirs = linalg::orthonormalize(&linalg::nullspace(&rows, 4, tol), tol);
    if dirs.len() != 2 {
        return None;
    }
    let span1 = Point22(std::array::from_fn(|k| dirs[0][k]));
    let span2 = Point22(std::array::from_fn(|k| dirs[1][k]));
    let g = vec![
        vec![inner22(&span1, &span1), inner22(&span1, &span2)],
        vec![inner22(&span2, &span1), inner22(&span2, &span2)],
    ];
    Some(ContainingPlane {
        base,
        span1,
        span2,
        metric_class: signature_of_gram(&g, tol).class(),
    })
}

/// Containing plane of a conic; `None` for both sides of a line/empty pair.
pub fn containing_plane(s: &Conic) -> Option<ContainingPlane> {
    let (i, _) = side_data(&s.v, s.v.tol());
    let inf = Subspace33::infinity_line(s.v.tol());
    if i.dim() != 2 || i.contains(&inf) {
        return None;
    }
    plane_from_intersection(&i, s.v.tol())
}

/// Classification of a validated pair by the metric type of its containing
/// planes.
pub fn classify_pair(pair: &ConicPair) -> Result<PairClassification> {
    classify_subspaces(&pair.v, &pair.vp)
}

/// The same classification on two arbitrary 3-subspaces; the only entry
/// point that can report [`Error::NotAConic`].
pub fn classify_subspaces(v: &Subspace33, vp: &Subspace33) -> Result<PairClassification> {
    let tol = v.tol();
    let inf = Subspace33::infinity_line(tol);
    if v.contains(&inf) && vp.contains(&inf) {
        return Err(Error::NotAConic);
    }
    let (i, si) = side_data(v, tol);
    let (ip, sip) = side_data(vp, tol);
    let make = |inter: Subspace33, sig: Signature, sub: &Subspace33| {
        let plane = if inter.dim() == 2 && !sub.contains(&inf) {
            plane_from_intersection(&inter, tol)
        } else {
            None
        };
        SideData {
            intersection: inter,
            signature: sig,
            plane,
        }
    };
    let class = if i.dim() == 3 {
        PairClass::LineEmpty { line: Side::S }
    } else if ip.dim() == 3 {
        PairClass::LineEmpty { line: Side::Sp }
    } else {
        if si.class() != sip.class() || si.index() + sip.index() != 0 {
            return Err(Error::ClassMismatch);
        }
        match si.class() {
            MetricClass::Definite => PairClass::Circles,
            MetricClass::Indefinite => PairClass::Hyperbolae,
            MetricClass::Degenerate => PairClass::Parabolae,
        }
    };
    Ok(PairClassification {
        class,
        sides: [make(i, si, v), make(ip, sip, vp)],
    })
}

/// Centers and radii behind a pair that is not of line/empty type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Case2Data {
    /// S = π ∩ H(p, radius_sq[0]) and S⊥ = π⊥ ∩ H(p, radius_sq[1]).
    Centered {
        center: Point22,
        /// Common point of the two containing planes, solved independently.
        plane_meet: Point22,
        radius_sq: [f64; 2],
    },
    /// S = π ∩ C(p_tilde), S⊥ = π⊥ ∩ C(p) with p ∈ π, p_tilde ∈ π⊥.
    Parabolic { p: Point22, p_tilde: Point22 },
}

fn normalize_weight(s: &Vec33) -> Option<Vec33> {
    let w = s.weight();
    (w.abs() > 1e-12 * s.euclid()).then(|| s.scale(1.0 / w))
}

/// The V-vector orthogonal to I = V ∩ P.
fn orthogonal_to_intersection(v: &Subspace33, i: &Subspace33) -> Result<Vec33> {
    let rows: Vec<Vec<f64>> = i.orthonormal().iter().map(|b| b.lowered().to_vec()).collect();
    let vb = v.orthonormal();
    // Coefficients c with sum c_k vb_k ⊥ I.
    let m: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| vb.iter().map(|b| linalg::dot(r, &b.0)).collect())
        .collect();
    let ns = linalg::nullspace(&m, vb.len(), v.tol());
    let c = ns.first().ok_or(Error::DegenerateConic)?;
    Ok(c.iter().zip(&vb).fold(Vec33::default(), |acc, (k, b)| acc + b.scale(*k)))
}

fn centered_side(v: &Subspace33, i: &Subspace33) -> Result<(Point22, f64)> {
    let s = orthogonal_to_intersection(v, i)?;
    let s = normalize_weight(&s).ok_or(Error::DegenerateConic)?;
    Ok((s.mid(), inner33(&s, &s)))
}

fn parabolic_side(v: &Subspace33, i: &Subspace33) -> Result<Point22> {
    let ib = i.orthonormal();
    let eig = linalg::jacobi_eigen(&gram33(&ib));
    let comb = |c: &[f64]| {
        c.iter()
            .zip(&ib)
            .fold(Vec33::default(), |acc, (k, b)| acc + b.scale(*k))
    };
    // Radical s (zero eigenvalue) and s' ⊥ s.
    let (k0, k1) = if eig.values[0].abs() <= eig.values[1].abs() {
        (0, 1)
    } else {
        (1, 0)
    };
    let s = comb(&eig.vectors[k0]);
    let sp = comb(&eig.vectors[k1]);
    // t ∈ V with t ⊥ s', t ∉ span{s}.
    let vb = v.orthonormal();
    let row: Vec<f64> = vb.iter().map(|b| inner33(b, &sp)).collect();
    let ns = linalg::nullspace(&[row], 3, v.tol());
    let t = ns
        .iter()
        .map(|c| c.iter().zip(&vb).fold(Vec33::default(), |acc, (k, b)| acc + b.scale(*k)))
        .max_by(|a, b| inner33(a, &s).abs().total_cmp(&inner33(b, &s).abs()))
        .ok_or(Error::DegenerateConic)?;
    let ts = inner33(&t, &s);
    if ts.abs() <= 1e-12 * t.euclid() * s.euclid() {
        return Err(Error::DegenerateConic);
    }
    let c = -inner33(&t, &t) / (2.0 * ts);
    let spp = t + s.scale(c);
    let spp = normalize_weight(&spp).ok_or(Error::DegenerateConic)?;
    Ok(spp.mid())
}

/// Center/radius data of a Circles or Hyperbolae pair, or the two
/// null-separated cone vertices of a Parabolae pair.
pub fn extract_case2_data(pair: &ConicPair) -> Result<Case2Data> {
    let cls = classify_pair(pair)?;
    match cls.class {
        PairClass::LineEmpty { .. } => Err(Error::WrongCase),
        PairClass::Circles | PairClass::Hyperbolae => {
            let [a, b] = &cls.sides;
            let (c1, r1) = centered_side(&pair.v, &a.intersection)?;
            let (_, r2) = centered_side(&pair.vp, &b.intersection)?;
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for side in [&a.intersection, &b.intersection] {
                for s in side.orthonormal() {
                    let m = s.mid();
                    rows.push(vec![m.0[0], m.0[1], -m.0[2], -m.0[3]]);
                    rhs.push(0.5 * (s.s5() - s.s0()));
                }
            }
            let meet = linalg::solve(&rows, &rhs).ok_or(Error::DegenerateConic)?;
            Ok(Case2Data::Centered {
                center: c1,
                plane_meet: Point22(std::array::from_fn(|k| meet[k])),
                radius_sq: [r1, r2],
            })
        }
        PairClass::Parabolae => {
            let [a, b] = &cls.sides;
            let p_tilde = parabolic_side(&pair.v, &a.intersection)?;
            let p = parabolic_side(&pair.vp, &b.intersection)?;
            Ok(Case2Data::Parabolic { p, p_tilde })
        }
    }
}

/// Number of zeros of λ(θ) on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootCount {
    Zero,
    One,
    Two,
    /// λ ≡ 0: the conic lies at infinity.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicSample {
    pub theta: f64,
    pub point: Point22,
    pub speed: f64,
    pub finite: bool,
}

/// Null-ray chart of a conic.
#[derive(Debug, Clone, PartialEq)]
pub struct Parametrization {
    pub e: Vec33,
    pub f1: Vec33,
    pub f2: Vec33,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// sqrt(β² + γ²).
    pub r: f64,
    /// atan2(γ, β); λ = α + R cos(θ - phase).
    pub phase: f64,
    pub roots: RootCount,
    /// Half-angle between the two roots when `roots` is `Two`.
    pub psi0: f64,
}

/// Neutral Gram-Schmidt on a nondegenerate 3-space of signature (2,1) or
/// (1,2). Returns the vectors normalized to <u,u> = ±1, in pivot order.
fn pseudo_orthonormalize(w: &[Vec33]) -> Result<Vec<(Vec33, f64)>> {
    let mut rest: Vec<Vec33> = w.to_vec();
    let mut out: Vec<(Vec33, f64)> = Vec::new();
    while !rest.is_empty() {
        let ratio = |v: &Vec33| inner33(v, v).abs() / v.euclid().powi(2).max(f64::MIN_POSITIVE);
        let (mut best, mut best_ratio) = (0, -1.0);
        for (k, v) in rest.iter().enumerate() {
            let q = ratio(v);
            if q > best_ratio + 1e-12 {
                best = k;
                best_ratio = q;
            }
        }
        let mut pick = rest[best];
        if best_ratio < 0.1 && rest.len() > 1 {
            let mut cand = (best_ratio, pick, best, best);
            for i in 0..rest.len() {
                for j in (i + 1)..rest.len() {
                    for s in [1.0, -1.0] {
                        let c = rest[i] + rest[j].scale(s);
                        let q = ratio(&c);
                        if q > cand.0 + 1e-12 {
                            cand = (q, c, i, j);
                        }
                    }
                }
            }
            pick = cand.1;
            best = cand.2;
            if cand.2 != cand.3 {
                // Replace rest[i] by the combination; rest[j] stays.
                rest[best] = pick;
            }
        }
        let n = inner33(&pick, &pick);
        if n.abs() <= 1e-12 * pick.euclid().powi(2) {
            return Err(Error::DegenerateConic);
        }
        let sign = n.signum();
        let u = pick.scale(1.0 / n.abs().sqrt());
        rest.remove(best);
        for v in rest.iter_mut() {
            let k = sign * inner33(v, &u);
            *v = *v - u.scale(k);
        }
        out.push((u, sign));
    }
    Ok(out)
}

fn wrap_pi(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

impl Parametrization {
    pub fn new(conic: &Conic) -> Result<Self> {
        let w = conic.v.orthogonal_complement();
        if w.dim() != 3 {
            return Err(Error::DegenerateConic);
        }
        let basis = pseudo_orthonormalize(&w.orthonormal())?;
        let pos = basis.iter().filter(|(_, s)| *s > 0.0).count();
        let odd_sign = if pos == 1 { 1.0 } else { -1.0 };
        if pos == 0 || pos == 3 {
            return Err(Error::DegenerateConic);
        }
        let ei = basis.iter().position(|(_, s)| *s == odd_sign).unwrap();
        let mut e = basis[ei].0;
        let fs: Vec<Vec33> = basis
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != ei)
            .map(|(_, (v, _))| *v)
            .collect();
        if e.weight() < 0.0 {
            e = -e;
        }
        let (f1, f2) = (fs[0], fs[1]);
        let alpha = e.weight();
        let beta = f1.weight();
        let gamma = f2.weight();
        let r = beta.hypot(gamma);
        let phase = gamma.atan2(beta);
        let scale = e.euclid() + f1.euclid() + f2.euclid();
        let roots = if alpha.abs() + r <= ROOT_TOL * scale {
            RootCount::All
        } else if (alpha.abs() - r).abs() <= ROOT_TOL * (alpha.abs() + r) {
            RootCount::One
        } else if alpha.abs() > r {
            RootCount::Zero
        } else {
            RootCount::Two
        };
        let psi0 = if roots == RootCount::Two {
            (-alpha / r).clamp(-1.0, 1.0).acos()
        } else {
            PI
        };
        Ok(Parametrization {
            e,
            f1,
            f2,
            alpha,
            beta,
            gamma,
            r,
            phase,
            roots,
            psi0,
        })
    }

    /// The null ray at θ.
    pub fn ray(&self, theta: f64) -> Vec33 {
        let (s, c) = theta.sin_cos();
        self.e + self.f1.scale(c) + self.f2.scale(s)
    }

    /// Roots of λ in [0, 2π), ascending.
    pub fn root_angles(&self) -> Vec<f64> {
        let mut v = match self.roots {
            RootCount::Zero | RootCount::All => vec![],
            RootCount::One => vec![(self.phase + PI).rem_euclid(TAU)],
            RootCount::Two => vec![
                (self.phase - self.psi0).rem_euclid(TAU),
                (self.phase + self.psi0).rem_euclid(TAU),
            ],
        };
        v.sort_by(f64::total_cmp);
        v
    }

    /// λ(θ), evaluated in factored form around the roots.
    pub fn lambda(&self, theta: f64) -> f64 {
        let psi = wrap_pi(theta - self.phase);
        match self.roots {
            RootCount::All => 0.0,
            RootCount::Zero => self.alpha + self.r * psi.cos(),
            RootCount::One => 2.0 * self.r * (0.5 * psi).cos().powi(2),
            RootCount::Two => {
                -2.0 * self.r * (0.5 * (psi + self.psi0)).sin() * (0.5 * (psi - self.psi0)).sin()
            }
        }
    }

    /// λ at offset δ from the root at angle `root` (one of `root_angles`).
    pub fn lambda_near_root(&self, root: f64, delta: f64) -> f64 {
        match self.roots {
            RootCount::One => 2.0 * self.r * (0.5 * delta).sin().powi(2),
            RootCount::Two => {
                let psi_r = wrap_pi(root - self.phase);
                if psi_r > 0.0 {
                    -2.0 * self.r * (self.psi0 + 0.5 * delta).sin() * (0.5 * delta).sin()
                } else {
                    2.0 * self.r * (0.5 * delta).sin() * (self.psi0 - 0.5 * delta).sin()
                }
            }
            _ => self.lambda(root + delta),
        }
    }

    fn finite_threshold(&self) -> f64 {
        FINITE_TOL * (self.alpha.abs() + self.r)
    }

    fn sample_with(&self, theta: f64, lambda: f64, threshold: f64) -> ConicSample {
        if self.roots == RootCount::All || lambda.abs() <= threshold || !lambda.is_finite() {
            return ConicSample {
                theta,
                point: Point22([f64::NAN; 4]),
                speed: 0.0,
                finite: false,
            };
        }
        let v = self.ray(theta);
        ConicSample {
            theta,
            point: v.mid().scale(1.0 / lambda),
            speed: 1.0 / lambda.abs(),
            finite: true,
        }
    }

    pub fn sample(&self, theta: f64) -> ConicSample {
        self.sample_with(theta, self.lambda(theta), self.finite_threshold())
    }

    /// Sample at θ = root + δ with λ taken from the factored form, which
    /// stays accurate as δ → 0; only λ = 0 itself is the point at infinity.
    pub fn sample_near_root(&self, root: f64, delta: f64) -> ConicSample {
        self.sample_with(root + delta, self.lambda_near_root(root, delta), 0.0)
    }
}

/// Samples of a conic at the given angles.
pub fn parametrize(s: &Conic, thetas: &[f64]) -> Result<Vec<ConicSample>> {
    let p = Parametrization::new(s)?;
    Ok(thetas.iter().map(|&t| p.sample(t)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaClass {
    pub roots: RootCount,
    pub alpha: f64,
    pub r: f64,
}

/// Root count of λ(θ) for one conic.
pub fn classify_by_lambda(s: &Conic) -> Result<LambdaClass> {
    let p = Parametrization::new(s)?;
    Ok(LambdaClass {
        roots: p.roots,
        alpha: p.alpha,
        r: p.r,
    })
}

/// Pair class implied by the root counts of the two sides, if consistent.
pub fn pair_class_from_roots(a: RootCount, b: RootCount) -> Option<PairClass> {
    match (a, b) {
        (RootCount::Zero, RootCount::Zero) => Some(PairClass::Circles),
        (RootCount::Two, RootCount::Two) => Some(PairClass::Hyperbolae),
        (RootCount::One, RootCount::One) => Some(PairClass::Parabolae),
        (RootCount::One, RootCount::All) => Some(PairClass::LineEmpty { line: Side::S }),
        (RootCount::All, RootCount::One) => Some(PairClass::LineEmpty { line: Side::Sp }),
        _ => None,
    }
}

/// Uniform θ grid of `n` points on [0, 2π).
pub fn theta_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| TAU * k as f64 / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane(a: Point22, b: f64) -> Hypersphere {
        Hypersphere::plane(a, b).unwrap()
    }

    #[test]
    fn standard_pair_samples_unit_circles() {
        let pair = standard_pair();
        let grid = theta_grid(16);
        for (side, f) in [
            (Side::S, Box::new(|t: f64| Point22::new(t.cos(), t.sin(), 0.0, 0.0)) as Box<dyn Fn(f64) -> Point22>),
            (Side::Sp, Box::new(|t: f64| Point22::new(0.0, 0.0, t.cos(), t.sin()))),
        ] {
            let samples = parametrize(&pair.conic(side), &grid).unwrap();
            for s in samples {
                assert!(s.finite);
                assert!((s.point - f(s.theta)).euclid() < 1e-15);
                assert!((s.speed - 1.0).abs() < 1e-15);
            }
        }
        assert_eq!(classify_pair(&pair).unwrap().class, PairClass::Circles);
    }

    #[test]
    fn conic_from_hyperspheres_examples() {
        let o = Point22::ZERO;
        let c = conic_from_spheres([
            &Hypersphere::proper(o, 1.0),
            &plane(Point22::basis(2), 0.0),
            &plane(Point22::basis(3), 0.0),
        ])
        .unwrap();
        assert!(c.subspace().distance(standard_pair().v()) < 1e-15);

        let c = conic_from_spheres([
            &Hypersphere::proper(o, 1.0),
            &plane(Point22::basis(0), 0.0),
            &plane(Point22::basis(2), 0.0),
        ])
        .unwrap();
        for t in [-1.0, 0.0, 0.5, 2.0] {
            let x = Point22::new(0.0, (1.0_f64 + t * t).sqrt(), 0.0, t);
            assert!(c.contains_point(&x, 1e-14));
        }
        let d = dpc_from_hypersphere(&Hypersphere::proper(o, 1.0)).unwrap();
        let d2 = Dpc(d.0.scale(3.0));
        let d3 = dpc_from_hypersphere(&plane(Point22::basis(0), 0.0)).unwrap();
        assert!(matches!(
            conic_from_hyperspheres(&d, &d2, &d3),
            Err(Error::DependentSpheres { .. })
        ));
    }

    #[test]
    fn three_cones_examples() {
        let pts: Vec<Point22> = (0..3)
            .map(|k| {
                let t = TAU * k as f64 / 3.0;
                Point22::new(0.0, 0.0, t.cos(), t.sin())
            })
            .collect();
        let c = conic_from_three_cones(&pts[0], &pts[1], &pts[2]).unwrap();
        assert!(c.subspace().distance(standard_pair().v()) < 1e-14);
        assert_eq!(
            conic_from_three_cones(
                &Point22::ZERO,
                &Point22::new(1.0, 0.0, 1.0, 0.0),
                &Point22::basis(1)
            ),
            Err(Error::NullSeparatedCenters(0, 1))
        );
        let (det, formula) = three_cone_gram_det(&pts[0], &pts[1], &pts[2]);
        assert!((det - formula).abs() <= 1e-12 * det.abs());
    }

    #[test]
    fn pair_from_conic_examples() {
        let std = standard_pair();
        let p = pair_from_conic(&std.conic(Side::S)).unwrap();
        assert!(p.vp().distance(std.vp()) < 1e-15);
        let h = hyperbola_pair();
        let p = pair_from_conic(&h.conic(Side::S)).unwrap();
        let other = p.conic(Side::Sp);
        for t in [-1.5, 0.0, 0.3] {
            let x = Point22::new(t, 0.0, (1.0_f64 + t * t).sqrt(), 0.0);
            assert!(other.contains_point(&x, 1e-14));
        }
        let back = pair_from_conic(&p.conic(Side::Sp)).unwrap();
        assert!(back.vp().distance(p.v()) < 1e-14);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_pair(&hyperbola_pair()).unwrap().class, PairClass::Hyperbolae);
        assert_eq!(classify_pair(&parabola_pair()).unwrap().class, PairClass::Parabolae);
        assert_eq!(
            classify_pair(&line_empty_pair()).unwrap().class,
            PairClass::LineEmpty { line: Side::S }
        );
        assert_eq!(
            classify_pair(&line_empty_pair().swapped()).unwrap().class,
            PairClass::LineEmpty { line: Side::Sp }
        );
        let inf = Vec33([1.0, 0.0, 0.0, 0.0, 0.0, -1.0]);
        let a = Subspace33::new(vec![inf, Vec33::basis(1), Vec33::basis(3)]).unwrap();
        let b = Subspace33::new(vec![inf, Vec33::basis(2), Vec33::basis(4)]).unwrap();
        assert!(matches!(classify_subspaces(&a, &b), Err(Error::NotAConic)));
    }

    #[test]
    fn lambda_examples() {
        let r = |p: &ConicPair, s: Side| classify_by_lambda(&p.conic(s)).unwrap().roots;
        assert_eq!(r(&standard_pair(), Side::S), RootCount::Zero);
        assert_eq!(r(&hyperbola_pair(), Side::S), RootCount::Two);
        assert_eq!(r(&parabola_pair(), Side::S), RootCount::One);
        assert_eq!(r(&line_empty_pair(), Side::S), RootCount::One);
        assert_eq!(r(&line_empty_pair(), Side::Sp), RootCount::All);

        let p = line_empty_pair().conic(Side::S).parametrization().unwrap();
        for t in [0.0, 1.0, 2.0, 3.0] {
            assert!((p.lambda(t) - (1.0 + t.cos())).abs() < 1e-15);
            let s = p.sample(t);
            assert!(s.point.0[1..].iter().all(|c| c.abs() < 1e-15));
        }
        let empty = parametrize(&line_empty_pair().conic(Side::Sp), &theta_grid(8)).unwrap();
        assert!(empty.iter().all(|s| !s.finite));
    }

    #[test]
    fn parabola_side_lies_on_closed_form() {
        let pair = parabola_pair();
        for s in parametrize(&pair.conic(Side::S), &theta_grid(32)).unwrap() {
            if !s.finite {
                continue;
            }
            let w = s.point.0[3];
            let expect = Point22::new(0.5 * (1.0 - w * w), 0.0, 0.5 * (1.0 - w * w), w);
            assert!((s.point - expect).euclid() <= 1e-12 * (1.0 + w * w));
        }
        for s in parametrize(&pair.conic(Side::Sp), &theta_grid(32)).unwrap() {
            if !s.finite {
                continue;
            }
            let v = s.point.0[1];
            let expect = Point22::new(1.0 - 0.5 * v * v, v, -0.5 * v * v, 0.0);
            assert!((s.point - expect).euclid() <= 1e-12 * (1.0 + v * v));
        }
    }

    #[test]
    fn case2_examples() {
        match extract_case2_data(&standard_pair()).unwrap() {
            Case2Data::Centered {
                center, radius_sq, ..
            } => {
                assert!(center.euclid() < 1e-15);
                assert!((radius_sq[0] - 1.0).abs() < 1e-15 && (radius_sq[1] + 1.0).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        match extract_case2_data(&parabola_pair()).unwrap() {
            Case2Data::Parabolic { p, p_tilde } => {
                assert!((p_tilde - Point22::basis(0)).euclid() < 1e-14);
                // Any point of S is a valid vertex; this construction lands on w = 0.
                assert!((p - Point22::new(0.5, 0.0, 0.5, 0.0)).euclid() < 1e-14);
                assert!(separation(&p, &p_tilde).abs() < 1e-14);
                let alt = Point22::new(0.0, 0.0, 0.0, 1.0);
                assert!(separation(&alt, &p_tilde).abs() < 1e-14);
                let pair = parabola_pair();
                let cone = crate::dpc::phi(&p);
                let cone_t = crate::dpc::phi(&p_tilde);
                for s in parametrize(&pair.conic(Side::S), &theta_grid(12)).unwrap() {
                    if s.finite {
                        assert!(crate::dpc::point_on(&cone_t, &s.point));
                    }
                }
                for s in parametrize(&pair.conic(Side::Sp), &theta_grid(12)).unwrap() {
                    if s.finite {
                        assert!(crate::dpc::point_on(&cone, &s.point));
                    }
                }
                let cls = classify_pair(&pair).unwrap();
                assert!(cls.sides[0].plane.unwrap().distance(&p) < 1e-14);
                assert!(cls.sides[1].plane.unwrap().distance(&p_tilde) < 1e-14);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(extract_case2_data(&line_empty_pair()), Err(Error::WrongCase));
    }

    #[test]
    fn containing_planes_match_intersection_class() {
        for pair in [standard_pair(), hyperbola_pair(), parabola_pair()] {
            let cls = classify_pair(&pair).unwrap();
            for side in &cls.sides {
                let plane = side.plane.unwrap();
                assert_eq!(plane.metric_class, side.signature.class());
            }
        }
        assert!(containing_plane(&line_empty_pair().conic(Side::S)).is_none());
        assert!(containing_plane(&line_empty_pair().conic(Side::Sp)).is_none());
    }
}
