//! Lines of 3-space as points of R^{2,2}.
//!
//! A non-horizontal line is written (Az + B, Cz + D, z). Its direction is
//! q = (A, C, 1) and its moment p = (B, D, 0) × q. The John coordinates
//! x = (C - B, -A - D, -B - C, A - D) turn the incidence of two lines into
//! null separation: ||x_l - x_m||² = 4 (ΔA ΔD - ΔB ΔC).

use serde::{Deserialize, Serialize};

use crate::conics::{classify_pair, ConicPair, PairClass, Parametrization, Side};
use crate::error::{Error, Result};
use crate::linalg;
use crate::neutral::Point22;

pub type P3 = [f64; 3];

fn sub3(a: &P3, b: &P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: &P3, b: &P3) -> P3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm3(a: &P3) -> f64 {
    linalg::norm(a)
}

/// The line {(Az + B, Cz + D, z)}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineABCD {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl LineABCD {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        LineABCD { a, b, c, d }
    }

    pub fn point_at(&self, z: f64) -> P3 {
        [self.a * z + self.b, self.c * z + self.d, z]
    }

    pub fn direction(&self) -> P3 {
        [self.a, self.c, 1.0]
    }

    fn norm_sq(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    /// Euclidean distance from a point to the line.
    pub fn distance_to(&self, p: &P3) -> f64 {
        let q = self.direction();
        norm3(&cross(&sub3(p, &self.point_at(0.0)), &q)) / norm3(&q)
    }
}

/// Direction q and moment p of a line, p · q = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PluckerLine {
    pub q: P3,
    pub p: P3,
}

impl PluckerLine {
    /// Line through `point` with direction `dir`.
    pub fn through(point: &P3, dir: &P3) -> Self {
        PluckerLine {
            q: *dir,
            p: cross(point, dir),
        }
    }

    /// Reciprocal product p·q' + p'·q; zero iff the lines meet or are parallel.
    pub fn reciprocal(&self, other: &PluckerLine) -> f64 {
        linalg::dot(&self.p, &other.q) + linalg::dot(&other.p, &self.q)
    }
}

pub fn plucker_from_abcd(l: &LineABCD) -> PluckerLine {
    PluckerLine::through(&[l.b, l.d, 0.0], &l.direction())
}

/// Chart inverse of [`plucker_from_abcd`]; horizontal lines have no chart.
pub fn abcd_from_plucker(l: &PluckerLine) -> Result<LineABCD> {
    let [q1, q2, q3] = l.q;
    if q3.abs() <= 1e-12 * norm3(&l.q) {
        return Err(Error::HorizontalLine);
    }
    Ok(LineABCD {
        a: q1 / q3,
        b: -l.p[1] / q3,
        c: q2 / q3,
        d: l.p[0] / q3,
    })
}

/// John coordinates of a line.
pub fn john_coords(l: &PluckerLine) -> Result<Point22> {
    let [q1, q2, q3] = l.q;
    let [p1, p2, _] = l.p;
    if q3.abs() <= 1e-12 * norm3(&l.q) {
        return Err(Error::HorizontalLine);
    }
    Ok(Point22::new(
        (p2 + q2) / q3,
        (-p1 - q1) / q3,
        (p2 - q2) / q3,
        (-p1 + q1) / q3,
    ))
}

pub fn john_from_abcd(l: &LineABCD) -> Point22 {
    Point22::new(l.c - l.b, -l.a - l.d, -l.b - l.c, l.a - l.d)
}

pub fn abcd_from_john(x: &Point22) -> LineABCD {
    let [x1, x2, x3, x4] = x.0;
    LineABCD {
        a: 0.5 * (x4 - x2),
        b: -0.5 * (x1 + x3),
        c: 0.5 * (x1 - x3),
        d: -0.5 * (x2 + x4),
    }
}

/// ΔA ΔD - ΔB ΔC, a quarter of the neutral separation of the two points.
pub fn incidence_residual(l: &LineABCD, m: &LineABCD) -> f64 {
    let (da, db, dc, dd) = (l.a - m.a, l.b - m.b, l.c - m.c, l.d - m.d);
    da * dd - db * dc
}

/// Whether the lines meet or are parallel.
pub fn incident(l: &LineABCD, m: &LineABCD, tol: f64) -> bool {
    incidence_residual(l, m).abs() <= tol * (1.0 + l.norm_sq() + m.norm_sq())
}

/// The line through `p` meeting both `l` and `m`, as the intersection of the
/// planes spanned by p with each line. `None` when that line is horizontal
/// or the two planes coincide.
pub fn transversal_through_point(p: &P3, l: &LineABCD, m: &LineABCD) -> Result<Option<LineABCD>> {
    let scale = 1.0 + norm3(p) + l.norm_sq().sqrt() + m.norm_sq().sqrt();
    if l.distance_to(p) <= 1e-12 * scale || m.distance_to(p) <= 1e-12 * scale {
        return Err(Error::DegenerateConfiguration("point lies on an input line"));
    }
    if incident(l, m, 1e-12) {
        return Err(Error::NotSkew(0, 1));
    }
    let n1 = cross(&sub3(&l.point_at(0.0), p), &l.direction());
    let n2 = cross(&sub3(&m.point_at(0.0), p), &m.direction());
    let d = cross(&n1, &n2);
    let dn = norm3(&d);
    if dn <= 1e-12 * norm3(&n1) * norm3(&n2) || d[2].abs() <= 1e-12 * dn {
        return Ok(None);
    }
    let a = d[0] / d[2];
    let c = d[1] / d[2];
    Ok(Some(LineABCD {
        a,
        b: p[0] - a * p[2],
        c,
        d: p[1] - c * p[2],
    }))
}

/// Transversals of l2 and l3 through the points of l1 at the given heights.
pub fn regulus_from_three(l1: &LineABCD, l2: &LineABCD, l3: &LineABCD, params: &[f64]) -> Result<Vec<LineABCD>> {
    let ls = [l1, l2, l3];
    for i in 0..3 {
        for j in (i + 1)..3 {
            if incident(ls[i], ls[j], 1e-12) {
                return Err(Error::NotSkew(i, j));
            }
        }
    }
    let mut out = Vec::with_capacity(params.len());
    for &z in params {
        if let Some(t) = transversal_through_point(&l1.point_at(z), l2, l3)? {
            out.push(t);
        }
    }
    Ok(out)
}

/// Residual of x² + y² = (1 + z²)/4.
pub fn h0_residual(p: &P3) -> f64 {
    p[0] * p[0] + p[1] * p[1] - 0.25 * (1.0 + p[2] * p[2])
}

/// A quadric surface X^T Q X = 0 on homogeneous (X, Y, Z, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadric {
    pub q: [[f64; 4]; 4],
}

impl Quadric {
    /// Symmetrized, unit Frobenius norm, first entry above 1e-8 positive.
    pub fn canonical(q: [[f64; 4]; 4]) -> Self {
        let sym: [[f64; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| 0.5 * (q[i][j] + q[j][i])));
        let n = sym.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
        let lead = sym
            .iter()
            .flatten()
            .copied()
            .find(|x| x.abs() > 1e-8 * n)
            .unwrap_or(1.0);
        let k = lead.signum() / n;
        Quadric {
            q: sym.map(|r| r.map(|x| k * x)),
        }
    }

    /// x² + y² - z²/4 - 1/4, canonicalized.
    pub fn h0() -> Self {
        let mut q = [[0.0; 4]; 4];
        q[0][0] = 1.0;
        q[1][1] = 1.0;
        q[2][2] = -0.25;
        q[3][3] = -0.25;
        Quadric::canonical(q)
    }

    pub fn eval(&self, p: &P3) -> f64 {
        let h = [p[0], p[1], p[2], 1.0];
        (0..4)
            .map(|i| (0..4).map(|j| h[i] * self.q[i][j] * h[j]).sum::<f64>())
            .sum()
    }

    /// Largest entrywise difference after canonicalizing both.
    pub fn max_deviation(&self, other: &Quadric) -> f64 {
        self.q
            .iter()
            .flatten()
            .zip(other.q.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Eigenvalues of the quadratic part, ascending.
    pub fn block_eigenvalues(&self) -> Vec<f64> {
        let b: Vec<Vec<f64>> = (0..3).map(|i| (0..3).map(|j| self.q[i][j]).collect()).collect();
        linalg::jacobi_eigen(&b).values
    }

    /// A zero eigenvalue in the quadratic part with the others of opposite signs.
    pub fn is_hyperbolic_paraboloid(&self, tol: f64) -> bool {
        let ev = self.block_eigenvalues();
        let big = ev.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
        let zero = ev.iter().filter(|x| x.abs() <= tol * big).count();
        let pos = ev.iter().filter(|x| **x > tol * big).count();
        let neg = ev.iter().filter(|x| **x < -tol * big).count();
        zero == 1 && pos == 1 && neg == 1
    }

    /// Full-rank quadratic part with mixed signs.
    pub fn is_hyperboloid(&self, tol: f64) -> bool {
        let ev = self.block_eigenvalues();
        let big = ev.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
        ev.iter().all(|x| x.abs() > tol * big) && ev[0] < 0.0 && ev[2] > 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadricFit {
    pub quadric: Quadric,
    /// max |X^T Q X| / (1 + |X|²) over the input points.
    pub max_residual: f64,
    /// Smallest and second smallest eigenvalue of the normalized normal matrix.
    pub eigen_gap: (f64, f64),
}

fn monomials(u: &P3) -> [f64; 10] {
    let [x, y, z] = *u;
    [x * x, y * y, z * z, x * y, x * z, y * z, x, y, z, 1.0]
}

fn matrix_from_coeffs(c: &[f64]) -> [[f64; 4]; 4] {
    [
        [c[0], 0.5 * c[3], 0.5 * c[4], 0.5 * c[6]],
        [0.5 * c[3], c[1], 0.5 * c[5], 0.5 * c[7]],
        [0.5 * c[4], 0.5 * c[5], c[2], 0.5 * c[8]],
        [0.5 * c[6], 0.5 * c[7], 0.5 * c[8], c[9]],
    ]
}

/// Least-squares quadric through a point cloud: the smallest eigenvector of
/// the monomial normal matrix, computed after centering and RMS scaling and
/// mapped back to the original frame.
pub fn fit_quadric(points: &[P3]) -> Result<QuadricFit> {
    if points.len() < 10 {
        return Err(Error::RankDeficient);
    }
    let n = points.len() as f64;
    let c: P3 = std::array::from_fn(|k| points.iter().map(|p| p[k]).sum::<f64>() / n);
    let rms = (points.iter().map(|p| norm3(&sub3(p, &c)).powi(2)).sum::<f64>() / n).sqrt();
    if rms == 0.0 {
        return Err(Error::RankDeficient);
    }
    let mut m = vec![vec![0.0; 10]; 10];
    for p in points {
        let u: P3 = std::array::from_fn(|k| (p[k] - c[k]) / rms);
        let row = monomials(&u);
        for i in 0..10 {
            for j in 0..10 {
                m[i][j] += row[i] * row[j];
            }
        }
    }
    let eig = linalg::jacobi_eigen(&m);
    let top = eig.values[9].abs().max(f64::MIN_POSITIVE);
    if eig.values[1] <= 1e-10 * top {
        return Err(Error::RankDeficient);
    }
    let qn = matrix_from_coeffs(&eig.vectors[0]);
    // u_h = T x_h with T = [[I/s, -c/s], [0, 1]]; Q = T^T Qn T.
    let mut t = [[0.0; 4]; 4];
    for k in 0..3 {
        t[k][k] = 1.0 / rms;
        t[k][3] = -c[k] / rms;
    }
    t[3][3] = 1.0;
    let q: [[f64; 4]; 4] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            (0..4)
                .map(|a| (0..4).map(|b| t[a][i] * qn[a][b] * t[b][j]).sum::<f64>())
                .sum()
        })
    });
    let quadric = Quadric::canonical(q);
    let max_residual = points
        .iter()
        .map(|p| quadric.eval(p).abs() / (1.0 + linalg::dot(p, p)))
        .fold(0.0, f64::max);
    Ok(QuadricFit {
        quadric,
        max_residual,
        eigen_gap: (eig.values[0] / top, eig.values[1] / top),
    })
}

/// One sampled ruling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ruling {
    pub side: Side,
    pub theta: f64,
    pub x: Point22,
    pub line: LineABCD,
}

/// Thresholds of the ruled-surface verifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RulsurfTolerances {
    pub incidence: f64,
    pub quadric: f64,
    pub regulus: f64,
    /// Samples with Euclidean norm above this are left out.
    pub max_norm: f64,
}

impl Default for RulsurfTolerances {
    fn default() -> Self {
        RulsurfTolerances {
            incidence: 1e-9,
            quadric: 1e-8,
            regulus: 1e-8,
            max_norm: 20.0,
        }
    }
}

/// Heights at which each ruling is sampled for the quadric fit.
pub const SURFACE_Z: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];

#[derive(Debug, Clone)]
pub struct RulsurfReport {
    pub class: PairClass,
    pub rulings: Vec<Ruling>,
    /// Samples at infinity (horizontal lines) per side.
    pub at_infinity: [usize; 2],
    /// Finite samples beyond `max_norm` per side.
    pub too_far: [usize; 2],
    /// max |ΔAΔD - ΔBΔC| / (1 + |x|² + |y|²) over cross pairs.
    pub cross_max: f64,
    pub cross_failures: usize,
    /// Same-side pairs that meet or are parallel.
    pub same_side_incidences: usize,
    pub quadric: Option<QuadricFit>,
    pub surface_points: Vec<(Side, f64, f64, P3)>,
    pub regulus_max: f64,
    pub regulus_checked: usize,
    pub regulus_skipped: usize,
    pub tolerances: RulsurfTolerances,
}

impl RulsurfReport {
    pub fn cross_ok(&self) -> bool {
        self.cross_failures == 0 && self.rulings.iter().any(|r| r.side == Side::S)
    }

    pub fn skew_ok(&self) -> bool {
        self.same_side_incidences == 0
    }

    pub fn quadric_ok(&self) -> bool {
        self.quadric
            .is_some_and(|f| f.max_residual <= self.tolerances.quadric)
    }

    pub fn regulus_ok(&self) -> bool {
        self.regulus_checked > 0 && self.regulus_max <= self.tolerances.regulus
    }

    pub fn passed(&self) -> bool {
        self.cross_ok() && self.skew_ok() && self.quadric_ok() && self.regulus_ok()
    }
}

/// Samples both sides of a pair at `n` angles each, turns the points into
/// lines and checks that they form the two rulings of one quadric.
pub fn verify_rulsurf(pair: &ConicPair, n: usize) -> Result<RulsurfReport> {
    verify_rulsurf_with(pair, n, RulsurfTolerances::default())
}

pub fn verify_rulsurf_with(pair: &ConicPair, n: usize, tol: RulsurfTolerances) -> Result<RulsurfReport> {
    let class = classify_pair(pair)?.class;
    if class.is_line_empty() {
        return Err(Error::WrongCase);
    }
    let mut rulings = Vec::new();
    let mut at_infinity = [0; 2];
    let mut too_far = [0; 2];
    for side in [Side::S, Side::Sp] {
        let par = Parametrization::new(&pair.conic(side))?;
        for k in 0..n {
            let theta = std::f64::consts::TAU * (k as f64 + 0.5) / n as f64;
            let s = par.sample(theta);
            if !s.finite {
                at_infinity[side.index()] += 1;
            } else if s.point.euclid() > tol.max_norm {
                too_far[side.index()] += 1;
            } else {
                rulings.push(Ruling {
                    side,
                    theta,
                    x: s.point,
                    line: abcd_from_john(&s.point),
                });
            }
        }
    }

    let mut cross_max = 0.0_f64;
    let mut cross_failures = 0;
    let mut same_side_incidences = 0;
    for (i, r) in rulings.iter().enumerate() {
        for q in rulings.iter().skip(i + 1) {
            let scale = 1.0 + r.x.euclid().powi(2) + q.x.euclid().powi(2);
            let res = incidence_residual(&r.line, &q.line).abs() / scale;
            if r.side != q.side {
                cross_max = cross_max.max(res);
                if res > tol.incidence {
                    cross_failures += 1;
                }
            } else if res <= tol.incidence {
                same_side_incidences += 1;
            }
        }
    }

    let surface_points: Vec<(Side, f64, f64, P3)> = rulings
        .iter()
        .flat_map(|r| SURFACE_Z.iter().map(move |&z| (r.side, r.theta, z, r.line.point_at(z))))
        .collect();
    let pts: Vec<P3> = surface_points.iter().map(|s| s.3).collect();
    let quadric = fit_quadric(&pts).ok();

    let side1: Vec<&Ruling> = rulings.iter().filter(|r| r.side == Side::S).collect();
    let side2: Vec<&Ruling> = rulings.iter().filter(|r| r.side == Side::Sp).collect();
    let mut regulus_max = 0.0_f64;
    let mut regulus_checked = 0;
    let mut regulus_skipped = 0;
    if side1.len() >= 3 {
        let k = side1.len();
        let (l1, l2, l3) = (side1[0].line, side1[k / 3].line, side1[(2 * k) / 3].line);
        for m in &side2 {
            let (da, db, dc, dd) = (l1.a - m.line.a, l1.b - m.line.b, l1.c - m.line.c, l1.d - m.line.d);
            let den = da * da + dc * dc;
            if den <= 1e-12 * (1.0 + l1.norm_sq() + m.line.norm_sq()) {
                regulus_skipped += 1;
                continue;
            }
            let z = -(da * db + dc * dd) / den;
            match regulus_from_three(&l1, &l2, &l3, &[z]) {
                Ok(found) if found.len() == 1 => {
                    let x = john_from_abcd(&found[0]);
                    let err = (x - m.x).euclid() / (1.0 + m.x.euclid());
                    regulus_max = regulus_max.max(err);
                    regulus_checked += 1;
                }
                _ => regulus_skipped += 1,
            }
        }
    }

    Ok(RulsurfReport {
        class,
        rulings,
        at_infinity,
        too_far,
        cross_max,
        cross_failures,
        same_side_incidences,
        quadric,
        surface_points,
        regulus_max,
        regulus_checked,
        regulus_skipped,
        tolerances: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conics::{hyperbola_pair, parabola_pair, standard_pair};

    #[test]
    fn john_examples() {
        let z_axis = PluckerLine::through(&[0.0; 3], &[0.0, 0.0, 1.0]);
        assert_eq!(john_coords(&z_axis).unwrap(), Point22::ZERO);
        let diag = PluckerLine::through(&[0.0; 3], &[1.0, 0.0, 1.0]);
        assert_eq!(john_coords(&diag).unwrap(), Point22::new(0.0, -1.0, 0.0, 1.0));
        let flat = PluckerLine::through(&[0.0; 3], &[1.0, 0.0, 0.0]);
        assert_eq!(john_coords(&flat), Err(Error::HorizontalLine));
    }

    #[test]
    fn chart_examples() {
        assert_eq!(abcd_from_john(&Point22::ZERO), LineABCD::new(0.0, 0.0, 0.0, 0.0));
        let l = abcd_from_john(&Point22::basis(0));
        assert_eq!(l, LineABCD::new(0.0, -0.5, 0.5, 0.0));
        for z in [-2.0, 0.0, 3.0] {
            assert!(h0_residual(&l.point_at(z)).abs() < 1e-15);
        }
        let x = Point22::new(0.3, -1.1, 2.0, 0.25);
        let back = john_coords(&plucker_from_abcd(&abcd_from_john(&x))).unwrap();
        assert!((back - x).euclid() < 1e-15);
    }

    #[test]
    fn incidence_examples() {
        let z = LineABCD::new(0.0, 0.0, 0.0, 0.0);
        assert!(incident(&z, &LineABCD::new(0.0, 1.0, 0.0, 0.0), 1e-12));
        assert!(incident(&z, &LineABCD::new(1.0, 0.0, 0.0, 0.0), 1e-12));
        let m = LineABCD::new(0.0, 1.0, 1.0, 0.0);
        assert_eq!(incidence_residual(&z, &m), -1.0);
        assert!(!incident(&z, &m, 1e-12));
    }

    fn s0_line(t: f64) -> LineABCD {
        abcd_from_john(&Point22::new(t.cos(), t.sin(), 0.0, 0.0))
    }

    fn s0p_line(t: f64) -> LineABCD {
        abcd_from_john(&Point22::new(0.0, 0.0, t.cos(), t.sin()))
    }

    #[test]
    fn transversal_examples() {
        use std::f64::consts::{FRAC_PI_2, PI};
        let l = s0p_line(FRAC_PI_2);
        let m = s0p_line(PI);
        let t = transversal_through_point(&[-0.5, 0.0, 0.0], &l, &m).unwrap().unwrap();
        let expect = s0_line(0.0);
        assert!((john_from_abcd(&t) - john_from_abcd(&expect)).euclid() < 1e-12);
        for z in [-1.0, 2.0] {
            assert!(h0_residual(&t.point_at(z)).abs() <= 1e-10);
        }
        assert_eq!(
            transversal_through_point(&l.point_at(0.7), &l, &m),
            Err(Error::DegenerateConfiguration("point lies on an input line"))
        );
    }

    #[test]
    fn regulus_examples() {
        let (a, b, c) = (s0_line(0.1), s0_line(2.0), s0_line(4.0));
        let out = regulus_from_three(&a, &b, &c, &[-1.0, 0.0, 0.4, 2.5]).unwrap();
        assert!(!out.is_empty());
        for l in &out {
            let x = john_from_abcd(l);
            assert!(x.0[0].abs() < 1e-8 && x.0[1].abs() < 1e-8);
            assert!((x.0[2].hypot(x.0[3]) - 1.0).abs() < 1e-8);
        }
        let (a, b, c) = (s0p_line(0.3), s0p_line(2.2), s0p_line(5.0));
        for l in regulus_from_three(&a, &b, &c, &[-0.3, 1.2]).unwrap() {
            let x = john_from_abcd(&l);
            assert!(x.0[2].abs() < 1e-8 && x.0[3].abs() < 1e-8);
            assert!((x.0[0].hypot(x.0[1]) - 1.0).abs() < 1e-8);
        }
        let z = LineABCD::new(0.0, 0.0, 0.0, 0.0);
        let meets = LineABCD::new(1.0, 0.0, 0.0, 0.0);
        assert_eq!(
            regulus_from_three(&z, &meets, &s0_line(1.0), &[0.0]),
            Err(Error::NotSkew(0, 1))
        );
    }

    #[test]
    fn fit_examples() {
        let mut pts = Vec::new();
        for k in 0..8 {
            let t = 0.8 * k as f64;
            for z in [-1.0, 0.0, 1.5] {
                pts.push(s0_line(t).point_at(z));
                pts.push(s0p_line(t).point_at(z));
            }
        }
        let fit = fit_quadric(&pts).unwrap();
        assert!(fit.max_residual <= 1e-9);
        assert!(fit.quadric.max_deviation(&Quadric::h0()) <= 1e-8);

        let plane: Vec<P3> = (0..30).map(|k| [k as f64 * 0.1, (k * k) as f64 * 0.01, 0.0]).collect();
        assert_eq!(fit_quadric(&plane).map(|_| ()), Err(Error::RankDeficient));
    }

    #[test]
    fn rulsurf_on_named_pairs() {
        let r = verify_rulsurf(&standard_pair(), 16).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.quadric.unwrap().quadric.max_deviation(&Quadric::h0()) <= 1e-8);

        let r = verify_rulsurf(&hyperbola_pair(), 16).unwrap();
        assert!(r.passed(), "{:?}", (r.cross_max, r.same_side_incidences, r.quadric, r.regulus_max));
        // Both rulings satisfy A D = 1/4 (resp. B C = 1/4), i.e. 4XY = Z.
        let q = r.quadric.unwrap().quadric;
        assert!(q.is_hyperbolic_paraboloid(1e-6));
        for z in [-1.0, 0.5] {
            let p = [0.7, z / 2.8, z];
            assert!(q.eval(&p).abs() < 1e-9);
        }

        let r = verify_rulsurf(&parabola_pair(), 16).unwrap();
        assert!(r.passed(), "{:?}", (r.cross_max, r.same_side_incidences, r.quadric, r.regulus_max));
        assert!(r.quadric.unwrap().quadric.is_hyperbolic_paraboloid(1e-6));
    }
}
