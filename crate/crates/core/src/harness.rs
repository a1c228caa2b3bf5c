//! Mean value experiments: integrals of solutions over conic pairs with the
//! induced line element, pair generators and CSV reports.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conformal::{lift, random_isometry, random_map, ConformalMap, Generator};
use crate::conics::{
    apply_map, classify_pair, line_empty_pair, parabola_pair, standard_pair, Conic, ConicPair, ConicSample,
    PairClass, Parametrization, RootCount, Side,
};
use crate::error::{Error, Result};
use crate::neutral::Point22;
use crate::quadrature::{integrate, QuadResult};
use crate::rng;
use crate::solutions::Solution;

/// Floor of the denominator in `rel_diff`.
pub const ABS_FLOOR: f64 = 1e-13;

/// Second floor of the denominator, relative to ∫|u| dl: integrals that
/// cancel below this fraction of their mass are compared at that scale.
pub const CANCELLATION_FLOOR: f64 = 1e-6;

/// |I_S - I_Sp| / max(|I_S|, |I_Sp|, ABS_FLOOR, CANCELLATION_FLOOR · mass).
pub fn rel_diff(i_s: f64, i_sp: f64, mass: f64) -> f64 {
    (i_s - i_sp).abs() / i_s.abs().max(i_sp.abs()).max(ABS_FLOOR).max(CANCELLATION_FLOOR * mass)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Bisection budget per panel.
    pub max_subdivisions: usize,
    /// A root window is negligible once its share of ∫|f| drops below this.
    pub eps_decay: f64,
    /// Consecutive negligible windows needed before the tail is dropped.
    pub quiet_windows: usize,
    /// Number of windows per arc end before giving up.
    pub max_windows: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 500,
            eps_decay: 1e-14,
            quiet_windows: 8,
            max_windows: 64,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.eps_decay > 0.0 && self.quiet_windows > 0 && self.max_windows > self.quiet_windows {
            Ok(())
        } else {
            Err(Error::InvalidParameter("quadrature tolerances must be positive".into()))
        }
    }
}

/// ∫_S u dl, or the verdict that the integral does not settle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Integral {
    Value { value: f64, abs_value: f64, error: f64 },
    NotIntegrable,
}

impl Integral {
    pub fn value(&self) -> Option<f64> {
        match self {
            Integral::Value { value, .. } => Some(*value),
            Integral::NotIntegrable => None,
        }
    }
}

struct Acc {
    value: f64,
    abs_value: f64,
    error: f64,
}

impl Acc {
    fn add(&mut self, r: &QuadResult) {
        self.value += r.value;
        self.abs_value += r.abs_value;
        self.error += r.error;
    }
}

/// Initial panels on a closed conic and on each window.
const CLOSED_PANELS: usize = 16;
const WINDOW_PANELS: usize = 8;

/// Integrates u · speed over S. Closed conics are integrated over the whole
/// θ-circle. Each arc (a, b) between roots of λ is reparametrized by
/// θ = (a + b)/2 + (b - a) atan(t) / π, in which the conic is traced at a
/// rate comparable to its affine parameter; the t-line is covered by [-1, 1]
/// and then by windows doubling outward until their contribution and the
/// remaining tail are negligible, or until an algebraic tail can be
/// extrapolated (see `TailFit`).
pub fn integrate_conic(u: &Solution, s: &Conic, spec: &QuadratureSpec) -> Result<Integral> {
    let par = Parametrization::new(s)?;
    integrate_parametrized(u, &par, spec)
}

pub fn integrate_parametrized(u: &Solution, par: &Parametrization, spec: &QuadratureSpec) -> Result<Integral> {
    spec.validate()?;
    let value_at = |s: ConicSample| if s.finite { u.eval(&s.point) * s.speed } else { 0.0 };
    let mut acc = Acc {
        value: 0.0,
        abs_value: 0.0,
        error: 0.0,
    };
    let roots = par.root_angles();
    match par.roots {
        RootCount::All => {
            return Ok(Integral::Value {
                value: 0.0,
                abs_value: 0.0,
                error: 0.0,
            })
        }
        RootCount::Zero => {
            let r = integrate_panels(|theta| value_at(par.sample(theta)), 0.0, TAU, CLOSED_PANELS, spec);
            acc.add(&r);
        }
        RootCount::One | RootCount::Two => {
            let k = roots.len();
            let mut arcs = Vec::new();
            for i in 0..k {
                let a = roots[i];
                let b = if i + 1 < k { roots[i + 1] } else { roots[0] + TAU };
                arcs.push((a, b));
            }
            // Offsets from the nearer root keep λ accurate near the ends.
            let integrands: Vec<_> = arcs
                .iter()
                .map(|&(a, b)| {
                    let c = (b - a) / PI;
                    move |t: f64| {
                        let jac = c / (1.0 + t * t);
                        let off = c * (1.0 / t.abs()).atan();
                        let s = if t <= 0.0 {
                            if t > -1.0 {
                                par.sample(0.5 * (a + b) + c * t.atan())
                            } else {
                                par.sample_near_root(a, off)
                            }
                        } else if t < 1.0 {
                            par.sample(0.5 * (a + b) + c * t.atan())
                        } else {
                            par.sample_near_root(b.rem_euclid(TAU), -off)
                        };
                        value_at(s) * jac
                    }
                })
                .collect();
            for g in &integrands {
                acc.add(&integrate_panels(g, -1.0, 1.0, WINDOW_PANELS, spec));
            }
            for g in &integrands {
                for dir in [1.0, -1.0] {
                    let h = |t: f64| g(dir * t);
                    let mut lo = 1.0;
                    let mut quiet = 0;
                    let mut settled = false;
                    let mut tail_fit = TailFit::default();
                    for _ in 0..spec.max_windows {
                        let hi = 2.0 * lo;
                        let r = integrate_panels(h, lo, hi, WINDOW_PANELS, spec);
                        let tail = (h(hi) * hi).abs();
                        if !r.value.is_finite() || !tail.is_finite() {
                            return Ok(Integral::NotIntegrable);
                        }
                        acc.add(&r);
                        let thr = spec.eps_decay * acc.abs_value;
                        if r.abs_value <= thr && tail <= thr {
                            quiet += 1;
                            if quiet == spec.quiet_windows {
                                settled = true;
                                break;
                            }
                        } else {
                            quiet = 0;
                        }
                        if let Some((rest, err)) = tail_fit.push(&r) {
                            if err <= (spec.rel_tol * acc.abs_value).max(spec.abs_tol) {
                                acc.value += rest;
                                acc.abs_value += rest.abs();
                                acc.error += err;
                                settled = true;
                                break;
                            }
                        }
                        lo = hi;
                    }
                    if !settled {
                        return Ok(Integral::NotIntegrable);
                    }
                }
            }
        }
    }
    if !acc.value.is_finite() {
        return Ok(Integral::NotIntegrable);
    }
    Ok(Integral::Value {
        value: acc.value,
        abs_value: acc.abs_value,
        error: acc.error,
    })
}

/// Columns of the Richardson table in h = 1/T.
const RICHARDSON_ORDER: usize = 4;

/// Richardson extrapolation of the partial sums over doubling windows
/// [T, 2T]. When f(θ) has a finite nonzero limit at a root, the remaining
/// tail is a power series in 1/T, and the windows shrink by a steady factor
/// between 1/32 and 3/4. Far out the samples lose precision, so such tails
/// are summed from the first few windows instead of being integrated.
#[derive(Default)]
struct TailFit {
    sum: f64,
    windows: Vec<f64>,
    converged: bool,
    /// Last row of the table.
    row: Vec<f64>,
}

impl TailFit {
    /// Adds a window; returns the extrapolated remainder beyond it and the
    /// change of the highest column, once the windows look algebraic.
    fn push(&mut self, r: &QuadResult) -> Option<(f64, f64)> {
        self.sum += r.value;
        self.windows.push(r.value);
        self.converged = r.converged;
        let mut row = vec![self.sum];
        for j in 1..=RICHARDSON_ORDER.min(self.row.len()) {
            let f = (1u32 << j) as f64 - 1.0;
            row.push(row[j - 1] + (row[j - 1] - self.row[j - 1]) / f);
        }
        let prev = std::mem::replace(&mut self.row, row);
        if prev.len() <= RICHARDSON_ORDER || !self.converged {
            return None;
        }
        let n = self.windows.len();
        let w = &self.windows[n.saturating_sub(RICHARDSON_ORDER + 2)..];
        let ratios: Vec<f64> = w.windows(2).map(|p| p[1] / p[0]).collect();
        let steady = ratios.iter().all(|q| (1.0 / 32.0..=0.75).contains(q))
            && ratios.windows(2).all(|p| (p[1] - p[0]).abs() <= 0.05);
        if !steady {
            return None;
        }
        let best = self.row[RICHARDSON_ORDER];
        Some((best - self.sum, (best - prev[RICHARDSON_ORDER]).abs()))
    }
}

/// Adaptive quadrature over `panels` equal pieces of [a, b].
fn integrate_panels<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, spec: &QuadratureSpec) -> QuadResult {
    let w = (b - a) / panels as f64;
    let mut out = QuadResult {
        value: 0.0,
        abs_value: 0.0,
        error: 0.0,
        subdivisions: 0,
        converged: true,
    };
    for i in 0..panels {
        let lo = a + w * i as f64;
        let hi = if i + 1 == panels { b } else { lo + w };
        let r = integrate(&f, lo, hi, spec.rel_tol, spec.abs_tol / panels as f64, spec.max_subdivisions);
        out.value += r.value;
        out.abs_value += r.abs_value;
        out.error += r.error;
        out.subdivisions += r.subdivisions;
        out.converged &= r.converged;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TrialStatus {
    #[serde(rename = "OK")]
    Ok,
    NotIntegrable,
    SkippedLineEmpty,
}

impl TrialStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrialStatus::Ok => "OK",
            TrialStatus::NotIntegrable => "NotIntegrable",
            TrialStatus::SkippedLineEmpty => "SkippedLineEmpty",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub pair_id: String,
    pub pair_class: PairClass,
    pub solution_id: String,
    pub i_s: f64,
    pub i_sp: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
    pub status: TrialStatus,
}

fn report(pair_id: &str, class: PairClass, solution_id: &str, a: Integral, b: Integral) -> TrialReport {
    match (a, b) {
        (
            Integral::Value {
                value: x,
                abs_value: mx,
                ..
            },
            Integral::Value {
                value: y,
                abs_value: my,
                ..
            },
        ) => {
            let abs_diff = (x - y).abs();
            TrialReport {
                pair_id: pair_id.into(),
                pair_class: class,
                solution_id: solution_id.into(),
                i_s: x,
                i_sp: y,
                abs_diff,
                rel_diff: rel_diff(x, y, mx.max(my)),
                status: TrialStatus::Ok,
            }
        }
        (x, y) => TrialReport {
            pair_id: pair_id.into(),
            pair_class: class,
            solution_id: solution_id.into(),
            i_s: x.value().unwrap_or(f64::NAN),
            i_sp: y.value().unwrap_or(f64::NAN),
            abs_diff: f64::NAN,
            rel_diff: f64::NAN,
            status: TrialStatus::NotIntegrable,
        },
    }
}

/// Compares ∫_S u dl with ∫_{S⊥} u dl.
pub fn mean_value_check(u: &Solution, pair: &ConicPair, spec: &QuadratureSpec) -> Result<TrialReport> {
    mean_value_check_ids(u, pair, spec, "pair", "u")
}

pub fn mean_value_check_ids(
    u: &Solution,
    pair: &ConicPair,
    spec: &QuadratureSpec,
    pair_id: &str,
    solution_id: &str,
) -> Result<TrialReport> {
    let class = classify_pair(pair)?.class;
    if class.is_line_empty() {
        return Ok(TrialReport {
            pair_id: pair_id.into(),
            pair_class: class,
            solution_id: solution_id.into(),
            i_s: f64::NAN,
            i_sp: f64::NAN,
            abs_diff: f64::NAN,
            rel_diff: f64::NAN,
            status: TrialStatus::SkippedLineEmpty,
        });
    }
    let a = integrate_conic(u, &pair.conic(Side::S), spec)?;
    let b = integrate_conic(u, &pair.conic(Side::Sp), spec)?;
    Ok(report(pair_id, class, solution_id, a, b))
}

/// The circles {(a + r cos θ, b + r sin θ, c, d)} and
/// {(a, b, c + r cos θ, d + r sin θ)}.
pub fn asgeirsson_pair(a: f64, b: f64, c: f64, d: f64, r: f64) -> Result<ConicPair> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("radius {r}")));
    }
    let m = lift(&Generator::Translation {
        v: Point22::new(a, b, c, d),
    })?
    .compose(&lift(&Generator::Dilation { lambda: r })?);
    Ok(apply_map(&m, &standard_pair()))
}

/// Both circles have speed r, so the dl integrals are r times the dθ
/// integrals and their equality is the same statement.
pub fn asgeirsson_check(
    u: &Solution,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<TrialReport> {
    let pair = asgeirsson_pair(a, b, c, d, r)?;
    mean_value_check_ids(u, &pair, spec, "asgeirsson", "u")
}

/// Which pairs a generator should produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassFilter {
    Any,
    Circles,
    Hyperbolae,
    Parabolae,
    LineEmpty,
}

impl ClassFilter {
    pub fn admits(&self, c: PairClass) -> bool {
        match self {
            ClassFilter::Any => true,
            ClassFilter::Circles => c == PairClass::Circles,
            ClassFilter::Hyperbolae => c == PairClass::Hyperbolae,
            ClassFilter::Parabolae => c == PairClass::Parabolae,
            ClassFilter::LineEmpty => c.is_line_empty(),
        }
    }
}

impl std::str::FromStr for ClassFilter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "any" => Ok(ClassFilter::Any),
            "circles" => Ok(ClassFilter::Circles),
            "hyperbolae" => Ok(ClassFilter::Hyperbolae),
            "parabolae" => Ok(ClassFilter::Parabolae),
            "line_empty" => Ok(ClassFilter::LineEmpty),
            other => Err(Error::InvalidParameter(format!("class filter {other}"))),
        }
    }
}

/// Number of generators in each random map.
pub const MAP_LENGTH: usize = 6;

const MAX_ATTEMPTS: u64 = 10_000;

/// Re-spans both sides with strictly diagonally dominant coefficient
/// matrices and swaps the sides with probability 1/2.
fn scramble<R: Rng>(pair: &ConicPair, r: &mut R) -> ConicPair {
    let mut coeffs = || -> Vec<Vec<f64>> {
        (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        if i == j {
                            rng::uniform(r, 1.5, 2.5) * if r.random_bool(0.5) { 1.0 } else { -1.0 }
                        } else {
                            rng::uniform(r, -0.5, 0.5)
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let cv = coeffs();
    let cp = coeffs();
    let v = pair.v().respan(&cv).expect("dominant coefficients are invertible");
    let vp = pair.vp().respan(&cp).expect("dominant coefficients are invertible");
    let out = ConicPair::new(v, vp).expect("re-spanning keeps a valid pair");
    if r.random_bool(0.5) {
        out.swapped()
    } else {
        out
    }
}

/// Translation ∘ dilation ∘ isometry, optionally after the anti-isometry.
/// These maps fix the point at infinity and so preserve the pair class.
pub fn random_similarity<R: Rng>(r: &mut R) -> ConformalMap {
    let t = lift(&Generator::Translation {
        v: Point22(std::array::from_fn(|_| rng::uniform(r, -1.0, 1.0))),
    })
    .unwrap();
    let d = lift(&Generator::Dilation {
        lambda: rng::uniform(r, 0.5_f64.ln(), 2.0_f64.ln()).exp(),
    })
    .unwrap();
    let m = lift(&Generator::LinearIsometry { m: random_isometry(r) }).unwrap();
    let mut map = t.compose(&d).compose(&m);
    if r.random_bool(0.5) {
        map = map.compose(&ConformalMap::anti_isometry());
    }
    map
}

/// Random conformal image of the standard pair under `random_map`.
pub fn random_pair(seed: u64) -> ConicPair {
    apply_map(&random_map(seed, MAP_LENGTH), &standard_pair())
}

/// `count` pairs of the requested class, deterministic in `seed`.
///
/// Circles and Hyperbolae come from rejection sampling of random conformal
/// images of the standard pair; Parabolae and LineEmpty pairs are images of
/// fixed anchors under random similarities, since random maps hit them with
/// probability zero.
pub fn generate_pairs(seed: u64, count: usize, filter: ClassFilter) -> Vec<ConicPair> {
    (0..count)
        .map(|i| generate_one(rng::derive(seed, i as u64), filter))
        .collect()
}

fn generate_one(seed: u64, filter: ClassFilter) -> ConicPair {
    match filter {
        ClassFilter::Parabolae | ClassFilter::LineEmpty => {
            let mut r = rng::stream(seed, 0);
            let anchor = if filter == ClassFilter::Parabolae {
                parabola_pair()
            } else {
                line_empty_pair()
            };
            let m = random_similarity(&mut r);
            scramble(&apply_map(&m, &anchor), &mut r)
        }
        _ => {
            for attempt in 0..MAX_ATTEMPTS {
                let s = rng::derive(seed, attempt);
                let pair = random_pair(s);
                let Ok(valid) = ConicPair::new(pair.v().clone(), pair.vp().clone()) else {
                    continue;
                };
                if filter != ClassFilter::Any {
                    match classify_pair(&valid) {
                        Ok(c) if filter.admits(c.class) => {}
                        _ => continue,
                    }
                }
                return scramble(&valid, &mut rng::stream(s, 1));
            }
            panic!("no {filter:?} pair after {MAX_ATTEMPTS} attempts");
        }
    }
}

/// All pairs × solutions trials, evaluated in parallel and returned in
/// row-major order.
pub fn run_grid(
    pairs: &[(String, ConicPair)],
    solutions: &[(String, Solution)],
    spec: &QuadratureSpec,
) -> Vec<Result<TrialReport>> {
    let jobs: Vec<(usize, usize)> = (0..pairs.len())
        .flat_map(|i| (0..solutions.len()).map(move |j| (i, j)))
        .collect();
    jobs.par_iter()
        .map(|&(i, j)| mean_value_check_ids(&solutions[j].1, &pairs[i].1, spec, &pairs[i].0, &solutions[j].0))
        .collect()
}

pub const REPORT_HEADER: &str = "pair_id,class,solution_id,I_S,I_Sperp,abs_diff,rel_diff,status";

/// Floats with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// The CSV report; `timestamp` adds a leading `# generated:` line.
pub fn report_csv(rows: &[TrialReport], timestamp: Option<u64>) -> String {
    let mut s = String::new();
    if let Some(t) = timestamp {
        let _ = writeln!(s, "# generated: {t}");
    }
    s.push_str(REPORT_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.pair_id,
            r.pair_class,
            r.solution_id,
            fmt_f64(r.i_s),
            fmt_f64(r.i_sp),
            fmt_f64(r.abs_diff),
            fmt_f64(r.rel_diff),
            r.status.as_str()
        );
    }
    s
}
