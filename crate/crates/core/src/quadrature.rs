//! Globally adaptive 15-point Gauss-Kronrod quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Kronrod abscissae on [-1, 1] (non-negative half, descending).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the abscissae XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: f64,
    pub b: f64,
    pub value: f64,
    pub abs_value: f64,
    pub error: f64,
}

/// One G7K15 panel: Kronrod value, integral of |f|, and |K - G|.
pub fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut abs = WGK[7] * fc.abs();
    for i in 0..7 {
        let dx = h * XGK[i];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        k += WGK[i] * (f1 + f2);
        abs += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            g += WG[i / 2] * (f1 + f2);
        }
    }
    let error = ((k - g) * h).abs();
    Segment {
        a,
        b,
        value: k * h,
        abs_value: abs * h.abs(),
        error: if error.is_finite() { error } else { f64::INFINITY },
    }
}

struct ByError(Segment);

impl PartialEq for ByError {
    fn eq(&self, o: &Self) -> bool {
        self.0.error == o.0.error
    }
}

impl Eq for ByError {}

impl PartialOrd for ByError {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for ByError {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.error.total_cmp(&o.0.error)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_value: f64,
    pub error: f64,
    pub subdivisions: usize,
    pub converged: bool,
}

/// Bisects the panel of largest error estimate until the summed estimate
/// is below max(abs_tol, rel_tol |value|) or the budget is spent.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            abs_value: 0.0,
            error: 0.0,
            subdivisions: 0,
            converged: true,
        };
    }
    let first = gk15(&mut f, a, b);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(ByError(first));
    let mut subdivisions = 0;
    while error > abs_tol.max(rel_tol * value.abs()) && subdivisions < max_subdivisions {
        let Some(ByError(s)) = heap.pop() else { break };
        let m = 0.5 * (s.a + s.b);
        let l = gk15(&mut f, s.a, m);
        let r = gk15(&mut f, m, s.b);
        value += l.value + r.value - s.value;
        error += l.error + r.error - s.error;
        heap.push(ByError(l));
        heap.push(ByError(r));
        subdivisions += 1;
    }
    // Re-sum to shed the drift of the running updates.
    let segs: Vec<Segment> = heap.into_iter().map(|s| s.0).collect();
    let value: f64 = segs.iter().map(|s| s.value).sum();
    let abs_value: f64 = segs.iter().map(|s| s.abs_value).sum();
    let error: f64 = segs.iter().map(|s| s.error).sum();
    QuadResult {
        value,
        abs_value,
        error,
        subdivisions,
        converged: error <= abs_tol.max(rel_tol * value.abs()),
    }
}
