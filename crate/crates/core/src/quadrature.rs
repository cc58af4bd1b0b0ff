//! Adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! Each panel is integrated with the 15-point Kronrod rule; the embedded
//! 7-point Gauss rule supplies the error estimate. Panels whose estimate
//! exceeds their share of the tolerance are bisected.

/// Kronrod abscissae on `[-1, 1]`, non-negative half, descending.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];

/// Gauss weights for the odd-indexed Kronrod nodes (and the centre).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_depth: u32,
}

impl Tolerance {
    pub const fn relative(rel: f64) -> Self {
        Self {
            rel,
            abs: 0.0,
            max_depth: 48,
        }
    }

    pub const fn with_abs(mut self, abs: f64) -> Self {
        self.abs = abs;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut abs_k = WGK[7] * fc.abs();
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        k += WGK[j] * (f1 + f2);
        abs_k += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    (k * h, ((k - g) * h).abs(), abs_k * h.abs())
}

/// Integrate `f` over `[a, b]` (either orientation).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        };
    }
    let (whole, err, scale) = kronrod(&f, a, b);
    let target = (tol.rel * scale.max(whole.abs())).max(tol.abs);
    let mut evals = 15;
    let (value, error) = refine(&f, a, b, whole, err, target, tol, 0, &mut evals);
    QuadResult {
        value,
        error,
        evaluations: evals,
    }
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    err: f64,
    target: f64,
    tol: Tolerance,
    depth: u32,
    evals: &mut usize,
) -> (f64, f64) {
    // Rounding floor: once the estimate is at machine level the panel is done.
    if err <= target || depth >= tol.max_depth || err <= 50.0 * f64::EPSILON * whole.abs() {
        return (whole, err);
    }
    let m = 0.5 * (a + b);
    let (l, el, _) = kronrod(f, a, m);
    let (r, er, _) = kronrod(f, m, b);
    *evals += 30;
    let half = 0.5 * target;
    let (lv, le) = refine(f, a, m, l, el, half, tol, depth + 1, evals);
    let (rv, re) = refine(f, m, b, r, er, half, tol, depth + 1, evals);
    (lv + rv, le + re)
}
