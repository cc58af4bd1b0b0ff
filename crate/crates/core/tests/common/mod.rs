#![allow(dead_code)]

use awrlab_core::State;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn st(u: f64, rho: f64) -> State {
    State::new(u, rho).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Log-uniform draw in `[lo, hi]`.
pub fn log_uniform(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (r.gen_range(lo.ln()..hi.ln())).exp()
}

pub fn random_state(r: &mut ChaCha8Rng) -> State {
    st(r.gen_range(0.2..3.0), log_uniform(r, 0.1, 10.0))
}

/// Plain bisection on a sign change, independent of the library's root finder.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) < 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Composite Simpson rule in `t = ln s` with `n` (even) panels.
pub fn simpson_log(a: f64, b: f64, alpha: f64, rho_a: f64, rho_b: f64, n: usize) -> f64 {
    let f = |t: f64| (a * t.exp() + b * alpha * (-alpha * t).exp()).sqrt();
    let (x0, x1) = (rho_a.ln(), rho_b.ln());
    let h = (x1 - x0) / n as f64;
    let mut s = f(x0) + f(x1);
    for i in 1..n {
        s += f(x0 + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Bisection in `ln x` for roots spanning many decades.
pub fn bisect_log(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    bisect(|t| f(t.exp()), lo.ln(), hi.ln()).exp()
}
