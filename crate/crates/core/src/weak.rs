//! Self-similar weak formulation of a Riemann solution.
//!
//! For `U(x, t) = V(x / t)` the conservation law `q(U)_t + f(U)_x = 0` becomes,
//! against a compactly supported test function `phi(xi)`,
//!
//! `int (f(V) - xi q(V)) phi'(xi) dxi - int q(V) phi(xi) dxi = 0`.

use crate::model::{flux, momentum, PressureParams, RiemannSampler, System};
use crate::quadrature::{integrate, Tolerance};

/// `phi(xi) = (1 - ((xi - c) / w)^2)^3` on `|xi - c| < w`, zero outside.
/// Twice continuously differentiable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bump {
    pub center: f64,
    pub width: f64,
}

impl Bump {
    pub fn new(center: f64, width: f64) -> Self {
        Self { center, width }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.width, self.center + self.width)
    }

    pub fn value(&self, xi: f64) -> f64 {
        let z = (xi - self.center) / self.width;
        if z.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - z * z).powi(3)
        }
    }

    pub fn derivative(&self, xi: f64) -> f64 {
        let z = (xi - self.center) / self.width;
        if z.abs() >= 1.0 {
            0.0
        } else {
            -6.0 * z * (1.0 - z * z).powi(2) / self.width
        }
    }
}

/// Both weak-form residuals `(r1, r2)` for mass and momentum. The integral is
/// split at every entry of `breaks` inside the bump's support, so shocks and
/// fan edges never fall inside a quadrature panel.
pub fn residual<S: RiemannSampler + ?Sized>(
    system: System,
    params: &PressureParams,
    sampler: &S,
    breaks: &[f64],
    bump: &Bump,
) -> (f64, f64) {
    let (s0, s1) = bump.support();
    let mut knots: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&b| b > s0 && b < s1)
        .collect();
    knots.push(s0);
    knots.push(s1);
    knots.sort_by(f64::total_cmp);
    knots.dedup();

    let scale = bump.width.max(1.0);
    let tol = Tolerance::relative(1e-13).with_abs(1e-16 * scale);
    let mut r1 = 0.0;
    let mut r2 = 0.0;
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        r1 += integrate(
            |xi| {
                let s = sampler.sample(xi);
                let (f1, _) = flux(system, params, s.u, s.rho);
                (f1 - xi * s.rho) * bump.derivative(xi) - s.rho * bump.value(xi)
            },
            a,
            b,
            tol,
        )
        .value;
        r2 += integrate(
            |xi| {
                let s = sampler.sample(xi);
                let (_, f2) = flux(system, params, s.u, s.rho);
                let q2 = momentum(system, params, s.u, s.rho);
                (f2 - xi * q2) * bump.derivative(xi) - q2 * bump.value(xi)
            },
            a,
            b,
            tol,
        )
        .value;
    }
    (r1, r2)
}
