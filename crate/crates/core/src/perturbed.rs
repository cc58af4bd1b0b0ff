//! Exact Riemann solver for the perturbed Aw-Rascle system (`0 < alpha < 1`).
//!
//! Both families are genuinely nonlinear. Rarefaction curves are
//! `sqrt(u) - sqrt(u_-) = -/+ (1/2) I(rho_-, rho)` with
//! `I(a, b) = int_a^b sqrt(A s + B alpha s^-alpha) / s ds`; shock curves solve
//! `(u_r - u_l)^2 = E1(u_l, rho_l, u_r, rho_r)`, which is affine in each velocity.
//!
//! The intermediate state is found by matching the backward wave curve through
//! the left state with the reversed forward wave curve through the right state
//! in the density variable.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{
    perturbed_degeneracy_gap, perturbed_speeds, PressureParams, RiemannSampler, Sample, State,
};
use crate::quadrature::{integrate, Tolerance};
use crate::roots;
use crate::weak::{self, Bump};

/// Relative accuracy of the rarefaction integral.
pub const INTEGRAL_TOL: f64 = 1e-12;

/// Largest `A`, `B` for which curve monotonicity is asserted rather than hoped for.
pub const MONOTONE_REGIME: f64 = 0.1;

/// Residual tolerance on the curve-matching equation.
pub const MATCH_TOL: f64 = 1e-11;

/// Tolerance for boundary labels in [`classify_perturbed`].
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// First family (`lambda1`).
    Backward,
    /// Second family (`lambda2`).
    Forward,
}

/// `int_{rho_a}^{rho_b} sqrt(A s + B alpha s^-alpha) / s ds`, signed.
///
/// Evaluated in `t = ln s`, where the integrand `sqrt(A e^t + B alpha e^(-alpha t))`
/// is smooth; the `s^(-1 - alpha/2)` blow-up at the origin never reaches the
/// quadrature.
pub fn rarefaction_integral(params: &PressureParams, rho_a: f64, rho_b: f64) -> Result<f64> {
    for r in [rho_a, rho_b] {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::DegenerateDensity(r));
        }
    }
    Ok(integral(params, rho_a, rho_b))
}

fn integral(params: &PressureParams, rho_a: f64, rho_b: f64) -> f64 {
    if rho_a == rho_b {
        return 0.0;
    }
    let (a, b, al) = (params.a(), params.b(), params.alpha());
    let ba = b * al;
    integrate(
        |t: f64| (a * t.exp() + ba * (-al * t).exp()).sqrt(),
        rho_a.ln(),
        rho_b.ln(),
        Tolerance::relative(INTEGRAL_TOL),
    )
    .value
}

/// Velocity on the admissible half-branch (`u >= u_-`) of a rarefaction curve
/// through `left`. Backward needs `rho <= rho_-`, forward `rho >= rho_-`.
pub fn rarefaction_curve_u(
    params: &PressureParams,
    left: &State,
    rho: f64,
    direction: Direction,
) -> Result<f64> {
    params.require_perturbed_alpha()?;
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::DegenerateDensity(rho));
    }
    let rl = left.rho();
    let ok = match direction {
        Direction::Backward => rho <= rl,
        Direction::Forward => rho >= rl,
    };
    if !ok {
        return Err(Error::WrongBranch(format!(
            "{direction:?} rarefaction from rho_- = {rl} cannot reach rho = {rho}"
        )));
    }
    Ok(rarefaction_u(params, left, rho))
}

fn rarefaction_u(params: &PressureParams, left: &State, rho: f64) -> f64 {
    if rho == left.rho() {
        return left.u();
    }
    let s = left.u().sqrt() + 0.5 * integral(params, rho.min(left.rho()), rho.max(left.rho()));
    s * s
}

/// `E1` exactly as it appears after eliminating the shock speed from the
/// jump conditions.
pub fn e1(params: &PressureParams, u_l: f64, rho_l: f64, u_r: f64, rho_r: f64) -> f64 {
    let (a, b, al) = (params.a(), params.b(), params.alpha());
    let k = 1.0 / (1.0 - al);
    a / (2.0 * rho_l) * rho_r * rho_r * u_r
        + al * b * k / rho_l * rho_r.powf(1.0 - al) * u_r
        + a / (2.0 * rho_r) * rho_l * rho_l * u_l
        + al * b * k / rho_r * rho_l.powf(1.0 - al) * u_l
        - a * rho_r * (u_r - 0.5 * u_l)
        - b / rho_l.powf(al) * (k * u_r - u_l)
        + a * rho_l * (0.5 * u_r - u_l)
        + b / rho_r.powf(al) * (u_r - k * u_l)
}

/// Coefficient of `u_r` in `E1`, written in a manifestly non-negative form.
/// The coefficient of `u_l` is the same function with densities swapped.
fn e1_slope(params: &PressureParams, rho_l: f64, rho_r: f64) -> f64 {
    let (a, b, al) = (params.a(), params.b(), params.alpha());
    let t = rho_r / rho_l;
    let dr = rho_r - rho_l;
    let h = (al * t.powf(1.0 - al) - 1.0) / (1.0 - al) + t.powf(-al);
    a * dr * dr / (2.0 * rho_l) + b * rho_l.powf(-al) * h.max(0.0)
}

/// Shock curve through a fixed left state: the unique root of
/// `(u - u_l)^2 = E1(u_l, rho_l, u, rho)` with `u < u_l`.
fn shock_u_from_left(params: &PressureParams, left: &State, rho: f64) -> f64 {
    let c_r = e1_slope(params, left.rho(), rho);
    let c_l = e1_slope(params, rho, left.rho());
    let e0 = (c_l + c_r) * left.u();
    if e0 <= 0.0 {
        return left.u();
    }
    left.u() - 2.0 * e0 / (c_r + (c_r * c_r + 4.0 * e0).sqrt())
}

/// Left states `(u, rho)` joined to a fixed right state by a forward shock:
/// the root of `(u_r - u)^2 = E1(u, rho, u_r, rho_r)` with `u > u_r`.
fn shock_u_to_right(params: &PressureParams, right: &State, rho: f64) -> f64 {
    let c_l = e1_slope(params, right.rho(), rho);
    let c_r = e1_slope(params, rho, right.rho());
    let e0 = (c_l + c_r) * right.u();
    right.u() + 0.5 * (c_l + (c_l * c_l + 4.0 * e0).sqrt())
}

/// Velocity on the shock curve through `left`. Backward needs `rho > rho_-`,
/// forward `rho < rho_-`; `rho = rho_-` returns `u_-`.
pub fn shock_curve_u(
    params: &PressureParams,
    left: &State,
    rho: f64,
    direction: Direction,
) -> Result<f64> {
    params.require_perturbed_alpha()?;
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::DegenerateDensity(rho));
    }
    let rl = left.rho();
    let ok = match direction {
        Direction::Backward => rho >= rl,
        Direction::Forward => rho <= rl,
    };
    if !ok {
        return Err(Error::WrongBranch(format!(
            "{direction:?} shock from rho_- = {rl} cannot reach rho = {rho}"
        )));
    }
    let u = shock_u_from_left(params, left, rho);
    if !u.is_finite() || u > left.u() {
        return Err(Error::Inapplicable(format!(
            "no admissible shock root at rho = {rho}"
        )));
    }
    Ok(u)
}

/// `(E2, E3)`: the partial derivatives of `E1(u_-, rho_-, u, rho)` with
/// respect to `u` and `rho`, which fix the sign of `u_rho` on the backward
/// shock curve.
pub fn shock_slope_diagnostics(params: &PressureParams, left: &State, star: &State) -> (f64, f64) {
    let (a, b, al) = (params.a(), params.b(), params.alpha());
    let k = 1.0 / (1.0 - al);
    let (ul, rl) = (left.u(), left.rho());
    let (u, r) = (star.u(), star.rho());
    let e2 = a / (2.0 * rl) * r * r + al * b * k / rl * r.powf(1.0 - al) - a * r
        - b * k / rl.powf(al)
        + 0.5 * a * rl
        + b / r.powf(al);
    let e3 = a * u * (r / rl - 1.0)
        + al * b * u / r.powf(al) * (1.0 / rl - 1.0 / r)
        + al * b * ul * k / (r * r) * (r.powf(1.0 - al) - rl.powf(1.0 - al))
        + 0.5 * a * (1.0 - (rl / r).powi(2)) * ul;
    (e2, e3)
}

/// Density where the backward shock curve through `left` meets `u = 0`.
pub fn rho_axis_intercept(params: &PressureParams, left: &State) -> Result<f64> {
    params.require_pressured("perturbed Aw-Rascle")?;
    params.require_perturbed_alpha()?;
    let (a, b, al) = (params.a(), params.b(), params.alpha());
    let k = 1.0 / (1.0 - al);
    let (ul, rl) = (left.u(), left.rho());
    let f = |r: f64| {
        -a * rl + b / rl.powf(al) + 0.5 * a * r - b * k / r.powf(al)
            + a / (2.0 * r) * rl * rl
            + al * b * k / r * rl.powf(1.0 - al)
            - ul
    };
    let mut hi = 2.0 * rl;
    while f(hi) <= 0.0 {
        hi *= 4.0;
        if !hi.is_finite() {
            return Err(Error::BracketFailure("the rho-axis intercept"));
        }
    }
    Ok(roots::bisect_decreasing(&|r| -f(r), rl, hi, 1e-14))
}

/// `sigma = (rho_r u_r - rho_l u_l) / (rho_r - rho_l)`.
pub fn shock_speed_perturbed(left: &State, right: &State) -> Result<f64> {
    let dr = right.rho() - left.rho();
    if dr == 0.0 {
        return Err(Error::DegenerateJump);
    }
    Ok((right.rho() * right.u() - left.rho() * left.u()) / dr)
}

/// Which pair of waves solves the Riemann problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    /// Backward shock, forward shock.
    SS,
    /// Backward shock, forward rarefaction.
    SR,
    /// Backward rarefaction, forward shock.
    RS,
    /// Backward rarefaction, forward rarefaction.
    RR,
    /// A single backward wave (the forward wave has zero strength).
    OnBackwardCurve,
    /// A single forward wave (the backward wave has zero strength).
    OnForwardCurve,
    Coincident,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Region::SS => "SS",
            Region::SR => "SR",
            Region::RS => "RS",
            Region::RR => "RR",
            Region::OnBackwardCurve => "ON_BACKWARD_CURVE",
            Region::OnForwardCurve => "ON_FORWARD_CURVE",
            Region::Coincident => "COINCIDENT",
        };
        f.write_str(s)
    }
}

/// Backward wave curve through `left`, both branches.
fn backward_curve(params: &PressureParams, left: &State, rho: f64) -> f64 {
    if rho > left.rho() {
        shock_u_from_left(params, left, rho)
    } else {
        rarefaction_u(params, left, rho)
    }
}

/// Forward wave curve through `left`, both branches.
fn forward_curve(params: &PressureParams, left: &State, rho: f64) -> f64 {
    if rho < left.rho() {
        shock_u_from_left(params, left, rho)
    } else {
        rarefaction_u(params, left, rho)
    }
}

/// States that reach `right` through a forward wave. On the rarefaction
/// branch the velocity is continued as `s |s|` once `sqrt(u)` would turn
/// negative, which keeps the matching function monotone.
fn reversed_forward_curve(params: &PressureParams, right: &State, rho: f64) -> f64 {
    if rho > right.rho() {
        shock_u_to_right(params, right, rho)
    } else {
        let s = right.u().sqrt() - 0.5 * integral(params, rho, right.rho());
        s * s.abs()
    }
}

pub fn classify_perturbed(params: &PressureParams, left: &State, right: &State) -> Result<Region> {
    params.require_pressured("perturbed Aw-Rascle")?;
    params.require_perturbed_alpha()?;
    let tol = BOUNDARY_TOL * right.u().max(1.0);
    if (right.u() - left.u()).abs() < tol && (right.rho() - left.rho()).abs() < tol {
        return Ok(Region::Coincident);
    }
    let d_forward = right.u() - forward_curve(params, left, right.rho());
    let d_backward = right.u() - backward_curve(params, left, right.rho());
    if d_backward.abs() < tol {
        return Ok(Region::OnBackwardCurve);
    }
    if d_forward.abs() < tol {
        return Ok(Region::OnForwardCurve);
    }
    Ok(match (d_forward < 0.0, d_backward < 0.0) {
        (true, true) => Region::SS,
        (true, false) => Region::SR,
        (false, true) => Region::RS,
        (false, false) => Region::RR,
    })
}

/// Rarefaction fan between `xi_head <= xi <= xi_tail`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fan {
    /// Slowest characteristic of the fan.
    pub xi_head: f64,
    /// Fastest characteristic of the fan.
    pub xi_tail: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Wave {
    Shock { speed: f64 },
    Rarefaction(Fan),
    /// Zero-strength wave, located at the characteristic speed.
    Null { speed: f64 },
}

impl Wave {
    /// `(slowest, fastest)` speed.
    pub fn span(&self) -> (f64, f64) {
        match *self {
            Wave::Rarefaction(f) => (f.xi_head, f.xi_tail),
            Wave::Shock { speed } | Wave::Null { speed } => (speed, speed),
        }
    }

    pub fn is_shock(&self) -> bool {
        matches!(self, Wave::Shock { .. })
    }

    pub fn is_rarefaction(&self) -> bool {
        matches!(self, Wave::Rarefaction(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerturbedSolution {
    pub params: PressureParams,
    pub left: State,
    pub star: State,
    pub right: State,
    /// Backward wave, then forward wave.
    pub waves: [Wave; 2],
    /// Residual of the curve-matching equation at `rho*`.
    pub match_residual: f64,
}

impl PerturbedSolution {
    pub fn region(&self) -> Region {
        match (self.waves[0], self.waves[1]) {
            (Wave::Null { .. }, Wave::Null { .. }) => Region::Coincident,
            (_, Wave::Null { .. }) => Region::OnBackwardCurve,
            (Wave::Null { .. }, _) => Region::OnForwardCurve,
            (w1, w2) => match (w1.is_shock(), w2.is_shock()) {
                (true, true) => Region::SS,
                (true, false) => Region::SR,
                (false, true) => Region::RS,
                (false, false) => Region::RR,
            },
        }
    }

    /// Smallest and largest wave speed.
    pub fn wave_window(&self) -> (f64, f64) {
        (self.waves[0].span().0, self.waves[1].span().1)
    }

    /// Every speed at which the solution may be non-smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(4);
        for w in &self.waves {
            let (lo, hi) = w.span();
            v.push(lo);
            if hi != lo {
                v.push(hi);
            }
        }
        v
    }

    fn backward_fan_density(&self, xi: f64) -> f64 {
        let g = |rho: f64| {
            let u = rarefaction_u(&self.params, &self.left, rho);
            perturbed_speeds(&self.params, u, rho).lambda1 - xi
        };
        roots::bisect_decreasing(&g, self.star.rho(), self.left.rho(), 1e-14)
    }

    fn forward_fan_density(&self, xi: f64) -> f64 {
        let g = |rho: f64| {
            let u = reversed_forward_curve(&self.params, &self.right, rho);
            xi - perturbed_speeds(&self.params, u, rho).lambda2
        };
        roots::bisect_decreasing(&g, self.star.rho(), self.right.rho(), 1e-14)
    }
}

impl RiemannSampler for PerturbedSolution {
    fn sample(&self, xi: f64) -> Sample {
        let (h1, t1) = self.waves[0].span();
        if xi < h1 {
            return self.left.sample();
        }
        if xi <= t1 {
            if let Wave::Rarefaction(_) = self.waves[0] {
                let rho = self.backward_fan_density(xi);
                return Sample {
                    u: rarefaction_u(&self.params, &self.left, rho),
                    rho,
                };
            }
        }
        let (h2, t2) = self.waves[1].span();
        if xi < h2 {
            return self.star.sample();
        }
        if xi <= t2 {
            if let Wave::Rarefaction(_) = self.waves[1] {
                let rho = self.forward_fan_density(xi);
                return Sample {
                    u: reversed_forward_curve(&self.params, &self.right, rho),
                    rho,
                };
            }
            if xi < t2 {
                return self.star.sample();
            }
        }
        self.right.sample()
    }
}

/// Solve the Riemann problem for the perturbed system.
pub fn solve_perturbed(
    params: &PressureParams,
    left: &State,
    right: &State,
) -> Result<PerturbedSolution> {
    params.require_pressured("perturbed Aw-Rascle")?;
    params.require_perturbed_alpha()?;
    if params.a() > MONOTONE_REGIME || params.b() > MONOTONE_REGIME {
        log::warn!(
            "A = {}, B = {} exceed {MONOTONE_REGIME}: wave-curve monotonicity is not guaranteed",
            params.a(),
            params.b()
        );
    }
    for s in [left, right] {
        if perturbed_degeneracy_gap(params, s).abs() < 1e-12 {
            log::warn!("state {s} lies on the set where genuine nonlinearity fails");
        }
    }

    let g = |rho: f64| {
        backward_curve(params, left, rho) - reversed_forward_curve(params, right, rho)
    };
    let lo = left.rho().min(right.rho());
    let hi = left.rho().max(right.rho());
    let rho_star = if left == right {
        left.rho()
    } else {
        roots::solve_decreasing(g, lo, hi, 1e-15, "the perturbed intermediate density")?
    };
    let u_star = if left == right {
        left.u()
    } else {
        backward_curve(params, left, rho_star)
    };
    let residual = g(rho_star);
    if residual.abs() > MATCH_TOL * u_star.abs().max(1.0) {
        return Err(Error::NotConverged {
            what: "the perturbed intermediate state",
            residual,
        });
    }
    let star = State::raw(u_star, rho_star);
    let same = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.max(b);

    let wave1 = if same(rho_star, left.rho()) {
        Wave::Null {
            speed: perturbed_speeds(params, left.u(), left.rho()).lambda1,
        }
    } else if rho_star > left.rho() {
        Wave::Shock {
            speed: shock_speed_perturbed(left, &star)?,
        }
    } else {
        Wave::Rarefaction(Fan {
            xi_head: perturbed_speeds(params, left.u(), left.rho()).lambda1,
            xi_tail: perturbed_speeds(params, u_star, rho_star).lambda1,
        })
    };
    let wave2 = if same(rho_star, right.rho()) {
        Wave::Null {
            speed: perturbed_speeds(params, right.u(), right.rho()).lambda2,
        }
    } else if rho_star > right.rho() {
        Wave::Shock {
            speed: shock_speed_perturbed(&star, right)?,
        }
    } else {
        Wave::Rarefaction(Fan {
            xi_head: perturbed_speeds(params, u_star, rho_star).lambda2,
            xi_tail: perturbed_speeds(params, right.u(), right.rho()).lambda2,
        })
    };
    Ok(PerturbedSolution {
        params: *params,
        left: *left,
        star,
        right: *right,
        waves: [wave1, wave2],
        match_residual: residual,
    })
}

/// Residuals `(r1, r2)` of the self-similar weak formulation against a bump
/// test function. `window` must contain every wave and the bump's support.
pub fn weak_form_residual(
    solution: &PerturbedSolution,
    bump: &Bump,
    window: (f64, f64),
) -> Result<(f64, f64)> {
    let (lo, hi) = solution.wave_window();
    if !(window.0 <= lo && hi <= window.1) {
        return Err(Error::Domain(format!(
            "window [{}, {}] does not contain the waves [{lo}, {hi}]",
            window.0, window.1
        )));
    }
    let (s0, s1) = bump.support();
    if !(window.0 <= s0 && s1 <= window.1) {
        return Err(Error::Domain(format!(
            "test function support [{s0}, {s1}] exceeds the window [{}, {}]",
            window.0, window.1
        )));
    }
    Ok(weak::residual(
        crate::System::Perturbed,
        &solution.params,
        solution,
        &solution.breakpoints(),
        bump,
    ))
}
