//! Exact Riemann solver for the Aw-Rascle system with modified Chaplygin
//! pressure.
//!
//! The first family is genuinely nonlinear, the second linearly degenerate.
//! The system is of Temple class: shock and rarefaction curves through a left
//! state coincide with the level set `u + P(rho) = C_left`, so every solution
//! is a 1-wave (shock or rarefaction) followed by a contact at speed `u_+`.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{eigenvalues_original, PressureParams, RiemannSampler, Sample, State};
use crate::roots;

/// Absolute tolerance for classifying a right state as lying on a boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Relative tolerance on the intermediate density.
const RHO_TOL: f64 = 1e-13;

/// Position of a right state relative to the wave curves through the left state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    /// `u_+ > u_-`, above the 1-curve: rarefaction + contact.
    I,
    /// `u_+ > u_-`, below the 1-curve: rarefaction + contact.
    II,
    /// `u_+ < u_-`, above the 1-curve: shock + contact.
    III,
    /// `u_+ < u_-`, below the 1-curve: shock + contact.
    IV,
    OnRarefactionCurve,
    OnShockCurve,
    OnContactLine,
    Coincident,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::IV => "IV",
            Region::OnRarefactionCurve => "ON_R_CURVE",
            Region::OnShockCurve => "ON_S_CURVE",
            Region::OnContactLine => "ON_J_LINE",
            Region::Coincident => "COINCIDENT",
        };
        f.write_str(s)
    }
}

/// `phi = u + A rho - B / rho^alpha` of a state together with the constant
/// of the 1-curve through the left state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveCurveValue {
    pub phi: f64,
    pub c_left: f64,
}

impl WaveCurveValue {
    pub fn on_curve(&self, tol: f64) -> bool {
        (self.phi - self.c_left).abs() < tol
    }
}

pub fn curve_value(params: &PressureParams, left: &State, s: &State) -> WaveCurveValue {
    WaveCurveValue {
        phi: s.u() + params.p(s.rho()),
        c_left: curve_constant(params, left),
    }
}

/// `C = u_- + A rho_- - B / rho_-^alpha`.
pub fn curve_constant(params: &PressureParams, left: &State) -> f64 {
    left.u() + params.p(left.rho())
}

/// Velocity on the 1-curve with constant `c` at density `rho`.
#[inline]
fn curve_u(params: &PressureParams, c: f64, rho: f64) -> f64 {
    c - params.p(rho)
}

/// `lambda1` restricted to the 1-curve: `C - 2 A rho + (1 - alpha) B / rho^alpha`,
/// strictly decreasing in `rho`.
#[inline]
fn curve_lambda1(params: &PressureParams, c: f64, rho: f64) -> f64 {
    c - 2.0 * params.a() * rho + (1.0 - params.alpha()) * params.b() * rho.powf(-params.alpha())
}

pub fn classify(params: &PressureParams, left: &State, right: &State) -> Region {
    let du = right.u() - left.u();
    let v = curve_value(params, left, right);
    let dphi = v.phi - v.c_left;
    let u_tie = du.abs() < BOUNDARY_TOL;
    let phi_tie = dphi.abs() < BOUNDARY_TOL;
    match (u_tie, phi_tie) {
        (true, true) => Region::Coincident,
        (true, false) => Region::OnContactLine,
        (false, true) if du > 0.0 => Region::OnRarefactionCurve,
        (false, true) => Region::OnShockCurve,
        (false, false) => match (du > 0.0, dphi > 0.0) {
            (true, true) => Region::I,
            (true, false) => Region::II,
            (false, true) => Region::III,
            (false, false) => Region::IV,
        },
    }
}

/// Coupled threshold `A = B = A0` at which the right state crosses the
/// 1-curve through the left state:
/// `A0 = (u_- - u_+) / ((rho_+ - rho_+^-alpha) - (rho_- - rho_-^-alpha))`.
///
/// The same expression gives the threshold for states starting in region II.
pub fn threshold_a0(left: &State, right: &State, alpha: f64) -> Result<f64> {
    if right.u() == left.u() {
        return Err(Error::Inapplicable(
            "threshold requires u_+ != u_-".to_string(),
        ));
    }
    let g = |rho: f64| rho - rho.powf(-alpha);
    let denom = g(right.rho()) - g(left.rho());
    if denom == 0.0 {
        return Err(Error::NoThreshold);
    }
    Ok((left.u() - right.u()) / denom)
}

/// Intermediate state `(u_+, rho*)` with `rho*` on the 1-curve through `left`.
///
/// `rho -> C - P(rho)` is strictly decreasing from `+inf` to `-inf`, so the
/// root is unique; it is bracketed geometrically and bisected.
pub fn intermediate_state(params: &PressureParams, left: &State, u_plus: f64) -> Result<State> {
    params.require_pressured("Aw-Rascle")?;
    if !(u_plus.is_finite() && u_plus > 0.0) {
        return Err(Error::InvalidState {
            u: u_plus,
            rho: f64::NAN,
        });
    }
    if u_plus == left.u() {
        return Ok(*left);
    }
    let c = curve_constant(params, left);
    let g = |rho: f64| curve_u(params, c, rho) - u_plus;
    let rho = roots::solve_decreasing(
        g,
        0.5 * left.rho(),
        2.0 * left.rho(),
        RHO_TOL,
        "the Aw-Rascle intermediate density",
    )?;
    if rho.is_nan() || rho <= 0.0 {
        return Err(Error::BracketFailure("the Aw-Rascle intermediate density"));
    }
    Ok(State::raw(u_plus, rho))
}

/// Speed of the 1-shock from `left` to `star`:
/// `sigma1 = u* - B/rho*^alpha - A rho_- - B (rho_-^(1-alpha) - rho*^(1-alpha)) / (rho* - rho_-)`.
pub fn shock_speed(params: &PressureParams, left: &State, star: &State) -> Result<f64> {
    let (rl, rs) = (left.rho(), star.rho());
    if rs.is_nan() || rs <= rl {
        return Err(Error::WrongBranch(format!(
            "a 1-shock needs rho* > rho_- (rho* = {rs}, rho_- = {rl})"
        )));
    }
    let (a, b, al) = (params.a(), params.b(), params.alpha());
    Ok(star.u() - b * rs.powf(-al) - a * rl
        - b * (rl.powf(1.0 - al) - rs.powf(1.0 - al)) / (rs - rl))
}

/// Centered rarefaction fan of the first family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fan {
    /// Leftmost speed, `lambda1(left)`.
    pub xi_head: f64,
    /// Rightmost speed, `lambda1(star)`.
    pub xi_tail: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Wave {
    Rarefaction(Fan),
    Shock { speed: f64 },
    Contact { speed: f64 },
}

impl Wave {
    /// `(slowest, fastest)` speed of the wave.
    pub fn span(&self) -> (f64, f64) {
        match *self {
            Wave::Rarefaction(f) => (f.xi_head, f.xi_tail),
            Wave::Shock { speed } | Wave::Contact { speed } => (speed, speed),
        }
    }
}

/// Self-similar solution: constant states separated by at most one 1-wave
/// and one contact.
#[derive(Clone, Debug, PartialEq)]
pub struct AwRascleSolution {
    pub params: PressureParams,
    pub left: State,
    pub star: State,
    pub right: State,
    pub waves: Vec<Wave>,
    c_left: f64,
}

impl AwRascleSolution {
    pub fn shock(&self) -> Option<f64> {
        self.waves.iter().find_map(|w| match w {
            Wave::Shock { speed } => Some(*speed),
            _ => None,
        })
    }

    pub fn fan(&self) -> Option<Fan> {
        self.waves.iter().find_map(|w| match w {
            Wave::Rarefaction(f) => Some(*f),
            _ => None,
        })
    }

    pub fn contact(&self) -> Option<f64> {
        self.waves.iter().find_map(|w| match w {
            Wave::Contact { speed } => Some(*speed),
            _ => None,
        })
    }

    /// Density inside the fan at `xi`, inverting `lambda1` along the curve.
    fn fan_density(&self, xi: f64) -> f64 {
        let (p, c) = (&self.params, self.c_left);
        let g = |rho: f64| curve_lambda1(p, c, rho) - xi;
        roots::bisect_decreasing(&g, self.star.rho(), self.left.rho(), 1e-14)
    }
}

impl RiemannSampler for AwRascleSolution {
    fn sample(&self, xi: f64) -> Sample {
        let mut current = self.left;
        for w in &self.waves {
            match *w {
                Wave::Rarefaction(f) => {
                    if xi < f.xi_head {
                        return current.sample();
                    }
                    if xi <= f.xi_tail {
                        let rho = self.fan_density(xi);
                        return Sample {
                            u: curve_u(&self.params, self.c_left, rho),
                            rho,
                        };
                    }
                    current = self.star;
                }
                Wave::Shock { speed } => {
                    if xi < speed {
                        return current.sample();
                    }
                    current = self.star;
                }
                Wave::Contact { speed } => {
                    if xi < speed {
                        return current.sample();
                    }
                    current = self.right;
                }
            }
        }
        current.sample()
    }
}

/// Solve the Riemann problem: `R + J` when `u_+ > u_-`, `S + J` when
/// `u_+ < u_-`, a lone contact when `u_+ = u_-`.
pub fn solve(params: &PressureParams, left: &State, right: &State) -> Result<AwRascleSolution> {
    params.require_pressured("Aw-Rascle")?;
    let c_left = curve_constant(params, left);
    let star = intermediate_state(params, left, right.u())?;
    let mut waves = Vec::with_capacity(2);
    if star.rho() > left.rho() {
        waves.push(Wave::Shock {
            speed: shock_speed(params, left, &star)?,
        });
    } else if star.rho() < left.rho() {
        waves.push(Wave::Rarefaction(Fan {
            xi_head: eigenvalues_original(params, left).lambda1,
            xi_tail: curve_lambda1(params, c_left, star.rho()),
        }));
    }
    if star.rho() != right.rho() {
        waves.push(Wave::Contact { speed: right.u() });
    }
    Ok(AwRascleSolution {
        params: *params,
        left: *left,
        star,
        right: *right,
        waves,
        c_left,
    })
}
