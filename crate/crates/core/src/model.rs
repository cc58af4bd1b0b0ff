//! Pressure law, primitive and conservative states, and eigenstructure
//! shared by the original, perturbed and pressureless systems.
//!
//! The pressure law is the modified Chaplygin gas `P(rho) = A rho - B / rho^alpha`.
//! The original system transports `rho (u + P)`; the perturbed system
//! replaces that momentum by `rho (u + A rho / 2 - B / ((1 - alpha) rho^alpha))`
//! while keeping the flux `rho u (u + P)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Smallest density accepted by the conversions.
pub const DENSITY_FLOOR: f64 = 1e-300;

/// Which system of conservation laws a set of parameters feeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum System {
    /// `rho_t + (rho u)_x = 0`, `(rho (u + P))_t + (rho u (u + P))_x = 0`.
    Original,
    /// The perturbed model, defined for `0 < alpha < 1` only.
    Perturbed,
    /// Pressureless transport equations (`A = B = 0`).
    Transport,
}

impl System {
    pub fn name(self) -> &'static str {
        match self {
            System::Original => "original",
            System::Perturbed => "perturbed",
            System::Transport => "transport",
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for System {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "original" => Ok(System::Original),
            "perturbed" => Ok(System::Perturbed),
            "transport" => Ok(System::Transport),
            other => Err(Error::InvalidParams(format!("unknown system `{other}`"))),
        }
    }
}

/// The triple `(A, B, alpha)` of the modified Chaplygin pressure, tagged with
/// the system it is meant for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PressureParams {
    a: f64,
    b: f64,
    alpha: f64,
    system: System,
}

impl PressureParams {
    /// Parameters for the original system: `A, B > 0`, `0 < alpha <= 1`.
    pub fn original(a: f64, b: f64, alpha: f64) -> Result<Self> {
        Self::build(System::Original, a, b, alpha, true)
    }

    /// Parameters for the perturbed system: `A, B > 0`, `0 < alpha < 1`.
    pub fn perturbed(a: f64, b: f64, alpha: f64) -> Result<Self> {
        Self::build(System::Perturbed, a, b, alpha, true)
    }

    /// Like [`PressureParams::original`] / [`PressureParams::perturbed`] but
    /// also admits `A = 0` or `B = 0`. Used for limits and closed-form checks;
    /// the pressured solvers still reject `A = B = 0`.
    pub fn relaxed(system: System, a: f64, b: f64, alpha: f64) -> Result<Self> {
        Self::build(system, a, b, alpha, false)
    }

    /// Same system and exponent, new coefficients (strictly positive).
    pub fn with_coefficients(&self, a: f64, b: f64) -> Result<Self> {
        Self::build(self.system, a, b, self.alpha, true)
    }

    fn build(system: System, a: f64, b: f64, alpha: f64, strict: bool) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "alpha must lie in (0, 1], got {alpha}"
            )));
        }
        if system == System::Perturbed && alpha == 1.0 {
            return Err(Error::AlphaOneUnsupported);
        }
        let ok = |x: f64| x.is_finite() && if strict { x > 0.0 } else { x >= 0.0 };
        if !ok(a) || !ok(b) {
            let bound = if strict { "> 0" } else { ">= 0" };
            return Err(Error::InvalidParams(format!(
                "A and B must be finite and {bound}, got A = {a}, B = {b}"
            )));
        }
        Ok(Self { a, b, alpha, system })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn system(&self) -> System {
        self.system
    }

    /// `true` unless this is the pressureless point `A = B = 0`.
    pub fn is_pressured(&self) -> bool {
        self.a > 0.0 || self.b > 0.0
    }

    pub(crate) fn require_pressured(&self, solver: &'static str) -> Result<()> {
        if self.is_pressured() {
            Ok(())
        } else {
            Err(Error::PressurelessParams(solver))
        }
    }

    pub(crate) fn require_perturbed_alpha(&self) -> Result<()> {
        if self.alpha < 1.0 {
            Ok(())
        } else {
            Err(Error::AlphaOneUnsupported)
        }
    }

    /// `P(rho)` without the domain check.
    #[inline]
    pub(crate) fn p(&self, rho: f64) -> f64 {
        self.a * rho - self.b * rho.powf(-self.alpha)
    }

    /// `rho P'(rho) = A rho + B alpha / rho^alpha`.
    #[inline]
    pub(crate) fn rho_dp(&self, rho: f64) -> f64 {
        self.a * rho + self.b * self.alpha * rho.powf(-self.alpha)
    }

    /// Velocity offset added to `u` inside the transported momentum.
    #[inline]
    pub(crate) fn offset(&self, system: System, rho: f64) -> f64 {
        match system {
            System::Original => self.p(rho),
            System::Perturbed => {
                0.5 * self.a * rho - self.b * rho.powf(-self.alpha) / (1.0 - self.alpha)
            }
            System::Transport => 0.0,
        }
    }
}

/// A point `(u, rho)` of the phase plane with `u > 0`, `rho > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct State {
    u: f64,
    rho: f64,
}

impl State {
    pub fn new(u: f64, rho: f64) -> Result<Self> {
        if u.is_finite() && rho.is_finite() && u > 0.0 && rho > 0.0 {
            Ok(Self { u, rho })
        } else {
            Err(Error::InvalidState { u, rho })
        }
    }

    /// Internal constructor for states produced by the solvers, whose
    /// velocity may legitimately leave the positive quadrant on extended
    /// curve branches.
    pub(crate) fn raw(u: f64, rho: f64) -> Self {
        Self { u, rho }
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn sample(&self) -> Sample {
        Sample {
            u: self.u,
            rho: self.rho,
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(u = {}, rho = {})", self.u, self.rho)
    }
}

/// Value of a Riemann solution at one self-similar coordinate. Unlike
/// [`State`], the density may be zero (vacuum).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub u: f64,
    pub rho: f64,
}

/// Anything that can be evaluated along `xi = x / t`.
pub trait RiemannSampler {
    fn sample(&self, xi: f64) -> Sample;
}

impl RiemannSampler for State {
    fn sample(&self, _xi: f64) -> Sample {
        State::sample(self)
    }
}

/// Conservative variables `(rho, generalized momentum)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Conserved {
    pub q1: f64,
    pub q2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveSpeedPair {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl WaveSpeedPair {
    pub fn gap(&self) -> f64 {
        self.lambda2 - self.lambda1
    }

    pub fn max_abs(&self) -> f64 {
        self.lambda1.abs().max(self.lambda2.abs())
    }
}

/// `P(rho) = A rho - B / rho^alpha`.
pub fn pressure(params: &PressureParams, rho: f64) -> Result<f64> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::DegenerateDensity(rho));
    }
    Ok(params.p(rho))
}

/// `lambda1 = u - A rho - B alpha / rho^alpha`, `lambda2 = u`.
pub fn eigenvalues_original(params: &PressureParams, s: &State) -> WaveSpeedPair {
    WaveSpeedPair {
        lambda1: s.u - params.rho_dp(s.rho),
        lambda2: s.u,
    }
}

/// `u -/+ sqrt(u (A rho + B alpha / rho^alpha))`.
pub fn eigenvalues_perturbed(params: &PressureParams, s: &State) -> Result<WaveSpeedPair> {
    params.require_perturbed_alpha()?;
    Ok(perturbed_speeds(params, s.u, s.rho))
}

#[inline]
pub(crate) fn perturbed_speeds(params: &PressureParams, u: f64, rho: f64) -> WaveSpeedPair {
    let c = (u.max(0.0) * params.rho_dp(rho)).sqrt();
    WaveSpeedPair {
        lambda1: u - c,
        lambda2: u + c,
    }
}

/// `grad(lambda1) . r1 = -2A - (1 - alpha) B alpha / rho^(1 + alpha)`.
pub fn genuine_nonlinearity_original(params: &PressureParams, s: &State) -> f64 {
    let (a, b, al) = (params.a, params.b, params.alpha);
    -2.0 * a - (1.0 - al) * b * al * s.rho.powf(-1.0 - al)
}

/// Signed gap `(3 A rho + (2 - alpha) B alpha / rho^alpha) sqrt(u) - (A rho + B alpha / rho^alpha)^(3/2)`.
/// Genuine nonlinearity of the perturbed system fails where it vanishes.
pub fn perturbed_degeneracy_gap(params: &PressureParams, s: &State) -> f64 {
    let (a, b, al) = (params.a, params.b, params.alpha);
    let k = params.rho_dp(s.rho);
    (3.0 * a * s.rho + b * al * s.rho.powf(-al) * (2.0 - al)) * s.u.sqrt() - k.powf(1.5)
}

/// Physical flux `(rho u, rho u (u + P))`; the transport system drops `P`.
#[inline]
pub fn flux(system: System, params: &PressureParams, u: f64, rho: f64) -> (f64, f64) {
    let m = rho * u;
    match system {
        System::Transport => (m, m * u),
        System::Original | System::Perturbed => {
            if rho == 0.0 {
                (0.0, 0.0)
            } else {
                (m, m * (u + params.p(rho)))
            }
        }
    }
}

/// Generalized momentum of a primitive pair, vacuum-safe.
#[inline]
pub(crate) fn momentum(system: System, params: &PressureParams, u: f64, rho: f64) -> f64 {
    if rho == 0.0 {
        return 0.0;
    }
    match system {
        System::Original => rho * u + params.a * rho * rho - params.b * rho.powf(1.0 - params.alpha),
        System::Perturbed => {
            rho * u + 0.5 * params.a * rho * rho
                - params.b * rho.powf(1.0 - params.alpha) / (1.0 - params.alpha)
        }
        System::Transport => rho * u,
    }
}

pub fn to_conserved(system: System, params: &PressureParams, s: &State) -> Result<Conserved> {
    if system == System::Perturbed {
        params.require_perturbed_alpha()?;
    }
    if !(s.rho >= DENSITY_FLOOR && s.rho.is_finite()) {
        return Err(Error::DegenerateDensity(s.rho));
    }
    Ok(Conserved {
        q1: s.rho,
        q2: s.rho * (s.u + params.offset(system, s.rho)),
    })
}

/// Inverse of [`to_conserved`]: `u = q2 / q1 - offset(q1)`.
pub fn from_conserved(system: System, params: &PressureParams, q: &Conserved) -> Result<State> {
    if system == System::Perturbed {
        params.require_perturbed_alpha()?;
    }
    if !(q.q1 >= DENSITY_FLOOR && q.q1.is_finite()) {
        return Err(Error::DegenerateDensity(q.q1));
    }
    let u = q.q2 / q.q1 - params.offset(system, q.q1);
    State::new(u, q.q1)
}
