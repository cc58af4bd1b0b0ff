//! Riemann problem for the pressureless transport system
//! `rho_t + (rho u)_x = 0`, `(rho u)_t + (rho u^2)_x = 0`.
//!
//! Diverging data opens a vacuum between two contacts, converging data forms a
//! delta shock. Weights follow the arclength-normalized convention: the mass
//! carried on the line `x = sigma t` at time `t` is
//! `weight_rate * sqrt(1 + sigma^2) * t`.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{RiemannSampler, Sample, State};

/// Tolerance for the special entropy label.
pub const ENTROPY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeltaKind {
    /// The overcompressive delta shock of the transport equations.
    Transport,
    /// The limit of the original system as `A, B -> 0`, located on `x = u_+ t`.
    Special,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaShock {
    pub sigma: f64,
    /// `dw/dt`, with the `1 / sqrt(1 + sigma^2)` arclength factor included.
    pub weight_rate: f64,
    pub left: State,
    pub right: State,
    pub kind: DeltaKind,
}

impl DeltaShock {
    /// Weight `w(t) = weight_rate * t`.
    pub fn weight(&self, t: f64) -> f64 {
        self.weight_rate * t
    }

    /// Mass on the line `x = sigma t` measured along `x`.
    pub fn line_mass(&self, t: f64) -> f64 {
        self.weight(t) * (1.0 + self.sigma * self.sigma).sqrt()
    }
}

impl RiemannSampler for DeltaShock {
    /// Background state; the singular part is not representable pointwise.
    fn sample(&self, xi: f64) -> Sample {
        if xi < self.sigma {
            self.left.sample()
        } else {
            self.right.sample()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TransportSolution {
    Constant(State),
    /// Left and right states separated by a contact at `x = u t`.
    Contact { left: State, right: State },
    /// Contacts at `xi = u_-` and `xi = u_+` with vacuum `(xi, 0)` between.
    Vacuum { left: State, right: State },
    Delta(DeltaShock),
}

impl RiemannSampler for TransportSolution {
    fn sample(&self, xi: f64) -> Sample {
        match self {
            TransportSolution::Constant(s) => s.sample(),
            TransportSolution::Contact { left, right } => {
                if xi < left.u() {
                    left.sample()
                } else {
                    right.sample()
                }
            }
            TransportSolution::Vacuum { left, right } => {
                if xi < left.u() {
                    left.sample()
                } else if xi > right.u() {
                    right.sample()
                } else {
                    Sample { u: xi, rho: 0.0 }
                }
            }
            TransportSolution::Delta(d) => d.sample(xi),
        }
    }
}

pub fn transport_solve(left: &State, right: &State) -> TransportSolution {
    if left == right {
        return TransportSolution::Constant(*left);
    }
    let (ul, ur) = (left.u(), right.u());
    if ul == ur {
        TransportSolution::Contact {
            left: *left,
            right: *right,
        }
    } else if ul < ur {
        TransportSolution::Vacuum {
            left: *left,
            right: *right,
        }
    } else {
        let (sl, sr) = (left.rho().sqrt(), right.rho().sqrt());
        let sigma = (sr * ur + sl * ul) / (sr + sl);
        let weight_rate = sl * sr * (ul - ur) / (1.0 + sigma * sigma).sqrt();
        TransportSolution::Delta(DeltaShock {
            sigma,
            weight_rate,
            left: *left,
            right: *right,
            kind: DeltaKind::Transport,
        })
    }
}

/// Delta shock on `x = u_+ t` with weight rate `rho_- (u_- - u_+) / sqrt(1 + u_+^2)`.
pub fn special_delta(left: &State, right: &State) -> Result<DeltaShock> {
    let (ul, ur) = (left.u(), right.u());
    if ur >= ul {
        return Err(Error::Inapplicable(format!(
            "a special delta shock needs u_+ < u_-, got u_- = {ul}, u_+ = {ur}"
        )));
    }
    Ok(DeltaShock {
        sigma: ur,
        weight_rate: left.rho() * (ul - ur) / (1.0 + ur * ur).sqrt(),
        left: *left,
        right: *right,
        kind: DeltaKind::Special,
    })
}

/// Residuals of the mass and momentum lines of the generalized
/// Rankine-Hugoniot relation, with `w(t) = weight_rate t` and `u_delta = sigma`.
pub fn grh_residual(d: &DeltaShock) -> (f64, f64) {
    let (ul, rl) = (d.left.u(), d.left.rho());
    let (ur, rr) = (d.right.u(), d.right.rho());
    let jump_rho = rr - rl;
    let jump_m = rr * ur - rl * ul;
    let jump_mu = rr * ur * ur - rl * ul * ul;
    let arc = (1.0 + d.sigma * d.sigma).sqrt();
    let r_mass = d.weight_rate * arc - (d.sigma * jump_rho - jump_m);
    let r_mom = d.weight_rate * arc * d.sigma - (d.sigma * jump_m - jump_mu);
    (r_mass, r_mom)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Entropy {
    /// `u_+ < sigma < u_-`.
    Overcompressive,
    /// `sigma = u_+ < u_-`.
    Special,
    Violating,
}

impl fmt::Display for Entropy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Entropy::Overcompressive => "OVERCOMPRESSIVE",
            Entropy::Special => "SPECIAL",
            Entropy::Violating => "VIOLATING",
        })
    }
}

pub fn entropy_check(d: &DeltaShock) -> Entropy {
    let (ul, ur) = (d.left.u(), d.right.u());
    let tol = ENTROPY_TOL * ur.abs().max(1.0);
    if (d.sigma - ur).abs() <= tol && ur < ul {
        Entropy::Special
    } else if ur < d.sigma && d.sigma < ul {
        Entropy::Overcompressive
    } else {
        Entropy::Violating
    }
}
