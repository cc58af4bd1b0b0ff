//! First-order finite-volume simulator (global Lax-Friedrichs) for the
//! conservative forms of the three systems, started from Riemann data at
//! `x = 0`.

use crate::error::{Error, Result};
use crate::model::{flux, PressureParams, RiemannSampler, State, System};

/// Densities below this are raised to it and the event is counted.
pub const DENSITY_FLOOR: f64 = 1e-12;

/// Below this density the velocity is taken from the vacuum profile `u = x / t`.
pub const VACUUM_DENSITY: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Boundary {
    /// Zeroth-order extrapolation.
    #[default]
    Outflow,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub cells: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub boundary: Boundary,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            x_min: -1.0,
            x_max: 2.0,
            cells: 400,
            cfl: 0.9,
            t_end: 0.5,
            boundary: Boundary::Outflow,
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        if self.cells < 16 {
            return Err(Error::InvalidGrid(format!("need at least 16 cells, got {}", self.cells)));
        }
        if !(self.cfl > 0.0 && self.cfl <= 0.9) {
            return Err(Error::InvalidGrid(format!("CFL number {} outside (0, 0.9]", self.cfl)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidGrid(format!("end time {} must be positive", self.t_end)));
        }
        if !(self.x_min < 0.0 && 0.0 < self.x_max && self.x_max.is_finite() && self.x_min.is_finite())
        {
            return Err(Error::InvalidGrid(format!(
                "domain [{}, {}] must contain the initial jump at x = 0",
                self.x_min, self.x_max
            )));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.cells as f64
    }

    pub fn centers(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.cells)
            .map(|i| self.x_min + (i as f64 + 0.5) * dx)
            .collect()
    }
}

/// Cell averages and derived primitives at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldSnapshot {
    pub t: f64,
    pub x: Vec<f64>,
    pub q1: Vec<f64>,
    pub q2: Vec<f64>,
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    /// `sum(q1) dx`.
    pub mass: f64,
    /// Net mass that entered through the boundaries up to `t`.
    pub boundary_inflow: f64,
}

impl FieldSnapshot {
    pub fn dx(&self) -> f64 {
        if self.x.len() < 2 {
            return 0.0;
        }
        self.x[1] - self.x[0]
    }

    /// Index of the densest cell.
    pub fn peak(&self) -> usize {
        self.rho
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map_or(0, |(i, _)| i)
    }

    pub fn min_density(&self) -> f64 {
        self.rho.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Simulation {
    pub snapshots: Vec<FieldSnapshot>,
    pub steps: usize,
    /// Largest `dt max|lambda| / dx` used.
    pub max_cfl: f64,
    /// Number of cell updates that hit [`DENSITY_FLOOR`].
    pub floor_events: usize,
    /// Mass added by the floor.
    pub floor_mass: f64,
    /// Worst `|M(t) - M(0) - inflow - floor_mass| / max(M(0), 1)` over all steps.
    pub mass_defect: f64,
}

impl Simulation {
    pub fn floor_triggered(&self) -> bool {
        self.floor_events > 0
    }
}

struct Solver<'a> {
    system: System,
    params: &'a PressureParams,
}

impl Solver<'_> {
    fn offset(&self, rho: f64) -> f64 {
        self.params.offset(self.system, rho)
    }

    fn primitive(&self, q1: f64, q2: f64, x: f64, t: f64) -> (f64, f64) {
        if q1 < VACUUM_DENSITY && t > 0.0 {
            return (x / t, q1);
        }
        (q2 / q1 - self.offset(q1), q1)
    }

    fn max_speed(&self, u: f64, rho: f64) -> f64 {
        let k = self.params.rho_dp(rho);
        match self.system {
            System::Original => (u - k).abs().max(u.abs()),
            System::Perturbed => {
                let c = (u.abs() * k).sqrt();
                (u - c).abs().max((u + c).abs())
            }
            System::Transport => u.abs(),
        }
    }
}

/// Run the scheme to `grid.t_end`, recording a snapshot at every requested
/// time in `[0, t_end]` (sorted, duplicates dropped). `t_end` is always recorded.
pub fn simulate(
    system: System,
    params: &PressureParams,
    left: &State,
    right: &State,
    grid: &GridConfig,
    snapshot_times: &[f64],
) -> Result<Simulation> {
    grid.validate()?;
    if system == System::Perturbed {
        params.require_perturbed_alpha()?;
    }
    let mut times: Vec<f64> = snapshot_times
        .iter()
        .copied()
        .filter(|&t| (0.0..=grid.t_end).contains(&t))
        .collect();
    times.push(grid.t_end);
    times.sort_by(f64::total_cmp);
    times.dedup();

    let solver = Solver { system, params };
    let n = grid.cells;
    let dx = grid.dx();
    let x = grid.centers();
    let init = |s: &State| (s.rho(), s.rho() * (s.u() + solver.offset(s.rho())));
    let (l1, l2) = init(left);
    let (r1, r2) = init(right);
    let mut q1: Vec<f64> = x.iter().map(|&xi| if xi < 0.0 { l1 } else { r1 }).collect();
    let mut q2: Vec<f64> = x.iter().map(|&xi| if xi < 0.0 { l2 } else { r2 }).collect();
    let mut u = vec![0.0; n];
    let mut rho = vec![0.0; n];
    let mut f1 = vec![0.0; n];
    let mut f2 = vec![0.0; n];
    let mut g1 = vec![0.0; n + 1];
    let mut g2 = vec![0.0; n + 1];

    let m0: f64 = q1.iter().sum::<f64>() * dx;
    let mut inflow = 0.0;
    let mut sim = Simulation {
        snapshots: Vec::with_capacity(times.len()),
        steps: 0,
        max_cfl: 0.0,
        floor_events: 0,
        floor_mass: 0.0,
        mass_defect: 0.0,
    };
    let mut t = 0.0;
    let mut next = 0;

    loop {
        let mut smax: f64 = 0.0;
        for i in 0..n {
            let (ui, ri) = solver.primitive(q1[i], q2[i], x[i], t);
            u[i] = ui;
            rho[i] = ri;
            let (a, b) = flux(system, params, ui, ri);
            f1[i] = a;
            f2[i] = b;
            smax = smax.max(solver.max_speed(ui, ri));
        }
        while next < times.len() && times[next] <= t {
            let mass = q1.iter().sum::<f64>() * dx;
            sim.snapshots.push(FieldSnapshot {
                t,
                x: x.clone(),
                q1: q1.clone(),
                q2: q2.clone(),
                rho: rho.clone(),
                u: u.clone(),
                mass,
                boundary_inflow: inflow,
            });
            next += 1;
        }
        if next >= times.len() {
            break;
        }
        if !smax.is_finite() {
            return Err(Error::CflViolation { t, max_speed: smax });
        }
        let mut dt = if smax > 0.0 { grid.cfl * dx / smax } else { times[next] - t };
        dt = dt.min(times[next] - t);
        let used = dt * smax / dx;
        if used > grid.cfl * (1.0 + 1e-12) {
            return Err(Error::CflViolation { t, max_speed: smax });
        }
        sim.max_cfl = sim.max_cfl.max(used);

        let lam = dx / dt;
        // interface i sits between cell i - 1 and cell i; ghosts copy the edge cells
        for k in 0..=n {
            let (a, b) = (k.saturating_sub(1), k.min(n - 1));
            g1[k] = 0.5 * (f1[a] + f1[b]) - 0.5 * lam * (q1[b] - q1[a]);
            g2[k] = 0.5 * (f2[a] + f2[b]) - 0.5 * lam * (q2[b] - q2[a]);
        }
        // with identical ghost states the dissipative term vanishes at the ends
        g1[0] = f1[0];
        g2[0] = f2[0];
        g1[n] = f1[n - 1];
        g2[n] = f2[n - 1];
        let r = dt / dx;
        for i in 0..n {
            q1[i] -= r * (g1[i + 1] - g1[i]);
            q2[i] -= r * (g2[i + 1] - g2[i]);
            if q1[i] < DENSITY_FLOOR {
                sim.floor_events += 1;
                let add = DENSITY_FLOOR - q1[i];
                sim.floor_mass += add * dx;
                // keep the velocity of the vacuum profile
                let xi = x[i] / (t + dt);
                q1[i] = DENSITY_FLOOR;
                q2[i] = DENSITY_FLOOR * (xi + solver.offset(DENSITY_FLOOR));
            }
        }
        inflow += dt * (g1[0] - g1[n]);
        t += dt;
        if times[next] - t <= 1e-14 * times[next].max(1.0) {
            t = times[next];
        }
        sim.steps += 1;
        let mass = q1.iter().sum::<f64>() * dx;
        let defect = (mass - m0 - inflow - sim.floor_mass).abs() / m0.max(1.0);
        sim.mass_defect = sim.mass_defect.max(defect);
    }
    if sim.floor_triggered() {
        log::warn!(
            "density floor {DENSITY_FLOOR:e} triggered {} times (added mass {:e})",
            sim.floor_events,
            sim.floor_mass
        );
    }
    Ok(sim)
}

/// Mass concentrated around the density peak, after removing the step
/// background `rho_-` / `rho_+` split at the peak.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaEstimate {
    pub mass: f64,
    pub peak_x: f64,
    pub peak_rho: f64,
    pub half_width: f64,
}

/// Default window half-width: 20 cells or 5% of the domain, whichever is larger.
pub fn default_half_width(snapshot: &FieldSnapshot) -> f64 {
    let dx = snapshot.dx();
    let span = snapshot.x.len() as f64 * dx;
    (20.0 * dx).max(0.05 * span)
}

pub fn delta_weight_estimate(
    snapshot: &FieldSnapshot,
    left: &State,
    right: &State,
    half_width: Option<f64>,
) -> Result<DeltaEstimate> {
    let hw = half_width.unwrap_or_else(|| default_half_width(snapshot));
    if snapshot.t == 0.0 {
        return Ok(DeltaEstimate {
            mass: 0.0,
            peak_x: 0.0,
            peak_rho: left.rho().max(right.rho()),
            half_width: hw,
        });
    }
    let ip = snapshot.peak();
    let (xp, rp) = (snapshot.x[ip], snapshot.rho[ip]);
    let background = left.rho().max(right.rho());
    if rp < 2.0 * background {
        return Err(Error::Inapplicable(format!(
            "peak density {rp} is below twice the background {background}"
        )));
    }
    let dx = snapshot.dx();
    let mass = snapshot
        .x
        .iter()
        .zip(&snapshot.rho)
        .filter(|(&x, _)| (x - xp).abs() <= hw)
        .map(|(&x, &r)| r - if x < xp { left.rho() } else { right.rho() })
        .sum::<f64>()
        * dx;
    Ok(DeltaEstimate {
        mass,
        peak_x: xp,
        peak_rho: rp,
        half_width: hw,
    })
}

/// `sum |rho - rho_exact| dx + sum |rho u - (rho u)_exact| dx`.
pub fn l1_error_vs_exact<S: RiemannSampler + ?Sized>(snapshot: &FieldSnapshot, exact: &S) -> f64 {
    let dx = snapshot.dx();
    let t = snapshot.t;
    let mut err = 0.0;
    for i in 0..snapshot.x.len() {
        let x = snapshot.x[i];
        let xi = if t > 0.0 {
            x / t
        } else if x < 0.0 {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
        let e = exact.sample(xi);
        let (r, u) = (snapshot.rho[i], snapshot.u[i]);
        err += (r - e.rho).abs() + (r * u - e.rho * e.u).abs();
    }
    err * dx
}
