use std::fs;
use std::path::Path;

use awrlab_core::awrascle::{self, AwRascleSolution};
use awrlab_core::perturbed::{self, PerturbedSolution};
use awrlab_core::sweep::{self, SweepReport, SweepTolerances, Verdict};
use awrlab_core::transport::{self, TransportSolution};
use awrlab_core::{fv, weak, Bump, PressureParams, RiemannSampler, State, System};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{CommandKind, ExperimentConfig};
use crate::output::{emit_csv, emit_svg_plot, Plot, Series};
use crate::CliError;

/// Weak-form residual bound for the exact solution.
const WEAK_TOL: f64 = 1e-8;
/// Relative mass balance bound for the scheme.
const MASS_TOL: f64 = 1e-10;
/// Generalized jump residual bound for transport delta shocks.
const GRH_TOL: f64 = 1e-12;

/// Whether every verdict the command produced passed.
pub struct Outcome {
    pub passed: bool,
}

impl Outcome {
    fn from_verdicts(v: &[Verdict]) -> Self {
        Self { passed: v.iter().all(|v| v.passed) }
    }

    fn ok() -> Self {
        Self { passed: true }
    }
}

pub fn dispatch(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    match cfg.command {
        CommandKind::Solve => solve(cfg),
        CommandKind::Classify => classify(cfg),
        CommandKind::Sweep => sweep_cmd(cfg),
        CommandKind::Simulate => simulate(cfg),
        CommandKind::Weakcheck => weakcheck(cfg),
        CommandKind::Delta => delta(cfg),
    }
}

fn out_dir(cfg: &ExperimentConfig) -> Result<&Path, CliError> {
    fs::create_dir_all(&cfg.out).map_err(|e| CliError::Io(cfg.out.clone(), e))?;
    Ok(&cfg.out)
}

pub fn print_verdicts(verdicts: &[Verdict]) {
    if verdicts.is_empty() {
        return;
    }
    let w = verdicts.iter().map(|v| v.claim.len()).max().unwrap_or(5).max(5);
    println!("{:<w$}  {:>14}  {:>14}  {:>10}  result", "claim", "target", "achieved", "tolerance");
    for v in verdicts {
        println!(
            "{:<w$}  {:>14.6e}  {:>14.6e}  {:>10.1e}  {}",
            v.claim,
            v.target,
            v.achieved,
            v.tolerance,
            if v.passed { "PASS" } else { "FAIL" }
        );
    }
}

enum Exact {
    Original(AwRascleSolution),
    Perturbed(PerturbedSolution),
    Transport(TransportSolution),
}

impl Exact {
    fn solve(cfg: &ExperimentConfig) -> Result<Self, CliError> {
        Ok(match cfg.system {
            System::Original => Exact::Original(awrascle::solve(&cfg.params()?, &cfg.left, &cfg.right)?),
            System::Perturbed => {
                Exact::Perturbed(perturbed::solve_perturbed(&cfg.params()?, &cfg.left, &cfg.right)?)
            }
            System::Transport => Exact::Transport(transport::transport_solve(&cfg.left, &cfg.right)),
        })
    }

    fn sampler(&self) -> &dyn RiemannSampler {
        match self {
            Exact::Original(s) => s,
            Exact::Perturbed(s) => s,
            Exact::Transport(s) => s,
        }
    }

    /// Speeds where the solution may be non-smooth, in increasing order.
    fn breakpoints(&self) -> Vec<f64> {
        let mut v = match self {
            Exact::Original(s) => s
                .waves
                .iter()
                .flat_map(|w| {
                    let (a, b) = w.span();
                    [a, b]
                })
                .collect(),
            Exact::Perturbed(s) => s.breakpoints(),
            Exact::Transport(s) => match s {
                TransportSolution::Constant(_) => Vec::new(),
                TransportSolution::Contact { left, .. } => vec![left.u()],
                TransportSolution::Vacuum { left, right } => vec![left.u(), right.u()],
                TransportSolution::Delta(d) => vec![d.sigma],
            },
        };
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    fn describe(&self) -> Vec<String> {
        match self {
            Exact::Original(s) => {
                let mut lines = vec![format!("region {}", awrascle::classify(&s.params, &s.left, &s.right))];
                lines.push(format!("intermediate state {}", s.star));
                for w in &s.waves {
                    lines.push(match w {
                        awrascle::Wave::Shock { speed } => format!("1-shock at xi = {speed:.12}"),
                        awrascle::Wave::Rarefaction(f) => {
                            format!("1-rarefaction on [{:.12}, {:.12}]", f.xi_head, f.xi_tail)
                        }
                        awrascle::Wave::Contact { speed } => format!("2-contact at xi = {speed:.12}"),
                    });
                }
                lines
            }
            Exact::Perturbed(s) => {
                let mut lines = vec![
                    format!("region {}", s.region()),
                    format!("intermediate state {}", s.star),
                ];
                for (k, w) in s.waves.iter().enumerate() {
                    let family = k + 1;
                    lines.push(match w {
                        perturbed::Wave::Shock { speed } => format!("{family}-shock at xi = {speed:.12}"),
                        perturbed::Wave::Rarefaction(f) => {
                            format!("{family}-rarefaction on [{:.12}, {:.12}]", f.xi_head, f.xi_tail)
                        }
                        perturbed::Wave::Null { speed } => format!("{family}-wave of zero strength at xi = {speed:.12}"),
                    });
                }
                lines
            }
            Exact::Transport(s) => vec![transport_label(s)],
        }
    }
}

fn transport_label(s: &TransportSolution) -> String {
    match s {
        TransportSolution::Constant(c) => format!("constant state {c}"),
        TransportSolution::Contact { left, .. } => format!("contact at xi = {}", left.u()),
        TransportSolution::Vacuum { left, right } => {
            format!("vacuum between contacts at xi = {} and xi = {}", left.u(), right.u())
        }
        TransportSolution::Delta(d) => format!("delta shock at xi = {:.12}, weight rate {:.12}", d.sigma, d.weight_rate),
    }
}

fn solve(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let exact = Exact::solve(cfg)?;
    for line in exact.describe() {
        println!("{line}");
    }
    let breaks = exact.breakpoints();
    let (lo, hi) = match (breaks.first(), breaks.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => (cfg.left.u(), cfg.left.u()),
    };
    let margin = (0.25 * (hi - lo)).max(0.5);
    let (a, b) = (lo - margin, hi + margin);
    let n = cfg.samples;
    let sampler = exact.sampler();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let xi = a + (b - a) * i as f64 / (n - 1) as f64;
            let s = sampler.sample(xi);
            vec![xi, s.u, s.rho]
        })
        .collect();
    let dir = out_dir(cfg)?;
    emit_csv(&dir.join("profile.csv"), &["xi", "u", "rho"], &rows)?;
    let field = |k: usize| rows.iter().map(|r| (r[0], r[k])).collect::<Vec<_>>();
    let title = format!("{} system, A = {}, B = {}, alpha = {}", cfg.system, cfg.a, cfg.b, cfg.alpha);
    emit_svg_plot(
        &dir.join("profile_u.svg"),
        &Plot { title: title.clone(), x_label: "xi = x/t".into(), y_label: "u".into(), ..Default::default() },
        &[Series::new("u", field(1))],
    )?;
    emit_svg_plot(
        &dir.join("profile_rho.svg"),
        &Plot {
            title,
            x_label: "xi = x/t".into(),
            y_label: "rho".into(),
            log_y: cfg.log_density,
            ..Default::default()
        },
        &[Series::new("rho", field(2))],
    )?;
    println!("wrote {} samples to {}", n, dir.join("profile.csv").display());
    Ok(Outcome::ok())
}

fn classify(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    match cfg.system {
        System::Original => {
            let p = cfg.params()?;
            println!("region {}", awrascle::classify(&p, &cfg.left, &cfg.right));
            match awrascle::threshold_a0(&cfg.left, &cfg.right, cfg.alpha) {
                Ok(a0) => println!("threshold A0 = {a0:.16e}"),
                Err(e) => println!("threshold A0: {e}"),
            }
        }
        System::Perturbed => {
            let p = cfg.params()?;
            println!("region {}", perturbed::classify_perturbed(&p, &cfg.left, &cfg.right)?);
        }
        System::Transport => println!("{}", transport_label(&transport::transport_solve(&cfg.left, &cfg.right))),
    }
    Ok(Outcome::ok())
}

fn sweep_cmd(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let schedule = cfg.schedule.as_ref().expect("sweep always has a schedule");
    let tol = SweepTolerances::default();
    let report = match cfg.system {
        System::Original => sweep::sweep_original(&cfg.left, &cfg.right, cfg.alpha, schedule, &tol)?,
        System::Perturbed => sweep::sweep_perturbed(&cfg.left, &cfg.right, cfg.alpha, schedule, &tol)?,
        System::Transport => {
            return Err(CliError::Validation(
                "system: sweep needs a pressured system (original or perturbed)".into(),
            ))
        }
    };
    let dir = out_dir(cfg)?;
    write_sweep(dir, &report)?;
    if let Some(a0) = report.threshold {
        println!("threshold A0 = {a0:.16e}");
    }
    if let Some(r) = report.last() {
        println!(
            "last point A = {:e}, B = {:e}: rho* = {:.6e}, u* = {:.12}, region {}",
            r.a, r.b, r.rho_star, r.u_star, r.region
        );
    }
    print_verdicts(&report.verdicts);
    println!("wrote {} records to {}", report.records.len(), dir.join("sweep.csv").display());
    Ok(Outcome::from_verdicts(&report.verdicts))
}

fn write_sweep(dir: &Path, report: &SweepReport) -> Result<(), CliError> {
    let rows: Vec<Vec<f64>> = report
        .records
        .iter()
        .map(|r| vec![r.a, r.b, r.rho_star, r.u_star, r.sigma1, r.sigma2, r.product, r.a_rho_star])
        .collect();
    emit_csv(
        &dir.join("sweep.csv"),
        &["A", "B", "rho_star", "u_star", "sigma1", "sigma2", "product", "A_rho_star"],
        &rows,
    )?;
    let col = |k: usize| rows.iter().map(|r| (r[0], r[k])).collect::<Vec<_>>();
    let title = format!("{} system sweep, left {}, right {}", report.system, report.left, report.right);
    emit_svg_plot(
        &dir.join("sweep_density.svg"),
        &Plot { title: title.clone(), x_label: "A".into(), y_label: "rho*".into(), log_x: true, log_y: true },
        &[Series::new("rho*", col(2)), Series::new("A rho*", col(7))],
    )?;
    emit_svg_plot(
        &dir.join("sweep_speeds.svg"),
        &Plot { title, x_label: "A".into(), y_label: "speed".into(), log_x: true, log_y: false },
        &[Series::new("sigma1", col(4)), Series::new("sigma2", col(5)), Series::new("u*", col(3))],
    )
}

fn exact_for_simulation(cfg: &ExperimentConfig) -> Option<Exact> {
    match Exact::solve(cfg) {
        Ok(e) => Some(e),
        Err(e) => {
            log::warn!("no exact solution for comparison: {e}");
            None
        }
    }
}

fn simulate(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let p = match cfg.system {
        System::Transport => PressureParams::relaxed(System::Transport, 0.0, 0.0, cfg.alpha)?,
        _ => cfg.params()?,
    };
    let t_end = cfg.grid.t_end;
    let times: Vec<f64> = (1..=cfg.snapshots)
        .map(|i| t_end * i as f64 / cfg.snapshots as f64)
        .collect();
    let sim = fv::simulate(cfg.system, &p, &cfg.left, &cfg.right, &cfg.grid, &times)?;
    let dir = out_dir(cfg)?;
    let mut rho_series = Vec::new();
    let mut u_series = Vec::new();
    for (i, s) in sim.snapshots.iter().enumerate() {
        let rows: Vec<Vec<f64>> = (0..s.x.len())
            .map(|j| vec![s.x[j], s.rho[j], s.u[j], s.q1[j], s.q2[j], s.t])
            .collect();
        emit_csv(&dir.join(format!("snapshot_{i:03}.csv")), &["x", "rho", "u", "q1", "q2", "t"], &rows)?;
        let label = format!("t = {:.4}", s.t);
        rho_series.push(Series::new(label.clone(), s.x.iter().copied().zip(s.rho.iter().copied()).collect()));
        u_series.push(Series::new(label, s.x.iter().copied().zip(s.u.iter().copied()).collect()));
    }
    let title = format!("{} system, N = {}, A = {}, B = {}", cfg.system, cfg.grid.cells, cfg.a, cfg.b);
    emit_svg_plot(
        &dir.join("rho.svg"),
        &Plot {
            title: title.clone(),
            x_label: "x".into(),
            y_label: "rho".into(),
            log_y: cfg.log_density,
            ..Default::default()
        },
        &rho_series,
    )?;
    emit_svg_plot(
        &dir.join("u.svg"),
        &Plot { title, x_label: "x".into(), y_label: "u".into(), ..Default::default() },
        &u_series,
    )?;

    println!(
        "{} steps, max CFL {:.4}, {} snapshots written to {}",
        sim.steps,
        sim.max_cfl,
        sim.snapshots.len(),
        dir.display()
    );
    if sim.floor_triggered() {
        println!("density floor hit {} times, adding mass {:.3e}", sim.floor_events, sim.floor_mass);
    }
    let last = sim.snapshots.last().expect("t_end is always recorded");
    println!("min density {:.3e}", last.min_density());
    if let Some(exact) = exact_for_simulation(cfg) {
        println!("L1 error vs exact at t = {}: {:.6e}", last.t, fv::l1_error_vs_exact(last, exact.sampler()));
    }
    match fv::delta_weight_estimate(last, &cfg.left, &cfg.right, None) {
        Ok(w) => println!(
            "concentration: mass {:.6e} at x = {:.6} (peak rho {:.4e}, half-width {:.4})",
            w.mass, w.peak_x, w.peak_rho, w.half_width
        ),
        Err(e) => println!("concentration: {e}"),
    }
    let verdicts = [Verdict::new("mass_conservation", 0.0, sim.mass_defect, MASS_TOL)];
    print_verdicts(&verdicts);
    Ok(Outcome::from_verdicts(&verdicts))
}

/// Copy of `exact` with the intermediate density scaled by `factor`.
fn off_state(exact: &Exact, factor: f64) -> Result<Exact, CliError> {
    let scale = |s: &State| State::new(s.u(), s.rho() * factor);
    Ok(match exact {
        Exact::Original(s) => {
            let mut c = s.clone();
            c.star = scale(&s.star)?;
            Exact::Original(c)
        }
        Exact::Perturbed(s) => {
            let mut c = s.clone();
            c.star = scale(&s.star)?;
            Exact::Perturbed(c)
        }
        Exact::Transport(_) => unreachable!("weakcheck rejects the transport system"),
    })
}

fn weak_residual(cfg: &ExperimentConfig, exact: &Exact, bump: &Bump) -> Result<(f64, f64), CliError> {
    let p = cfg.params()?;
    Ok(weak::residual(cfg.system, &p, exact.sampler(), &exact.breakpoints(), bump))
}

fn weakcheck(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    if cfg.system == System::Transport {
        return Err(CliError::Validation(
            "system: weakcheck needs a pressured system (original or perturbed)".into(),
        ));
    }
    let exact = Exact::solve(cfg)?;
    let breaks = exact.breakpoints();
    let (lo, hi) = (breaks[0], breaks[breaks.len() - 1]);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let bumps: Vec<Bump> = (0..cfg.bumps)
        .map(|_| {
            let width = rng.gen_range(0.2..1.0);
            Bump::new(rng.gen_range(lo - 0.5..=hi + 0.5), width)
        })
        .collect();
    let wrong = off_state(&exact, 1.01)?;

    let mut rows = Vec::with_capacity(bumps.len());
    let mut verdicts = Vec::with_capacity(2 * bumps.len());
    let mut sensitivity = 0.0f64;
    for (i, b) in bumps.iter().enumerate() {
        let (r1, r2) = weak_residual(cfg, &exact, b)?;
        let (w1, _) = weak_residual(cfg, &wrong, b)?;
        sensitivity = sensitivity.max(w1.abs());
        verdicts.push(Verdict::new(format!("weak_mass_{i}"), 0.0, r1.abs(), WEAK_TOL));
        verdicts.push(Verdict::new(format!("weak_momentum_{i}"), 0.0, r2.abs(), WEAK_TOL));
        rows.push(vec![b.center, b.width, r1, r2, w1]);
    }
    let dir = out_dir(cfg)?;
    emit_csv(&dir.join("weak.csv"), &["center", "width", "r1", "r2", "r1_off_state"], &rows)?;
    for line in exact.describe() {
        println!("{line}");
    }
    print_verdicts(&verdicts);
    println!("with rho* scaled by 1.01: max |r1| = {sensitivity:.3e}");
    Ok(Outcome::from_verdicts(&verdicts))
}

fn delta(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let (l, r) = (&cfg.left, &cfg.right);
    let sol = transport::transport_solve(l, r);
    println!("{}", transport_label(&sol));
    let TransportSolution::Delta(d) = sol else {
        return Ok(Outcome::ok());
    };
    let t = cfg.grid.t_end;
    println!("entropy: {}", transport::entropy_check(&d));
    println!("weight at t = {t}: {:.16e}", d.weight(t));
    let (m, q) = transport::grh_residual(&d);
    let mut verdicts = vec![
        Verdict::new("jump_mass", 0.0, m.abs(), GRH_TOL),
        Verdict::new("jump_momentum", 0.0, q.abs(), GRH_TOL),
    ];
    let special = transport::special_delta(l, r)?;
    let (_, sq) = transport::grh_residual(&special);
    println!("special delta at xi = {:.12}: momentum residual {:.6e}", special.sigma, sq);

    if cfg.system == System::Perturbed && cfg.a > 0.0 && cfg.b > 0.0 {
        let c = sweep::limit_delta_consistency(l, r, cfg.alpha, cfg.a, cfg.b)?;
        println!(
            "two-shock solution at A = {}, B = {}: mean speed {:.12}, mass proxy {:.12} (limit {:.12})",
            cfg.a, cfg.b, c.sigma_bar, c.mass_proxy, c.mass_target
        );
        verdicts.push(Verdict::new(
            "mass_weight_proxy",
            c.mass_target,
            c.mass_proxy,
            SweepTolerances::default().perturbed_weight * c.mass_target,
        ));
    }
    print_verdicts(&verdicts);
    Ok(Outcome::from_verdicts(&verdicts))
}
