mod common;

use awrlab_core::fv::{self, GridConfig, Simulation};
use awrlab_core::*;
use common::*;

fn run(system: System, k: f64, l: State, r: State, cells: usize) -> Simulation {
    let p = PressureParams::relaxed(system, k, k, 0.5).unwrap();
    let g = GridConfig { cells, t_end: 0.5, ..Default::default() };
    fv::simulate(system, &p, &l, &r, &g, &[0.25]).unwrap()
}

fn exact_l1(system: System, k: f64, l: State, r: State, cells: usize) -> f64 {
    let p = PressureParams::relaxed(system, k, k, 0.5).unwrap();
    let sim = run(system, k, l, r, cells);
    assert!(sim.mass_defect < 1e-10);
    let snap = sim.snapshots.last().unwrap();
    match system {
        System::Original => fv::l1_error_vs_exact(snap, &awrascle::solve(&p, &l, &r).unwrap()),
        _ => fv::l1_error_vs_exact(snap, &perturbed::solve_perturbed(&p, &l, &r).unwrap()),
    }
}

#[test]
fn mass_balance_and_cfl() {
    for system in [System::Original, System::Perturbed, System::Transport] {
        for (l, r) in [(st(2.0, 1.0), st(1.0, 2.0)), (st(1.0, 1.0), st(2.0, 2.0))] {
            let sim = run(system, 1e-2, l, r, 400);
            assert!(sim.mass_defect < 1e-10, "{system}: {}", sim.mass_defect);
            assert!(sim.max_cfl <= 0.9 * (1.0 + 1e-12));
            assert_eq!(sim.snapshots.len(), 2);
            // waves stay inside the domain, so the inflow is the boundary flux jump
            let s = sim.snapshots.last().unwrap();
            let expected = (l.rho() * l.u() - r.rho() * r.u()) * s.t;
            assert!((s.boundary_inflow - expected).abs() < 1e-12);
        }
    }
}

#[test]
fn refinement_reduces_error() {
    let cases = [
        (System::Original, st(1.0, 1.0), st(2.0, 2.0)),
        (System::Original, st(2.0, 1.0), st(1.0, 2.0)),
        (System::Perturbed, st(1.0, 1.0), st(2.0, 2.0)),
        (System::Perturbed, st(2.0, 1.0), st(1.0, 2.0)),
    ];
    for (system, l, r) in cases {
        let e: Vec<f64> = [200, 400, 800]
            .iter()
            .map(|&n| exact_l1(system, 0.1, l, r, n))
            .collect();
        assert!(e[0] > e[1] && e[1] > e[2], "{system} {l} {r}: {e:?}");
    }
}

#[test]
fn peak_grows_under_joint_refinement() {
    let (l, r) = (st(2.0, 1.0), st(1.0, 2.0));
    for system in [System::Original, System::Perturbed] {
        let coarse = run(system, 1e-3, l, r, 800);
        let fine = run(system, 1e-4, l, r, 3200);
        let pc = coarse.snapshots.last().unwrap();
        let pf = fine.snapshots.last().unwrap();
        assert!(pf.rho[pf.peak()] > 2.0 * pc.rho[pc.peak()]);
    }
    let a = run(System::Original, 1e-3, l, r, 400);
    let b = run(System::Original, 1e-3, l, r, 800);
    let (sa, sb) = (a.snapshots.last().unwrap(), b.snapshots.last().unwrap());
    assert!(sb.rho[sb.peak()] > sa.rho[sa.peak()]);
}

/// First-order diffusion caps the peak far below `1 / A`, where the pressure
/// would pull the concentration back to `x = u_+ t`; at reachable grids the
/// peak follows the transport delta instead (about `0.70` here).
#[test]
#[ignore = "not reached by first-order Lax-Friedrichs at desk-scale grids"]
fn original_peak_sits_on_right_velocity() {
    let sim = run(System::Original, 1e-3, st(2.0, 1.0), st(1.0, 2.0), 400);
    let s = sim.snapshots.last().unwrap();
    assert!((s.x[s.peak()] - 0.5).abs() <= 2.0 * s.dx());
}

#[test]
fn vacuum_forms_between_the_contacts() {
    let sim = run(System::Perturbed, 1e-3, st(1.0, 1.0), st(2.0, 2.0), 3200);
    let s = sim.snapshots.last().unwrap();
    let inside = s
        .x
        .iter()
        .zip(&s.rho)
        .filter(|(&x, _)| x > 1.0 * s.t && x < 2.0 * s.t)
        .map(|(_, &r)| r)
        .fold(f64::INFINITY, f64::min);
    assert!(inside < 1e-2, "{inside}");
}

#[test]
fn concentrated_mass_is_window_insensitive() {
    let (l, r) = (st(2.0, 1.0), st(1.0, 2.0));
    let sim = run(System::Perturbed, 1e-4, l, r, 3200);
    let s = sim.snapshots.last().unwrap();
    let w = fv::delta_weight_estimate(s, &l, &r, None).unwrap();
    let w2 = fv::delta_weight_estimate(s, &l, &r, Some(2.0 * w.half_width)).unwrap();
    assert!(((w2.mass - w.mass) / w.mass).abs() < 0.05);
    assert_eq!(w.half_width, fv::default_half_width(s));
    let earlier = &sim.snapshots[0];
    let we = fv::delta_weight_estimate(earlier, &l, &r, None).unwrap();
    // mass grows linearly in time
    assert!((w.mass / we.mass - 2.0).abs() < 0.05);
}

#[test]
fn no_peak_is_reported() {
    let (l, r) = (st(1.0, 1.0), st(2.0, 2.0));
    let sim = run(System::Perturbed, 1e-2, l, r, 200);
    assert!(matches!(
        fv::delta_weight_estimate(sim.snapshots.last().unwrap(), &l, &r, None),
        Err(Error::Inapplicable(_))
    ));
}

#[test]
fn constant_data_stays_constant() {
    let s = st(1.2, 0.7);
    for system in [System::Original, System::Perturbed] {
        let sim = run(system, 0.1, s, s, 64);
        for snap in &sim.snapshots {
            assert!(fv::l1_error_vs_exact(snap, &s) < 1e-12);
        }
    }
}
