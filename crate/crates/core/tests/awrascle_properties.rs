mod common;

use awrlab_core::awrascle::{self, Region, Wave};
use awrlab_core::*;
use common::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const DRAWS: usize = 1000;

fn random_params(r: &mut ChaCha8Rng) -> PressureParams {
    let a = log_uniform(r, 1e-4, 0.5);
    let b = log_uniform(r, 1e-4, 0.5);
    PressureParams::original(a, b, r.gen_range(0.05..=1.0)).unwrap()
}

fn phi(p: &PressureParams, u: f64, rho: f64) -> f64 {
    u + p.a() * rho - p.b() * rho.powf(-p.alpha())
}

/// Both components of the jump conditions, relative to the flux scale.
fn rh_residual(p: &PressureParams, l: &State, r: &State, sigma: f64) -> (f64, f64) {
    let (fl1, fl2) = flux(System::Original, p, l.u(), l.rho());
    let (fr1, fr2) = flux(System::Original, p, r.u(), r.rho());
    let ql = to_conserved(System::Original, p, l).unwrap();
    let qr = to_conserved(System::Original, p, r).unwrap();
    let s1 = fl1.abs().max(fr1.abs()).max(1.0);
    let s2 = fl2.abs().max(fr2.abs()).max(1.0);
    (
        (sigma * (qr.q1 - ql.q1) - (fr1 - fl1)).abs() / s1,
        (sigma * (qr.q2 - ql.q2) - (fr2 - fl2)).abs() / s2,
    )
}

#[test]
fn temple_curves_coincide() {
    let mut r = rng(21);
    for _ in 0..DRAWS {
        let p = random_params(&mut r);
        let l = random_state(&mut r);
        let c = awrascle::curve_constant(&p, &l);
        let u_plus = r.gen_range(0.1..4.0);
        let star = awrascle::intermediate_state(&p, &l, u_plus).unwrap();
        let v = awrascle::curve_value(&p, &l, &star);
        assert!((v.phi - c).abs() < 1e-10 * c.abs().max(1.0));
        assert!(v.on_curve(1e-10 * c.abs().max(1.0)));
        assert!((phi(&p, star.u(), star.rho()) - c).abs() < 1e-10 * c.abs().max(1.0));
    }
}

#[test]
fn intermediate_density_matches_bisection_oracle() {
    let mut r = rng(22);
    for _ in 0..200 {
        let p = random_params(&mut r);
        let l = random_state(&mut r);
        let u_plus = r.gen_range(0.1..4.0);
        let c = phi(&p, l.u(), l.rho());
        let f = |rho: f64| c - p.a() * rho + p.b() * rho.powf(-p.alpha()) - u_plus;
        let oracle = bisect_log(f, 1e-300, 1e300);
        let star = awrascle::intermediate_state(&p, &l, u_plus).unwrap();
        assert!((star.rho() / oracle - 1.0).abs() < 1e-11, "{} vs {oracle}", star.rho());
        assert_eq!(star.rho() > l.rho(), u_plus < l.u());
    }
}

#[test]
fn curve_is_decreasing_and_convex() {
    let mut r = rng(23);
    for _ in 0..DRAWS {
        let p = random_params(&mut r);
        let l = random_state(&mut r);
        let u = r.gen_range(0.5..3.0);
        let h = 1e-3;
        let rho = |v: f64| awrascle::intermediate_state(&p, &l, v).unwrap().rho();
        let (a, b, c) = (rho(u - h), rho(u), rho(u + h));
        assert!(a > b && b > c);
        assert!(a - 2.0 * b + c > -1e-9 * b, "{a} {b} {c}");
    }
}

#[test]
fn shocks_and_contacts_satisfy_jump_conditions() {
    let mut r = rng(24);
    for _ in 0..DRAWS {
        let p = random_params(&mut r);
        let l = random_state(&mut r);
        let rt = random_state(&mut r);
        let sol = awrascle::solve(&p, &l, &rt).unwrap();
        assert_eq!(sol.star.u(), rt.u());
        if let Some(s) = sol.shock() {
            let (r1, r2) = rh_residual(&p, &l, &sol.star, s);
            assert!(r1 < 1e-9 && r2 < 1e-9, "shock residual {r1} {r2}");
            let rh = (sol.star.rho() * sol.star.u() - l.rho() * l.u()) / (sol.star.rho() - l.rho());
            assert!((s - rh).abs() < 1e-10 * rh.abs().max(1.0));
        }
        if let Some(s) = sol.contact() {
            assert_eq!(s, rt.u());
            let (r1, r2) = rh_residual(&p, &sol.star, &rt, s);
            assert!(r1 < 1e-9 && r2 < 1e-9, "contact residual {r1} {r2}");
        }
        let spans: Vec<(f64, f64)> = sol.waves.iter().map(Wave::span).collect();
        for w in spans.windows(2) {
            assert!(w[0].1 <= w[1].0);
        }
    }
}

#[test]
fn shocks_are_lax_admissible() {
    let mut r = rng(25);
    let mut n = 0;
    while n < 100 {
        let p = random_params(&mut r);
        let l = random_state(&mut r);
        let u_plus = r.gen_range(0.05..l.u());
        let star = awrascle::intermediate_state(&p, &l, u_plus).unwrap();
        let s = awrascle::shock_speed(&p, &l, &star).unwrap();
        let el = eigenvalues_original(&p, &l);
        let es = eigenvalues_original(&p, &star);
        assert!(s < el.lambda1);
        assert!(es.lambda1 < s && s < es.lambda2);
        n += 1;
    }
}

#[test]
fn classify_matches_sign_pattern() {
    let mut r = rng(26);
    for _ in 0..DRAWS {
        let p = random_params(&mut r);
        let l = random_state(&mut r);
        let rt = random_state(&mut r);
        let du = rt.u() - l.u();
        let dphi = phi(&p, rt.u(), rt.rho()) - phi(&p, l.u(), l.rho());
        let expected = match (du > 0.0, dphi > 0.0) {
            (true, true) => Region::I,
            (true, false) => Region::II,
            (false, true) => Region::III,
            (false, false) => Region::IV,
        };
        assert_eq!(awrascle::classify(&p, &l, &rt), expected);
    }
}

#[test]
fn sampler_is_self_similar_and_piecewise_constant() {
    let mut r = rng(27);
    for _ in 0..200 {
        let p = random_params(&mut r);
        let l = random_state(&mut r);
        let rt = random_state(&mut r);
        let sol = awrascle::solve(&p, &l, &rt).unwrap();
        let (lo, _) = sol.waves[0].span();
        let hi = sol.waves.last().unwrap().span().1;
        assert_eq!(sol.sample(lo - 1.0), l.sample());
        assert_eq!(sol.sample(hi + 1.0), rt.sample());
        // self-similarity: x / t only
        for &xi in &[lo - 0.5, 0.5 * (lo + hi), hi + 0.5] {
            let (x, t) = (xi * 3.0, 3.0);
            let (a, b) = (sol.sample(x / t), sol.sample(xi));
            assert!((a.u - b.u).abs() <= 1e-12 * b.u && (a.rho - b.rho).abs() <= 1e-12 * b.rho);
        }
        if let Some(c) = sol.contact() {
            let before = sol.sample(c - 1e-9);
            let after = sol.sample(c + 1e-9);
            assert!((before.u - c).abs() < 1e-12 && (after.u - c).abs() < 1e-12);
        }
    }
}

#[test]
fn rarefaction_profile_is_monotone() {
    let p = PressureParams::original(0.1, 0.1, 0.5).unwrap();
    let sol = awrascle::solve(&p, &st(1.0, 1.0), &st(2.0, 2.0)).unwrap();
    assert!((sol.star.rho() - 0.01).abs() < 1e-3);
    let f = sol.fan().unwrap();
    let mut prev = sol.sample(f.xi_head - 1e-3);
    for i in 0..=200 {
        let xi = f.xi_head - 0.1 + (f.xi_tail - f.xi_head + 1.3) * i as f64 / 200.0;
        let s = sol.sample(xi);
        assert!(s.u >= prev.u - 1e-12);
        prev = s;
    }
}
