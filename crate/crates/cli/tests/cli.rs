use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn awrlab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_awrlab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("AWRLAB_OUT")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn rows(path: &Path) -> (String, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let body = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, body)
}

#[test]
fn solve_writes_a_profile_spanning_all_waves() {
    let dir = tempfile::tempdir().unwrap();
    let o = awrlab(
        &["solve", "--system", "original", "--A", "0.1", "--B", "0.1", "--alpha", "0.5", "--left", "2,1", "--right", "1,2", "--samples", "401"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, body) = rows(&dir.path().join("profile.csv"));
    assert_eq!(header, "xi,u,rho");
    assert_eq!(body.len(), 401);
    assert!(body[0][0] < 0.8926 && body[400][0] > 1.0);
    assert_eq!(&body[0][1..], &[2.0, 1.0]);
    assert_eq!(&body[400][1..], &[1.0, 2.0]);
    assert!(body.iter().any(|r| (r[2] - 10.311415946174).abs() < 1e-9));
    for f in ["profile_u.svg", "profile_rho.svg"] {
        assert!(fs::read_to_string(dir.path().join(f)).unwrap().contains("<polyline"));
    }
}

#[test]
fn equal_states_give_a_constant_profile() {
    let dir = tempfile::tempdir().unwrap();
    let o = awrlab(&["solve", "--left", "2,1", "--right", "2,1", "--samples", "11"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let (_, body) = rows(&dir.path().join("profile.csv"));
    assert_eq!(body.len(), 11);
    assert!(body.iter().all(|r| r[1] == 2.0 && r[2] == 1.0));
}

#[test]
fn sweep_reports_passing_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let o = awrlab(
        &["sweep", "--system", "original", "--left", "2,1", "--right", "1,2", "--alpha", "0.5", "--schedule", "1e-1:1e-6"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("shock_speed_limit") && text.contains("mass_product_limit"));
    assert!(text.contains("PASS") && !text.contains("FAIL"));
    let (header, body) = rows(&dir.path().join("sweep.csv"));
    assert_eq!(header, "A,B,rho_star,u_star,sigma1,sigma2,product,A_rho_star");
    assert_eq!(body.len(), 6);
    assert!(body.windows(2).all(|w| w[1][2] > w[0][2]));
}

#[test]
fn failed_verdicts_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    // the schedule stops far from the limit
    let o = awrlab(&["sweep", "--left", "2,1", "--right", "1,2", "--schedule", "1e-1:1e-2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAIL"));
    assert!(dir.path().join("sweep.csv").exists());
}

#[test]
fn validation_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["solve", "--left", "2", "--right", "1,2"][..],
        &["solve", "--left", "2,-1", "--right", "1,2"],
        &["solve", "--left", "2,1"],
        &["sweep", "--system", "transport", "--left", "2,1", "--right", "1,2"],
        &["solve", "--system", "perturbed", "--alpha", "1", "--left", "2,1", "--right", "1,2"],
        &["simulate", "--grid", "4", "--left", "2,1", "--right", "1,2"],
        &["frobnicate"],
        &["solve", "--nonsense", "1"],
    ] {
        let o = awrlab(args, dir.path());
        assert_eq!(o.status.code(), Some(1), "{args:?}");
    }
    let o = awrlab(&["--help"], dir.path());
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn config_file_is_merged_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"system": "original", "A": 0.1, "B": 0.1, "left": [2, 1], "right": "1,2", "samples": 5}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let o = awrlab(&["solve", "--config", c, "--samples", "7"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(rows(&dir.path().join("profile.csv")).1.len(), 7);
    assert!(stdout(&o).contains("region IV"));

    fs::write(&cfg, "{\n  \"A\": 0.1,\n  \"cells\": 10\n}").unwrap();
    let o = awrlab(&["solve", "--config", c, "--left", "2,1", "--right", "1,2"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("cells") && err.contains("line 3"), "{err}");
}

#[test]
fn output_directory_defaults_to_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_awrlab"))
        .args(["solve", "--left", "2,1", "--right", "1,2", "--samples", "3"])
        .env("AWRLAB_OUT", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("profile.csv").exists());
}

#[test]
fn identical_configs_give_identical_bytes() {
    let runs: [&[&str]; 4] = [
        &["sweep", "--system", "perturbed", "--left", "2,1", "--right", "1,2", "--schedule", "1e-1:1e-5:5"],
        &["simulate", "--system", "perturbed", "--A", "1e-2", "--B", "1e-2", "--left", "2,1", "--right", "1,2", "--grid", "200", "--snapshots", "2"],
        &["weakcheck", "--A", "1e-2", "--B", "1e-2", "--left", "2,1", "--right", "1,2", "--seed", "7"],
        &["solve", "--system", "perturbed", "--A", "1e-2", "--B", "1e-2", "--left", "1,1", "--right", "2,2"],
    ];
    for args in runs {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        assert_eq!(awrlab(args, a.path()).status.code(), Some(0), "{args:?}");
        assert_eq!(awrlab(args, b.path()).status.code(), Some(0));
        let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        names.sort();
        assert!(!names.is_empty());
        for n in names {
            assert_eq!(fs::read(a.path().join(&n)).unwrap(), fs::read(b.path().join(&n)).unwrap(), "{n:?}");
        }
    }
}

#[test]
fn seeds_change_the_test_functions() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let base = ["weakcheck", "--A", "1e-2", "--B", "1e-2", "--left", "2,1", "--right", "1,2", "--seed"];
    let one: Vec<&str> = base.iter().copied().chain(["1"]).collect();
    let two: Vec<&str> = base.iter().copied().chain(["2"]).collect();
    assert_eq!(awrlab(&one, a.path()).status.code(), Some(0));
    assert_eq!(awrlab(&two, b.path()).status.code(), Some(0));
    assert_ne!(fs::read(a.path().join("weak.csv")).unwrap(), fs::read(b.path().join("weak.csv")).unwrap());
}

#[test]
fn simulate_writes_one_file_per_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let o = awrlab(
        &["simulate", "--system", "original", "--A", "0.1", "--B", "0.1", "--left", "1,1", "--right", "2,2", "--grid", "100", "--snapshots", "3", "--T", "0.3", "--log-density"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    for i in 0..3 {
        let (header, body) = rows(&dir.path().join(format!("snapshot_{i:03}.csv")));
        assert_eq!(header, "x,rho,u,q1,q2,t");
        assert_eq!(body.len(), 100);
        assert!((body[0][5] - 0.1 * (i + 1) as f64).abs() < 1e-12);
    }
    assert!(dir.path().join("rho.svg").exists() && dir.path().join("u.svg").exists());
    assert!(stdout(&o).contains("mass_conservation"));
}

#[test]
fn delta_reports_the_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let o = awrlab(&["delta", "--left", "2,1", "--right", "1,2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("delta shock at xi = 1.414213562373"));
    assert!(text.contains("weight rate 0.816496580928"));
    let o = awrlab(&["delta", "--left", "1,1", "--right", "2,2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("vacuum"));
}
