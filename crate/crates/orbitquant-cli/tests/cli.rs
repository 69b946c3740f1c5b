use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitquant")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn gaussian_line(path: &Path, m: usize, l: f64) {
    let h = 2.0 * l / m as f64;
    let mut s = String::from("q,re,im\n");
    for k in 0..m {
        let q = -l + k as f64 * h;
        s += &format!("{q},{},0\n", (-q * q / 2.0).exp());
    }
    std::fs::write(path, s).unwrap();
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let o = run(&["frobnicate"]);
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty());
}

#[test]
fn unknown_group_is_usage_error() {
    assert_eq!(code(&run(&["orbits", "no_such_group", "--point", "0,0,1"])), 2);
}

#[test]
fn catalog_lists_builtin_groups() {
    let o = run(&["catalog", "list"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let ids: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["id"].as_str().unwrap()).collect();
    for id in ["heis1", "g4delta:δ=1", "n5_1"] {
        assert!(ids.contains(&id), "{id} missing from {ids:?}");
    }
}

#[test]
fn catalog_export_round_trips_through_orbits() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g4.toml");
    let o = run(&["catalog", "show", "g4delta:δ=1", "--export", file.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = run(&["orbits", file.to_str().unwrap(), "--point", "0,0,1,2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["Pf"], "3");
}

#[test]
fn flat_orbit_of_g4() {
    let o = run(&["orbits", "g4delta:δ=1", "--point", "0,0,1,1"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["is_flat"], true);
    assert_eq!(v["Pf"], "2");
    assert_eq!(v["orbit_dim"], 2);
}

#[test]
fn orbit_on_the_singular_set_is_not_flat() {
    let o = run(&["orbits", "g4delta:δ=1", "--point", "1,0,1,-1"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["is_flat"], false);
    assert_eq!(v["orbit_dim"], 0);
}

#[test]
fn rep_apply_translates_along_q() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("phi.csv");
    let output = dir.path().join("out.csv");
    gaussian_line(&input, 64, 8.0);
    let o = run(&[
        "rep", "heis1", "--z", "1", "--grid", "64,8", "apply", "--element", "0.5,0,0",
        "--input", input.to_str().unwrap(), "--output", output.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&output).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q,re,im"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|t| t.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 64);
    // A pure Q-translation moves the profile by 0.5 in one direction; its modulus stays Gaussian.
    let shifted = |q: f64, s: f64| (-(q - s) * (q - s) / 2.0).exp();
    let dir_err = |s: f64| rows.iter().map(|r| ((r[1] * r[1] + r[2] * r[2]).sqrt() - shifted(r[0], s)).abs()).fold(0.0, f64::max);
    assert!(dir_err(0.5).min(dir_err(-0.5)) < 1e-8, "{} {}", dir_err(0.5), dir_err(-0.5));
}

#[test]
fn weyl_of_the_position_symbol_multiplies_by_q() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("phi.csv");
    gaussian_line(&input, 64, 8.0);
    let o = run(&[
        "quantize", "--group", "heis1", "--scheme", "weyl", "--z", "1",
        "--symbol", r#"{"center":[0,0],"width":[1e9,1e9],"terms":[[[0,1],[1,0]]]}"#,
        "--apply", input.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q,re,im"));
    for l in lines {
        let r: Vec<f64> = l.split(',').map(|t| t.parse().unwrap()).collect();
        assert!((r[1] - r[0] * (-r[0] * r[0] / 2.0).exp()).abs() < 1e-10 && r[2].abs() < 1e-10, "{l}");
    }
}

#[test]
fn quantize_rejects_inputs_off_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("phi.csv");
    gaussian_line(&input, 64, 7.0);
    let o = run(&[
        "quantize", "--group", "heis1", "--scheme", "pedersen", "--z", "1",
        "--symbol", r#"{"center":[0,0],"width":[1,1]}"#, "--apply", input.to_str().unwrap(), "--grid", "64,8",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn group_and_kn_schemes_agree() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("u.csv");
    let at = dir.path().join("at.csv");
    let (n, l) = (10usize, 4.0);
    let h = 2.0 * l / n as f64;
    let mut s = String::from("x0,x1,x2,re,im\n");
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let x = [-l + i as f64 * h, -l + j as f64 * h, -l + k as f64 * h];
                s += &format!("{},{},{},{},0\n", x[0], x[1], x[2], (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 2.0).exp());
            }
        }
    }
    std::fs::write(&input, s).unwrap();
    std::fs::write(&at, "x0,x1,x2\n0,0,0\n0.5,-0.25,0.1\n").unwrap();
    let sym = r#"{"a":{"center":[0,0,0],"width":[1e9,1e9,1e9]},"b":{"center":[0,0,3],"width":[1,1,0.3]}}"#;
    let values = |scheme: &str| -> Vec<(f64, f64)> {
        let o = run(&[
            "quantize", "--group", "heis1", "--scheme", scheme, "--symbol", sym,
            "--apply", input.to_str().unwrap(), "--at", at.to_str().unwrap(), "--zgrid", "6,32",
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        String::from_utf8(o.stdout)
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| {
                let r: Vec<f64> = l.split(',').map(|t| t.parse().unwrap()).collect();
                (r[3], r[4])
            })
            .collect()
    };
    let (kn, grp) = (values("kn"), values("group"));
    assert_eq!(kn.len(), 2);
    for (a, b) in kn.iter().zip(&grp) {
        let d = ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
        assert!(d < 1e-3 * a.0.hypot(a.1), "{a:?} vs {b:?}");
    }
}

#[test]
fn verify_all_on_g4_passes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let o = run(&["verify", "--group", "g4delta:δ=1", "--suite", "all", "--json", report.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() >= 12);
    for c in checks {
        for key in ["name", "paper_ref", "max_rel_error", "tolerance", "pass"] {
            assert!(c.get(key).is_some(), "{key} missing in {c}");
        }
        assert_eq!(c["pass"], true, "{c}");
    }
}

#[test]
fn verify_report_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2).map(|k| dir.path().join(format!("r{k}.json"))).collect();
    for p in &paths {
        let o = run(&["verify", "--group", "heis1", "--suite", "pedersen", "--seed", "7", "--json", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
}

#[test]
fn verify_failure_exits_one() {
    // A grid far too coarse for the orbit calculus must fail some check rather than pass.
    let o = run(&["verify", "--group", "heis1", "--suite", "pedersen", "--grid", "8,2"]);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], false);
}

#[test]
fn verify_without_representations_is_usage_error() {
    let o = run(&["verify", "--group", "n5_1", "--suite", "fourier"]);
    assert_eq!(code(&o), 2);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["error"].is_string());
}

#[test]
fn symclass_reports_samples() {
    let o = run(&[
        "symclass", "--group", "heis1", "--symbol", r#"{"center":[0,0,0,0,0,0],"width":[2,2,2,1,1,1]}"#,
        "-m", "0", "--x-points", "0,0,0;1,0,0",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let samples = v["report"]["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 8);
    assert!(samples.iter().all(|s| s["norm"].as_f64().unwrap().is_finite()));
}
