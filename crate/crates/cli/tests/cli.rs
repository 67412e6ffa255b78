use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn cohid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohid")).args(args).output().expect("spawn cohid")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn default_curves_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curves.csv");
    let out = cohid(&["curves", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("strategy,delta_abs,probability"));
    let rows: Vec<(String, f64, f64)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].to_string(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 1505);

    let bs = rows.iter().find(|r| r.0 == "bs" && r.1 == 1.0).unwrap();
    assert!((bs.2 - 0.283469).abs() < 1e-6, "{}", bs.2);

    let at = |s: &str, i: usize| rows.iter().filter(|r| r.0 == s).nth(i).unwrap().2;
    for i in 0..301 {
        let (sb, opt, sbf, bs, idp) = (at("sb", i), at("opt", i), at("sbf", i), at("bs", i), at("idp", i));
        assert!(sb <= sbf + 1e-9 && sbf <= bs + 1e-9 && opt <= bs + 1e-9 && bs <= idp + 1e-9, "row {i}");
    }
}

#[test]
fn curves_grid_flags_and_json() {
    let out = cohid(&["curves", "--min", "0", "--max", "1", "--steps", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["tool"], "coherent-id-cli");
    assert_eq!(v["config"]["steps"], 3);
    assert_eq!(v["result"][0].as_array().unwrap().len(), 15);
    assert_eq!(v["pass"], true);
}

#[test]
fn simulate_balanced_pair_is_error_free() {
    let out = cohid(&["simulate", "--alpha1", "0", "--alpha2", "1", "--truth", "1", "--shots", "100000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["error"], 0);
    assert_eq!(v["result"]["identified_2"], 0);
    let expected = 1.0 - (-1.0f64 / 3.0).exp();
    assert!((v["result"]["expected_p1"].as_f64().unwrap() - expected).abs() < 1e-14);
    assert!(v["result"]["success"]["z"].as_f64().unwrap() <= 4.0);
}

#[test]
fn simulate_zero_shots() {
    let out = cohid(&["simulate", "--alpha1", "0", "--alpha2", "1", "--truth", "2", "--shots", "0", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["shots"], 0);
    assert_eq!(v["result"]["identified_1"], 0);
    assert!(v["result"]["success"].is_null());
}

#[test]
fn simulate_shot_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("shots.csv");
    let out = cohid(&[
        "simulate", "--alpha1", "0.5,-0.5", "--alpha2", "-1,0.25", "--truth", "2", "--shots", "50", "--seed", "3",
        "--shots-csv", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("seed,shot,click_p2,click_p1,outcome"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| r.starts_with("3,") && !r.ends_with("identified_1")));
}

#[test]
fn output_is_reproducible() {
    let args = ["simulate", "--alpha1", "0", "--alpha2", "1.5", "--truth", "1", "--shots", "2000", "--seed", "42"];
    let a = cohid(&args);
    let b = cohid(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = cohid(&["database", "--n", "3", "--ring-alpha", "1.5", "--shots", "2000", "--seed", "5"]);
    let d = cohid(&["database", "--n", "3", "--ring-alpha", "1.5", "--shots", "2000", "--seed", "5"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn verify_passes() {
    let out = cohid(&["verify", "--fock", "--n-max", "12", "--no-quadrature"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert!(v["fock"].as_array().unwrap().iter().any(|c| c["check"] == "bs_equals_opt"));

    let out = cohid(&["verify", "--qudit", "--d", "3", "--samples", "50"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!json(&out)["qudit"].as_array().unwrap().is_empty());
}

#[test]
fn database_ring_and_refs() {
    let out = cohid(&["database", "--n", "3", "--ring-alpha", "2", "--shots", "20000", "--seed", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for key in ["n", "p_analytic_circuit", "p_paper_constant", "mc_estimate", "mc_stderr", "shots"] {
        assert!(!v["result"][key].is_null(), "{key}");
    }
    assert_eq!(v["result"]["misidentified"], 0);

    let out = cohid(&["database", "--refs", "[[0,0],[1,0],{\"re\":0,\"im\":1}]", "--shots", "1000", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["n"], 3);
}

#[test]
fn optimize_balanced() {
    let out = cohid(&["optimize-t1", "--alpha1", "0", "--alpha2", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let t = json(&out)["result"]["t1_star"].as_f64().unwrap();
    assert!((t - 0.5).abs() < 1e-6);

    let out = cohid(&["optimize-t1", "--alpha1", "0", "--alpha2", "1", "--eta1", "0.999"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["t1_star"], 0.0);
    assert!(v["result"]["critical_point_residual"].is_null());
}

#[test]
fn config_file_drives_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let csv = dir.path().join("c.csv");
    fs::write(
        &cfg,
        serde_json::json!({"subcommand": "curves", "max": 2.0, "steps": 5, "output": csv}).to_string(),
    )
    .unwrap();
    let out = cohid(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 26);

    fs::write(&cfg, r#"{"subcommand": "simulate", "alpha1": [0, 0], "alpha2": 1, "truth": 1, "shots": 10, "seed": 1}"#).unwrap();
    let out = cohid(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["config"]["alpha2"]["re"], 1.0);
}

#[test]
fn usage_errors_exit_two() {
    // no seed
    assert_eq!(cohid(&["simulate", "--alpha1", "0", "--alpha2", "1", "--truth", "1"]).status.code(), Some(2));
    assert_eq!(cohid(&["curves", "--steps", "1"]).status.code(), Some(2));
    assert_eq!(cohid(&["simulate", "--truth", "3"]).status.code(), Some(2));
    assert_eq!(cohid(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(cohid(&[]).status.code(), Some(2));
    assert_eq!(
        cohid(&["simulate", "--alpha1", "0", "--alpha2", "1", "--truth", "1", "--t1", "1.5", "--seed", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(cohid(&["database", "--n", "3", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(cohid(&["optimize-t1", "--alpha1", "1", "--alpha2", "1"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_fails() {
    let out = cohid(&["curves", "--output", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(1));
}
