use serde_json::Value;
use std::process::{Command, Output};

fn biharm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biharm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn solve_pi_cone_at_five() {
    let o = biharm(&["solve", "--map", "cone(pi(5))", "--flavor", "biharmonic"]);
    assert_eq!(code(&o), 0);
    // sin²α = (3/2)(m−3)/(m−1) at m = 5
    let (num, den) = (3 * (5 - 3), 2 * (5 - 1));
    assert_eq!((num, den), (6, 8));
    let out = stdout(&o);
    assert!(out.contains("t = 3/4\n"), "{out}");
    assert!(out.contains("t ~ 0.750000000000000"), "{out}");
}

#[test]
fn solve_exit_codes() {
    assert_eq!(code(&biharm(&["solve", "--map", "cone(pi(7))"])), 2);
    assert_eq!(code(&biharm(&["solve", "--map", "cone(pi(5), 0.75)"])), 1);
    assert_eq!(code(&biharm(&["solve", "--map", "cone(pi(5)"])), 1);
    assert_eq!(code(&biharm(&["solve", "--map", "pi(5)"])), 1);
    // equal densities on both sides: harmonic outcome
    assert_eq!(code(&biharm(&["solve", "--map", "join(pi(4), pi(4))"])), 2);
    let o = biharm(&["solve", "--map", "cone(identity_sphere(3))", "--flavor", "cbiharmonic"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("t = 1/2\n"));
}

#[test]
fn parse_errors_point_at_the_column() {
    let o = biharm(&["solve", "--map", "cone(pi(5), 0.75)"]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("column 13"), "{err}");
}

#[test]
fn catalog_listing_and_family_filter() {
    let o = biharm(&["catalog"]);
    assert_eq!(code(&o), 0);
    let pi = stdout(&o).lines().find(|l| l.starts_with("pi ")).unwrap().to_string();
    assert!(pi.contains("[4,6]"), "{pi}");
    let o = biharm(&["catalog", "--family", "w2"]);
    assert!(stdout(&o).contains("(m-4)/(m+2)"));
    assert_eq!(code(&biharm(&["catalog", "--family", "nope"])), 1);
    let v: Value = serde_json::from_str(&stdout(&biharm(&["catalog", "--format", "json"]))).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 7);
}

#[test]
fn emitted_descriptions_reparse() {
    let o = biharm(&["catalog", "--family", "pi", "--emit", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let maps: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["map"].as_str().unwrap()).collect();
    assert_eq!(maps, ["cone(pi(4), 1/2)", "cone(pi(5), 3/4)", "cone(pi(6), 9/10)"]);
    for m in maps {
        let o = biharm(&["verify", "--map", m, "--samples", "4", "--fd-points", "0"]);
        assert_eq!(code(&o), 0, "{m}");
        let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(r["residuals"][0]["map"], m);
    }
}

#[test]
fn verify_negative_control_fails_with_witness() {
    let o = biharm(&["verify", "--map", "cone(mu(3), 1/2)"]);
    assert_eq!(code(&o), 4);
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let res = &r["residuals"][0];
    assert_eq!(res["certificate"]["verdict"], "nonzero");
    assert!(!res["certificate"]["witness"].as_str().unwrap().is_empty());
    assert_eq!(r["summary"]["pass"], false);
}

#[test]
fn verify_incommensurable_curve_passes() {
    let o = biharm(&["verify", "--map", "curve_s3(3/2)"]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["residuals"][0]["certificate"]["verdict"], "zero");
}

#[test]
fn verify_suite_passes() {
    let o = biharm(&["verify", "--suite", "--samples", "16"]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["summary"]["failed"], 0);
    assert!(r["cases"].as_array().unwrap().len() > 80);
}

#[test]
fn energy_of_identity_cone() {
    let o = biharm(&[
        "energy", "--map", "cone(identity_sphere(3), 1/2)", "--flavor", "E2", "--format", "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let value = v["value"].as_f64().unwrap();
    let se = v["std_error"].as_f64().unwrap();
    // |Δu|² = tλ², |∇u|² = tλ, so E₂ = ½ vol(S³) λ² t(1 − t) with λ = 3, t = 1/2
    let (lambda, t, vol) = (3.0, 0.5, 2.0 * std::f64::consts::PI.powi(2));
    let want = 0.5 * vol * lambda * lambda * t * (1.0 - t);
    assert!((want - 9.0 / 8.0 * vol).abs() < 1e-12);
    assert!((value - want).abs() <= 3.0 * se + 1e-12 * want, "{value} vs {want}");
}

#[test]
fn energy_of_harmonic_map_vanishes() {
    let o = biharm(&["energy", "--map", "hopf", "--flavor", "E2", "--format", "json", "--samples", "8192"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["value"].as_f64().unwrap().abs() < 1e-10);
}

#[test]
fn energy_needs_a_closed_domain() {
    assert_eq!(code(&biharm(&["energy", "--map", "cone(pi(5), 3/4)", "--flavor", "E2"])), 2);
    assert_eq!(code(&biharm(&["energy", "--map", "curve_s3(3/2)", "--flavor", "E"])), 2);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.json"), dir.path().join("b.json")];
    for p in &paths {
        let o = biharm(&[
            "report",
            "--map",
            "cone(identity_sphere(3))",
            "--flavor",
            "cbiharmonic",
            "--energy-samples",
            "5000",
            "--seed",
            "7",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["solutions"][0]["t"], "1/2");
    assert_eq!(v["energies"].as_array().unwrap().len(), 3);
    assert_eq!(v["run"]["scan"]["seed"], 7);
}

#[test]
fn io_failure_has_its_own_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("r.json");
    let o = biharm(&["verify", "--map", "pi(4)", "--out", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 5);
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(code(&biharm(&["--help"])), 0);
    assert_eq!(code(&biharm(&["frobnicate"])), 1);
    assert_eq!(code(&biharm(&["verify"])), 1);
    assert_eq!(code(&biharm(&["verify", "--map", "pi(4)", "--suite"])), 1);
    assert_eq!(code(&biharm(&["verify", "--map", "pi(4)", "--h", "-1"])), 1);
}
