use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dunkl-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn smoke_simulation_writes_one_row_and_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["simulate", "--paths", "1", "--dt", "1", "--t", "1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(&dir.path().join("histogram.csv"));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "bin_left,bin_right,density");
    assert_eq!(lines.len(), 2);
    let manifest: Value = serde_json::from_str(&read(&dir.path().join("manifest.json"))).unwrap();
    assert_eq!(manifest["command"], "simulate");
    assert_eq!(manifest["parameters"]["paths"], 1);
    assert!(manifest["seed"].is_u64());
    assert!(manifest["wall_clock_seconds"].is_f64());
}

#[test]
fn rerun_line_and_thread_count_reproduce_the_histogram() {
    let a = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["simulate", "--type", "B", "--n", "3", "--beta", "3", "--nu", "0.5", "--t", "0.5", "--dt", "1e-3"])
        .args(["--paths", "400", "--out", a.path().to_str().unwrap()])
        .env("DUNKL_LAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let manifest: Value = serde_json::from_str(&read(&a.path().join("manifest.json"))).unwrap();
    let rerun = manifest["parameters"]["rerun"].as_str().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut words: Vec<String> = rerun.split_whitespace().skip(1).map(String::from).collect();
    let last = words.len() - 1;
    words[last] = b.path().to_str().unwrap().to_string();
    let out = bin().args(&words).env("DUNKL_LAB_THREADS", "3").output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(read(&a.path().join("histogram.csv")), read(&b.path().join("histogram.csv")));
}

#[test]
fn exact_column_is_filled_only_at_beta_two() {
    for (beta, filled) in [("2", true), ("4", false)] {
        let dir = tempfile::tempdir().unwrap();
        let out = run(&[
            "simulate", "--n", "2", "--beta", beta, "--paths", "50", "--t", "0.1", "--dt", "0.01",
            "--bins=-3:3:0.5", "--exact", "--out", dir.path().to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let csv = read(&dir.path().join("histogram.csv"));
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("bin_left,bin_right,density,exact"));
        for line in lines {
            let exact = line.rsplit(',').next().unwrap();
            assert_eq!(!exact.is_empty(), filled, "{line}");
        }
    }
}

#[test]
fn invalid_flag_combinations_exit_with_usage_code() {
    let cases: [&[&str]; 6] = [
        &["simulate", "--type", "B", "--n", "2"],
        &["simulate", "--type", "A", "--nu", "1"],
        &["simulate", "--scale", "beta_nu_t"],
        &["simulate", "--n", "2", "--init", "0"],
        &["simulate", "--bins", "1:0:0.1"],
        &["intertwine", "--type", "A", "--n", "2", "--limit", "nu"],
    ];
    for args in cases {
        let dir = tempfile::tempdir().unwrap();
        let out = bin().args(args).current_dir(dir.path()).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = bin().args(["verify"]).env("DUNKL_LAB_THREADS", "many").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fekete_matches_hermite_and_laguerre_zeros() {
    let a = json(&run(&["fekete", "--type", "A", "--n", "7"]));
    assert!(a["report"]["zero_check"]["max_abs_delta"].as_f64().unwrap() <= 1e-9);
    for v in a["report"]["identity_residuals"].as_object().unwrap().values() {
        assert!(v.as_f64().unwrap().abs() <= 1e-9);
    }
    let b = json(&run(&["fekete", "--type", "B", "--n", "7", "--nu", "0.5"]));
    assert!(b["report"]["zero_check"]["max_abs_delta"].as_f64().unwrap() <= 1e-9);
    let one = json(&run(&["fekete", "--type", "A", "--n", "1"]));
    assert_eq!(one["report"]["minimizer"][0].as_f64().unwrap(), 0.0);
    assert_eq!(one["report"]["potential_at_min"].as_f64().unwrap(), 0.0);
}

#[test]
fn intertwine_tables() {
    let v = json(&run(&["intertwine", "--type", "A", "--lambda", "2", "--n", "3", "--beta", "2"]));
    let terms = v["report"]["terms"].as_array().unwrap();
    // after multiplying by β: β(β+2)/(βN+2) = 1 and 2β²/(βN+2) = 1
    for t in terms {
        assert!((t["coefficient"].as_f64().unwrap() * 2.0 - 1.0).abs() < 1e-12);
    }
    let lim = json(&run(&["intertwine", "--type", "A", "--lambda", "2", "--n", "3", "--limit", "beta"]));
    // M((2),3)/N² (Σx)² = (1/3)(m_(2) + 2 m_(1,1))
    let c: Vec<f64> = lim["report"]["terms"].as_array().unwrap().iter().map(|t| t["coefficient"].as_f64().unwrap()).collect();
    assert!((c[0] - 1.0 / 3.0).abs() < 1e-12 && (c[1] - 2.0 / 3.0).abs() < 1e-12);
    let one = json(&run(&["intertwine", "--lambda", "", "--n", "2"]));
    assert_eq!(one["report"]["terms"][0]["coefficient"].as_f64(), Some(1.0));
}

#[test]
fn verify_suites_report_and_pass() {
    let fke = run(&["verify", "--suite", "fke"]);
    assert_eq!(fke.status.code(), Some(0));
    let report = json(&fke);
    // N ∈ {2,3}, both types, 10 points each
    assert_eq!(report["report"]["checks"].as_array().unwrap().len(), 40);
    let kernel = run(&["verify", "--suite", "kernel,bounds", "--paths", "2e4"]);
    assert_eq!(kernel.status.code(), Some(0));
    assert_eq!(json(&kernel)["report"]["failed"], 0);
}
