use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn calx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_calx"))
        .args(args)
        .env_remove("CALX_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 output")
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn infeasible_harmonic_check_exits_one_with_reason() {
    let out = calx(&[
        "check",
        "harmonic",
        "--beta",
        "1",
        "--m",
        "0",
        "--M",
        "1",
        "--sup-grad",
        "1",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("jump-energy criterion violated: 0.75 > 0.25"));
}

#[test]
fn certified_checks_exit_zero() {
    for args in [
        &[
            "check",
            "indicator-const",
            "--n",
            "2",
            "--beta",
            "0.3",
            "--gamma",
            "0.4",
        ][..],
        &[
            "check",
            "ball-harmonic",
            "--n",
            "1",
            "--beta",
            "2",
            "--gamma",
            "0.5",
            "--R",
            "2.5",
        ],
        &[
            "check",
            "indicator-two-piece",
            "--n",
            "2",
            "--beta",
            "1",
            "--gamma",
            "0.4",
        ],
        &[
            "check", "harmonic", "--m", "0.8", "--M", "1", "--beta", "3", "--oracle",
        ],
    ] {
        let out = calx(args);
        assert_eq!(code(&out), 0, "{args:?}: {}", stdout(&out));
        assert!(stdout(&out).trim_end().ends_with("certified"));
    }
}

#[test]
fn failed_hypothesis_exits_one() {
    let out = calx(&[
        "check",
        "indicator-two-piece",
        "--n",
        "2",
        "--beta",
        "1",
        "--gamma",
        "0.34",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("radial-bracket criterion violated at r = 1.39"));

    let out = calx(&[
        "check",
        "ball-harmonic",
        "--n",
        "2",
        "--beta",
        "1",
        "--gamma",
        "0.3",
        "--R",
        "2",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["check", "harmonic", "--m", "0"][..],
        &[
            "check",
            "indicator-const",
            "--n",
            "0",
            "--beta",
            "1",
            "--gamma",
            "1",
        ],
        &["energy-curve", "--n", "2", "--beta", "-1", "--gamma", "1"],
        &[
            "phase-diagram",
            "--n",
            "2",
            "--beta-min",
            "2",
            "--beta-max",
            "1",
        ],
        &["frobnicate"],
        &[
            "check",
            "indicator-const",
            "--n",
            "2",
            "--beta",
            "x",
            "--gamma",
            "1",
        ],
    ] {
        assert_eq!(code(&calx(args)), 2, "{args:?}");
    }
}

#[test]
fn json_report_lists_violations_with_locations() {
    let n = calx::Dimension::new(2).unwrap();
    let gamma = calx::fields::euler_lagrange_gamma(n, 1.3, 1.1).unwrap();
    let gamma = format!("{gamma:?}");
    let base = [
        "check",
        "ball-harmonic",
        "--n",
        "2",
        "--beta",
        "1.3",
        "--R",
        "1.1",
        "--gamma",
        &gamma,
    ];
    let out = calx(&base);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("at least n - 1/2"));

    let mut args = base.to_vec();
    args.extend(["--no-beta-bound", "--format", "json"]);
    let out = calx(&args);
    assert_eq!(code(&out), 1);
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["certified"], false);
    let groups = report["report"]["results"].as_array().unwrap();
    let failing = groups
        .iter()
        .find(|g| g["status"] == "fail")
        .expect("a failing group");
    assert_eq!(failing["axiom"], "condition-b");
    assert!(failing["violations"][0]["location"]["s"].is_number());
}

#[test]
fn energy_curve_is_byte_stable_and_locates_roots() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");
    for out in [&first, &second] {
        let run = calx(&[
            "energy-curve",
            "--n",
            "2",
            "--beta",
            "1",
            "--gamma",
            "0.34",
            "--rmax",
            "10",
            "--samples",
            "200",
            "--out",
            path(out),
        ]);
        assert_eq!(code(&run), 0);
    }
    let a = std::fs::read(&first).unwrap();
    assert_eq!(a, std::fs::read(&second).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("R,E,dE_dR\n"));
    assert_eq!(text.lines().count(), 202);

    let sidecar: Value = serde_json::from_str(
        &std::fs::read_to_string(first.with_extension("critical.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(sidecar["critical_radii"].as_array().unwrap().len(), 2);
    assert_eq!(sidecar["derivative_nonnegative"], false);
}

#[test]
fn energy_curve_sidecar_examples() {
    let dir = tempfile::tempdir().unwrap();
    let sidecar = dir.path().join("roots.json");
    let run = calx(&[
        "energy-curve",
        "--n",
        "1",
        "--beta",
        "2",
        "--gamma",
        "0.5",
        "--sidecar",
        path(&sidecar),
    ]);
    assert_eq!(code(&run), 0);
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(&sidecar).unwrap()).unwrap();
    let roots = meta["critical_radii"].as_array().unwrap();
    assert_eq!(roots.len(), 1);
    assert!((roots[0].as_f64().unwrap() - 2.5).abs() < 1e-9);

    let run = calx(&[
        "energy-curve",
        "--n",
        "3",
        "--beta",
        "0.5",
        "--gamma",
        "0.7",
        "--sidecar",
        path(&sidecar),
    ]);
    assert_eq!(code(&run), 0);
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(&sidecar).unwrap()).unwrap();
    assert_eq!(meta["derivative_nonnegative"], true);
    let derivatives = stdout(&run)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap())
        .collect::<Vec<_>>();
    assert!(derivatives.iter().all(|&d| d >= 0.0));
}

fn single_regime(beta: &str, gamma: &str) -> String {
    let out = calx(&[
        "phase-diagram",
        "--n",
        "2",
        "--beta-min",
        beta,
        "--beta-max",
        beta,
        "--beta-count",
        "1",
        "--gamma-min",
        gamma,
        "--gamma-max",
        gamma,
        "--gamma-count",
        "1",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("beta,gamma,regime"));
    lines.next().unwrap().rsplit(',').next().unwrap().to_owned()
}

#[test]
fn phase_diagram_examples() {
    assert_eq!(single_regime("1", "0.4"), "indicator-by-monotonicity");
    assert_eq!(single_regime("0.3", "0.4"), "indicator-by-beta-le-gamma");
    assert_eq!(single_regime("1", "0.34"), "undetermined");
}

#[test]
fn phase_diagram_is_byte_stable_across_thread_counts() {
    let args = [
        "phase-diagram",
        "--n",
        "2",
        "--beta-count",
        "6",
        "--gamma-count",
        "5",
        "--samples",
        "2000",
    ];
    let serial = Command::new(env!("CARGO_BIN_EXE_calx"))
        .args(args)
        .env("CALX_THREADS", "1")
        .output()
        .unwrap();
    let parallel = calx(&args);
    assert_eq!(code(&serial), 0);
    assert_eq!(serial.stdout, parallel.stdout);
    assert_eq!(stdout(&serial).lines().count(), 31);

    let bad = Command::new(env!("CARGO_BIN_EXE_calx"))
        .args(args)
        .env("CALX_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(
        &config,
        r#"{"n": 2, "beta": 0.3, "gamma": 0.4, "verify": {"spatial_nodes": 32}}"#,
    )
    .unwrap();
    let out = calx(&[
        "--config",
        path(&config),
        "check",
        "indicator-const",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["report"]["grid"]["spatial_nodes"], 32);

    // the flag lifts beta above gamma, which the constant field cannot calibrate
    let out = calx(&[
        "--config",
        path(&config),
        "check",
        "indicator-const",
        "--beta",
        "1",
    ]);
    assert_eq!(code(&out), 1);

    std::fs::write(&config, r#"{"n": 2, "bogus": 1}"#).unwrap();
    assert_eq!(
        code(&calx(&[
            "--config",
            path(&config),
            "describe",
            "indicator-const"
        ])),
        2
    );
}

#[test]
fn describe_sweep_oracle_and_robin() {
    let out = calx(&[
        "describe",
        "ball-harmonic",
        "--n",
        "1",
        "--beta",
        "2",
        "--gamma",
        "0.5",
        "--R",
        "2.5",
    ]);
    assert_eq!(code(&out), 0);
    let description: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(description["kind"], "ball-harmonic");

    let out = calx(&[
        "sweep",
        "--n",
        "2",
        "--beta",
        "1",
        "--gamma",
        "0.5",
        "--rmax",
        "3",
        "--r-count",
        "4",
        "--delta-count",
        "5",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("R,delta,dirichlet,jump,volume,total\n"));
    assert_eq!(text.lines().count(), 1 + 1 + 4 * 5);

    let out = calx(&["oracle1d", "--m", "0", "--M", "1", "--beta", "1"]);
    assert_eq!(code(&out), 0);
    let best: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((best["energy"].as_f64().unwrap() - 0.5).abs() < 1e-12);

    let out = calx(&["robin", "--n", "2", "--beta", "3", "--R", "2"]);
    let robin: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(robin["difference"].as_f64().unwrap() < 1e-6);
}
