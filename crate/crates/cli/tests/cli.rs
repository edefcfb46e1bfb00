use bcs_gap_cli::output::{parse_sweep_csv, SWEEP_COLUMNS};
use bcs_gap_cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("bcs-gap").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn csv_row(text: &str) -> Vec<(String, String)> {
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let row: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    header.into_iter().zip(row).collect()
}

fn field(row: &[(String, String)], name: &str) -> String {
    row.iter().find(|(k, _)| k == name).unwrap().1.clone()
}

// 80-digit reference for lambda = 0.3
const TAU_C_03: f64 = 0.040_449_525_190_890_079_793_802_283_203;
const DELTA0_03: f64 = 0.071_438_902_256_246_705_463_240_755_702;

#[test]
fn tc_in_reduced_units() {
    let (code, out, err) = call(&[
        "tc",
        "--coupling",
        "0.3",
        "--debye-energy",
        "1",
        "--reduced",
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(err.is_empty());
    let row = csv_row(&out);
    let tau_c: f64 = field(&row, "tau_c").parse().unwrap();
    assert!((tau_c - TAU_C_03).abs() < 1e-9 * TAU_C_03);
    assert_eq!(field(&row, "T_c"), field(&row, "tau_c"));
}

#[test]
fn tc_in_kelvin() {
    let (code, out, _) = call(&["tc", "--coupling", "0.3", "--debye-energy", "30"]);
    assert_eq!(code, 0);
    let t_c: f64 = field(&csv_row(&out), "T_c").parse().unwrap();
    let expected = TAU_C_03 * 30.0 / 0.086_173_332_62;
    assert!((t_c - expected).abs() < 1e-9 * expected);
}

#[test]
fn delta0_json() {
    let (code, out, _) = call(&[
        "delta0",
        "--coupling",
        "0.3",
        "--reduced",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let d = v["delta0"].as_f64().unwrap();
    assert!((d - DELTA0_03).abs() < 1e-15);
}

#[test]
fn solve_at_zero_temperature() {
    let (code, out, _) = call(&[
        "solve",
        "--coupling",
        "0.3",
        "--reduced",
        "--temperature",
        "0",
    ]);
    assert_eq!(code, 0);
    let row = csv_row(&out);
    let f: f64 = field(&row, "f").parse().unwrap();
    let delta: f64 = field(&row, "delta").parse().unwrap();
    assert_eq!(delta * delta, f);
    assert!((delta - DELTA0_03).abs() < 1e-15);
    assert_eq!(field(&row, "f_prime").parse::<f64>().unwrap(), 0.0);
    assert_eq!(field(&row, "delta_prime").parse::<f64>().unwrap(), 0.0);
}

#[test]
fn solve_at_transition_flags_divergence() {
    let (_, tc_out, _) = call(&["tc", "--coupling", "0.3", "--reduced"]);
    let t_c = field(&csv_row(&tc_out), "T_c");
    let (code, out, _) = call(&[
        "solve",
        "--coupling",
        "0.3",
        "--reduced",
        "--temperature",
        &t_c,
    ]);
    assert_eq!(code, 0);
    let row = csv_row(&out);
    assert_eq!(field(&row, "f").parse::<f64>().unwrap(), 0.0);
    assert_eq!(field(&row, "delta_prime"), "divergent");
    assert!(field(&row, "f_prime").parse::<f64>().unwrap() < 0.0);

    let (_, json, _) = call(&[
        "solve",
        "--coupling",
        "0.3",
        "--reduced",
        "--temperature",
        &t_c,
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["delta_prime"]["kind"], "divergent");
}

#[test]
fn three_point_sweep() {
    let (code, out, _) = call(&["sweep", "--coupling", "0.3", "--reduced", "--points", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next().unwrap(), SWEEP_COLUMNS.join(","));
    let rows = parse_sweep_csv(&out).unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0].f, rows[0].delta * rows[0].delta);
    assert!((rows[0].delta - DELTA0_03).abs() < 1e-15);
    assert!(rows[1].f < rows[0].f && rows[2].f < rows[1].f);
    assert_eq!(rows[2].f, 0.0);
    assert_eq!(rows[2].asymptote, 0.0);
    assert_eq!(rows[2].asymptote_ratio, 1.0);
    assert!(!out.contains('\r'));
}

#[test]
fn sweep_json_mirrors_csv() {
    let base = [
        "sweep",
        "--coupling",
        "0.4",
        "--reduced",
        "--points",
        "9",
        "--grid",
        "uniform",
    ];
    let (_, csv_out, _) = call(&base);
    let mut args = base.to_vec();
    args.extend(["--format", "json"]);
    let (code, json_out, _) = call(&args);
    assert_eq!(code, 0);
    let doc: bcs_gap_cli::output::SweepDocument = serde_json::from_str(&json_out).unwrap();
    assert_eq!(doc.points, parse_sweep_csv(&csv_out).unwrap());
    let v: serde_json::Value = serde_json::from_str(&json_out).unwrap();
    let keys: Vec<&str> = v["points"][0]
        .as_object()
        .unwrap()
        .keys()
        .map(|k| k.as_str())
        .collect();
    let mut expected: Vec<&str> = SWEEP_COLUMNS.to_vec();
    expected.sort();
    let mut keys = keys;
    keys.sort();
    assert_eq!(keys, expected);
    assert!(v["constants"]["t_c"].as_f64().unwrap() > 0.0);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "sweep",
        "--coupling",
        "0.25",
        "--debye-energy",
        "20",
        "--points",
        "40",
    ];
    let (_, a, _) = call(&args);
    let (_, b, _) = call(&args);
    assert_eq!(a, b);
}

#[test]
fn writes_to_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let p = path.to_str().unwrap();
    let (code, out, _) = call(&[
        "sweep",
        "--coupling",
        "0.3",
        "--reduced",
        "--points",
        "5",
        "--output",
        p,
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(parse_sweep_csv(&text).unwrap().len(), 5);
}

#[test]
fn asymptote_ratios_approach_one() {
    let (code, out, _) = call(&["asymptote", "--coupling", "0.3", "--reduced"]);
    assert_eq!(code, 0);
    let ratios: Vec<f64> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').next_back().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ratios.len(), 9);
    for w in ratios.windows(2) {
        assert!((w[1] - 1.0).abs() < (w[0] - 1.0).abs());
    }
}

#[test]
fn verify_passes() {
    let (code, out, err) = call(&["verify", "--coupling", "0.3", "--reduced"]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.contains("PASS") && !out.contains("FAIL"));
    let (code, out, _) = call(&[
        "verify",
        "--coupling",
        "0.5",
        "--reduced",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v.as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn invalid_arguments_exit_2() {
    for args in [
        vec!["tc"],
        vec!["tc", "--coupling", "abc", "--reduced"],
        vec!["tc", "--coupling", "-0.3", "--reduced"],
        vec!["tc", "--coupling", "0.3"],
        vec!["tc", "--coupling", "0.3", "--reduced", "--kb", "2"],
        vec![
            "tc",
            "--coupling",
            "0.3",
            "--reduced",
            "--debye-energy",
            "3",
        ],
        vec!["tc", "--coupling", "0.3", "--reduced", "--abs-tol", "0"],
        vec![
            "solve",
            "--coupling",
            "0.3",
            "--reduced",
            "--temperature",
            "1",
        ],
        vec![
            "solve",
            "--coupling",
            "0.3",
            "--reduced",
            "--temperature",
            "-0.01",
        ],
        vec!["sweep", "--coupling", "0.3", "--reduced", "--points", "1"],
        vec!["sweep", "--coupling", "0.3", "--reduced", "--grid", "log"],
        vec!["frobnicate"],
    ] {
        let (code, out, err) = call(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty(), "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn solver_failures_exit_1_with_error_name() {
    let (code, out, err) = call(&["tc", "--coupling", "0.001", "--reduced"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("NoBracket"), "{err}");
    let (code, _, err) = call(&[
        "sweep",
        "--coupling",
        "0.3",
        "--reduced",
        "--points",
        "4",
        "--residual-tol",
        "1e-300",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("ResidualTooLarge"), "{err}");
}
