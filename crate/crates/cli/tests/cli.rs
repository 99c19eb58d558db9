use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ising-fidelity"))
        .args(args)
        .env_remove("ISING_THREADS")
        .output()
        .expect("binary runs")
}

fn rows(out: &Output) -> Vec<csv::StringRecord> {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    csv::Reader::from_reader(out.stdout.as_slice())
        .records()
        .collect::<Result<_, _>>()
        .unwrap()
}

fn field(r: &csv::StringRecord, i: usize) -> f64 {
    r[i].parse().unwrap()
}

#[test]
fn chi_peak_sits_below_the_critical_field() {
    let out = run(&[
        "chi", "--n", "40", "--g-min", "0.5", "--g-max", "1.5", "--steps", "1000",
    ]);
    let rs = rows(&out);
    assert_eq!(rs.len(), 1000);
    let peak = rs
        .iter()
        .max_by(|a, b| field(a, 2).total_cmp(&field(b, 2)))
        .unwrap();
    let n = 40.0f64;
    let predicted = 1.0 - 6.0 / (n * n) + 6.0 / (n * n * n);
    let spacing = 1.0 / 999.0;
    assert!(
        (field(peak, 0) - predicted).abs() <= spacing,
        "{}",
        &peak[0]
    );
}

#[test]
fn scaling_grid_contains_quarter_at_origin() {
    let rs = rows(&run(&[
        "scaling", "--c-min", "-4", "--c-max", "4", "--steps", "161",
    ]));
    assert_eq!(rs.len(), 161);
    let origin = rs.iter().find(|r| field(r, 0) == 0.0).expect("c = 0 row");
    assert_eq!(field(origin, 1), 0.25);
}

#[test]
fn empty_sweep_writes_only_the_header() {
    let out = run(&["scaling", "--c-min", "0", "--c-max", "1", "--steps", "0"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "c,A\n");
}

#[test]
fn row_count_matches_steps() {
    for steps in ["1", "7"] {
        let rs = rows(&run(&[
            "gap", "--n", "6", "--g-min", "0.5", "--g-max", "1.5", "--steps", steps,
        ]));
        assert_eq!(rs.len(), steps.parse::<usize>().unwrap());
    }
}

#[test]
fn csv_values_round_trip_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    let out = run(&[
        "fidelity",
        "--n",
        "100",
        "--delta",
        "0.2",
        "--g-min",
        "1.3",
        "--g-max",
        "1.3",
        "--steps",
        "1",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["g", "delta", "n", "F", "lnF_per_site"]
    );
    let rec = reader.records().next().unwrap().unwrap();
    let direct = ising_fidelity::fidelity(1.3, 0.2, 100).unwrap();
    assert_eq!(field(&rec, 3), direct.value);
    assert_eq!(field(&rec, 4), direct.log_per_site);
}

#[test]
fn json_rows_keep_field_order() {
    let out = run(&[
        "gap", "--n", "4", "--g-min", "1", "--g-max", "1", "--steps", "1", "--format", "json",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let keys = ["\"g\"", "\"n\"", "\"gap\"", "\"regime\""];
    let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v[0]["regime"], "critical");
}

#[test]
fn exit_codes() {
    let bad_flag = run(&["chi", "--bogus"]);
    assert_eq!(bad_flag.status.code(), Some(2));
    assert!(!bad_flag.stderr.is_empty());

    let reversed = run(&[
        "chi", "--n", "4", "--g-min", "2", "--g-max", "1", "--steps", "2",
    ]);
    assert_eq!(reversed.status.code(), Some(2));

    let unwritable = run(&[
        "scaling",
        "--c-min",
        "0",
        "--c-max",
        "1",
        "--steps",
        "2",
        "--output",
        "/nonexistent/dir/x.csv",
    ]);
    assert_eq!(unwritable.status.code(), Some(3));

    // g - δ and g + δ straddle a level crossing of the two parity sectors
    let mismatch = run(&[
        "fidelity", "--n", "3", "--delta", "0.5", "--g-min", "0", "--g-max", "0", "--steps", "1",
    ]);
    assert_eq!(mismatch.status.code(), Some(3));

    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["quench", "--n", "12", "--tau-q", "3", "--threads", "3"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let fit = [
        "fit-size", "--tau-q", "4", "--n-min", "10", "--n-max", "30", "--n-step", "10",
    ];
    assert_eq!(run(&fit).stdout, run(&fit).stdout);
}

#[test]
fn fit_size_reports_a_fit_result() {
    let out = run(&[
        "fit-size", "--tau-q", "4", "--n-min", "10", "--n-max", "40", "--n-step", "10",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in [
        "intercept",
        "slope",
        "stderr_intercept",
        "stderr_slope",
        "r_squared",
    ] {
        assert!(v[key].is_number(), "{key}");
    }
    assert_eq!(v["points"].as_array().unwrap().len(), 4);
    assert!(v["slope"].as_f64().unwrap() < 0.0);
}
