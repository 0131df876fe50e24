use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_petersburg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr)))
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn validator() -> jsonschema::Validator {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/schema/output-envelope.schema.json"
    );
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(v: &Value) {
    let errors: Vec<String> = validator().iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:#?}\n{v:#}");
}

#[test]
fn every_command_matches_schema() {
    let cases: [&[&str]; 10] = [
        &["evaluate", "--wealth", "100", "--price", "2"],
        &["evaluate", "--wealth", "1.5", "--price", "2.6"],
        &[
            "evaluate",
            "--wealth",
            "100",
            "--price",
            "2",
            "--payout",
            "capped:1e9",
        ],
        &["breakeven", "--wmin", "1", "--wmax", "1e4", "--points", "5"],
        &[
            "breakeven",
            "--inset",
            "--price",
            "2",
            "--wmin",
            "1.01",
            "--wmax",
            "1e4",
            "--points",
            "5",
        ],
        &[
            "simulate", "--wealth", "100", "--price", "2", "--rounds", "1000", "--path",
        ],
        &[
            "simulate", "--wealth", "1.5", "--price", "2.6", "--rounds", "1000",
        ],
        &[
            "simulate", "--mode", "ensemble", "--wealth", "100", "--price", "2",
        ],
        &[
            "simulate",
            "--mode",
            "subinterval",
            "--wealth",
            "100",
            "--price",
            "2",
        ],
        &["menger", "--wealth", "100", "--nmax", "5"],
    ];
    for args in cases {
        assert_valid(&json(args));
    }
}

#[test]
fn schema_rejects_malformed_envelopes() {
    let mut v = json(&["evaluate", "--wealth", "100", "--price", "2"]);
    v["results"]["recommendation"] = Value::from("Maybe");
    assert!(!validator().is_valid(&v));
    let mut v = json(&["evaluate", "--wealth", "100", "--price", "2"]);
    v.as_object_mut().unwrap().remove("version");
    assert!(!validator().is_valid(&v));
}

#[test]
fn json_round_trips() {
    let out = run(&["evaluate", "--wealth", "100", "--price", "2"]);
    let text = stdout(&out);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
}

#[test]
fn evaluate_reports_four_criteria() {
    let v = json(&["evaluate", "--wealth", "100", "--price", "2"]);
    let r = &v["results"];
    for key in [
        "naive_expected_payout",
        "ensemble_growth",
        "time_growth",
        "bernoulli_literal",
    ] {
        assert!(r[key]["classification"]["kind"].is_string(), "{key}");
    }
    assert_eq!(r["recommendation"], "Buy");
    assert_eq!(v["command"], "evaluate");
}

#[test]
fn bankrupting_price_exits_2() {
    let out = run(&["evaluate", "--wealth", "1.5", "--price", "2.6"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["recommendation"], "Undefined");
}

#[test]
fn capped_payout_is_fifteen() {
    let v = json(&[
        "evaluate",
        "--wealth",
        "100",
        "--price",
        "2",
        "--payout",
        "capped:1e9",
    ]);
    assert_eq!(
        v["results"]["naive_expected_payout"]["classification"]["value"].as_f64(),
        Some(15.0)
    );
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        &["evaluate", "--wealth", "100"][..],
        &["evaluate", "--wealth", "-1", "--price", "2"],
        &[
            "evaluate", "--wealth", "100", "--price", "2", "--payout", "nope",
        ],
        &[
            "evaluate",
            "--wealth",
            "100",
            "--price",
            "2",
            "--payout",
            "table:/no/such/file.csv",
        ],
        &["breakeven", "--wmin", "10", "--wmax", "1"],
        &["breakeven", "--inset"],
        &["frobnicate"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn table_payout_from_csv() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "probability,payout\n0.5,1\n0.5,3").unwrap();
    let spec = format!("table:{}", f.path().display());
    let v = json(&[
        "evaluate", "--wealth", "10", "--price", "2", "--payout", &spec,
    ]);
    let e = &v["results"]["naive_expected_payout"]["classification"];
    assert_eq!(e["kind"], "Converged");
    assert_eq!(e["value"].as_f64(), Some(2.0));
    assert_eq!(v["results"]["recommendation"], "DontBuy");
}

#[test]
fn breakeven_csv_rows_solve_the_condition() {
    let out = run(&[
        "breakeven",
        "--wmin",
        "2",
        "--wmax",
        "1e5",
        "--points",
        "8",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("wealth,breakeven_price"));
    let mut n = 0;
    for line in lines {
        let (w, c) = line.split_once(',').unwrap();
        let ev = json(&["evaluate", "--wealth", w, "--price", c, "--tol", "1e-15"]);
        let g = ev["results"]["time_growth"]["classification"]["value"]
            .as_f64()
            .unwrap();
        assert!(g.abs() <= 1e-10, "w={w} c={c} g={g}");
        n += 1;
    }
    assert_eq!(n, 8);
}

#[test]
fn breakeven_failures_are_empty_cells() {
    let out = run(&[
        "breakeven",
        "--payout",
        "menger",
        "--wmin",
        "1",
        "--wmax",
        "10",
        "--points",
        "3",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "wealth,breakeven_price\n1.0,\n3.1622776601683795,\n10.0,\n"
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("3 of 3"));
}

#[test]
fn inset_vanishes_with_wealth_and_plunges_near_boundary() {
    let out = run(&[
        "breakeven",
        "--inset",
        "--price",
        "2",
        "--wmin",
        "1.000001",
        "--wmax",
        "1e6",
        "--points",
        "30",
        "--format",
        "csv",
    ]);
    let text = stdout(&out);
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (w, g) = l.split_once(',').unwrap();
            (w.parse().unwrap(), g.parse().unwrap())
        })
        .collect();
    assert_eq!(text.lines().next(), Some("wealth,g_bar"));
    assert!(rows[0].1 < -6.0);
    assert!(rows.last().unwrap().1.abs() < 1e-5);
    let peak = rows
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .unwrap()
        .0;
    assert!(rows[..=peak].windows(2).all(|p| p[1].1 > p[0].1));
    assert!(rows[peak..].windows(2).all(|p| p[1].1 < p[0].1));
}

#[test]
fn csv_numbers_are_plain() {
    let out = run(&[
        "simulate",
        "--wealth",
        "1234567.5",
        "--price",
        "2",
        "--rounds",
        "20",
        "--path",
        "--format",
        "csv",
    ]);
    let text = stdout(&out);
    assert!(text.starts_with("round,wealth\n0,1234567.5\n"));
    for line in text.lines().skip(1) {
        let (_, w) = line.split_once(',').unwrap();
        assert!(w.parse::<f64>().is_ok(), "{w}");
    }
}

#[test]
fn simulate_is_repeatable() {
    let args = [
        "simulate", "--mode", "time", "--wealth", "100", "--price", "2", "--rounds", "100000",
        "--seed", "42",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let v = json(&args);
    assert!(v["parameters"].get("workers").is_none());
}

#[test]
fn ensemble_histogram_half_at_one() {
    let v = json(&[
        "simulate",
        "--mode",
        "ensemble",
        "--samples",
        "1000000",
        "--wealth",
        "100",
        "--price",
        "2",
        "--seed",
        "42",
    ]);
    let stats = &v["results"]["stats"];
    let k1 = stats["frequencies"]["1"].as_f64().unwrap();
    assert!((k1 / 1e6 - 0.5).abs() < 0.002);
    assert_eq!(stats["stderr_reliable"], false);
}

#[test]
fn bankrupt_simulation_exits_2() {
    let out = run(&[
        "simulate", "--wealth", "1.5", "--price", "2.6", "--rounds", "1000",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["results"]["bankrupt_at"].as_u64().unwrap() >= 1);
}

#[test]
fn menger_grid_and_partial_sum() {
    let v = json(&["menger", "--wealth", "100", "--nmax", "1"]);
    let ps = &v["results"]["partial_sum"];
    assert!((ps["price"].as_f64().unwrap() - 63.2121).abs() < 1e-4);
    assert!(ps["difference"].as_f64().unwrap().abs() <= 1e-10);

    let out = run(&["menger", "--wealth", "100", "--format", "csv"]);
    let text = stdout(&out);
    assert!(text.contains("\n99.9,DivergesPositive,"));
    assert!(text.contains("\n100.0,Undefined,"));
}
