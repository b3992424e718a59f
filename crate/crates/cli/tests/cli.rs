//! Runs the built `qchain` binary end to end.

use std::path::Path;
use std::process::{Command, Output};

use qchain_cli::records::ComputeDocument;

fn qchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qchain"))
        .args(args)
        .env_remove("QCHAIN_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn read_compute(path: &Path) -> ComputeDocument {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn compute_spin_half_both_methods() {
    let o = qchain(&[
        "compute", "--L", "3", "--N-max", "2", "--method", "both", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: ComputeDocument = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.meta.resolved_sum_range, "p");
    assert_eq!(doc.meta.precision_bits, 256);
    assert_eq!(doc.runs.len(), 2);
    assert_eq!(doc.runs[0].e, ["1/1", "-1/1"]);
    assert_eq!(doc.runs[1].e, ["1/1", "-11/5", "1/1"]);
    assert_eq!(doc.runs[0].energy.approx, "-3");
    assert_eq!(doc.runs[1].energy.approx, "-5");
    assert_eq!(doc.runs[1].a.as_ref().unwrap().approx, "0.5");
}

#[test]
fn compute_spin_three_halves_decimal() {
    let o = qchain(&["compute", "--L", "5", "--N-max", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: ComputeDocument = serde_json::from_str(&stdout(&o)).unwrap();
    // (5 + 7 sqrt 5)/4
    assert!(doc.runs[0]
        .e1
        .approx
        .starts_with("5.163118960624631968716053920279733412021082129320"));
}

#[test]
fn even_l_is_a_config_error() {
    let o = qchain(&["compute", "--L", "4", "--N-max", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("L must be odd ≥ 3"));
    let o = qchain(&["verify", "--L", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn other_config_errors() {
    assert_eq!(
        qchain(&["compute", "--L", "3", "--N-max", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qchain(&["compute", "--L", "3", "--precision-bits", "64"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qchain(&["verify", "--L", "3", "--checks", "nonsense"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qchain(&["compute", "--method", "guess"]).status.code(),
        Some(2)
    );
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_qchain"))
        .args(["compute", "--L", "5", "--N-max", "1"])
        .env("QCHAIN_PRECISION_BITS", "160")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let doc: ComputeDocument = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.meta.precision_bits, 160);
    // floor((160 - 16) log10 2) = 43 significant digits
    assert_eq!(doc.runs[0].e1.approx.len(), 44);
}

#[test]
fn json_round_trips_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("runs.json");
    let o = qchain(&[
        "compute",
        "--L",
        "3,5,7",
        "--N-max",
        "3",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(&path).unwrap();
    let mut doc = read_compute(&path);
    for r in &mut doc.runs {
        r.e1.approx.clear();
        r.energy.approx = "stale".into();
    }
    doc.refresh_decimals().unwrap();
    assert_eq!(doc.to_json(), written);
}

#[test]
fn grid_order_is_independent_of_jobs() {
    let a = qchain(&["compute", "--L", "11,3,7", "--N-max", "3", "--jobs", "1"]);
    let b = qchain(&["compute", "--L", "3,7,11", "--N-max", "3", "--jobs", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let doc: ComputeDocument = serde_json::from_str(&stdout(&a)).unwrap();
    let order: Vec<(u32, u32)> = doc.runs.iter().map(|r| (r.l, r.n)).collect();
    assert_eq!(
        order,
        [
            (3, 1),
            (3, 2),
            (3, 3),
            (7, 1),
            (7, 2),
            (7, 3),
            (11, 1),
            (11, 2),
            (11, 3)
        ]
    );
}

#[test]
fn csv_carries_decimals() {
    let o = qchain(&["compute", "--L", "3", "--N-max", "2", "--format", "csv"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# decimals derived from exact values"));
    assert_eq!(lines[1], "L,N,M,p,E1,energy,energy_per_site,A,slope");
    assert_eq!(lines[3], "3,2,5,2,1.5,-5,-1,0.5,0.5");
}

#[test]
fn verify_small_grid_all_checks() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = qchain(&[
        "verify",
        "--L",
        "3,5",
        "--N-max",
        "4",
        "--checks",
        "all",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["failed"], 0);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    for want in [
        "structure",
        "tq",
        "linearity",
        "finite-size",
        "roots-bae-z",
        "roots-sum",
    ] {
        assert!(names.contains(&want), "{want} missing");
    }
}

#[test]
fn verify_printed_closed_forms() {
    let o = qchain(&[
        "verify", "--L", "7,9,11", "--N-max", "2", "--checks", "section4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let numeric: Vec<&serde_json::Value> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["check"] == "section4")
        .collect();
    assert_eq!(numeric.len(), 6);
    for c in numeric {
        // null means the two sides rounded to the same 256-bit value
        let log2 = c["residual"]["log2"].as_f64().unwrap_or(f64::NEG_INFINITY);
        assert!(log2 < -40.0 / std::f64::consts::LOG10_2);
    }
}

#[test]
fn tampered_build_fails_tq() {
    let o = qchain(&[
        "verify",
        "--L",
        "5",
        "--N-max",
        "2",
        "--checks",
        "tq",
        "--perturb",
        "1:1/1000",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["all_pass"], false);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["check"] == "tq" && c["pass"] == false));
    assert!(stderr(&o).contains("[FAIL] tq"));
}

#[test]
fn table_shows_constant_energy_density() {
    let o = qchain(&["table", "--L", "3,5", "--N-max", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().collect())
        .collect();
    assert_eq!(rows.len(), 8);
    for r in &rows {
        let (l, n, p): (u32, u32, u32) = (
            r[0].parse().unwrap(),
            r[1].parse().unwrap(),
            r[3].parse().unwrap(),
        );
        assert_eq!(p, n * (l - 2) + (l - 3) / 2);
        match l {
            3 => assert_eq!(r[6], "-1"),
            5 => assert!(r[6].starts_with("-2.618033988")),
            _ => unreachable!(),
        }
    }
}
