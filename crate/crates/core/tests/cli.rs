use std::process::{Command, Output};

use casimir_pws::output::{Row, CSV_HEADER};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir-pws")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(line: &str, name: &str) -> String {
    let idx = CSV_HEADER.split(',').position(|h| h == name).unwrap();
    line.split(',').nth(idx).unwrap().to_string()
}

#[test]
fn energy_atom_plate_exact_is_one_negative_row() {
    let o = run(&["energy", "--geometry", "atom-plate", "--L", "1", "--eps", "11.87", "--method", "exact"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], CSV_HEADER);
    let value: f64 = column(lines[1], "value").parse().unwrap();
    assert!(value < 0.0);
    assert_eq!(column(lines[1], "method"), "exact");
    assert_eq!(column(lines[1], "converged"), "true");
}

#[test]
fn plate_plate_sweep_crosses_one_once() {
    let o = run(&["sweep-eps", "--geometry", "plate-plate", "--ratio", "--points", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let ratios: Vec<f64> = text.lines().skip(1).map(|l| column(l, "ratio").parse().unwrap()).collect();
    assert_eq!(ratios.len(), 200);
    let crossings = ratios.windows(2).filter(|w| (w[0] - 1.0) * (w[1] - 1.0) < 0.0).count();
    assert_eq!(crossings, 1);
}

#[test]
fn output_is_deterministic() {
    let args = ["sweep-thickness", "--geometry", "slab-slab", "--eps", "5", "--points", "12"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 13);
}

#[test]
fn json_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let o = run(&[
        "energy", "--geometry", "slab-slab", "--L", "2", "--eA", "1", "--eps", "3", "--ratio", "--format", "json",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let rows: Vec<Row> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].geometry, "slab-slab");
    assert_eq!(rows[0].e_rel, Some(0.5));
    assert!(rows[0].value.unwrap() < 0.0);
    assert!(rows[0].ratio.unwrap() > 1.0);
}

#[test]
fn sphere_ratio_outside_anchors_is_na() {
    let o = run(&["energy", "--geometry", "sphere-plate", "--R", "1", "--L", "1", "--eps", "4", "--ratio"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(column(text.lines().nth(1).unwrap(), "ratio"), "NA");
}

#[test]
fn empty_sweep_writes_header_and_warns() {
    let o = run(&["sweep-eps", "--geometry", "atom-plate", "--points", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), format!("{CSV_HEADER}\n"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["energy", "--geometry", "cube", "--L", "1", "--eps", "2"][..],
        &["energy", "--geometry", "atom-plate", "--L", "1"],
        &["energy", "--geometry", "atom-plate", "--L", "1", "--eps", "2", "--alpha", "1"],
        &["energy", "--geometry", "atom-plate", "--L", "-1", "--eps", "2"],
        &["energy", "--geometry", "atom-plate", "--L", "1", "--eps-lorentz", "3"],
        &["frobnicate"],
        &["energy", "--geometry", "atom-plate", "--L", "1", "--eps", "2", "--jobs", "0"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn unwritable_destination_exits_two() {
    let o = run(&["energy", "--geometry", "plate-plate", "--L", "1", "--eps", "3", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn unit_length_rescales_energy() {
    let reduced = run(&["energy", "--geometry", "plate-plate", "--L", "10", "--eps", "3"]);
    let si = run(&["energy", "--geometry", "plate-plate", "--L", "10", "--eps", "3", "--unit-length", "1e-8"]);
    let v = |o: &Output| -> f64 { column(stdout(o).lines().nth(1).unwrap(), "value").parse().unwrap() };
    let l = |o: &Output| -> f64 { column(stdout(o).lines().nth(1).unwrap(), "L").parse().unwrap() };
    let scale = casimir_pws::output::HBAR_C / 1e-24;
    assert!((v(&si) / (v(&reduced) * scale) - 1.0).abs() < 1e-10);
    assert!((l(&si) - 1e-7).abs() < 1e-18);
}

#[test]
fn find_max_matches_atom_plate_peak() {
    let o = run(&["find-max", "--geometry", "atom-plate", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<Row> = serde_json::from_slice(&o.stdout).unwrap();
    let eps = rows[0].eps0.unwrap();
    assert!((eps - 14.88).abs() < 0.05, "{eps}");
    assert!((rows[0].ratio.unwrap() - 1.3212).abs() < 1e-3);
}

#[test]
fn validate_reports_every_criterion() {
    let o = run(&["validate"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().filter(|l| l.starts_with("[PASS]") || l.starts_with("[FAIL]")).collect();
    assert_eq!(lines.len(), 12);
    let all_pass = lines.iter().all(|l| l.starts_with("[PASS]"));
    assert_eq!(o.status.code(), Some(if all_pass { 0 } else { 3 }));
}
