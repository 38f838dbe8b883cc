use std::path::Path;
use std::process::{Command, Output};

fn locman(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locman"))
        .args(args)
        .output()
        .expect("spawn locman")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV as (header, rows), skipping metadata lines.
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.is_empty());
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column<'a>(header: &[String], rows: &'a [Vec<String>], name: &str) -> Vec<&'a str> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i].as_str()).collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn dump_defaults_round_trips_through_scenario_flag() {
    let dir = tempfile::tempdir().unwrap();
    let first = locman(&["dump-defaults"]);
    assert!(first.status.success());
    let path = write(dir.path(), "s.txt", &stdout(&first));
    let second = locman(&["dump-defaults", "--scenario", &path]);
    assert!(second.status.success());
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn betas_square_quadrants_advanced() {
    let o = locman(&["betas"]);
    assert!(o.status.success());
    let (h, rows) = parse_csv(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert_eq!(column(&h, &rows, "x_total"), ["116"]);
    assert_eq!(column(&h, &rows, "dot_total"), ["108"]);
    assert_eq!(column(&h, &rows, "beta1_2dp"), ["0.48"]);
}

#[test]
fn betas_both_algorithms_and_hex_halves() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "hex.txt", "grid.geometry = hexagonal\ngrid.partition = halves\n");
    let o = locman(&["betas", "--scenario", &s, "--algorithm", "both"]);
    assert!(o.status.success());
    let (h, rows) = parse_csv(&stdout(&o));
    assert_eq!(column(&h, &rows, "algorithm"), ["simple", "advanced"]);
    assert_eq!(column(&h, &rows, "x_total")[1], "78");
    assert_eq!(column(&h, &rows, "dot_total")[1], "38");
}

#[test]
fn single_la_has_beta2_one() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "one.txt", "grid.partition = single\n");
    let o = locman(&["betas", "--scenario", &s]);
    assert!(o.status.success());
    let (h, rows) = parse_csv(&stdout(&o));
    assert_eq!(column(&h, &rows, "beta2"), ["1"]);
}

#[test]
fn costs_paging_row_and_as_not_below_cs() {
    let o = locman(&["costs"]);
    assert!(o.status.success());
    let (h, rows) = parse_csv(&stdout(&o));
    let paging: Vec<f64> = column(&h, &rows, "cost_paging").iter().map(|v| v.parse().unwrap()).collect();
    assert!((paging[0] - 133.98).abs() < 1e-9);
    assert!(paging[1] >= paging[0]);
}

#[test]
fn sweep_writes_points_and_optima() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = locman(&[
        "sweep", "--param", "F", "--values", "0.2,0.8,1.0,1.5", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = parse_csv(&std::fs::read_to_string(out.join("sweep_optima.csv")).unwrap());
    assert_eq!(column(&h, &rows, "k_opt")[1..], ["6", "5", "4"]);
    let (_, points) = parse_csv(&std::fs::read_to_string(out.join("sweep.csv")).unwrap());
    assert_eq!(points.len(), 4 * 30);
}

#[test]
fn figure8_peaks_at_six_for_default_f() {
    let o = locman(&["figure", "8"]);
    assert!(o.status.success());
    let (h, rows) = parse_csv(&stdout(&o));
    let f = column(&h, &rows, "F");
    let k = column(&h, &rows, "k");
    let v = column(&h, &rows, "savings");
    let best = (0..rows.len())
        .filter(|&i| f[i] == "0.8")
        .max_by(|&a, &b| v[a].parse::<f64>().unwrap().total_cmp(&v[b].parse().unwrap()))
        .unwrap();
    assert_eq!(k[best], "6");
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = locman(&[
            "simulate", "--steps", "200000", "--trials", "20000", "--seed", "7",
            "--out", out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        std::fs::read(out.join("simulate.csv")).unwrap()
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write(dir.path(), "u.txt", "traffic.lambda_x = 1\n");
    let o = locman(&["costs", "--scenario", &unknown]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("traffic.lambda_x"));

    let p = write(dir.path(), "p.txt", "savings.p_inside = 1.5\n");
    assert_eq!(locman(&["costs", "--scenario", &p]).status.code(), Some(2));

    write(dir.path(), "bad.map", "square 2 2\n0 0\n0 3\n");
    let s = write(dir.path(), "f.txt", "grid.m = 2\ngrid.partition = file:bad.map\n");
    assert_eq!(locman(&["betas", "--scenario", &s]).status.code(), Some(2));

    assert_eq!(locman(&["figure", "4"]).status.code(), Some(2));
    assert_eq!(locman(&["sweep", "--param", "nope", "--values", "1"]).status.code(), Some(2));
    assert_eq!(locman(&["betas", "--algorithm", "fancy"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "plain", "");
    let o = locman(&["costs", "--out", &file]);
    assert_eq!(o.status.code(), Some(1));
}
