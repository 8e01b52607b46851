use std::path::PathBuf;
use std::process::{Command, Output};

fn bvp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bvp")).args(args).output().unwrap()
}

fn corpus(file: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "corpus", file].iter().collect();
    p.to_string_lossy().into_owned()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bvp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn solve_example_one_csv() {
    let o = bvp(&["solve", &corpus("ex1.bvp"), "--n", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "t,y,d1y,exact,error");
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 201);
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[200][0], 1.0);
    let worst = rows.iter().map(|r| r[4]).fold(0.0, f64::max);
    assert!(worst <= 1e-9, "{worst}");
    assert!(stderr(&o).contains("max_error="));
    assert!(stderr(&o).contains("elapsed_ms="));
}

#[test]
fn solve_uses_file_degree_and_samples() {
    let o = bvp(&["solve", &corpus("ex2.bvp"), "--samples", "11"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next().unwrap(), "t,y,d1y,d2y,d3y,exact,error");
    assert_eq!(out.lines().count(), 12);
    assert!(stderr(&o).contains("n=9 "));
}

#[test]
fn solve_table_format() {
    let o = bvp(&["solve", &corpus("ex1.bvp"), "--samples", "3", "--format", "table"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 4);
    assert!(out.lines().next().unwrap().split_whitespace().eq(["t", "y", "d1y", "exact", "error"]));
}

#[test]
fn solve_output_is_bit_identical_across_runs() {
    let a = bvp(&["solve", &corpus("ex4.bvp")]);
    let b = bvp(&["solve", &corpus("ex4.bvp")]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn degree_below_order_is_invalid() {
    let o = bvp(&["solve", &corpus("ex1.bvp"), "--n", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("n must be ≥ order"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn missing_file_is_io_error() {
    let o = bvp(&["solve", "/nonexistent/problem.bvp"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("error[io]"));
}

#[test]
fn malformed_file_is_parse_error() {
    let p = temp_file("bad.bvp", "order = 2\ninterval = [0, 1]\nrhs = sin(t\nbc: y(0) = 0\nbc: y(1) = 0\n");
    let o = bvp(&["solve", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[parse]"), "{}", stderr(&o));
}

#[test]
fn singular_system_exit_code() {
    let p = temp_file(
        "singular.bvp",
        "order = 2\ninterval = [0, 1]\nrhs = 0\nbc: y'(0) = 0\nbc: y'(1) = 0\ncoeff 2 = 0\n",
    );
    let o = bvp(&["solve", p.to_str().unwrap(), "--n", "8"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).starts_with("error[singular]"));
}

#[test]
fn usage_error_is_invalid() {
    let o = bvp(&["solve"]);
    assert_eq!(o.status.code(), Some(1));
    let o = bvp(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn converge_table() {
    let o = bvp(&["converge", &corpus("ex1.bvp"), "--n-min", "4", "--n-max", "12", "--step", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "n,max_error,residual_inf,cond_estimate");
    let ns: Vec<usize> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(ns, vec![4, 6, 8, 10, 12]);
}

#[test]
fn converge_needs_exact() {
    let p = temp_file(
        "noexact.bvp",
        "order = 2\ninterval = [0, 1]\ncoeff 2 = 1\nrhs = 1\nbc: y(0) = 0\nbc: y(1) = 1\n",
    );
    let o = bvp(&["converge", p.to_str().unwrap(), "--n-min", "4", "--n-max", "6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("exact"));
    assert!(o.stdout.is_empty());
}

#[test]
fn corpus_missing_dir() {
    let o = bvp(&["corpus", "--dir", "/nonexistent/corpus"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("not found"));
}

#[test]
fn corpus_reports_every_example() {
    let o = bvp(&["corpus"]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 5);
    for (line, file) in out.lines().zip(["ex1", "ex2", "ex3", "ex4", "ex5"]) {
        assert!(line.starts_with("PASS ") || line.starts_with("FAIL "), "{line}");
        assert!(line.contains(file));
    }
    let all_pass = out.lines().all(|l| l.starts_with("PASS"));
    assert_eq!(o.status.code(), Some(if all_pass { 0 } else { 4 }));
}
