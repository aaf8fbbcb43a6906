use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_combigrid-bench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn bench_writes_csv_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let svg = dir.path().join("roof.svg");
    let o = run(&[
        "bench",
        "--levelsum-min", "4",
        "--levelsum-max", "6",
        "--dims", "2",
        "--variants", "ind,bfs-overvectorized",
        "--reps", "2",
        "--csv", csv.to_str().unwrap(),
        "--plot", svg.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let rows: Vec<_> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(rows[0].starts_with("variant,d,levels,points"));
    assert_eq!(rows.len(), 1 + 3 * 2);
    assert!(rows[1].starts_with("Ind,2,2x2,9,"));
    let plot = fs::read_to_string(&svg).unwrap();
    assert!(plot.starts_with("<svg") || plot.starts_with("<?xml"));
    assert_eq!(plot.matches("class=\"series\"").count(), 2);
}

#[test]
fn roofline_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    let svg = dir.path().join("r.svg");
    let o = run(&["bench", "--levels", "8", "--variants", "bfs", "--reps", "1", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["roofline", "--csv", csv.to_str().unwrap(), "--plot", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(fs::read_to_string(&svg).unwrap().contains("</svg>"));
}

#[test]
fn memory_cap_skips_rows() {
    let o = run(&["bench", "--levels", "10", "--variants", "ind", "--reps", "1", "--mem-cap-bytes", "1024"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row = out.lines().find(|l| l.starts_with("Ind,")).unwrap();
    let f: Vec<_> = row.split(',').collect();
    assert_eq!((f[6], f[7], f[9], f[12]), ("", "", "", ""), "{row}");
}

#[test]
fn verify_passes() {
    let o = run(&["verify", "--levels", "3,4", "--levels", "2,2,3", "--seeds", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 9);
    assert!(out.contains("36 checks over 2 grids"));
}

#[test]
fn verify_failure_exits_one() {
    // no kernel matches a dense solve to within 1e-300 on a grid this size
    let o = run(&["verify", "--levels", "6,6", "--variants", "func", "--tolerance", "1e-300"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("failed: Func on 6x6"));
}

#[test]
fn configuration_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["bench", "--levels", "3", "--variants", "nope"],
        &["bench", "--levels", "0,3"],
        &["bench", "--levels", "3", "--reps", "0"],
        &["bench", "--levels", "3", "--width", "3"],
        &["bench", "--levels", "3", "--variants", "bfs", "--layout", "row-major"],
        &["bench", "--levelsum-min", "5", "--levelsum-max", "4"],
        &["bench", "--levelsum-min", "5"],
        &["verify", "--levels", "10,10"],
        &["verify", "--levels", "3", "--tolerance=-1"],
        &["roofline", "--csv", "/nonexistent/x.csv", "--plot", "/tmp/x.svg"],
        &["scheme", "--dims", "3", "--level", "2"],
        &["frobnicate"],
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn scheme_prints_members() {
    let o = run(&["scheme", "--dims", "2", "--level", "4", "--hierarchize", "bfs-overvectorized"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("5 grids, coefficient sum 1"));
    assert!(out.contains("combined interpolant at centre 1 (exact 1)"));
}
