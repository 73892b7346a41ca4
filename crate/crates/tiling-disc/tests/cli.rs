//! End-to-end checks of the binary: exit codes, report shapes, determinism.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tiling-disc"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn gen_writes_graph_and_meta_sidecar() {
    let dir = std::env::temp_dir().join(format!("tiling-disc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out_path = dir.join("m03.g");
    let out = run(&[
        "gen",
        "--family",
        "mod03",
        "--r",
        "3",
        "--n",
        "12",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = std::fs::read_to_string(&out_path).unwrap();
    assert!(body.starts_with("g 12 54 3\n"));
    let meta = std::fs::read_to_string(dir.join("m03.g.meta")).unwrap();
    assert_eq!(meta, "meta family=mod03 r=3 n=12 parts=3,3,3,3 X=0 Y=0\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn solve_reports_extremes_and_witnesses() {
    let mut child = bin()
        .args(["solve", "--input", "-", "--mode", "exhaustive"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .expect("binary runs");
    use std::io::Write;
    // Two disjoint labeled triangles: the unique tiling has discrepancy 2.
    let input = "g 6 6 3\ne 0 1 +1\ne 0 2 +1\ne 1 2 -1\ne 3 4 +1\ne 3 5 -1\ne 4 5 +1\n";
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("extremes min=2 max=2 count=1"));
    assert_eq!(lines.next(), Some("t 0 1 2"));
    assert_eq!(lines.next(), Some("t 3 4 5"));
}

#[test]
fn verify_extremal_passes_and_is_deterministic() {
    let args = [
        "--format",
        "csv",
        "verify-extremal",
        "--family",
        "mod1",
        "--m",
        "1",
        "--n",
        "60",
        "--samples",
        "50",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("mod1,5,60,sampled,51,0,0,PASS"));
}

#[test]
fn verify_extremal_exhaustive_small_instance() {
    let out = run(&[
        "verify-extremal",
        "--family",
        "matching",
        "--n",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("mode=exhaustive"));
    assert!(stdout(&out).trim_end().ends_with("PASS"));
}

#[test]
fn verify_templates_emits_csv_rows() {
    let out = run(&[
        "--format",
        "csv",
        "verify-templates",
        "--r-min",
        "3",
        "--r-max",
        "4",
        "--scenarios",
        "case2a,case2b",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines,
        vec![
            "scenario,r,i,s,s_prime,disc_K1,disc_K2,diff,expected,match",
            "case2a,3,0,24,9,0,-6,-6,-6,true",
            "case2b,3,0,24,9,0,-12,-12,-12,true",
        ]
    );
}

#[test]
fn threshold_scan_is_marked_exploratory() {
    let out = run(&[
        "--format",
        "csv",
        "threshold-scan",
        "--r",
        "3",
        "--n",
        "6",
        "--fractions",
        "1.0",
        "--samples",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("# EXPLORATORY"));
    // Complete graph: always feasible, extreme |disc| = (n/r) * C(r,2).
    assert!(text.contains("1,5,5,1.000,6"));
}

#[test]
fn parameter_errors_exit_2() {
    let out = run(&[
        "verify-extremal",
        "--family",
        "mod03",
        "--r",
        "5",
        "--n",
        "30",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify-templates", "--r-min", "9", "--r-max", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = [
        "--format",
        "jsonl",
        "verify-extremal",
        "--family",
        "mod2",
        "--m",
        "1",
        "--n",
        "84",
        "--samples",
        "40",
    ];
    let single = bin()
        .args(args)
        .env("TILING_DISC_THREADS", "1")
        .output()
        .unwrap();
    let many = bin()
        .args(args)
        .env("TILING_DISC_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(single.status.code(), Some(0));
    assert_eq!(stdout(&single), stdout(&many));

    let bad = bin()
        .args(args)
        .env("TILING_DISC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
