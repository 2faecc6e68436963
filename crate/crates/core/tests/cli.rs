use std::io::Write;
use std::process::{Command, Output};

use syzygy_core::cli::{Payload, Report};

fn syzygy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syzygy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Report {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = syzygy(&all);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    Report::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap()
}

#[test]
fn bound_p3_rank_two() {
    let report = json(&["bound", "--catalog", "P3", "--rank", "2", "--degree", "3"]);
    let Payload::Bound(b) = &report.results[0] else {
        panic!()
    };
    assert_eq!(b.value.to_string(), "21");
    assert_eq!(report.input.variety.as_ref().unwrap().genus, 0);
}

#[test]
fn check_p2_degree_two() {
    let report = json(&["check", "--catalog", "P2", "--degree", "2", "--h0", "6"]);
    let Payload::Stability(s) = &report.results[0] else {
        panic!()
    };
    assert_eq!(s.verdict.as_str(), "Stable");
}

#[test]
fn twist_quartic_k3() {
    let report = json(&[
        "twist",
        "--catalog",
        "quartic-K3",
        "--degree",
        "0",
        "--hilbert",
        "2,0,2",
        "--regularity",
        "0",
    ]);
    let Payload::Twist(t) = &report.results[0] else {
        panic!()
    };
    assert_eq!(t.k_min, 4);
    assert_eq!(t.cauchy_bound.to_string(), "17/4");
}

#[test]
fn explicit_invariants_match_catalog() {
    let by_flags = json(&[
        "bound", "--dim", "2", "--h-top", "4", "--c1-h", "0", "--rank", "1", "--degree", "0..20",
    ]);
    let by_name = json(&[
        "bound",
        "--catalog",
        "quartic-K3",
        "--rank",
        "1",
        "--degree",
        "0..20",
    ]);
    assert_eq!(by_flags.results, by_name.results);
    assert_eq!(by_flags.results.len(), 21);
}

#[test]
fn input_file_supplies_sheaf() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(
        file,
        r#"{{"variety": {{"name": "cubic", "dim": 2, "h_top": 3, "c1_dot_h": 3}},
            "sheaf": {{"rank": 1, "degree": 0, "hilbert": ["1", "3/2", "3/2"], "regularity": 0}}}}"#
    )
    .unwrap();
    let path = file.path().to_str().unwrap();
    let report = json(&["twist", "--input", path]);
    let Payload::Twist(t) = &report.results[0] else {
        panic!()
    };
    assert!(t.k_min >= 2);

    let checked = json(&["check", "--input", path, "--twist", &t.k_min.to_string()]);
    let Payload::Stability(s) = &checked.results[0] else {
        panic!()
    };
    assert_eq!(s.verdict.as_str(), "Stable");
}

#[test]
fn malformed_input_is_a_usage_error() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(
        file,
        r#"{{"variety": {{"dim": 2, "h_top": 1, "c1_dot_h": 3, "colour": 1}}}}"#
    )
    .unwrap();
    let out = syzygy(&[
        "bound",
        "--input",
        file.path().to_str().unwrap(),
        "--rank",
        "1",
        "--degree",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
}

#[test]
fn exit_codes() {
    assert_eq!(syzygy(&["bound"]).status.code(), Some(1));
    assert_eq!(
        syzygy(&["bound", "--catalog", "P9", "--rank", "1", "--degree", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        syzygy(&["check", "--catalog", "P2", "--degree", "0", "--h0", "3"])
            .status
            .code(),
        Some(3)
    );
    let mismatch = syzygy(&[
        "twist",
        "--catalog",
        "P2",
        "--degree",
        "0",
        "--hilbert",
        "1,1,1/2",
        "--regularity",
        "0",
    ]);
    assert_eq!(mismatch.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&mismatch.stderr);
    assert!(stderr.contains("expected 3/2"), "{stderr}");
}

#[test]
fn verify_reports_itemized_failures() {
    let out = syzygy(&[
        "verify", "--grid", "small", "--seed", "0", "--format", "json",
    ]);
    let report = Report::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let Payload::Verify(summary) = &report.results[0] else {
        panic!()
    };
    let code = if summary.is_ok() { 0 } else { 2 };
    assert_eq!(out.status.code(), Some(code));
    for check in &summary.checks {
        assert_eq!(
            check.failures.len() as u64,
            check.failed.min(100),
            "{}",
            check.name
        );
    }
    assert_eq!(summary.checks.len(), 7);
}

#[test]
fn csv_one_row_per_degree() {
    let out = syzygy(&[
        "bound",
        "--catalog",
        "P2",
        "--rank",
        "1",
        "--degree",
        "0..9",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 10);
    assert_eq!(&rows[9][5], "55");
}

#[test]
fn table_output_is_default() {
    let out = syzygy(&[
        "check",
        "--catalog",
        "quartic-K3",
        "--degree",
        "12",
        "--h0",
        "20",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Inconclusive"), "{text}");
    assert!(
        text.contains("1692/88") || text.contains("423/22"),
        "{text}"
    );
}

#[test]
fn byte_identical_reruns() {
    let args = [
        "twist",
        "--catalog",
        "P3",
        "--degree",
        "0",
        "--hilbert",
        "1,11/6,1,1/6",
        "--regularity",
        "0",
        "--format",
        "json",
    ];
    assert_eq!(syzygy(&args).stdout, syzygy(&args).stdout);
}
