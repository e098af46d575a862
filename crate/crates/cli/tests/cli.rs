use std::process::Command;

fn kgraph(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_kgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn export_then_validate_roundtrips_with_exit_0() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.txt");
    let out = kgraph(&["export-su3", file.to_str().unwrap()]);
    assert!(out.status.success());
    let out = kgraph(&["validate", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("table_bijective_1_2"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn validate_reports_missing_squares_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.txt");
    kgraph(&["export-su3", file.to_str().unwrap()]);
    let text = std::fs::read_to_string(&file).unwrap();
    let pruned: String = text.lines().take_while(|l| *l != "SQUARES").collect::<Vec<_>>().join("\n");
    std::fs::write(&file, pruned + "\nSQUARES\n").unwrap();
    let out = kgraph(&["validate", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}

#[test]
fn garbage_input_is_a_usage_error_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.txt");
    std::fs::write(&file, "not a graph\n").unwrap();
    let out = kgraph(&["validate", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn paths_lists_the_ambiguous_pair() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.txt");
    kgraph(&["export-su3", file.to_str().unwrap()]);
    let out = kgraph(&[
        "paths", file.to_str().unwrap(), "--from", "CZ", "--to", "AY", "--degree", "1,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("2 path(s)"), "{text}");

    let out = kgraph(&[
        "paths", file.to_str().unwrap(), "--from", "QQ", "--to", "AY", "--degree", "1,1",
    ]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn verify_rejects_shallow_truncation_with_exit_2() {
    let out = kgraph(&["su3-verify", "--dim", "4", "--depth", "6"]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn verify_rejects_oversized_truncation_with_exit_2() {
    let out = kgraph(&["su3-verify", "--dim", "400"]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("cap"), "{err}");
}

#[test]
fn verify_report_is_valid_json_and_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let f1 = dir.path().join("r1.json");
    let f2 = dir.path().join("r2.json");
    for f in [&f1, &f2] {
        let out = kgraph(&[
            "su3-verify", "--dim", "8", "--depth", "4", "--out", f.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{out:?}");
    }
    let a = std::fs::read(&f1).unwrap();
    let b = std::fs::read(&f2).unwrap();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["schema"], 1);
    assert!(v["checks"].as_array().unwrap().len() > 50);
}

#[test]
fn qlimit_emits_fixed_csv_header_and_slope_rows() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("q.csv");
    let out = kgraph(&[
        "qlimit", "--q", "0.25,0.125,0.0625", "--dim", "8", "--which", "1,1",
        "--out", file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = std::fs::read_to_string(&file).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("check,q,K,residual"));
    assert!(text.contains("limit_1_1,0.25,,"));
    assert!(text.contains("slope_1_1,,,"));
    assert!(text.contains("series_3,0.5,1,"));

    let out = kgraph(&["qlimit", "--q", "1.5", "--dim", "8"]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}
