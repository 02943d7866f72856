use std::process::{Command, Output};

fn credit_tail(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_credit-tail"))
        .args(args)
        .output()
        .expect("run credit-tail")
}

fn records(stdout: &[u8]) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(stdout)
        .records()
        .map(|r| r.unwrap())
        .collect()
}

#[test]
fn asymptotic_subcommand_prints_csv() {
    let out = credit_tail(&["asymptotic", "--n", "100,1000"]);
    assert!(out.status.success());
    let rows = records(&out.stdout);
    assert_eq!(rows.len(), 2);
    let v: f64 = rows[0][8].parse().unwrap();
    assert_eq!(format!("{v:.3e}"), "1.359e-3");
}

#[test]
fn estimate_with_markdown_to_file() {
    let dir = std::env::temp_dir().join(format!("credit-tail-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.md");
    let out = credit_tail(&[
        "estimate",
        "--m",
        "2000",
        "--method",
        "condmc",
        "--format",
        "markdown",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("| method | alpha | n | b |"));
    assert!(text.contains("| conditional | 1.5 | 500 | 0.8 |"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn config_file_with_flag_override() {
    let dir = std::env::temp_dir().join(format!("credit-tail-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.json");
    std::fs::write(
        &path,
        r#"{"alpha": [1.5, 2.0], "groups": [{"exposure": 1, "scale": 0.5, "count": 200}],
            "b": 0.5, "methods": ["naive"], "replications": 1000}"#,
    )
    .unwrap();
    let out = credit_tail(&[
        "estimate",
        "--config",
        path.to_str().unwrap(),
        "--method",
        "condmc",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = records(&out.stdout);
    assert_eq!(rows.len(), 2);
    assert!(rows
        .iter()
        .all(|r| &r[0] == "conditional" && &r[2] == "200"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn timing_flag_fills_runtime_column() {
    let out = credit_tail(&["estimate", "--m", "500", "--method", "condmc", "--timing"]);
    assert!(out.status.success());
    let rows = records(&out.stdout);
    assert!(rows[0][9].parse::<f64>().unwrap() >= 0.0);
}

#[test]
fn configuration_errors_exit_with_two() {
    for args in [
        &["estimate", "--alpha", "0.9"][..],
        &["estimate", "--b", "1.5"],
        &["estimate", "--method", "bogus"],
        &["estimate", "--m", "1"],
        &["estimate", "--format", "xml"],
        &["table", "7"],
    ] {
        let out = credit_tail(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(
            String::from_utf8_lossy(&out.stderr).contains("invalid configuration"),
            "{args:?}"
        );
    }
}

#[test]
fn empty_method_list_in_config_is_rejected() {
    let dir = std::env::temp_dir().join(format!("credit-tail-empty-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.json");
    std::fs::write(&path, r#"{"methods": []}"#).unwrap();
    let out = credit_tail(&["estimate", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn estimation_failure_exits_with_three() {
    // with the default seed neither of the two paths exceeds the threshold
    let out = credit_tail(&["es", "--m", "2", "--n", "1000", "--b", "0.95"]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = records(&out.stdout);
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][4], "");
}
