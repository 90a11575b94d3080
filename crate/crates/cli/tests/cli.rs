use std::process::{Command, Output};

fn qclone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qclone"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn headers_match_schemas() {
    let cases: [(&[&str], &str); 6] = [
        (&["fig1", "--d-max", "3"], "d,F_opt,V,X,eta"),
        (&["fig2", "--dims", "2", "--p-grid", "0.5"], "d,p,F_A,F_B,eta_A,eta_B"),
        (&["fig3", "--d-max", "3"], "d,F_U,F_R,F_PC,F_MU"),
        (
            &["verify", "--dims", "2", "--p-grid", "0.5"],
            "d,p,F_A_frontier,F_B_frontier,F_A_choi,F_B_choi,dF_A,dF_B,iterations",
        ),
        (&["optimal", "--d", "4"], "d,F_opt,V,X,eta"),
        (&["tradeoff", "--d", "4", "--p", "0.3"], "d,p,F_A,F_B,eta_A,eta_B,v,x,y"),
    ];
    for (args, header) in cases {
        let out = qclone(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let text = stdout(&out);
        assert_eq!(text.lines().next(), Some(header));
        assert!(text.ends_with('\n') && !text.contains('\r') && !text.contains('"'));
    }
}

#[test]
fn identical_config_gives_identical_bytes() {
    let args = [
        "fig2",
        "--dims",
        "3,10",
        "--p-grid",
        "uniform:11",
        "--solver",
        "search",
        "--seed",
        "9",
    ];
    assert_eq!(qclone(&args).stdout, qclone(&args).stdout);
    let args = ["verify", "--dims", "2", "--p-grid", "0.2,0.6"];
    assert_eq!(qclone(&args).stdout, qclone(&args).stdout);
}

#[test]
fn landmark_rows() {
    let text = stdout(&qclone(&["fig1", "--d-max", "3"]));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert!(rows[0].starts_with("2,0.853553391,"));
    assert!(rows[1].starts_with("3,0.760258802,"));
}

#[test]
fn writes_output_file_and_json() {
    let dir = std::env::temp_dir().join(format!("qclone-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fig3.json");
    let out = qclone(&[
        "fig3",
        "--d-max",
        "5",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(qclone(&["nope"]).status.code(), Some(1));
    assert_eq!(qclone(&["optimal"]).status.code(), Some(1));
    assert_eq!(qclone(&["optimal", "--d", "1"]).status.code(), Some(1));
    assert_eq!(qclone(&["fig1", "--d-min", "9", "--d-max", "3"]).status.code(), Some(1));
    assert_eq!(qclone(&["verify", "--dims", "8"]).status.code(), Some(1));
    assert_eq!(qclone(&["fig2", "--p-grid", "1.5"]).status.code(), Some(1));
    assert_eq!(
        qclone(&["fig1", "--out", "/nonexistent-dir/x.csv"]).status.code(),
        Some(1)
    );
    assert_eq!(qclone(&["--help"]).status.code(), Some(0));
    let stalled = qclone(&[
        "verify",
        "--dims",
        "3",
        "--p-grid",
        "0.7",
        "--max-iter",
        "2",
        "--tol",
        "1e-14",
    ]);
    assert_eq!(stalled.status.code(), Some(2));
}

#[test]
fn verify_endpoint_cell() {
    let text = stdout(&qclone(&["verify", "--dims", "3", "--p-grid", "1.0"]));
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    assert!((row[2] - 1.0).abs() < 1e-9 && (row[4] - 1.0).abs() < 1e-6);
    assert!((row[3] - 1.0 / 3.0).abs() < 1e-9 && (row[5] - 1.0 / 3.0).abs() < 1e-6);
}
