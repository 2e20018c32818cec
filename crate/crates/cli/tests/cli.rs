use std::process::{Command, Output};

fn gpancake(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpancake"))
        .args(args)
        .env_remove("GPANCAKE_VERTEX_CAP")
        .env_remove("GPANCAKE_DENSE_CAP")
        .env_remove("GPANCAKE_EXACT_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_gap_on_smallest_two_colour_graph() {
    let o = gpancake(&["verify", "gap", "--m", "2", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("0.585786437627"), "{text}");
    assert!(text.trim_end().ends_with("PASS"), "{text}");
}

#[test]
fn verify_csv_has_header_and_rows() {
    let o = gpancake(&["verify", "gap", "--m", "3", "--n", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,n,check,value,bound,passed"));
    assert!(
        lines.any(|l| l.starts_with("3,2,gap,1.69722436227,2,true")),
        "{text}"
    );
}

#[test]
fn gsw_source_rejects_colour_count() {
    let o = gpancake(&["spectrum", "--source", "gsw", "--m", "2", "--n", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let ok = gpancake(&["spectrum", "--source", "gsw", "--n", "4"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(
        stdout(&ok),
        "index,eigenvalue,source\n1,8,closed-form\n2,6,closed-form\n3,2,closed-form\n4,0,closed-form\n"
    );
}

#[test]
fn spectrum_json_is_rounded_and_indexed_from_one() {
    let o = gpancake(&["spectrum", "--m", "2", "--n", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[0]["index"], 1);
    assert_eq!(rows[0]["eigenvalue"], 2.0);
    assert_eq!(rows[1]["eigenvalue"].to_string(), "1.41421356237");
    assert_eq!(rows[0]["source"], "direct");
}

#[test]
fn quotient_formula_and_counted_agree() {
    let expected = "# Q m=2 n=2 order=4\n0,0,1,1\n0,1,1,0\n1,1,0,0\n1,0,0,1\n";
    let formula = gpancake(&["quotient", "--m", "2", "--n", "2"]);
    let counted = gpancake(&["quotient", "--m", "2", "--n", "2", "--empirical"]);
    assert_eq!(stdout(&formula), expected);
    assert_eq!(stdout(&counted), expected);
}

#[test]
fn build_writes_edge_list_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p22.txt");
    let o = gpancake(&[
        "build",
        "--m",
        "2",
        "--n",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("2 2 8 2"));
    assert_eq!(lines.count(), 8);
}

#[test]
fn capacity_errors_exit_three() {
    let o = gpancake(&["spectrum", "--m", "3", "--n", "4", "--dense-cap", "100"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("capacity exceeded"));

    let o = Command::new(env!("CARGO_BIN_EXE_gpancake"))
        .args(["build", "--m", "2", "--n", "4"])
        .env("GPANCAKE_VERTEX_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        gpancake(&["verify", "multiplicity", "--m", "2", "--n", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        gpancake(&["quotient", "--m", "1", "--n", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        gpancake(&[
            "verify",
            "gap",
            "--m",
            "2",
            "--n",
            "2",
            "--margin-tol",
            "0.5"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        gpancake(&["verify", "gap", "--m", "0", "--n", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(gpancake(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn multiplicity_uses_exact_elimination() {
    let o = gpancake(&[
        "verify",
        "multiplicity",
        "--m",
        "4",
        "--n",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "m,n,check,value,bound,passed\n4,3,mult(2)[exact],72,2,true\n4,3,mult(4)[exact],23,3,true\n"
    );
}

#[test]
fn scans_write_csv_and_note() {
    let o = gpancake(&[
        "scan",
        "conjecture2",
        "--m",
        "2",
        "--n-max",
        "6",
        "--dense-cap",
        "500",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("m,n,vertices,graph_gap,quotient_gap,abs_diff,equal\n"));
    assert!(
        text.contains("2,2,8,0.585786437627,0.585786437627,0,true"),
        "{text}"
    );
    assert!(
        text.lines().last().unwrap().starts_with("# stopped at n=5"),
        "{text}"
    );

    let o = gpancake(&["scan", "gap-trend", "--m", "3", "--n-max", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 10);
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["spectrum", "--m", "3", "--n", "3"][..],
        &[
            "verify",
            "containment",
            "--m",
            "2",
            "--n",
            "3",
            "--format",
            "csv",
        ],
        &["scan", "conjecture2", "--m", "3", "--n-max", "3"],
    ] {
        let a = gpancake(args);
        let b = gpancake(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
