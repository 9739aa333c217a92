use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_newton-strata"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = vec!["--output", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn zeta_of_genus_four_curve() {
    let v = json(&["zeta", "hyp p:3 f:[0,1,1,2,1,2,1,1,0,1]"]);
    assert_eq!(v["zeta"], serde_json::json!(["1", "4", "13", "40", "127"]));
    assert_eq!(
        v["L"]["coeffs"],
        serde_json::json!(["1", "0", "0", "0", "6", "0", "0", "0", "81"])
    );
    assert_eq!(v["counts"], serde_json::json!([4, 10, 28, 106]));
}

#[test]
fn zeta_of_supersingular_elliptic_over_f2() {
    let v = json(&["zeta", "as p:2 h:[0,0,0,1]"]);
    assert_eq!(v["genus"], 1);
    assert_eq!(v["counts"], serde_json::json!([3]));
    assert_eq!(v["L"]["coeffs"], serde_json::json!(["1", "0", "2"]));
}

#[test]
fn zeta_rejects_singular_model() {
    let out = run(&["zeta", "hyp p:3 f:[1,0,0,1]"]);
    assert!(!out.status.success());
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("not squarefree"));
}

#[test]
fn zeta_parse_error_reports_position() {
    let out = run(&["zeta", "hyp p:3 f:[0,1,x]"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("at byte 15"));
}

#[test]
fn curve_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.txt");
    std::fs::write(&path, "hyp p:3 f:[0,1,1,2,1,2,1,1,0,1]\n").unwrap();
    let arg = format!("@{}", path.display());
    let v = json(&["zeta", &arg]);
    assert_eq!(v["curve"], "hyp p:3 f:[0,1,1,2,1,2,1,1,0,1]");
}

#[test]
fn zeta_extension_counts_agree_with_l() {
    let out = run(&["--output", "tsv", "zeta", "ap-g4-p3", "--ext", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[4], "5\t244\t244");
}

#[test]
fn np_of_curve_and_of_l_polynomial() {
    let v = json(&["np", "hyp p:3 f:[0,1,1,2,1,2,1,1,0,1]"]);
    assert_eq!(v["slopes"], "4*(1/4)+4*(3/4)");
    assert_eq!(v["p_rank"], 0);
    assert_eq!(
        v["break_points"],
        serde_json::json!([[0, 0], [4, 1], [8, 4]])
    );
    let v = json(&[
        "np",
        "--lpoly",
        r#"{"q":3,"g":4,"coeffs":["1","0","0","0","6","0","0","0","81"]}"#,
    ]);
    assert_eq!(v["slopes"], "4*(1/4)+4*(3/4)");
}

#[test]
fn np_of_ordinary_elliptic() {
    // x^3 + x^2 + 1 over F_3 takes values 1, 0, 1: six points, a = -2
    let v = json(&["np", "hyp p:3 f:[1,0,1,1]"]);
    assert_eq!(v["ordinary"], true);
    assert_eq!(v["slopes"], "1*(0)+1*(1)");
    // x^3 + 2x + 1 takes values 1, 1, 1: seven points, a = -3
    let v = json(&["np", "hyp p:3 f:[1,2,0,1]"]);
    assert_eq!(v["supersingular"], true);
}

#[test]
fn np_of_supersingular_polygon_literal() {
    let v = json(&["np", "--polygon", "8*(1/2)", "--genus", "4"]);
    assert_eq!(v["supersingular"], true);
    assert_eq!(v["report"]["codim"], 6);
    assert_eq!(v["report"]["dim_ag"], 10);
    assert_eq!(v["report"]["dim_ss"], 4);
}

#[test]
fn np_tsv_is_break_points() {
    let out = run(&["--output", "tsv", "np", "--polygon", "4*(1/4)+4*(3/4)"]);
    assert_eq!(stdout(&out), "x\ty\n0\t0\n4\t1\n8\t4\n");
}

#[test]
fn poset_node_counts() {
    for (g, n) in [(1, 2), (2, 3), (3, 5), (4, 8)] {
        let v = json(&["poset", "--genus", &g.to_string()]);
        assert_eq!(v["nodes"].as_array().unwrap().len(), n, "g = {g}");
    }
}

#[test]
fn poset_dot_is_stable() {
    let a = run(&["poset", "--genus", "4", "--format", "dot"]);
    let b = run(&["poset", "--genus", "4", "--format", "dot"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().filter(|l| l.contains("[label=")).count(), 8);
    assert_eq!(text.lines().filter(|l| l.contains("->")).count(), 8);
}

#[test]
fn verify_catalog_curves() {
    for name in ["ap-g4-p3", "blache-g11-p2", "vdgvdv-p2-R[0,1]"] {
        let out = run(&["verify", name]);
        assert!(out.status.success(), "{name}");
        assert!(stdout(&out).trim_end().ends_with("PASS"), "{name}");
    }
    let out = run(&["verify", "no-such-curve"]);
    assert!(!out.status.success());
}

#[test]
fn search_honors_limit() {
    let out = run(&[
        "search", "--family", "hyp:3:9", "--prank", "0", "--limit", "5",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 5);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["p_rank"], 0);
    }
}

#[test]
fn search_summary_file() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("summary.json");
    let out = run(&[
        "search",
        "--family",
        "hyp:3:3",
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(v["total_scanned"], 27);
    assert_eq!(v["histogram"].as_object().unwrap().len(), 2);
}

#[test]
fn search_resume_from_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("ckpt");
    let base = [
        "--workers",
        "2",
        "search",
        "--family",
        "hyp:3:5",
        "--prank",
        "1",
        "--chunk",
        "20",
    ];
    let full = stdout(&run(&base));
    std::fs::write(&ckpt, "4\n").unwrap();
    let out = run(&[&["--resume", ckpt.to_str().unwrap()][..], &base].concat());
    assert!(out.status.success());
    let tail = stdout(&out);
    assert!(full.ends_with(&tail));
    assert!(tail.lines().count() < full.lines().count());
    // 243 candidates in chunks of 20: last chunk index 12
    assert_eq!(std::fs::read_to_string(&ckpt).unwrap().trim(), "12");
}

#[test]
fn invalid_flag_combinations() {
    for args in [
        vec![
            "search",
            "--family",
            "hyp:3:5",
            "--prank",
            "0",
            "--supersingular",
        ],
        vec!["search", "--family", "hyp:3:5", "--polygon", "6*(1/2)"],
        vec!["--output", "dot", "zeta", "ap-g4-p3"],
        vec!["--workers", "0", "poset", "--genus", "2"],
        vec!["np"],
    ] {
        let out = run(&args);
        assert!(!out.status.success(), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}
