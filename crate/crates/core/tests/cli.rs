use std::process::{Command, Output};

fn qbool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbool")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

#[test]
fn analyze_emits_versioned_json() {
    let out = qbool(&["analyze", "--fn", "parity:11", "--n", "2", "--s", "0.6"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["function"]["truth_table"], "6");
    let report = &doc["points"][0]["report"];
    for key in ["p_greedy", "p_global", "p_pgm"] {
        assert!((report[key].as_f64().unwrap() - 0.82).abs() < 1e-9, "{key}");
    }
    assert_eq!(doc["certificate"]["coefficients"]["m"], 2);
}

#[test]
fn analyze_majority_reports_witness() {
    let out = qbool(&["analyze", "--fn", "maj", "--n", "3", "--s", "0.5"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["certificate"]["verdict"], "NOT_AFFINE");
    assert_eq!(doc["certificate"]["failure_stage"], "COUNTING");
    assert!(doc["certificate"]["witness"]["L"].is_u64());
    assert!(doc["points"][0]["report"]["gap"].as_f64().unwrap() > 1e-6);
}

#[test]
fn sweep_csv_is_byte_deterministic() {
    let args = ["sweep", "--fn", "and", "--n", "3..5", "--s", "0.2:0.8:4"];
    let a = qbool(&args);
    let b = qbool(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,s,p_greedy,p_global,p_pgm,gap,bk_slack,closed_form"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 12);
    assert!(rows[0].starts_with("3,0.2,"));
    assert!(rows[11].starts_with("5,0.8,"));
}

#[test]
fn sweep_json_and_output_file() {
    let path = std::env::temp_dir().join(format!("qbool-sweep-{}.json", std::process::id()));
    let out =
        qbool(&["sweep", "--fn", "maj", "--n", "3", "--s", "0.5", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 1);
}

#[test]
fn enumerate_counts_affine_functions() {
    let out = qbool(&["enumerate", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("truth_table,class,affine,counting,gap_s0.3,gap_s0.5,gap_s0.7"));
    assert_eq!(text.lines().count(), 1 + 256 + 1);
    let footer = text.lines().last().unwrap();
    assert!(footer.contains("affine=16 expected_affine=16 counting_holds=16"), "{footer}");
    assert_eq!(qbool(&["enumerate", "--n", "5"]).status.code(), Some(2));
}

#[test]
fn verify_lists_named_checks() {
    let out = qbool(&["verify", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in ["barnum_knill_lower", "greedy_equals_pgm", "dual_path_helstrom", "affine_count"] {
        assert!(text.lines().any(|l| l.starts_with("PASS") && l.contains(name)), "{name}");
    }
    let out = qbool(&["verify", "--n", "2", "--format", "csv"]);
    assert!(stdout(&out).starts_with("check,passed,worst,comparison,bound,samples\n"));
}

#[test]
fn sample_is_reproducible_per_seed() {
    let args = ["sample", "--fn", "parity:11", "--n", "2", "--s", "0.6", "--trials", "50000", "--seed", "9"];
    let a = qbool(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, qbool(&args).stdout);
    let row = stdout(&a).lines().nth(1).unwrap().to_string();
    let z: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
    assert!(z.abs() < 5.0);
    let other = qbool(&["sample", "--fn", "parity:11", "--n", "2", "--s", "0.6", "--trials", "50000", "--seed", "10"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["analyze", "--n", "2", "--s", "0.5"][..],
        &["analyze", "--fn", "and", "--n", "2", "--s", "1.5"],
        &["analyze", "--fn", "maj", "--n", "4", "--s", "0.5"],
        &["analyze", "--fn", "raw:3:8", "--s", "0.5"],
        &["sweep", "--fn", "and", "--n", "3..2"],
        &["sample", "--fn", "and", "--n", "2", "--s", "0.5", "--trials", "0"],
        &["bogus"],
    ] {
        assert_eq!(qbool(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn tolerance_override_surfaces_invariant_violation() {
    // the PGM and greedy values differ by a few 1e-12 at n = 9
    let out = qbool(&["analyze", "--fn", "maj", "--n", "9", "--s", "0.5", "--tol", "1e-14"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
