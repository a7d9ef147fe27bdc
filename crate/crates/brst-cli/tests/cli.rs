use std::process::Command;

use brst::report::{from_json, to_json};

fn brst(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_brst")).args(args).output().unwrap()
}

const A1: [&str; 8] = ["--algebra", "A", "--rank", "1", "--lambda", "2", "--chi", "2"];

#[test]
fn singular_chi_is_a_config_error() {
    let out = brst(&["verify", "--algebra", "A", "--rank", "1", "--lambda", "2", "--chi", "0"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("chi not regular dominant"));
}

#[test]
fn wall_chi_accepted_with_policy_flag() {
    let out = brst(&["cohomology", "--algebra", "A", "--rank", "2", "--lambda", "1,0", "--chi", "1,0", "--allow-singular-chi", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bad_lambda_length_names_the_field() {
    let out = brst(&["verify", "--algebra", "A", "--rank", "2", "--lambda", "1", "--chi", "1,1"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda"));
}

#[test]
fn dimension_ceiling_refuses_gracefully() {
    let out = brst(&["verify", "--algebra", "A", "--rank", "2", "--lambda", "2,2", "--chi", "1,1", "--max-dim", "4"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("relative space"));
}

#[test]
fn text_digest_reports_the_residual() {
    let mut args = vec!["all"];
    args.extend(A1);
    args.extend(["--format", "text"]);
    let out = brst(&args);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("conjecture residual: ZERO"));
    assert!(text.lines().any(|l| l.starts_with("PASS clifford_relations")));

    let out = brst(&["conjecture", "--algebra", "B", "--rank", "2", "--lambda", "2,0", "--chi", "1,0", "--allow-singular-chi", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("conjecture residual: NONZERO (rank 1)"), "{text}");
}

#[test]
fn csv_has_one_row_per_table_entry() {
    let mut args = vec!["cohomology"];
    args.extend(A1);
    let json = brst(&args);
    let rep = from_json(&String::from_utf8(json.stdout).unwrap()).unwrap();
    args.extend(["--format", "csv-summary"]);
    let csv = String::from_utf8(brst(&args).stdout).unwrap();
    let c = rep.cohomology.unwrap();
    let n = c.relative.len() + c.bigraded.len() + c.absolute.len() + c.classical.koszul.len();
    assert_eq!(csv.lines().count(), n + 1);
    assert!(csv.starts_with("flavor,degree,bidegree"));
}

#[test]
fn json_round_trips_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("a.json");
    let p2 = dir.path().join("b.json");
    for p in [&p1, &p2] {
        let mut args = vec!["all", "--seed", "5", "--out", p.to_str().unwrap()];
        args.extend(["--algebra", "A", "--rank", "2", "--lambda", "1,1", "--chi", "1,1"]);
        assert_eq!(brst(&args).status.code(), Some(0));
    }
    let a = std::fs::read_to_string(&p1).unwrap();
    let b = std::fs::read_to_string(&p2).unwrap();
    assert_eq!(a, b);
    let rep = from_json(&a).unwrap();
    assert_eq!(to_json(&rep), a);
    assert_eq!(rep.seed, 5);
    assert_eq!(rep.arithmetic_mode, "exact-rational");
}
