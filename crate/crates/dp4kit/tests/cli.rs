//! End-to-end checks of the dp4kit binary: JSON contracts, exit codes, and
//! reproducibility of the outputs.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dp4kit"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

fn run_ok(args: &[&str]) -> serde_json::Value {
    let out = bin().args(args).output().expect("spawn dp4kit");
    assert!(
        out.status.success(),
        "dp4kit {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn run_raw(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn dp4kit")
}

#[test]
fn numerology_matches_the_contract() {
    let v = run_ok(&["numerology", "--height", "12"]);
    assert_eq!(v["h"], 12);
    assert_eq!(v["delta"], 24);
    assert_eq!(v["chi"], -8);
    assert_eq!(v["chiOmega1"], 5);
    assert_eq!(v["params"], 17);
    assert_eq!(v["schema"], "dp4kit/1");
    // the full table runs heights 0..42 step 2
    let all = run_ok(&["numerology", "--all"]);
    assert_eq!(all["rows"].as_array().unwrap().len(), 22);
    // odd heights are rejected with the validation exit code
    let bad = run_raw(&["numerology", "--height", "13"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn cases_table_heights_match() {
    let v = run_ok(&["cases"]);
    let heights: Vec<String> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["height"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(
        heights,
        vec![
            "20n", "20n+10", "20n+8", "20n+18", "20n+16", "20n+26", "20n+24", "20n+34",
            "20n+32", "20n+42"
        ]
    );
}

#[test]
fn rrcount_reproduces_expected_dimensions() {
    for (deg, genus, expect) in [(12i64, 15i64, 1i64), (13, 20, 2), (12, 17, 3)] {
        let v = run_ok(&[
            "rrcount",
            "--deg",
            &deg.to_string(),
            "--genus",
            &genus.to_string(),
        ]);
        assert_eq!(v["count"], expect);
    }
    let cubic = run_ok(&["rrcount", "--deg", "6", "--genus", "0", "--ambient-deg", "3"]);
    assert_eq!(cubic["count"], 1);
}

#[test]
fn lattice_expression_pairings() {
    let table = tmp("cubic_table.json");
    std::fs::write(
        &table,
        r#"{"labels": ["h", "C", "E", "R'"],
            "gram": [[4, 8, 1, 3], [8, 12, 4, 4], [1, 4, -2, 2], [3, 4, 2, -2]]}"#,
    )
    .unwrap();
    let v = run_ok(&["lattice", "--table", table.to_str().unwrap(), "--expr", "2h - C + R'"]);
    assert_eq!(v["self_intersection"], -2);
    assert_eq!(v["pairings"][1], 8);
    assert_eq!(v["genus"], 0);
    // TSV output
    let out = run_raw(&[
        "lattice",
        "--table",
        table.to_str().unwrap(),
        "--expr",
        "2h - C + R'",
        "--tsv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("pairing\tvalue\n"));
    assert!(text.contains("C\t8\n"));
    // unknown label: validation error
    let bad = run_raw(&["lattice", "--table", table.to_str().unwrap(), "--expr", "2h - X"]);
    assert_eq!(bad.status.code(), Some(2));
}

fn diagonal_pencil_json(p: u64, c: [i64; 5]) -> String {
    let mut q0 = vec![vec!["0".to_string(); 5]; 5];
    let mut q1 = vec![vec!["0".to_string(); 5]; 5];
    for i in 0..5 {
        q0[i][i] = "1".into();
        q1[i][i] = c[i].rem_euclid(p as i64).to_string();
    }
    serde_json::to_string(&serde_json::json!({
        "field": {"p": p, "k": 1},
        "Q0": q0,
        "Q1": q1,
    }))
    .unwrap()
}

#[test]
fn classify_and_xi_on_a_diagonal_pencil() {
    let path = tmp("diag_pencil.json");
    std::fs::write(&path, diagonal_pencil_json(101, [0, 1, 2, 3, 4])).unwrap();
    let v = run_ok(&["classify", path.to_str().unwrap()]);
    assert_eq!(v["status"], "stable");
    assert_eq!(v["partition"].as_array().unwrap().len(), 5);
    let xi = run_ok(&["xi", path.to_str().unwrap()]);
    assert_eq!(xi["coords"].as_array().unwrap().len(), 3);
    assert_eq!(xi["weights"], serde_json::json!([1, 2, 3]));

    // a nodal pencil classifies strictly semistable with its nodes listed
    let nodal = tmp("nodal_pencil.json");
    std::fs::write(&nodal, diagonal_pencil_json(101, [0, 0, 1, 2, 3])).unwrap();
    let v = run_ok(&["classify", nodal.to_str().unwrap()]);
    assert_eq!(v["status"], "strictly-semistable");
    assert_eq!(v["singular_points"].as_array().unwrap().len(), 2);
}

#[test]
fn sixteen_lines_through_the_cli() {
    let path = tmp("lines_pencil.json");
    std::fs::write(&path, diagonal_pencil_json(11, [0, 1, 2, 4, 7])).unwrap();
    let v = run_ok(&["lines", path.to_str().unwrap(), "--ext", "1"]);
    assert_eq!(v["count"], 16);
}

#[test]
fn invariants_of_a_quintic_file() {
    let path = tmp("quintic.json");
    std::fs::write(&path, r#"["1", "0", "0", "0", "0", "1"]"#).unwrap();
    let v = run_ok(&["invariants", path.to_str().unwrap()]);
    assert_eq!(v["semistable"], true);
    // the quintuple root is unstable: all invariants vanish
    let s5 = tmp("s5.json");
    std::fs::write(&s5, r#"["0", "0", "0", "0", "0", "1"]"#).unwrap();
    let v = run_ok(&["invariants", s5.to_str().unwrap()]);
    assert_eq!(v["semistable"], false);
    assert_eq!(v["I4"], "0");
}

#[test]
fn generate_fiber_discriminant_round_trip() {
    let model = tmp("model_h20.json");
    let out = run_raw(&[
        "generate", "--case", "1", "--parity", "even", "--n", "1", "--p", "101", "--seed",
        "7", "-o", model.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&model).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["case"], 1);
    assert_eq!(parsed["alpha"], -2);

    // byte-identical regeneration
    let model2 = tmp("model_h20_again.json");
    run_raw(&[
        "generate", "--case", "1", "--parity", "even", "--n", "1", "--p", "101", "--seed",
        "7", "-o", model2.to_str().unwrap(),
    ]);
    assert_eq!(text, std::fs::read_to_string(&model2).unwrap());

    let disc = run_ok(&["discriminant", model.to_str().unwrap()]);
    assert_eq!(disc["projective_degree"], 40);
    assert_eq!(disc["squarefree"], true);

    let fiber = run_ok(&["fiber", model.to_str().unwrap(), "--t0", "3", "--t1", "1"]);
    let fiber_file = tmp("fiber.json");
    std::fs::write(&fiber_file, serde_json::to_string(&fiber).unwrap()).unwrap();
    let verdict = run_ok(&["classify", fiber_file.to_str().unwrap()]);
    assert_eq!(verdict["status"], "stable");
}

#[test]
fn census_finds_constant_sections_and_is_thread_invariant() {
    let model = tmp("model_const.json");
    run_raw(&[
        "generate", "--case", "1", "--parity", "even", "--n", "0", "--p", "3", "--seed", "1",
        "-o", model.to_str().unwrap(),
    ]);
    let single = run_raw(&["census", model.to_str().unwrap(), "--deg", "0"]);
    assert!(single.status.success());
    let threaded = run_raw(&["census", model.to_str().unwrap(), "--deg", "0", "--threads", "4"]);
    assert_eq!(single.stdout, threaded.stdout, "thread-count independence");
    let v: serde_json::Value = serde_json::from_slice(&single.stdout).unwrap();
    let sections = v["sections"].as_array().unwrap();
    assert!(!sections.is_empty());
    for s in sections {
        assert_eq!(s["height"], 0, "constant sections have height zero");
    }
    // the fiber counts agree with the section count for a constant family
    let count = v["per_fiber_counts"][0]["count"].as_u64().unwrap();
    assert_eq!(sections.len() as u64, count);
}

#[test]
fn budget_guard_exit_code() {
    let model = tmp("model_budget.json");
    run_raw(&[
        "generate", "--case", "1", "--parity", "even", "--n", "0", "--p", "3", "--seed", "1",
        "-o", model.to_str().unwrap(),
    ]);
    let refused = bin()
        .args(["census", model.to_str().unwrap(), "--deg", "1"])
        .env("DP4KIT_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(refused.status.code(), Some(3), "budget refusal exits 3");
    let forced = bin()
        .args(["census", model.to_str().unwrap(), "--deg", "1", "--force"])
        .env("DP4KIT_BUDGET", "10")
        .output()
        .unwrap();
    assert!(forced.status.success(), "--force overrides the budget");
}

#[test]
fn basepoints_split_example() {
    let quads = tmp("quads.json");
    let mk = |i: usize| {
        let mut e1 = vec![0u32; 5];
        e1[i] = 2;
        let mut e0 = vec![0u32; 5];
        e0[0] = 2;
        serde_json::json!({
            "vars": ["x0", "x1", "x2", "x3", "x4"],
            "terms": [
                {"exp": e1, "coeff": "1"},
                {"exp": e0, "coeff": "10"}
            ]
        })
    };
    std::fs::write(
        &quads,
        serde_json::to_string(&serde_json::json!({
            "field": {"p": 11, "k": 1},
            "quadrics": [mk(1), mk(2), mk(3), mk(4)],
        }))
        .unwrap(),
    )
    .unwrap();
    let v = run_ok(&["basepoints", quads.to_str().unwrap(), "--kmax", "1"]);
    assert_eq!(v["count"], 16);
}

#[test]
fn figure1_certifies_line_sections() {
    let model = tmp("model_h10.json");
    run_raw(&[
        "generate", "--case", "1", "--parity", "odd", "--n", "0", "--p", "7", "--seed", "1",
        "-o", model.to_str().unwrap(),
    ]);
    let v = run_ok(&["figure1", model.to_str().unwrap()]);
    assert_eq!(v["lines_on_quadric"], 400);
    assert_eq!(v["verified_sections"].as_array().unwrap().len(), 92);
    // the parameter table rows (2d - 1, d + 1)
    let table = v["parameter_table"].as_array().unwrap();
    assert_eq!(table[1]["secancy"], 1);
    assert_eq!(table[1]["parameters"], 2);
    assert_eq!(table[4]["secancy"], 7);
    assert_eq!(table[4]["parameters"], 5);
    assert!(table[0]["secancy"].is_null());
}

#[test]
fn expected_dims_table() {
    let v = run_ok(&["expected-dims"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[3]["variety_dim"], 30);
    assert_eq!(rows[3]["fibration_dim"], 29);
    assert_eq!(rows[3]["contracted_sections"], 16);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for args in [
        vec!["numerology", "--all"],
        vec!["cases"],
        vec!["expected-dims", "--tsv"],
    ] {
        let a = run_raw(&args);
        let b = run_raw(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn unknown_flags_exit_with_validation_code() {
    let out = run_raw(&["numerology", "--heighth", "12"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run_raw(&["nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}
