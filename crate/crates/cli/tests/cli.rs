use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqstack")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// The `dim` column of a `degree\tdim` table.
fn dims(o: &Output) -> Vec<usize> {
    let out = stdout(o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("degree\tdim"));
    lines.map(|l| l.split('\t').nth(1).unwrap().parse().unwrap()).collect()
}

/// `(p, q, r, dim, boundary)` rows of a page dump.
fn page_rows(o: &Output) -> Vec<(usize, usize, usize, usize, bool)> {
    let out = stdout(o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("p\tq\tr\tdim\tboundary"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap(), f[3].parse().unwrap(), f[4] == "true")
        })
        .collect()
}

#[test]
fn point_groupoid_has_the_cohomology_of_a_point() {
    let o = run(&["cohomology", &fixture("point.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(dims(&o), vec![1, 0, 0, 0, 0]);
}

#[test]
fn z2_on_point_over_f2() {
    let o = run(&["equivariant", &fixture("z2_point_f2.json"), "--degrees", "0..4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(dims(&o), vec![1, 1, 1, 1, 1]);
    assert!(stderr(&o).contains("PASS diagonal = totalization"));
}

#[test]
fn field_flag_overrides_the_file() {
    let o = run(&["equivariant", &fixture("z2_point_f2.json"), "--field", "Q", "--degrees", "0..3"]);
    assert_eq!(dims(&o), vec![1, 0, 0, 0]);
    let o = run(&["equivariant", &fixture("z2_point.json"), "--field", "Fp", "--p", "2", "--trunc", "5"]);
    assert_eq!(dims(&o), vec![1, 1, 1, 1]);
}

#[test]
fn spectral_borel_dump_has_a_single_row_on_e2() {
    let o = run(&["spectral-borel", &fixture("z2_point_f2.json"), "--degrees", "0..3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let e2: Vec<_> = page_rows(&o).into_iter().filter(|r| r.2 == 2 && !r.4 && r.3 != 0).collect();
    assert!(!e2.is_empty());
    assert!(e2.iter().all(|r| r.1 == 0 && r.3 == 1));
    let err = stderr(&o);
    assert!(err.contains("PASS convergence") && err.contains("PASS E_2 identification"));
}

#[test]
fn free_actions_match_the_quotient() {
    let o = run(&["equivariant", &fixture("s0_swap.json"), "--field", "Fp", "--p", "2", "--degrees", "0..6"]);
    assert_eq!(dims(&o), vec![1, 0, 0, 0, 0, 0, 0]);
    let o = run(&["equivariant", &fixture("z2_antipodal_s1.json"), "--degrees", "0..6"]);
    assert_eq!(dims(&o), vec![1, 1, 0, 0, 0, 0, 0]);
}

#[test]
fn spectral_atlas_passes() {
    let o = run(&["spectral-atlas", &fixture("s0_swap.json"), "--trunc", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("PASS E_1 identification"));
}

#[test]
fn acyclic_coefficient_complex_kills_every_page() {
    for mode in ["atlas", "borel"] {
        let o = run(&["hyper", &fixture("z2_acyclic_complex.json"), "--degrees", "0..2", "--mode", mode]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(page_rows(&o).iter().filter(|r| r.2 >= 1 && !r.4).all(|r| r.3 == 0));
    }
}

#[test]
fn cartan_point_with_circle() {
    let o = run(&["cartan", &fixture("cartan_point.json"), "--poly-trunc", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(dims(&o), vec![1, 0, 1, 0, 1, 0, 1, 0]);
    let o = run(&["cartan", &fixture("cartan_free_circle.json"), "--poly-trunc", "3"]);
    assert_eq!(dims(&o), vec![1, 0, 0, 0, 0, 0]);
}

#[test]
fn su2_from_torus_and_weyl_group() {
    let o = run(&["cartan", &fixture("su2_torus_weyl.json"), "--poly-trunc", "5", "--degrees", "0..8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(dims(&o), vec![1, 0, 0, 0, 1, 0, 0, 0, 1]);
    let o = run(&["cartan", &fixture("su2_point.json"), "--poly-trunc", "4"]);
    assert_eq!(dims(&o), vec![1, 0, 0, 0, 1, 0, 0, 0]);
}

#[test]
fn getzler_job_agrees_with_borel() {
    let o = run(&["getzler", &fixture("z2_sign_point.json"), "--degrees", "0..3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(dims(&o), vec![0, 0, 0, 0]);
    let o = run(&["getzler", &fixture("z2_point_f2.json"), "--degrees", "0..3"]);
    assert_eq!(dims(&o), vec![1, 1, 1, 1]);
}

#[test]
fn non_associative_table_is_located() {
    let o = run(&["equivariant", &fixture("z2_bad_assoc.json")]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("/group/mul/1/0"), "{err}");
    assert!(stdout(&o).is_empty());
}

#[test]
fn check_accepts_the_swap_action() {
    let o = run(&["check", &fixture("s0_swap.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("PASS functoriality of the action"));
    let o = run(&["cartan", &fixture("su2_point.json"), "--check-only", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v.get("table").is_none());
}

#[test]
fn missing_inputs_are_input_errors() {
    let o = run(&["cartan", &fixture("s0_swap.json")]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["equivariant", &fixture("z2_point.json"), "--degrees", "0..5", "--trunc", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["equivariant", &fixture("z2_point.json"), "--field", "Fp", "--p", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["equivariant", "/nonexistent.json"]);
    assert_eq!(o.status.code(), Some(2));
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_eqstack"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn schema_errors_carry_pointers() {
    let cases = [
        (r#"{"groupoid": {"objects": ["x"], "morphisms": [{"src": 0}], "comp": [[0]]}}"#, "/groupoid/morphisms/0"),
        (r#"{"groupoid": {"objects": ["x"], "morphisms": [{"src": 0, "tgt": 0}], "comp": [[0, 1]]}}"#, "/groupoid/comp/0"),
        (r#"{"groupoid": {"objects": ["x"], "morphisms": [{"src": 0, "tgt": 0}], "comp": [[null]]}}"#, "/groupoid/comp/0/0"),
        (
            r#"{"group": {"elements": ["e","s"], "mul": [[0,1],[1,0]]},
                "groupoid": {"objects": ["x"], "morphisms": [{"src": 0, "tgt": 0}], "comp": [[0]]},
                "coefficients": {"module": {"dim": 1, "rho": {"s": [["1/0"]]}}}}"#,
            "/coefficients/module/rho/s/0/0",
        ),
        (r#"{"lie": {"dim": 2, "structure": [[0, 1, 0, 1]]}}"#, "/lie/0/1"),
        (r#"[1, 2]"#, "at /:"),
    ];
    for (doc, pointer) in cases {
        let o = run_stdin(&["check", "-"], doc);
        assert_eq!(o.status.code(), Some(2), "{doc}");
        assert!(stderr(&o).contains(pointer), "{doc}: {}", stderr(&o));
    }
}

#[test]
fn rational_strings_are_exact() {
    let doc = r#"{"group": {"elements": ["e","s"], "mul": [[0,1],[1,0]]},
        "groupoid": {"objects": ["x"], "morphisms": [{"src": 0, "tgt": 0}], "comp": [[0]]},
        "coefficients": {"field": "Q", "module": {"dim": 1, "rho": {"s": [["-6/6"]]}}}}"#;
    let o = run_stdin(&["equivariant", "-", "--degrees", "0..2"], doc);
    assert_eq!(dims(&o), vec![0, 0, 0]);
    let bad = doc.replace("-6/6", "1/2");
    assert_eq!(run_stdin(&["check", "-"], &bad).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["spectral-atlas", "z2_antipodal_s1.json", "--trunc", "4", "--format", "json"],
        vec!["cartan", "su2_torus_weyl.json", "--format", "json"],
    ] {
        let path = fixture(args[1]);
        let mut a = args.clone();
        a[1] = &path;
        let first = run(&a);
        let second = run(&a);
        assert_eq!(first.status.code(), Some(0));
        assert_eq!(first.stdout, second.stdout);
    }
}
