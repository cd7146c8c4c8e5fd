use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use vanishing::{bm, OrderSpec, Rationals, Variant};
use vanishing_cli::checks::example_points;
use vanishing_cli::io::ResultFile;

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("golden").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vanishing-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vanishing"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(name: &str, text: &str) -> String {
    let p = scratch(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn worked_example_matches_golden_file() {
    let stats = scratch("golden_stats.json");
    let out = run(&[
        "basis",
        golden("example_points.json").to_str().unwrap(),
        "--order",
        "lex",
        "--project",
        "on",
        "--stats",
        stats.to_str().unwrap(),
    ]);
    let want = std::fs::read_to_string(golden("example_lex_project.json")).unwrap();
    assert_eq!(stdout(&out), want);
    let s: Value = serde_json::from_str(&std::fs::read_to_string(stats).unwrap()).unwrap();
    assert_eq!(s["n_bar"], 2);
    assert_eq!(s["relations"], 3);
    assert!(s["wall_time"].as_f64().unwrap() >= 0.0);
}

#[test]
fn variants_write_identical_sections() {
    let points = golden("example_points.json");
    for order in ["lex", "deglex", "degrevlex:5,4,3,2,1"] {
        let sections = |variant: &str| {
            let o = run(&[
                "basis",
                points.to_str().unwrap(),
                "--order",
                order,
                "--variant",
                variant,
                "--project",
                "off",
            ]);
            let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
            (v["basis"].to_string(), v["groebner"].to_string())
        };
        assert_eq!(sections("abbott"), sections("mmm"), "{order}");
    }
}

#[test]
fn result_file_round_trips() {
    let out_path = scratch("roundtrip.json");
    let o = run(&[
        "basis",
        golden("example_points.json").to_str().unwrap(),
        "--order",
        "deglex",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let parsed = ResultFile::parse(&text).unwrap();
    assert_eq!(parsed.to_json(), text);
    assert!(parsed.stats.is_some());
    let direct = bm(&example_points(), &OrderSpec::deglex(5), Variant::Mmm).unwrap();
    assert_eq!(parsed.to_groebner(&Rationals).unwrap(), direct);
}

#[test]
fn prime_field_and_matrix_order() {
    let points = write(
        "prime.json",
        r#"{"field": {"type": "prime", "p": 101}, "n": 2, "points": [[0, 0], [1, 0], ["0", "1"], ["1/2", "3"]]}"#,
    );
    let matrix = write("order.txt", "# deglex\n1 1\n1 0\n");
    let by_matrix: Value = serde_json::from_str(&stdout(&run(&[
        "basis",
        &points,
        "--order",
        &format!("matrix:{matrix}"),
    ])))
    .unwrap();
    let by_name: Value = serde_json::from_str(&stdout(&run(&["basis", &points, "--order", "deglex"]))).unwrap();
    assert_eq!(by_matrix["groebner"], by_name["groebner"]);
    assert_eq!(by_matrix["basis"].as_array().unwrap().len(), 4);
    assert_eq!(by_matrix["order"], "matrix[1 1; 1 0]");
}

#[test]
fn malformed_inputs_exit_with_diagnostics() {
    let arity = write(
        "arity.json",
        r#"{"field": {"type": "rational"}, "n": 2, "points": [["1", "2"], ["3"]]}"#,
    );
    let o = run(&["basis", &arity]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("PointArity") && err.contains("point 2"), "{err}");

    let dup = write(
        "dup.json",
        r#"{"field": {"type": "rational"}, "n": 1, "points": [["1/2"], ["2/4"]]}"#,
    );
    let o = run(&["basis", &dup]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("DuplicatePoints"));

    let syntax = write(
        "syntax.json",
        "{\"field\": {\"type\": \"rational\"},\n \"n\": 1, \"points\": [[\"1\"]\n",
    );
    let o = run(&["basis", &syntax]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    let literal = write(
        "literal.json",
        r#"{"field": {"type": "rational"}, "n": 1, "points": [["x"]]}"#,
    );
    assert_eq!(run(&["basis", &literal]).status.code(), Some(2));

    let ok = golden("example_points.json");
    assert_eq!(
        run(&["basis", ok.to_str().unwrap(), "--order", "lex:1,2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["basis", ok.to_str().unwrap(), "--order", "grevlex"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["basis", ok.to_str().unwrap(), "--variant", "fast"]).status.code(),
        Some(2)
    );
    let o = run(&["basis", ok.to_str().unwrap(), "--variant", "abbott", "--project", "on"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(run(&["basis", "/nonexistent/points.json"]).status.code(), Some(1));
}

#[test]
fn merge_command() {
    let (a, b) = (golden("example_list_a.txt"), golden("example_list_b.txt"));
    let text = stdout(&run(&["merge", a.to_str().unwrap(), b.to_str().unwrap()]));
    assert!(text.starts_with("merged: b1 b2 a1 a2 a3 a4 b3 b4 a5 a6\n"), "{text}");
    assert!(text.contains("deltas: (3,4,3,1,2,4,4,6,1)"));

    let single = write("single.txt", "1,2,3\n");
    let text = stdout(&run(&["merge", &single, &single]));
    assert!(text.contains("deltas: (4)"), "{text}");

    let empty = write("empty.txt", "# nothing\n\n");
    let text = stdout(&run(&["merge", a.to_str().unwrap(), &empty]));
    assert!(text.starts_with("merged: a1 a2 a3 a4 a5 a6\n"));
    assert!(text.contains("element comparisons: 0\ndelta comparisons: 0"));

    let unsorted = write("unsorted.txt", "2,0\n1,0\n");
    assert_eq!(run(&["merge", &unsorted, &empty]).status.code(), Some(1));
    let wide = write("wide.txt", "1,2,3,4\n");
    assert_eq!(run(&["merge", &single, &wide]).status.code(), Some(1));
    let junk = write("junk.txt", "1,a\n");
    assert_eq!(run(&["merge", &junk, &single]).status.code(), Some(2));
}

#[test]
fn bench_spoly_command() {
    let text = stdout(&run(&["bench-spoly", "--s", "10"]));
    assert!(text.contains("= 21 (3s-1 = 29)"), "{text}");
    assert!(text.contains("naive merge: 97"), "{text}");
    let text = stdout(&run(&["bench-spoly", "--s", "3"]));
    assert!(text.contains("|b| = 1"), "{text}");
    assert_eq!(run(&["bench-spoly", "--s", "1"]).status.code(), Some(1));
}

#[test]
fn functional_command() {
    // Multiplication by x on k[x]/(x^2 (x - 1)) in the basis 1, x, x^2.
    let sys = write(
        "system.json",
        r#"{"field": {"type": "rational"}, "n": 2, "m": 3,
            "psi_one": ["1", "0", "0"],
            "matrices": [[["0","0","0"],["1","0","0"],["0","1","1"]],
                         [["0","0","0"],["0","0","0"],["0","0","0"]]]}"#,
    );
    let v: Value = serde_json::from_str(&stdout(&run(&[
        "functional",
        &sys,
        "--order",
        "lex",
        "--project",
        "off",
    ])))
    .unwrap();
    assert_eq!(v["basis"].to_string(), "[[0,0],[1,0],[2,0]]");
    assert_eq!(v["stats"]["rank"], 3);
    let p: Value = serde_json::from_str(&stdout(&run(&["functional", &sys, "--order", "lex"]))).unwrap();
    assert_eq!(p["groebner"], v["groebner"]);
    assert_eq!(p["projection"]["ess"].to_string(), "[1]");

    let bad = write(
        "noncommuting.json",
        r#"{"field": {"type": "rational"}, "n": 2, "m": 2, "psi_one": ["1", "0"],
            "matrices": [[["0","1"],["0","0"]], [["0","0"],["1","0"]]]}"#,
    );
    let o = run(&["functional", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("InconsistentSystem"));
}
