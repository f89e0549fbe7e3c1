use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyext")).args(args).env("NO_COLOR", "1").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    stdout(&o)
}

#[test]
fn ext_text() {
    assert_eq!(ok(&["ext", "--from", "gamma:3", "--to", "s:3"]), "Z/2\n");
    assert_eq!(ok(&["ext", "--from", "lambda:2", "--to", "lambda:2"]), "0\n");
    assert_eq!(ok(&["ext", "--from", "G:4", "--to", "S:4"]), "Z/2 + Z/3\n");
}

#[test]
fn ext_json_schema() {
    let text = ok(&["ext", "--from", "gamma:4", "--to", "s:4", "--json"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["group"]["invariant_factors"], serde_json::json!([6]));
    assert_eq!(v["group"]["free_rank"], 0);
    assert_eq!(v["primary"], serde_json::json!(["Z/2", "Z/3"]));
    assert_eq!(v["display"], "Z/2 + Z/3");
    assert_eq!(v["status"], "paper-verified");
    assert_eq!(v["problem"]["from"], "gamma:4");
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys.len(), 6, "{keys:?}");
    for key in ["generators", "candidate_mazes", "relation_rank", "d_rows", "d_cols", "millis"] {
        assert!(v["diagnostics"].get(key).is_some(), "missing diagnostics.{key}");
    }
    assert_eq!(serde_json::to_value(serde_json::from_str::<Value>(&text).unwrap()).unwrap(), v);

    let frontier: Value = serde_json::from_str(&ok(&["ext", "--from", "s:2", "--to", "s:4", "--json"])).unwrap();
    assert_eq!(frontier["status"], "frontier");
    let timed: Value =
        serde_json::from_str(&ok(&["ext", "--from", "s:2", "--to", "s:2", "--json", "--timings"])).unwrap();
    assert!(timed["diagnostics"]["millis"].is_u64());
}

#[test]
fn text_and_json_agree() {
    for (from, to) in [("s:2", "lambda:2"), ("gamma:3", "s:3"), ("s:1", "s:4"), ("gamma:2", "s:1")] {
        let text = ok(&["ext", "--from", from, "--to", to]);
        let v: Value = serde_json::from_str(&ok(&["ext", "--from", from, "--to", to, "--json"])).unwrap();
        assert_eq!(text.trim_end(), v["display"]);
    }
}

#[test]
fn deterministic_output() {
    for args in [
        &["ext", "--from", "gamma:4", "--to", "s:4", "--json"][..],
        &["table", "--max-degree", "3"],
        &["mazes", "2", "3", "4"],
    ] {
        assert_eq!(ok(args), ok(args), "{args:?}");
    }
    assert_eq!(
        ok(&["--threads", "1", "table", "--max-degree", "3"]),
        ok(&["--threads", "4", "table", "--max-degree", "3"])
    );
}

fn block(table: &str, m: usize, n: usize) -> Vec<Vec<String>> {
    let title = format!("Ext^1 (m={m}, n={n})");
    let lines: Vec<&str> =
        table.lines().skip_while(|l| !l.starts_with(&title)).skip(1).take_while(|l| !l.is_empty()).collect();
    lines
        .iter()
        .map(|l| l.split("  ").map(str::trim).filter(|s| !s.is_empty()).skip(1).map(String::from).collect())
        .collect()
}

#[test]
fn quadratic_table() {
    let t = ok(&["table", "--max-degree", "2"]);
    let expected = [["0", "Z/2", "0"], ["0", "0", "Z/2"], ["0", "0", "0"]];
    assert_eq!(block(&t, 2, 2), expected.map(|r| r.map(String::from).to_vec()).to_vec());
}

#[test]
fn degree_one_table_is_zero() {
    let t = ok(&["table", "--max-degree", "1"]);
    let cells = block(&t, 1, 1);
    assert_eq!(cells.len(), 3);
    assert!(cells.iter().flatten().all(|c| c == "0"));
    assert!(!t.contains("frontier"));
}

#[test]
fn cubic_diagonal_table() {
    let t = ok(&["table", "--max-degree", "3", "--diagonal"]);
    assert!(!t.contains("m=1, n=2"));
    let cells = block(&t, 3, 3);
    assert_eq!(cells[0][1], "Z/2");
    assert_eq!(cells[1][2], "Z/2");
    assert_eq!(cells[2][0], "Z/2");
}

#[test]
fn table_marks_frontier_and_aborts() {
    let t = ok(&["table", "--max-degree", "2", "gamma", "s"]);
    assert!(t.contains("Z/2 *"), "{t}");
    assert!(t.contains("* frontier"));
    let t = ok(&["--max-mazes", "2", "table", "--max-degree", "2", "s"]);
    assert!(t.contains("—(abort)"), "{t}");
}

#[test]
fn action_examples() {
    assert_eq!(ok(&["action", "gamma:3", "1>1,1>2", "e1[3]"]), "e1[2]*e2[1] + e1[1]*e2[2]\n");
    assert_eq!(ok(&["action", "s:3", "1>1,2>2,2>2", "e1*e2^2"]), "2*e1*e2^2\n");
    assert_eq!(ok(&["action", "s:2", "1>1,1>2,1>3", "e1^2"]), "0\n");
    let o = run(&["action", "s:3", "1>1,2>2", "e1^3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("domain"));
}

#[test]
fn maze_listing() {
    assert_eq!(ok(&["mazes", "1", "1", "2"]), "1>1\n1>1,1>1\n2 mazes\n");
    assert_eq!(ok(&["mazes", "2", "2", "2"]), "1>1,2>2\n1>2,2>1\n2 mazes\n");
    assert_eq!(ok(&["mazes", "2", "3", "2"]), "0 mazes\n");
}

#[test]
fn selftest_quick() {
    let out = ok(&["selftest", "quick"]);
    assert!(out.trim_end().ends_with("checks passed"), "{out}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["ext", "--from", "x:3", "--to", "s:3"]).status.code(), Some(1));
    assert_eq!(run(&["ext", "--from", "s:0", "--to", "s:3"]).status.code(), Some(1));
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    let o = run(&["--max-mazes", "10", "ext", "--from", "gamma:4", "--to", "s:4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("405 candidate mazes"), "{}", stderr(&o));

    let o = run(&["ext", "--from", "s:7", "--to", "s:1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--allow-large"));
    assert_eq!(run(&["--allow-large", "ext", "--from", "s:7", "--to", "s:1"]).status.code(), Some(0));
}

#[test]
fn dump_matrices() {
    let dir = std::env::temp_dir().join(format!("polyext-dump-{}", std::process::id()));
    ok(&["ext", "--from", "gamma:3", "--to", "s:3", "--dump-matrices", dir.to_str().unwrap()]);
    let d = std::fs::read_to_string(dir.join("gamma3_s3_D.txt")).unwrap();
    let eval = std::fs::read_to_string(dir.join("gamma3_s3_evaluation.txt")).unwrap();
    let json: Value = serde_json::from_str(&ok(&["ext", "--from", "gamma:3", "--to", "s:3", "--json"])).unwrap();
    let dims = format!("{} {}", json["diagnostics"]["d_rows"], json["diagnostics"]["d_cols"]);
    assert_eq!(d.lines().next().unwrap(), dims);
    assert!(eval.lines().count() > 1);
    std::fs::remove_dir_all(dir).unwrap();
}
