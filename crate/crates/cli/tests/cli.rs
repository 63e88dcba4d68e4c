//! End-to-end tests of the `srsolver` binary: every subcommand is run as a
//! child process and judged on exit code, stdout, and the JSON error
//! channel on stderr.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_srsolver"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = bin();
    cmd.args(args);
    for (key, value) in env {
        cmd.env(key, value);
    }
    cmd.output().expect("binary runs")
}

fn stdout_text(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_error(output: &Output) -> Value {
    let text = String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8");
    serde_json::from_str::<Value>(text.trim()).expect("stderr holds one JSON object")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn write_file(dir: &TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, content).expect("write test input");
    path
}

/// P3: 1 - 2 - 3.
fn p3(dir: &TempDir) -> PathBuf {
    write_file(dir, "p3.gr", "p tw 3 2\n1 2\n2 3\n")
}

fn path_graph_text(n: usize) -> String {
    let mut text = format!("p tw {n} {}\n", n - 1);
    for i in 1..n {
        text.push_str(&format!("{i} {}\n", i + 1));
    }
    text
}

const DOMSET: [&str; 4] = ["--sigma", "cofinite:0", "--rho", "cofinite:1"];

// -------------------------------------------------------------------
// solve

#[test]
fn min_k_for_a_dominating_set_of_p3_is_one() {
    let dir = TempDir::new().unwrap();
    let graph = p3(&dir);
    let out = run(&[
        "solve",
        "--graph",
        graph.to_str().unwrap(),
        "--sigma",
        "cofinite:0",
        "--rho",
        "cofinite:1",
        "--min-k",
        "--max-violations",
        "0",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_text(&out), "1\n");
}

#[test]
fn witness_for_the_one_vertex_dominating_set_is_the_middle_vertex() {
    let dir = TempDir::new().unwrap();
    let graph = p3(&dir);
    let mut args = vec!["solve", "--graph", graph.to_str().unwrap()];
    args.extend_from_slice(&DOMSET);
    args.extend_from_slice(&["--witness", "1,0"]);
    let out = run(&args);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout_text(&out), "2\n");
}

#[test]
fn witness_of_an_infeasible_cell_is_none() {
    let dir = TempDir::new().unwrap();
    let graph = p3(&dir);
    let mut args = vec!["solve", "--graph", graph.to_str().unwrap()];
    args.extend_from_slice(&DOMSET);
    args.extend_from_slice(&["--witness", "1,3"]);
    let out = run(&args);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout_text(&out), "none\n");
}

#[test]
fn json_report_carries_schema_and_row_major_tables() {
    let dir = TempDir::new().unwrap();
    let graph = p3(&dir);
    let mut args = vec!["solve", "--graph", graph.to_str().unwrap()];
    args.extend_from_slice(&DOMSET);
    let out = run(&args);
    assert_eq!(exit_code(&out), 0);
    let report: Value = serde_json::from_str(&stdout_text(&out)).expect("stdout is JSON");
    assert_eq!(report["schema"], 1);
    assert_eq!(report["n"], 3);
    assert_eq!(report["sigma"], "cofinite:0");
    assert_eq!(report["exact"].as_array().unwrap().len(), 4);
    assert_eq!(report["exact"][0].as_array().unwrap().len(), 4);
    // k=1: selecting the middle vertex dominates everything.
    assert_eq!(report["exact"][1][0], true);
    // k=0: all three vertices are undominated.
    assert_eq!(report["exact"][0][0], false);
    assert_eq!(report["exact"][0][3], true);
    assert_eq!(report["at_most"][3][3], true);
}

#[test]
fn tsv_report_is_dense_and_k_major() {
    let dir = TempDir::new().unwrap();
    let graph = p3(&dir);
    let mut args = vec!["solve", "--graph", graph.to_str().unwrap()];
    args.extend_from_slice(&DOMSET);
    args.extend_from_slice(&["--format", "tsv"]);
    let out = run(&args);
    assert_eq!(exit_code(&out), 0);
    let text = stdout_text(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 4 * 4);
    assert_eq!(lines[0], "k\tl\texact\tat_most");
    assert_eq!(lines[1], "0\t0\t0\t0");
    assert_eq!(lines[4], "0\t3\t1\t1");
    // Row-major: all l values for k=0 come before any k=1 line.
    assert_eq!(lines[5], "1\t0\t1\t1");
}

#[test]
fn solve_accepts_an_explicit_decomposition() {
    let dir = TempDir::new().unwrap();
    let graph = p3(&dir);
    let td = write_file(&dir, "p3.td", "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n");
    let mut args = vec![
        "solve",
        "--graph",
        graph.to_str().unwrap(),
        "--td",
        td.to_str().unwrap(),
    ];
    args.extend_from_slice(&DOMSET);
    args.extend_from_slice(&["--min-k", "--max-violations", "0"]);
    let out = run(&args);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout_text(&out), "1\n");
}

#[test]
fn malformed_graph_header_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let graph = write_file(&dir, "bad.gr", "p tw x 2\n1 2\n");
    let mut args = vec!["solve", "--graph", graph.to_str().unwrap()];
    args.extend_from_slice(&DOMSET);
    let out = run(&args);
    assert_eq!(exit_code(&out), 2);
    let error = stderr_error(&out);
    assert_eq!(error["error"]["code"], 2);
    assert_eq!(error["error"]["kind"], "parse");
}

#[test]
fn bad_spec_string_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let graph = p3(&dir);
    let out = run(&[
        "solve",
        "--graph",
        graph.to_str().unwrap(),
        "--sigma",
        "finite:{}",
        "--rho",
        "cofinite:1",
    ]);
    assert_eq!(exit_code(&out), 2);
    assert_eq!(stderr_error(&out)["error"]["kind"], "spec");
}

#[test]
fn decomposition_defects_are_rejected_with_exit_three() {
    let dir = TempDir::new().unwrap();
    let graph = p3(&dir);
    // Bags {1}, {2,3}: edge 1-2 is covered by no bag.
    let td = write_file(&dir, "gap.td", "s td 2 2 3\nb 1 1\nb 2 2 3\n1 2\n");
    let mut args = vec![
        "solve",
        "--graph",
        graph.to_str().unwrap(),
        "--td",
        td.to_str().unwrap(),
    ];
    args.extend_from_slice(&DOMSET);
    let out = run(&args);
    assert_eq!(exit_code(&out), 3);
    assert_eq!(stderr_error(&out)["error"]["code"], 3);
}

#[test]
fn solve_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let graph = p3(&dir);
    let mut args = vec!["solve", "--graph", graph.to_str().unwrap()];
    args.extend_from_slice(&DOMSET);
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
}

// -------------------------------------------------------------------
// verify

#[test]
fn verify_agrees_on_a_small_cycle() {
    let dir = TempDir::new().unwrap();
    let graph = write_file(&dir, "c5.gr", "p tw 5 5\n1 2\n2 3\n3 4\n4 5\n1 5\n");
    let mut args = vec!["verify", "--graph", graph.to_str().unwrap()];
    args.extend_from_slice(&["--sigma", "finite:{0}", "--rho", "cofinite:1"]);
    let out = run(&args);
    assert_eq!(exit_code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout_text(&out).starts_with("ok:"));
}

#[test]
fn injected_fault_is_reported_as_a_mismatch() {
    let dir = TempDir::new().unwrap();
    let graph = p3(&dir);
    let mut args = vec!["verify", "--graph", graph.to_str().unwrap()];
    args.extend_from_slice(&DOMSET);
    let out = run_env(&args, &[("SRSOLVER_FAULT_INJECT", "1,0")]);
    assert_eq!(exit_code(&out), 1);
    let text = stdout_text(&out);
    assert!(
        text.contains("k=1 l=0"),
        "diff must name the flipped cell, got: {text}"
    );
}

#[test]
fn oversized_graphs_hit_the_enumeration_cap() {
    let dir = TempDir::new().unwrap();
    let graph = write_file(&dir, "p25.gr", &path_graph_text(25));
    let mut args = vec!["verify", "--graph", graph.to_str().unwrap()];
    args.extend_from_slice(&DOMSET);
    let out = run(&args);
    assert_eq!(exit_code(&out), 4);
    let error = stderr_error(&out);
    assert_eq!(error["error"]["code"], 4);
    assert_eq!(error["error"]["kind"], "cap");
}

#[test]
fn the_cap_is_overridable_through_the_environment() {
    let dir = TempDir::new().unwrap();
    let graph = write_file(&dir, "p21.gr", &path_graph_text(21));
    let mut args = vec!["verify", "--graph", graph.to_str().unwrap()];
    args.extend_from_slice(&DOMSET);
    let capped = run(&args);
    assert_eq!(exit_code(&capped), 4);
    let lifted = run_env(&args, &[("SRSOLVER_ORACLE_CAP", "22")]);
    assert_eq!(exit_code(&lifted), 0, "stderr: {}", String::from_utf8_lossy(&lifted.stderr));
}

// -------------------------------------------------------------------
// gadget

fn read_sidecar(prefix: &Path) -> Value {
    let text = std::fs::read_to_string(prefix.with_extension("gadget.json"))
        .expect("sidecar exists");
    serde_json::from_str(&text).expect("sidecar is JSON")
}

#[test]
fn fragile_gadget_matches_its_promised_shape() {
    let dir = TempDir::new().unwrap();
    let prefix = dir.path().join("frag");
    let out = run(&[
        "gadget",
        "fragile",
        "--sigma",
        "finite:{0}",
        "--rho",
        "cofinite:2",
        "--arity",
        "2",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let graph_text = std::fs::read_to_string(prefix.with_extension("gr")).unwrap();
    assert!(graph_text.starts_with("p tw 4 "), "four vertices, got: {graph_text}");

    let sidecar = read_sidecar(&prefix);
    assert_eq!(sidecar["schema"], 1);
    assert_eq!(sidecar["family"], "fragile");
    assert_eq!(sidecar["constants"]["gamma"], 1);
    assert_eq!(sidecar["constants"]["d"], 2);
    assert_eq!(sidecar["distinguished"], serde_json::json!([1, 2]));
    assert!(sidecar.get("layout").is_none());
}

#[test]
fn emitted_gadget_files_round_trip_and_validate() {
    let dir = TempDir::new().unwrap();
    let prefix = dir.path().join("rob");
    let out = run(&[
        "gadget",
        "robust",
        "--sigma",
        "cofinite:0",
        "--rho",
        "finite:{1}",
        "--arity",
        "1",
        "--delta",
        "1",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));

    // The emitted decomposition must pass the validator against the
    // emitted graph.
    let check = run(&[
        "td",
        "validate",
        "--graph",
        prefix.with_extension("gr").to_str().unwrap(),
        "--td",
        prefix.with_extension("td").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&check), 0, "stdout: {}", stdout_text(&check));

    // Graph and decomposition writers are canonical: parsing and
    // rewriting reproduces the files byte for byte.
    let graph_text = std::fs::read_to_string(prefix.with_extension("gr")).unwrap();
    let graph = srsolver_core::pace::parse_graph(&graph_text).unwrap();
    assert_eq!(srsolver_core::pace::write_graph(&graph), graph_text);
    let td_text = std::fs::read_to_string(prefix.with_extension("td")).unwrap();
    let (td, n) = srsolver_core::pace::parse_td(&td_text).unwrap();
    assert_eq!(srsolver_core::pace::write_td(&td, n), td_text);

    let sidecar = read_sidecar(&prefix);
    assert_eq!(sidecar["family"], "robust");
    assert_eq!(sidecar["constants"]["beta"], 1);
    let layout = &sidecar["layout"];
    assert_eq!(layout["hubs"].as_array().unwrap().len(), 2);
    assert!(!layout["copies"].as_array().unwrap().is_empty());
    // All sidecar ids are 1-indexed vertex names of the emitted graph.
    let n = graph.vertex_count() as u64;
    for copy in layout["copies"].as_array().unwrap() {
        let portal = copy["portal"].as_u64().unwrap();
        assert!(portal >= 1 && portal <= n);
    }
}

#[test]
fn unsupported_gadget_specs_exit_five() {
    let dir = TempDir::new().unwrap();
    let prefix = dir.path().join("nope");
    let out = run(&[
        "gadget",
        "tremendous",
        "--sigma",
        "finite:{0}",
        "--rho",
        "cofinite:2",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 5);
    let error = stderr_error(&out);
    assert_eq!(error["error"]["code"], 5);
    assert_eq!(error["error"]["kind"], "unsupported");
    assert!(!prefix.with_extension("gr").exists());
}

// -------------------------------------------------------------------
// bench

#[test]
fn bench_reports_one_row_per_width() {
    let out = run(&["bench", "--widths", "2..4", "--reps", "1", "--size", "9"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_text(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "width\tmedian_ms\tkernel_ops");
    assert_eq!(lines.len(), 4);
    let mut previous_ops = 0u64;
    for (row, width) in lines[1..].iter().zip(2u64..) {
        let fields: Vec<&str> = row.split('\t').collect();
        assert_eq!(fields[0].parse::<u64>().unwrap(), width);
        fields[1].parse::<f64>().expect("median is a float");
        let ops = fields[2].parse::<u64>().expect("ops is an integer");
        assert!(ops > previous_ops, "kernel ops must grow with width");
        previous_ops = ops;
    }
}

// -------------------------------------------------------------------
// td

#[test]
fn broken_decomposition_gets_a_witness_line() {
    let dir = TempDir::new().unwrap();
    let graph = p3(&dir);
    // Vertex 3 appears in no bag and edge 2-3 is uncovered.
    let td = write_file(&dir, "broken.td", "s td 2 2 3\nb 1 1 2\nb 2 2\n1 2\n");
    let out = run(&[
        "td",
        "validate",
        "--graph",
        graph.to_str().unwrap(),
        "--td",
        td.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 3);
    let text = stdout_text(&out);
    assert!(text.starts_with("invalid:"), "got: {text}");
    assert!(text.contains("vertex 3"), "witness should name the uncovered vertex, got: {text}");
}

#[test]
fn nicified_decomposition_validates_and_solves() {
    let dir = TempDir::new().unwrap();
    let graph = p3(&dir);
    let td = write_file(&dir, "p3.td", "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n");
    let nice = dir.path().join("nice.td");
    let out = run(&[
        "td",
        "nicify",
        "--graph",
        graph.to_str().unwrap(),
        "--td",
        td.to_str().unwrap(),
        "--out",
        nice.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let check = run(&[
        "td",
        "validate",
        "--graph",
        graph.to_str().unwrap(),
        "--td",
        nice.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&check), 0, "stdout: {}", stdout_text(&check));

    let mut args = vec![
        "solve",
        "--graph",
        graph.to_str().unwrap(),
        "--td",
        nice.to_str().unwrap(),
    ];
    args.extend_from_slice(&DOMSET);
    args.extend_from_slice(&["--min-k", "--max-violations", "0"]);
    let solved = run(&args);
    assert_eq!(exit_code(&solved), 0);
    assert_eq!(stdout_text(&solved), "1\n");
}

#[test]
fn nicify_without_an_output_path_prints_the_decomposition() {
    let dir = TempDir::new().unwrap();
    let graph = p3(&dir);
    let td = write_file(&dir, "p3.td", "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n");
    let out = run(&[
        "td",
        "nicify",
        "--graph",
        graph.to_str().unwrap(),
        "--td",
        td.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout_text(&out);
    assert!(text.starts_with("s td "), "got: {text}");
    let (parsed, n) = srsolver_core::pace::parse_td(&text).expect("output re-parses");
    assert_eq!(n, 3);
    assert!(parsed.bags.iter().any(|bag| bag.is_empty()), "normal form starts from empty bags");
}
