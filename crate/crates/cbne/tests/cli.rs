//! End-to-end checks of the binary: documented instance sizes, JSON fixture
//! values, exit-code discipline, and experiment sweeps, all through real
//! process invocations in temporary directories.

mod common;

use std::fs;
use std::path::Path;

use cbne::complex::Graph;
use cbne::estimators::sample_count_cbne;
use common::run_cli;
use serde_json::Value;
use tempfile::TempDir;

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).expect("JSON stdout")
}

fn write_c4(root: &Path) {
    let out = run_cli(
        root,
        &[
            "gen",
            "complete-partite",
            "--k",
            "1",
            "--m",
            "2",
            "--out",
            "c4.txt",
        ],
    );
    assert!(out.status.success(), "gen c4: {out:?}");
}

#[test]
fn gen_writes_the_documented_instances() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();

    let out = run_cli(
        root,
        &[
            "gen",
            "complete-partite",
            "--k",
            "2",
            "--m",
            "2",
            "--out",
            "oct.txt",
        ],
    );
    assert!(out.status.success());
    let summary = json(&out.stdout);
    assert_eq!(summary["n"], 6);
    assert_eq!(summary["edge_count"], 12);

    let out = run_cli(
        root,
        &[
            "gen",
            "er",
            "--n",
            "30",
            "--p",
            "0",
            "--seed",
            "1",
            "--out",
            "empty.txt",
        ],
    );
    assert!(out.status.success());
    assert_eq!(json(&out.stdout)["edge_count"], 0);

    let out = run_cli(
        root,
        &[
            "gen",
            "disjoint-cliques",
            "--m",
            "2",
            "--k",
            "2",
            "--out",
            "tri2.txt",
        ],
    );
    assert!(out.status.success());
    let summary = json(&out.stdout);
    assert_eq!(summary["n"], 6);
    assert_eq!(summary["edge_count"], 6);
}

#[test]
fn gen_files_round_trip() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();
    let args = [
        "gen", "er", "--n", "12", "--p", "0.6", "--seed", "9", "--out", "a.txt",
    ];
    assert!(run_cli(root, &args).status.success());
    let text = fs::read_to_string(root.join("a.txt")).unwrap();
    let parsed = Graph::parse(&text).unwrap();
    assert_eq!(parsed.to_file_string(), text);

    let again = [
        "gen", "er", "--n", "12", "--p", "0.6", "--seed", "9", "--out", "b.txt",
    ];
    assert!(run_cli(root, &again).status.success());
    assert_eq!(fs::read(root.join("b.txt")).unwrap(), text.as_bytes());
}

#[test]
fn exact_reports_the_fixture_values() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();

    fs::write(root.join("hollow.txt"), "3\n0 1\n0 2\n1 2\n").unwrap();
    let out = run_cli(root, &["exact", "--complex", "hollow.txt", "--k", "1"]);
    assert!(out.status.success(), "{out:?}");
    let report = json(&out.stdout);
    assert_eq!(report["betti"], 1);
    assert_eq!(report["s_k"], 3);
    assert_eq!(report["normalized_betti"].as_f64(), Some(1.0 / 3.0));
    let moments = report["moments"].as_array().unwrap();
    assert_eq!(moments.len(), 6);
    for row in moments {
        assert_eq!(row["normalized_trace"].as_f64(), Some(1.0 / 3.0));
    }

    write_c4(root);
    let out = run_cli(
        root,
        &["exact", "--graph", "c4.txt", "--k", "1", "--lengths", "6"],
    );
    assert!(out.status.success());
    let report = json(&out.stdout);
    assert_eq!(report["betti"], 1);
    assert_eq!(
        report["moments"][0]["normalized_trace"].as_f64(),
        Some(0.2578125)
    );

    let gen = run_cli(
        root,
        &[
            "gen",
            "disjoint-cliques",
            "--m",
            "2",
            "--k",
            "2",
            "--out",
            "tri2.txt",
        ],
    );
    assert!(gen.status.success());
    let out = run_cli(
        root,
        &["exact", "--graph", "tri2.txt", "--k", "2", "--lengths", "3"],
    );
    assert!(out.status.success());
    let report = json(&out.stdout);
    assert_eq!(report["betti"], 0);
    assert_eq!(
        report["moments"][0]["normalized_trace"].as_f64(),
        Some(0.125)
    );
    assert_eq!(
        report["moments"][0]["second_moment"].as_f64(),
        Some(0.015625)
    );
}

#[test]
fn exact_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();
    write_c4(root);
    let args = ["exact", "--graph", "c4.txt", "--k", "1"];
    let first = run_cli(root, &args);
    let second = run_cli(root, &args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn estimate_is_exact_on_a_contractible_instance() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();
    fs::write(root.join("k3.txt"), "3\n0 1\n0 2\n1 2\n").unwrap();

    // Every column of K3's walk matrix is zero, so every sampled path
    // scores 0 and both estimators return 0 exactly.
    let out = run_cli(
        root,
        &[
            "estimate", "cbne", "--graph", "k3.txt", "--k", "1", "--l", "3",
        ],
    );
    assert!(out.status.success(), "{out:?}");
    assert_eq!(json(&out.stdout)["estimate"].as_f64(), Some(0.0));

    let out = run_cli(
        root,
        &[
            "estimate", "cbne-var", "--graph", "k3.txt", "--k", "1", "--l", "3",
        ],
    );
    assert!(out.status.success());
    let result = json(&out.stdout);
    assert_eq!(result["estimate"].as_f64(), Some(0.0));
    assert_eq!(result["v_hat"].as_f64(), Some(0.0));
}

#[test]
fn estimate_hits_the_documented_tolerance_on_c4() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();
    write_c4(root);
    let out = run_cli(
        root,
        &[
            "estimate", "cbne", "--graph", "c4.txt", "--k", "1", "--l", "6", "--eps", "0.05",
            "--eta", "0.05",
        ],
    );
    assert!(out.status.success());
    let result = json(&out.stdout);
    let estimate = result["estimate"].as_f64().unwrap();
    assert!(
        (estimate - 0.2578125).abs() <= 0.05,
        "estimate {estimate} off the ℓ=6 trace"
    );
    let expected_n_p = sample_count_cbne(0.05, 0.05, 6, 2).unwrap();
    assert_eq!(result["n_p"].as_u64().map(u128::from), Some(expected_n_p));
}

#[test]
fn estimate_rejects_budget_overruns_with_exit_3() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();
    write_c4(root);
    let out = run_cli(
        root,
        &[
            "estimate", "cbne", "--graph", "c4.txt", "--k", "1", "--l", "6", "--budget", "100",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
    let payload = json(&out.stdout);
    assert_eq!(payload["error"]["kind"], "resource");
    assert_eq!(payload["error"]["limit"], 100);
    assert!(payload["error"]["requested"].as_u64().unwrap() > 100);
}

#[test]
fn invalid_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();

    let out = run_cli(
        root,
        &["gen", "er", "--n", "5", "--p", "1.5", "--out", "x.txt"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out.stdout)["error"]["kind"], "input");

    // Unknown flags are usage errors on stderr with the same code.
    let out = run_cli(
        root,
        &["estimate", "newton", "--graph", "x", "--k", "1", "--l", "1"],
    );
    assert_eq!(out.status.code(), Some(2));

    let out = run_cli(root, &["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn numeric_failures_exit_4() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();
    // A 20-cycle kept hollow: every edge has column-norm numerator 20, so the
    // ℓ=16 transfer-matrix trace overflows 128-bit integers and the exact
    // bounds must refuse rather than silently degrade.
    let mut cycle = String::from("20\n");
    for v in 0..19 {
        cycle.push_str(&format!("{} {}\n", v, v + 1));
    }
    cycle.push_str("0 19\n");
    fs::write(root.join("cycle.txt"), cycle).unwrap();

    let out = run_cli(
        root,
        &[
            "exact",
            "--complex",
            "cycle.txt",
            "--k",
            "1",
            "--lengths",
            "16",
        ],
    );
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json(&out.stdout)["error"]["kind"], "numeric");
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).unwrap();
    text.lines()
        .skip(1)
        .map(|line| line.split(',').map(str::to_string).collect())
        .collect()
}

const COL_INSTANCE: usize = 0;
const COL_ALGORITHM: usize = 8;
const COL_REGIME: usize = 13;
const COL_N_S: usize = 14;
const COL_N_P: usize = 15;
const COL_SECOND: usize = 21;
const COL_STATUS: usize = 25;

#[test]
fn experiment_compares_the_algorithms_per_instance() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();
    let grid = serde_json::json!({
        "instances": [
            {"kind": "complete-partite", "k": 1, "m": 2},
            {"kind": "complete-partite", "k": 2, "m": 2}
        ],
        "k": 1,
        "lengths": [3],
        "seeds": [0]
    });
    fs::write(
        root.join("grid.json"),
        serde_json::to_vec_pretty(&grid).unwrap(),
    )
    .unwrap();
    let out = run_cli(
        root,
        &["experiment", "--config", "grid.json", "--out", "sweep.csv"],
    );
    assert!(out.status.success(), "{out:?}");
    let rows = csv_rows(&root.join("sweep.csv"));
    assert_eq!(rows.len(), 4);
    for pair in rows.chunks(2) {
        assert_eq!(pair[0][COL_INSTANCE], pair[1][COL_INSTANCE]);
        assert_eq!(pair[0][COL_ALGORITHM], "cbne");
        assert_eq!(pair[1][COL_ALGORITHM], "cbne-var");
        assert_eq!(pair[0][COL_STATUS], "ok");
        assert_eq!(pair[1][COL_STATUS], "ok");
        let base_n_p: u64 = pair[0][COL_N_P].parse().unwrap();
        let var_n_s: u64 = pair[1][COL_N_S].parse().unwrap();
        let var_n_p: u64 = pair[1][COL_N_P].parse().unwrap();
        assert!(
            var_n_s + var_n_p <= base_n_p,
            "{}: {var_n_s}+{var_n_p} > {base_n_p}",
            pair[0][COL_INSTANCE]
        );
    }
}

#[test]
fn experiment_hard_grid_second_moment_grows_geometrically() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();
    let grid = serde_json::json!({
        "instances": [{"kind": "partite-er", "n": 24, "k": 2, "p": 0.8, "seed": 0}],
        "k": 2,
        "lengths": [1, 2, 3, 4, 5, 6, 7, 8],
        "algorithms": ["cbne-var"],
        "seeds": [0]
    });
    fs::write(
        root.join("grid.json"),
        serde_json::to_vec_pretty(&grid).unwrap(),
    )
    .unwrap();
    let out = run_cli(
        root,
        &["experiment", "--config", "grid.json", "--out", "hard.csv"],
    );
    assert!(out.status.success(), "{out:?}");
    let rows = csv_rows(&root.join("hard.csv"));
    assert_eq!(rows.len(), 8);
    let seconds: Vec<f64> = rows
        .iter()
        .map(|r| r[COL_SECOND].parse().expect("oracle column populated"))
        .collect();
    for (i, w) in seconds.windows(2).enumerate() {
        assert!(
            w[1] / w[0] >= 1.2,
            "ℓ {}→{}: {} → {}",
            i + 1,
            i + 2,
            w[0],
            w[1]
        );
    }
    for row in &rows {
        assert_eq!(row[COL_REGIME], "HARD");
        assert_eq!(row[COL_STATUS], "ok");
    }
}

#[test]
fn experiment_empty_grid_emits_header_only() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();
    let grid = serde_json::json!({"instances": [], "k": 1, "lengths": [3]});
    fs::write(
        root.join("grid.json"),
        serde_json::to_vec_pretty(&grid).unwrap(),
    )
    .unwrap();
    let out = run_cli(
        root,
        &["experiment", "--config", "grid.json", "--out", "empty.csv"],
    );
    assert!(out.status.success());
    let text = fs::read_to_string(root.join("empty.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("instance,ensemble,"));
    assert_eq!(lines.next(), None);
    assert_eq!(json(&out.stdout)["rows"], 0);
}

#[test]
fn experiment_records_row_failures_and_continues() {
    let dir = TempDir::new().unwrap();
    let root = dir.path();
    // ℓ = 3 fits the budget for both algorithms, ℓ = 6 fits for neither, so
    // the sweep must record two failed rows and still exit 0.
    let grid = serde_json::json!({
        "instances": [{"kind": "complete-partite", "k": 1, "m": 2}],
        "k": 1,
        "lengths": [3, 6],
        "seeds": [0],
        "budget": 25000
    });
    fs::write(
        root.join("grid.json"),
        serde_json::to_vec_pretty(&grid).unwrap(),
    )
    .unwrap();
    let out = run_cli(
        root,
        &[
            "experiment",
            "--config",
            "grid.json",
            "--out",
            "partial.csv",
        ],
    );
    assert!(out.status.success(), "{out:?}");
    let rows = csv_rows(&root.join("partial.csv"));
    assert_eq!(rows.len(), 4);
    let statuses: Vec<bool> = rows.iter().map(|r| r[COL_STATUS] == "ok").collect();
    assert_eq!(statuses, [true, true, false, false]);
    for row in rows.iter().filter(|r| r[COL_STATUS] != "ok") {
        assert!(row[COL_N_P].is_empty(), "failed rows carry no counts");
    }
}
