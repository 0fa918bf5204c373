use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use netdeg_core::game::{build_indifference_system, GameFile};
use netdeg_core::numeric::parse_solver_input;
use serde_json::Value;

fn netdeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netdeg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = netdeg(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json_ok(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_str(&stdout_ok(&all)).unwrap()
}

fn degree_of(args: &[&str]) -> Value {
    let mut all = vec!["degree"];
    all.extend(args);
    let v = json_ok(&all);
    assert_eq!(v["agree"], true);
    v
}

#[test]
fn known_degrees() {
    let v = degree_of(&["--topology", "cross-prism", "--n", "5"]);
    assert_eq!(v["degree"], "32");
    let routes: Vec<&str> = v["routes"].as_array().unwrap().iter().map(|r| r["route"].as_str().unwrap()).collect();
    assert_eq!(routes, ["tensor", "permanent", "scc", "cycle-covers"]);
    assert_eq!(degree_of(&["--topology", "cycle", "--n", "9"])["degree"], "1");
    assert_eq!(degree_of(&["--topology", "std-prism", "--n", "6"])["degree"], "4");
    assert_eq!(degree_of(&["--topology", "disjoint-cycles", "--lengths", "2,3"])["degree"], "1");
    assert_eq!(degree_of(&["--topology", "cycle", "--n", "4", "--k", "2"])["degree"], "1");
}

#[test]
fn large_closed_form_skips_capped_routes() {
    let v = degree_of(&["--topology", "cross-prism", "--n", "64"]);
    assert_eq!(v["degree"], "18446744073709551616");
    let skipped = v["routes"].as_array().unwrap().iter().filter(|r| r.get("skipped").is_some()).count();
    assert_eq!(skipped, 3);
}

#[test]
fn text_output_reports_agreement() {
    let text = stdout_ok(&["degree", "--topology", "std-prism", "--n", "5"]);
    assert!(text.starts_with("degree 2\n"), "{text}");
    assert!(text.contains("route transfer 2\n"));
    assert!(text.ends_with("agreement yes\n"));
}

#[test]
fn exit_codes_follow_error_kind() {
    let code = |args: &[&str]| netdeg(args).status.code().unwrap();
    assert_eq!(code(&["degree", "--topology", "cycle", "--n", "40"]), 3);
    assert_eq!(code(&["degree", "--topology", "cycle", "--n", "1"]), 2);
    assert_eq!(code(&["degree"]), 2);
    assert_eq!(code(&["degree", "--topology", "nonsense"]), 2);
    assert_eq!(code(&["cells", "--topology", "cycle", "--n", "3", "--k", "2"]), 2);

    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("game.json");
    stdout_ok(&["export", "--what", "game", "--topology", "cycle", "--n", "3", "--out", game.to_str().unwrap()]);
    let mut file: Value = serde_json::from_str(&fs::read_to_string(&game).unwrap()).unwrap();
    for table in file["payoffs"].as_object_mut().unwrap().values_mut() {
        for entry in table.as_array_mut().unwrap() {
            *entry = Value::from(0);
        }
    }
    let zero = dir.path().join("zero.json");
    fs::write(&zero, file.to_string()).unwrap();
    assert_eq!(code(&["degree", "--game", zero.to_str().unwrap()]), 4);
}

#[test]
fn matrix_export_of_three_cycle() {
    let text = stdout_ok(&["export", "--matrix", "--topology", "cycle", "--n", "3"]);
    assert_eq!(text, "3\n0 0 1\n1 0 0\n0 1 0\n");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c3.matrix");
    fs::write(&path, &text).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(stdout_ok(&["perm", "--matrix", p, "--naive"]), "permanent 1\nnaive agrees\n");
    assert_eq!(json_ok(&["covers", "--matrix", p, "--list", "5"])["covers"], serde_json::json!([[["1", "3", "2"]]]));
}

#[test]
fn solver_input_matches_exported_game() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("game.json");
    let input = dir.path().join("input");
    let base = ["--topology", "std-prism", "--n", "3", "--seed", "77"];
    let mut a = vec!["export", "--what", "game", "--out", game.to_str().unwrap()];
    a.extend(base);
    stdout_ok(&a);
    let mut b = vec!["export", "--out", input.to_str().unwrap()];
    b.extend(base);
    stdout_ok(&b);
    let game = GameFile::parse(&fs::read_to_string(&game).unwrap()).unwrap();
    let parsed = parse_solver_input(&fs::read_to_string(&input).unwrap()).unwrap();
    assert_eq!(parsed, build_indifference_system(&game));
}

#[test]
fn cross_prism_cells_are_unit_records() {
    let cells = json_ok(&["cells", "--topology", "cross-prism", "--n", "3"]);
    let cells = cells.as_array().unwrap();
    assert_eq!(cells.len(), 8);
    for c in cells {
        assert_eq!(c["volume"], "1");
        let covered: usize = c["cycle_cover"].as_array().unwrap().iter().map(|cyc| cyc.as_array().unwrap().len()).sum();
        assert_eq!(covered, 6);
        assert_eq!(c["equations"].as_object().unwrap().len(), 6);
    }
    let lines = stdout_ok(&["cells", "--topology", "cross-prism", "--n", "3"]);
    assert_eq!(lines.lines().count(), 8);
}

#[test]
fn experimental_cells_for_larger_strategy_sets() {
    let cells = json_ok(&["cells", "--topology", "cycle", "--n", "2", "--k", "2", "--experimental"]);
    let cells = cells.as_array().unwrap();
    assert!(!cells.is_empty());
    assert!(cells.iter().all(|c| c.get("cycle_cover").is_none()));
}

#[test]
fn transfer_matrix_of_k2() {
    let v = json_ok(&["transfer", "--n", "6"]);
    assert_eq!(v["size"], 4);
    assert_eq!(v["entries"], serde_json::json!([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]));
    assert_eq!(v["trace_power"]["value"], "4");
}

#[test]
fn scc_lists_components_one_based() {
    let v = json_ok(&["scc", "--topology", "disjoint-cycles", "--lengths", "2,3"]);
    let mut comps: Vec<Vec<u64>> = serde_json::from_value(v["components"].clone()).unwrap();
    comps.sort();
    assert_eq!(comps, vec![vec![1, 2], vec![3, 4, 5]]);
}

fn without_runtime(csv: &str) -> String {
    csv.lines()
        .map(|l| l.rsplit_once(',').unwrap().0)
        .collect::<Vec<_>>()
        .join("\n")
}

fn sweep_into(dir: &Path) {
    stdout_ok(&[
        "sweep", "--topology", "std-prism", "--n", "3", "--trials", "4", "--seed", "11", "--out",
        dir.to_str().unwrap(),
    ]);
}

#[test]
fn sweep_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    sweep_into(a.path());
    sweep_into(b.path());
    for name in ["aggregate.json", "plot.csv"] {
        assert_eq!(
            fs::read_to_string(a.path().join(name)).unwrap(),
            fs::read_to_string(b.path().join(name)).unwrap()
        );
    }
    let ta = fs::read_to_string(a.path().join("trials.csv")).unwrap();
    let tb = fs::read_to_string(b.path().join("trials.csv")).unwrap();
    assert!(ta.starts_with("trial,seed,torus,real,runtime_ms\n"));
    assert_eq!(without_runtime(&ta), without_runtime(&tb));
    let agg: Value = serde_json::from_str(&fs::read_to_string(a.path().join("aggregate.json")).unwrap()).unwrap();
    assert_eq!(agg["N"], 3);
    assert_eq!(agg["theory_degree"], "2");
}

#[test]
fn solve_counts_stay_below_degree() {
    let v = json_ok(&["solve", "--topology", "cross-prism", "--n", "3", "--seed", "4"]);
    let counts = &v["counts"];
    assert_eq!(counts["tracked"], 64);
    assert!(counts["torus"].as_u64().unwrap() <= 8);
    assert!(counts["real"].as_u64().unwrap() <= counts["torus"].as_u64().unwrap());
}
