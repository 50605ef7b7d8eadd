use std::fs;
use std::process::{Command, Output};

use unitdist::docs::{EmbeddingDoc, RunManifest};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unitdist")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn text(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["groebner", "--graph", "k4"]), 2);
    assert_eq!(code(&["groebner", "--graph", "k4_minus_e"]), 0);
    assert_eq!(code(&["groebner", "--graph", "heawood", "--max-pairs", "50"]), 4);
    assert_eq!(code(&["solve", "--graph", "k2"]), 0);
    assert_eq!(code(&["solve", "--graph", "k4", "--restarts", "10"]), 3);
    assert_eq!(code(&["graph", "--graph", "no_such_graph"]), 1);
    assert_eq!(code(&["graph", "--graph", "k4", "--lcf", "(5,-5)^7"]), 1);
    assert_eq!(code(&["graph", "--lcf", "(5,-5"]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["sweep", "--plan", "heawood", "--samples", "200"]), 0);
}

#[test]
fn feasible_output_carries_caveat() {
    let o = run(&["groebner", "--graph", "k4_minus_e", "--extract"]);
    let s = text(&o);
    assert!(s.contains("FEASIBLE") && s.contains("does not certify a real embedding"));
    assert!(s.contains("duplicate: 1 and 4 coincide"));
    assert_eq!(s.matches("distinct: pass").count(), 2);
}

#[test]
fn heawood_graph_inputs_agree() {
    let o = run(&["graph", "--lcf", "(5,-5)^7", "--compare", "diffset:1,2,4:7"]);
    let s = text(&o);
    assert!(s.contains("vertices 14  edges 21"));
    assert!(s.contains("bipartite true  girth 6"));
    assert!(s.contains("isomorphic to diffset:1,2,4:7: true"));
    let o = run(&["graph", "--graph", "heawood", "--delete-vertex", "1", "--delete-vertex", "a", "--compare", "mobius_ladder_m4_subdivided"]);
    assert!(text(&o).contains(": true"));
}

#[test]
fn solve_writes_document_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("moser.json");
    let o = run(&["solve", "--graph", "moser_spindle", "--seed", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc = EmbeddingDoc::from_json(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc.seed, Some(3));
    assert!(doc.metrics.max_edge_deviation < 1e-9);
    let m: RunManifest =
        serde_json::from_str(&fs::read_to_string(dir.path().join("moser.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(m.command, "solve");
    assert_eq!(m.exit_code, 0);
    assert_eq!(m.options["seed"], 3);
    assert_eq!(m.input_hashes["graph"], doc.graph_hash);

    // the stored document verifies and reproduces from its seed
    assert_eq!(code(&["verify", "--embedding", out.to_str().unwrap()]), 0);
    let again = dir.path().join("again.json");
    run(&["solve", "--graph", "moser_spindle", "--seed", "3", "--out", again.to_str().unwrap()]);
    let doc2 = EmbeddingDoc::from_json(&fs::read_to_string(&again).unwrap()).unwrap();
    assert_eq!(doc.vertices, doc2.vertices);
}

#[test]
fn failed_search_keeps_best_iterate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k23.json");
    let o = run(&["solve", "--graph", "k2_3", "--restarts", "20", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(text(&o).contains("not a proof"));
    let doc = EmbeddingDoc::from_json(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc.kind, "failed_search_best");
    assert_eq!(code(&["verify", "--embedding", out.to_str().unwrap()]), 3);
}

#[test]
fn refine_from_coordinate_file() {
    let dir = tempfile::tempdir().unwrap();
    let coords = dir.path().join("moser.txt");
    fs::write(
        &coords,
        "# drawn positions\n1 0 1\n2 -0.728714 0.32\n3 -0.228714 0\n4 0.228714 0\n5 0.728714 0.32\n6 -0.5 -0.68\n7 0.5 -0.68\n",
    )
    .unwrap();
    let c = coords.to_str().unwrap();
    assert_eq!(code(&["verify", "--graph", "moser_spindle", "--coords", c]), 3);
    let out = dir.path().join("fixed.json");
    let o = run(&["refine", "--graph", "moser_spindle", "--coords", c, "--similarity", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(code(&["verify", "--embedding", out.to_str().unwrap(), "--max-edge-deviation", "1e-12"]), 0);
    let r = run(&["rigidity", "--embedding", out.to_str().unwrap()]);
    assert!(text(&r).contains("flex count 0"));
    assert_eq!(code(&["verify", "--graph", "k4", "--coords", c]), 1);
}

#[test]
fn plan_and_bisect() {
    let o = run(&["plan", "--plan", "heawood"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(text(&o).contains("20 realized unit edges"));
    let o = run(&["bisect", "--plan", "four_bar", "--axis", "theta", "--range", "0.3,2.5", "--samples", "101"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(text(&o).contains("CANDIDATE PASSES VERIFY"));
    let o = run(&["plan", "--plan", "heawood", "--param", "gamma=1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_without_sign_change_reports_no_bracket() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("scan.tsv");
    let o = run(&[
        "sweep", "--plan", "four_bar", "--axis", "theta", "--range", "0.1,0.5", "--samples", "50", "--table",
        table.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(text(&o).contains("NO_BRACKET"));
    let rows = fs::read_to_string(&table).unwrap();
    assert_eq!(rows.lines().count(), 51);
    assert!(rows.starts_with("theta\td\tmin_separation\tstatus"));
    let o = run(&["bisect", "--plan", "four_bar", "--axis", "theta", "--range", "0.1,0.5", "--samples", "50"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn render_is_deterministic() {
    let a = text(&run(&["render", "--plan", "heawood"]));
    let b = text(&run(&["render", "--plan", "heawood"]));
    assert_eq!(a, b);
    assert!(a.starts_with("<svg") || a.starts_with("<?xml"));
    assert_eq!(a.matches("class=\"off\"").count(), 1);
}
