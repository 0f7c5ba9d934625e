use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use htaut::algebra::{factorial, rat, Rational};
use htaut::gcover::{AdmissibleGGraph, LegOrbit, EdgeOrbit, VertexOrbit};
use htaut::graphs::StableGraph;
use htaut::groups::FiniteGroup;
use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_htaut"))
}

fn run(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf8"))
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, out) = run(args);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn assert_schema(name: &str, v: &Value) {
    let text = fs::read_to_string(schema_dir().join(format!("{name}.schema.json"))).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(v).map(|e| format!("{e} at {}", e.instance_path)).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

fn scratch(name: &str, v: &Value) -> String {
    let dir = std::env::temp_dir().join(format!("htaut-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

/// Z/2 swapping the sheets over two genus one curves joined at a fixed node.
fn fixed_node_ggraph() -> AdmissibleGGraph {
    let g = FiniteGroup::cyclic(2).unwrap();
    let s = g.generator_elements()[0];
    let whole = VertexOrbit { stabilizer: g.whole(), quotient_genus: 0 };
    let legs: Vec<LegOrbit> = (0..6).map(|i| LegOrbit { vertex: i / 3, monodromy: s }).collect();
    AdmissibleGGraph::from_orbits(
        &g,
        &[whole.clone(), whole],
        &[EdgeOrbit { from: 0, to: 1, monodromy: s, shift: g.identity() }],
        &legs,
    )
    .unwrap()
}

#[test]
fn delliptic_table() {
    let (code, v) = run_json(&["delliptic", "--dmax", "4", "--json"]);
    assert_eq!(code, 0);
    assert_schema("delliptic", &v);
    let rows = v["degrees"].as_array().unwrap();
    // 4 (d-2)!^2 (d-1) sigma_1(d)
    let sigma = [0, 1, 3, 4, 7];
    for row in rows {
        let d = row["d"].as_u64().unwrap();
        let f = Rational::from_integer(factorial(d - 2));
        let expected = rat(4) * &f * &f * rat(d as i64 - 1) * rat(sigma[d as usize]);
        assert_eq!(row["delta00"], json!(expected.to_string()));
    }
    assert_eq!(rows[2]["delta00"], "336");
    assert_eq!(rows[2]["delta00_normalized"], "84");
}

#[test]
fn delliptic_is_deterministic() {
    let args = ["delliptic", "--dmax", "7", "--strata"];
    let (c1, a) = run(&args);
    let (c2, b) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert_schema("delliptic", &serde_json::from_str(&a).unwrap());
}

#[test]
fn delliptic_human_table() {
    let (code, out) = run(&["delliptic", "--dmax", "3", "--human"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[2].trim_start().starts_with('3'));
    assert!(lines[2].contains("32"));
}

#[test]
fn emitted_series_are_quasimodular() {
    let (code, v) = run_json(&["delliptic", "--dmax", "40", "--series"]);
    assert_eq!(code, 0);
    assert_schema("delliptic", &v);
    let path = scratch("series.json", &v);
    for field in ["delta01_series", "delta00_series"] {
        let (code, verdict) =
            run_json(&["qmod-check", &path, "--field", field, "--weight", "4", "--fit", "20", "--holdout", "18"]);
        assert_eq!(code, 0);
        assert_schema("qmod-check", &verdict);
        assert_eq!(verdict["member"], true, "{field}");
    }
    let series = scratch("bare.json", &v["delta01_series"]);
    let (code, verdict) = run_json(&["qmod-check", &series, "--weight", "0", "--fit", "20", "--holdout", "18"]);
    assert_eq!(code, 0);
    assert_eq!(verdict["member"], false);
}

#[test]
fn hurwitz_counts() {
    let (code, v) = run_json(&["hurwitz-count", "--totally-ramified", "2,1"]);
    assert_eq!(code, 0);
    assert_schema("hurwitz-count", &v);
    assert_eq!(v["count"], "1");

    let input = json!({ "degree": 3, "fibers": [{ "profile": [2, 1] }, { "profile": [2, 1] }, { "profile": [2, 1] }, { "profile": [2, 1] }] });
    assert_schema("hurwitz-count.input", &input);
    let (code, v) = run_json(&["hurwitz-count", &scratch("h.json", &input), "--mode", "tuples"]);
    assert_eq!(code, 0);
    assert_eq!(v["mode"], "tuples");
    // transitive tuples of four transpositions in S_3 with product one
    assert_eq!(v["count"], "24");

    let bad = json!({ "degree": 3, "fibers": [{ "profile": [3] }], "target_genus": 1 });
    let (code, v) = run_json(&["hurwitz-count", &scratch("h1.json", &bad)]);
    assert_eq!(code, 2);
    assert_schema("error", &v);
    assert_eq!(v["error"]["kind"], "unsupported");
}

#[test]
fn integrate_monomials() {
    let (code, v) = run_json(&["integrate", "--genus", "1", "--psi", "1"]);
    assert_eq!(code, 0);
    assert_schema("integrate", &v);
    assert_eq!(v["value"], "1/24");
    let (code, v) = run_json(&["integrate", "--genus", "0", "--psi", "0,0,0,0,2"]);
    assert_eq!((code, &v["value"]), (0, &json!("1")));
    let (code, v) = run_json(&["integrate", "--genus", "0", "--psi", "0,0"]);
    assert_eq!(code, 2);
    assert_schema("error", &v);
}

#[test]
fn intersect_stable_graphs() {
    let loop_graph = StableGraph::from_edges(vec![0], &[(0, 0)], vec![0]).unwrap().to_json();
    let a = serde_json::to_value(&loop_graph).unwrap();
    assert_schema("graph.input", &a);
    let p = scratch("loop.json", &a);
    let (code, v) = run_json(&["intersect-boundary", &p, &p]);
    assert_eq!(code, 0);
    assert_schema("intersect-boundary", &v);
    let terms = v["terms"].as_array().unwrap();
    assert!(!terms.is_empty());
    assert!(terms.iter().all(|t| t["excess_edges"].as_array().unwrap().len() == 1));
    assert_eq!(v["class"]["g"], 1);
}

#[test]
fn validate_and_intersect_ggraphs() {
    let gg = fixed_node_ggraph();
    let j = serde_json::to_value(gg.to_json()).unwrap();
    assert_schema("ggraph.input", &j);
    let input = json!({ "graph": j });
    assert_schema("validate-ggraph.input", &input);
    let (code, v) = run_json(&["validate-ggraph", &scratch("gg.json", &input)]);
    assert_eq!(code, 0, "{v}");
    assert_schema("validate-ggraph", &v);
    assert_eq!(v["edge_orbits"], 1);

    let mut space = v["space"].clone();
    // two branch points over an elliptic target: a valid space, the wrong one
    space["xi"].as_array_mut().unwrap().truncate(2);
    let bad = json!({ "graph": j, "space": space });
    let (code, v) = run_json(&["validate-ggraph", &scratch("gg-bad.json", &bad)]);
    assert_eq!(code, 2);
    assert_schema("error", &v);
    assert_eq!(v["error"]["label"], "xi-agreement");

    let p = scratch("gg-only.json", &j);
    let (code, v) = run_json(&["intersect-ggraph", &p, &p]);
    assert_eq!(code, 0, "{v}");
    assert_schema("intersect-ggraph", &v);
    assert_eq!(v["terms"].as_array().unwrap().len(), 1);
    assert_eq!(v["terms"][0]["excess_edges"].as_array().unwrap().len(), 1);
}

#[test]
fn pullbacks() {
    let req = json!({ "map": "restriction", "class": { "kappa": 1 } });
    assert_schema("pullback.input", &req);
    let (code, v) = run_json(&["pullback", &scratch("pb.json", &req)]);
    assert_eq!(code, 0, "{v}");
    assert_schema("pullback", &v);
    assert!(v["formula"].as_str().unwrap().contains("kappa[1]"));
}

#[test]
fn malformed_input_exits_two() {
    let p = scratch("junk.json", &json!({ "not": "a graph" }));
    let (code, v) = run_json(&["intersect-boundary", &p, &p]);
    assert_eq!(code, 2);
    assert_schema("error", &v);
    assert_eq!(v["error"]["kind"], "parse");
    let (code, _) = run(&["no-such-subcommand"]);
    assert_eq!(code, 2);
}
