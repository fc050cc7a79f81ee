use std::path::PathBuf;
use std::process::Command;

use plumbing_hf::PlumbingGraph;
use plumbing_hf_cli::parse_graph_file;
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn hfplumb(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_hfplumb")).args(args).output().unwrap();
    (String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap(), out.status.code().unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json", "--no-timing"];
    all.extend_from_slice(args);
    serde_json::from_str(&hfplumb(&all).0).unwrap()
}

#[test]
fn hf_of_sigma_257() {
    let (out, _, code) = hfplumb(&["hf", &data("sigma257.graph")]);
    assert_eq!(code, 0);
    assert_eq!(out, "T+(0) + Z(-1) + Z(-1)\n");
    let (out, _, _) = hfplumb(&["hf", "--orientation", "minus", &data("sigma257.graph")]);
    assert_eq!(out, "T+(0) + Z(0) + Z(0)\n");
}

#[test]
fn spanning_paths() {
    let (out, _, code) = hfplumb(&["spanning", &data("sigma257.graph")]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "(1,0,-3,-2,0) path: 1,2,1\n\
         (1,0,-3,-2,2) path: 1,2,1,5,4,1,2,1,3,1,2,1,4,1,2,1,5\n\
         (1,0,-1,-2,0) path: 1,2,1\n"
    );
}

#[test]
fn box_and_path() {
    let (out, _, _) = hfplumb(&["box", "--count-only", &data("sigma257.graph")]);
    assert_eq!(out, "count: 80\n");
    let (out, _, _) = hfplumb(&["box", &data("sigma257.graph")]);
    assert_eq!(out.lines().count(), 81);
    let (out, _, code) = hfplumb(&["path", &data("sigma257.graph"), "--vector", "1,0,-3,-2,0"]);
    assert_eq!(code, 0);
    assert_eq!(out, "path: 1,2,1\nterminal: (-1,0,1,2,0)\n");
}

#[test]
fn exit_codes() {
    let (_, _, code) = hfplumb(&["validate", &data("posdef.graph")]);
    assert_eq!(code, 2);
    let (_, _, code) = hfplumb(&["hf", &data("posdef.graph")]);
    assert_eq!(code, 2);
    let (_, _, code) = hfplumb(&["validate", &data("sigma257.graph")]);
    assert_eq!(code, 0);
    let (_, err, code) = hfplumb(&["path", &data("sigma257.graph"), "--vector", "1,0"]);
    assert_eq!(code, 1, "{err}");
    let (_, _, code) = hfplumb(&["box", "--box-cap", "10", &data("sigma257.graph")]);
    assert_eq!(code, 3);
    let (_, _, code) = hfplumb(&["hf", "--search-cap", "2", &data("sigma257.graph")]);
    assert_eq!(code, 3);
    let (_, _, code) = hfplumb(&["triangle", &data("zero_surgery.json"), "--budget", "1"]);
    assert_eq!(code, 3);
    let (_, _, code) = hfplumb(&["hf", &data("missing.graph")]);
    assert_eq!(code, 1);
}

#[test]
fn syntax_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.graph");
    std::fs::write(&path, "vertex a -1\nvertex b x\n").unwrap();
    let (_, err, code) = hfplumb(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("line 2"), "{err}");
    std::fs::write(&path, "# nothing\n").unwrap();
    let (_, err, _) = hfplumb(&["validate", path.to_str().unwrap()]);
    assert!(err.contains("no vertices"));
}

#[test]
fn brieskorn_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (p, q, r) in [(2, 3, 5), (2, 3, 7), (2, 5, 7), (3, 4, 5)] {
        let path = dir.path().join(format!("s{p}{q}{r}.graph"));
        let (_, _, code) =
            hfplumb(&["brieskorn", &p.to_string(), &q.to_string(), &r.to_string(), "-o", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        let parsed = parse_graph_file(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let direct = PlumbingGraph::brieskorn(p, q, r).unwrap();
        assert_eq!(parsed.intersection_form(), direct.intersection_form());
        let (_, _, code) = hfplumb(&["validate", path.to_str().unwrap()]);
        assert_eq!(code, 0);
    }
    let (_, _, code) = hfplumb(&["brieskorn", "2", "4", "5"]);
    assert_eq!(code, 1);
}

#[test]
fn json_matches_text() {
    let (text, _, _) = hfplumb(&["hf", &data("sigma257.graph")]);
    let report = json(&["hf", &data("sigma257.graph")]);
    assert_eq!(report["result"]["module"].as_str().unwrap(), text.trim_end());
    assert_eq!(report["result"]["d_invariant"], "0");
    assert_eq!(report["command"], "hf");
    for key in ["command", "input", "result", "warnings"] {
        assert!(report.get(key).is_some(), "{key}");
    }

    for file in ["zero_surgery.json", "minus_one_surgery.json", "beta_surgery.json"] {
        let (text, _, _) = hfplumb(&["triangle", &data(file)]);
        let report = json(&["triangle", &data(file)]);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), format!("status: {}", report["result"]["status"].as_str().unwrap()));
        let candidates: Vec<&str> =
            report["result"]["candidates"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
        assert_eq!(lines.collect::<Vec<_>>(), candidates);
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["--json", "--no-timing", "spanning", &data("sigma257.graph")],
        vec!["--json", "--no-timing", "--threads", "4", "spanning", &data("sigma257.graph")],
        vec!["--json", "--no-timing", "triangle", &data("delta_check.json")],
    ] {
        assert_eq!(hfplumb(&args), hfplumb(&args));
    }
    let a = hfplumb(&["--json", "--no-timing", "spanning", &data("sigma257.graph")]);
    let b = hfplumb(&["--json", "--no-timing", "--threads", "4", "spanning", &data("sigma257.graph")]);
    assert_eq!(a, b);
    let timed = json_with_timing(&["hf", &data("sigma257.graph")]);
    assert!(timed["timing"]["seconds"].is_number());
    assert!(json(&["hf", &data("sigma257.graph")]).get("timing").is_none());
}

fn json_with_timing(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    serde_json::from_str(&hfplumb(&all).0).unwrap()
}

#[test]
fn triangle_check_mode() {
    let (out, _, code) = hfplumb(&["triangle", &data("delta_check.json")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("verdict: consistent\n"));
    let report = json(&["triangle", &data("delta_check.json")]);
    assert_eq!(report["result"]["verdict"], "consistent");
}
