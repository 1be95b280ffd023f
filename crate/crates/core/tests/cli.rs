use std::fs;
use std::path::{Path, PathBuf};

use quasi4::cli::{run, EXIT_OK, EXIT_USAGE};
use quasi4::{CellSet, Quasigroup};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn quasi4(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("quasi4").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn without_runtime(text: &str) -> Value {
    let mut v: Value = serde_json::from_str(text).unwrap();
    v.as_object_mut().unwrap().remove("runtime_ms");
    v
}

#[test]
fn classify_prints_flags() {
    let (code, out, _) = quasi4(&["quasi", "classify", fixture("z2z2.q4").to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("linear=true"));
    assert!(out.contains("semilinear=(0,1)"));
}

#[test]
fn reduce_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("f.q4");
    // f(x, y) = x + y + 1 mod 4, not reduced
    let f = Quasigroup::new(
        2,
        (0..16).map(|i| ((i / 4 + i % 4 + 1) % 4) as u8).collect(),
    )
    .unwrap();
    assert!(!f.is_reduced());
    fs::write(&input, f.to_text()).unwrap();
    let (code, out, _) = quasi4(&["quasi", "reduce", input.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let (first, rest) = out.split_once('\n').unwrap();
    assert!(first.starts_with("taus="));
    let g = Quasigroup::parse(rest).unwrap();
    assert!(g.is_reduced());
    assert_eq!(f.reduce().1, g);
}

#[test]
fn analyze_reports_components() {
    let path = fixture("two_blocks.cs");
    let (code, out, _) = quasi4(&["dcode", "analyze", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    for line in [
        "double_mds_code=true",
        "gamma=2",
        "splittable=true",
        "mds_subcodes=4",
        "k=2",
    ] {
        assert!(out.lines().any(|l| l == line), "missing {line} in\n{out}");
    }
    let s = CellSet::parse(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(CellSet::parse(&s.to_text()).unwrap(), s);
}

#[test]
fn census_json_matches_fixtures() {
    for n in 1..=4 {
        let (code, out, _) = quasi4(&["census", "run", "--n", &n.to_string(), "--classify"]);
        assert_eq!(code, EXIT_OK);
        let golden: Value = serde_json::from_str(
            &fs::read_to_string(fixture(&format!("census_n{n}.json"))).unwrap(),
        )
        .unwrap();
        assert_eq!(without_runtime(&out), golden, "n={n}");
    }
}

#[test]
fn census_json_shape() {
    let (code, out, _) = quasi4(&["census", "run", "--n", "3", "--classify"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["v_star"], 64);
    assert_eq!(v["k_star"], 46);
    for key in [
        "n",
        "v_star",
        "k_star",
        "formula_k_star",
        "r_star",
        "t_star",
        "w_star",
        "bounds",
        "node_count",
        "runtime_ms",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    for b in v["bounds"].as_array().unwrap() {
        for key in ["name", "relation", "lhs", "rhs", "holds"] {
            assert!(b.get(key).is_some());
        }
        assert_eq!(b["holds"], true);
    }
}

#[test]
fn census_without_classify_leaves_classes_empty() {
    let (code, out, _) = quasi4(&["census", "run", "--n", "3"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["v_star"], 64);
    assert!(v["k_star"].is_null());
}

#[test]
fn first_layer_count_agrees_with_search() {
    for n in ["2", "3", "4"] {
        let (code, full, _) = quasi4(&["census", "run", "--n", n]);
        assert_eq!(code, EXIT_OK);
        let (code, fast, _) = quasi4(&["census", "run", "--n", n, "--by-first-layer"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(
            without_runtime(&full)["v_star"],
            without_runtime(&fast)["v_star"]
        );
    }
    let (code, _, _) = quasi4(&[
        "census",
        "run",
        "--n",
        "3",
        "--by-first-layer",
        "--classify",
    ]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn single_job_output_is_deterministic() {
    let args = ["census", "run", "--n", "4", "--jobs", "1", "--classify"];
    let (_, a, _) = quasi4(&args);
    let (_, b, _) = quasi4(&args);
    let strip = |s: &str| serde_json::to_string(&without_runtime(s)).unwrap();
    assert_eq!(strip(&a), strip(&b));
    let (_, c, _) = quasi4(&["census", "run", "--n", "4", "--jobs", "3", "--classify"]);
    assert_eq!(strip(&a), strip(&c));
}

#[test]
fn checkpointed_census_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.json");
    let ck = ck.to_str().unwrap();
    let (code, out, _) = quasi4(&["census", "run", "--n", "4", "--checkpoint", ck]);
    assert_eq!(code, EXIT_OK);
    let first = without_runtime(&out);
    assert_eq!(first["v_star"], 7132);
    let (code, out, _) = quasi4(&["census", "run", "--n", "4", "--checkpoint", ck]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(without_runtime(&out), first);
}

#[test]
fn verify_statements() {
    let (code, out, _) = quasi4(&["verify", "theorem2", "--n", "5"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("holds"));
    assert!(out.contains("lower=6262062317568") && out.contains("upper=6270652252160"));

    let (code, out, _) = quasi4(&["verify", "theorem1", "--n", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("46 = 46 holds"));

    let (code, out, _) = quasi4(&["verify", "inequalities", "--n", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(!out.contains("FAILS"));

    let (code, out, _) = quasi4(&[
        "verify",
        "decomposability",
        "--n",
        "4",
        "--samples",
        "50",
        "--seed",
        "3",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("over 50 tables") && out.contains("holds"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.q4");
    fs::write(&bad, "q4 n=2\n0123\n").unwrap();
    let (code, _, err) = quasi4(&["quasi", "classify", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.starts_with("error:"));

    let missing = dir.path().join("missing.cs");
    assert_eq!(
        quasi4(&["dcode", "analyze", missing.to_str().unwrap()]).0,
        EXIT_USAGE
    );
    assert_eq!(quasi4(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(quasi4(&["census", "run", "--n", "5"]).0, EXIT_USAGE);
    assert_eq!(quasi4(&["census", "run", "--n", "0"]).0, EXIT_USAGE);
    assert_eq!(
        quasi4(&["verify", "decomposability", "--n", "2"]).0,
        EXIT_USAGE
    );
    assert_eq!(quasi4(&["--help"]).0, EXIT_OK);
}
