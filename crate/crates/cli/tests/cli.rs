use serde_json::Value;
use std::fs;
use std::process::{Command, Output};

fn irkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irkit"))
        .args(args)
        .env_remove("IRKIT_FORMAT")
        .env_remove("IRKIT_TOL")
        .env_remove("IRKIT_CACHE_DIR")
        .output()
        .expect("run irkit")
}

fn text(args: &[&str]) -> String {
    let out = irkit(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    serde_json::from_str(&text(&all)).expect("valid JSON")
}

fn code(args: &[&str]) -> i32 {
    irkit(args).status.code().expect("exit code")
}

#[test]
fn invariant_examples() {
    let out = text(&["invariant", "schlafli", "alpha", "theta", "chibarf"]);
    assert!(out.contains("alpha: 3 "), "{out}");
    assert!(out.contains("theta: 3.000000±1e-6"), "{out}");
    assert!(out.contains("chibarf: 9/2"), "{out}");
    let v = json(&["invariant", "C(5)", "chibarf"]);
    assert_eq!(v["invariants"]["chibarf"]["value"], "5/2");
    let v = json(&["invariant", "K(1)", "alpha"]);
    assert_eq!(v["invariants"]["alpha"]["value"], 1);
}

#[test]
fn bounds_examples() {
    let v = json(&["bounds", "--source", "~schlafli", "--channel", "schlafli"]);
    assert_eq!(v["exact"], true);
    assert_eq!(v["lower"]["value"]["num"], "1");
    assert_eq!(v["lower"]["value"]["den"], "2");
    // Opposite direction: Θ(~G)/χ̄_f(G) below, ϑ(~G)/χ̄_f(G) above.
    let v = json(&["bounds", "--source", "schlafli", "--channel", "~schlafli"]);
    let (lo, hi) = (v["lower"]["bound"].as_f64().unwrap(), v["upper"]["bound"].as_f64().unwrap());
    assert!((lo - 6f64.log2() / 4.5f64.log2()).abs() < 1e-9, "{lo}");
    assert!((hi - 9f64.log2() / 4.5f64.log2()).abs() < 1e-9, "{hi}");

    let v = json(&["bounds", "--source", "C(5)", "--channel", "C(5)^2"]);
    assert_eq!(v["exact"], true);
    assert_eq!(v["lower"]["value"]["approx"].as_f64(), Some(2.0));
    let v = json(&["bounds", "--source", "Kbar(2)", "--channel", "C(5)"]);
    assert_eq!(v["exact"], true);
    let want = 5f64.sqrt().log2();
    for end in ["lower", "upper"] {
        assert!((v[end]["bound"].as_f64().unwrap() - want).abs() < 1e-12);
    }
}

#[test]
fn text_and_json_agree() {
    let args = ["bounds", "--source", "C(5)", "--channel", "C(7)"];
    let t = text(&args);
    let v = json(&args);
    for end in ["lower", "upper"] {
        let b = v[end]["bound"].as_f64().unwrap();
        assert!(t.contains(&format!("bound {b}")), "{end} bound {b} missing from\n{t}");
    }
    let args = ["invariant", "C(7)", "theta"];
    let t = text(&args);
    let v = json(&args);
    let lo = v["invariants"]["theta"]["lo"].as_f64().unwrap();
    assert!(t.contains(&format!("lo {lo}")), "{t}");
}

#[test]
fn code_search_frontier_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("frontier.csv");
    let v = json(&[
        "code-search", "--source", "Kbar(2)", "--channel", "C(5)", "--kmax", "2", "--nmax", "2", "--csv",
        csv.to_str().unwrap(),
    ]);
    let cell = v["cells"].as_array().unwrap().iter().find(|c| c["k"] == 2 && c["n"] == 2).unwrap();
    assert_eq!(cell["status"], "found");
    let body = fs::read_to_string(&csv).unwrap();
    assert!(body.starts_with("k,n,status\n") && body.contains("2,2,found"), "{body}");
}

#[test]
fn core_equiv_critical_spectra() {
    let v = json(&["core", "~(C(6))"]);
    assert_eq!(v["complement_core"]["core_order"], 2);
    assert_eq!(v["complement_core"]["core_edges"], 1);
    let v = json(&["equiv", "~KG(6,2)", "Kbar(3)"]);
    assert_eq!(v["information"], "certified_equivalent");
    let v = json(&["equiv", "C(5)^2", "Kbar(6)"]);
    assert_eq!(v["incomparable"], true);
    let v = json(&["critical", "~C(5)"]);
    assert_eq!(v["result"]["status"], "certified_critical");
    let v = json(&["critical", "C(4)"]);
    assert_eq!(v["result"]["status"], "unknown");
    let v = json(&["spectra", "C(5)"]);
    assert_eq!(v["spectra"].as_array().unwrap().len(), 8);
}

#[test]
fn paper_tables_all_pass() {
    let v = json(&["paper-tables"]);
    assert_eq!(v["failed"], 0);
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.len() >= 40);
    assert!(rows.iter().all(|r| r["pass"] == true));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["invariant", "C(5"]), 2);
    assert_eq!(code(&["invariant", "Foo(3)"]), 2);
    assert_eq!(code(&["invariant", "C(5)", "nonsense"]), 4);
    assert_eq!(code(&["--tol", "0.5", "invariant", "C(5)"]), 4);
    assert_eq!(code(&["--budget-nodes", "0", "invariant", "C(5)"]), 4);
    assert_eq!(code(&["code-search", "--source", "C(5)", "--channel", "C(5)", "--kmax", "0"]), 4);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("out.csv");
    assert_eq!(
        code(&["code-search", "--source", "C(5)", "--channel", "C(5)", "--csv", bad.to_str().unwrap()]),
        5
    );
    assert_eq!(code(&["--budget-nodes", "1", "core", "C(6)"]), 3);
}

#[test]
fn environment_overrides() {
    let out = Command::new(env!("CARGO_BIN_EXE_irkit"))
        .args(["invariant", "C(5)", "chibarf"])
        .env("IRKIT_FORMAT", "json")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).expect("JSON from IRKIT_FORMAT");
    assert_eq!(v["invariants"]["chibarf"]["value"], "5/2");
    let out = Command::new(env!("CARGO_BIN_EXE_irkit"))
        .args(["invariant", "C(5)"])
        .env("IRKIT_TOL", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    // A flag beats the environment.
    let out = Command::new(env!("CARGO_BIN_EXE_irkit"))
        .args(["--tol", "1e-6", "invariant", "C(5)"])
        .env("IRKIT_TOL", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn cache_directory() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().to_str().unwrap();
    let args = ["--cache-dir", root, "--format", "json", "invariant", "C(7)", "alpha", "chibarf", "theta"];
    let first: Value = serde_json::from_str(&text(&args)).unwrap();
    let files: Vec<_> = walk(dir.path());
    assert_eq!(files.len(), 3, "{files:?}");
    for f in &files {
        let rel = f.strip_prefix(dir.path()).unwrap();
        assert_eq!(rel.components().count(), 3, "two-level layout: {rel:?}");
    }
    let second: Value = serde_json::from_str(&text(&args)).unwrap();
    assert_eq!(first, second);
    // Corrupt entries are recomputed.
    for f in &files {
        fs::write(f, b"{ not json").unwrap();
    }
    let third: Value = serde_json::from_str(&text(&args)).unwrap();
    assert_eq!(first, third);
    for f in &files {
        let v: Value = serde_json::from_str(&fs::read_to_string(f).unwrap()).expect("entry rewritten");
        assert!(v.is_object());
    }
}

fn walk(p: &std::path::Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in fs::read_dir(p).unwrap() {
        let path = e.unwrap().path();
        if path.is_dir() {
            out.extend(walk(&path));
        } else {
            out.push(path);
        }
    }
    out.sort();
    out
}

#[test]
fn json_matches_published_schema() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/output.schema.json");
    let schema: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let cases: [&[&str]; 12] = [
        &["invariant", "C(5)", "all"],
        &["bounds", "--source", "~schlafli", "--channel", "schlafli"],
        &["bounds", "--source", "K(3)", "--channel", "C(5)"],
        &["bounds", "--source", "C(5)", "--channel", "K(3)"],
        &["paper-tables"],
        &["code-search", "--source", "Kbar(2)", "--channel", "C(5)"],
        &["core", "~(C(6))"],
        &["equiv", "C(5)", "C(5)^2"],
        &["critical", "~C(5)"],
        &["critical", "C(4)"],
        &["spectra", "C(5)"],
        &["invariant", "W(5)", "capacity", "minrank"],
    ];
    for args in cases {
        let v = json(args);
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).take(3).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
}
