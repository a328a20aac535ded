use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jsonschema::{Retrieve, Uri};
use serde_json::Value;

const SCHEMA_BASE: &str = "https://fi-tails.example/schemas/";

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    root().join("fixtures").join(name).to_string_lossy().into_owned()
}

fn fitails(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fitails")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

struct SchemaDir;

impl Retrieve for SchemaDir {
    fn retrieve(&self, uri: &Uri<String>) -> Result<Value, Box<dyn std::error::Error + Send + Sync>> {
        let name = uri.as_str().strip_prefix(SCHEMA_BASE).ok_or("unknown schema host")?;
        Ok(serde_json::from_str(&std::fs::read_to_string(root().join("schemas").join(name))?)?)
    }
}

fn assert_valid(schema: &str, args: &[&str]) -> Value {
    let out = fitails(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let instance: Value = serde_json::from_str(&stdout(&out)).expect("output is JSON");
    let schema_value = SchemaDir.retrieve(&Uri::parse(format!("{SCHEMA_BASE}{schema}")).unwrap()).unwrap();
    let validator = jsonschema::options().with_retriever(SchemaDir).build(&schema_value).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(&instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?} violates {schema}: {errors:?}");
    instance
}

#[test]
fn json_output_matches_schemas() {
    let a = fixture("ex113a.fipres");
    let b = fixture("ex113b.fipres");
    let profile = assert_valid("tail_profile.schema.json", &["tails", &a, "--json"]);
    assert_eq!(profile["stable_from"], 5);
    assert_eq!(profile["poly_degree"], 1);
    assert_eq!(profile["invariants"][0], serde_json::json!({"free_rank": 0, "torsion": [3]}));
    assert_eq!(profile["invariants"][1], serde_json::json!({"free_rank": 1, "torsion": []}));

    let m = assert_valid("evaluate.schema.json", &["evaluate", &b, "--n", "6", "--json"]);
    assert_eq!(m["group"]["torsion"].as_array().unwrap().len(), 15);

    let xi = assert_valid("matrix.schema.json", &["xi-matrix", &a, "--ell", "2", "--json"]);
    assert_eq!(xi["row_labels"], serde_json::json!(["12", "21"]));
    assert_eq!(xi["entries"][0], serde_json::json!([1, 0, 0, 1, 1, 0]));

    let below = assert_valid("oracle.schema.json", &["oracle", &a, "--n", "3", "--json"]);
    assert_eq!(below["equal"], Value::Null);
    let report = assert_valid("oracle.schema.json", &["oracle", &b, "--n", "5", "--json"]);
    assert_eq!(report["equal"], true);

    let fj = assert_valid(
        "fj_basis.schema.json",
        &["fj-basis", "--source", "0", "--target", "0", "--max-level", "3", "--json"],
    );
    assert_eq!(fj["elements"].as_array().unwrap().len(), 4);

    let q = assert_valid("qring.schema.json", &["qring", "--degree", "2", "--json"]);
    assert_eq!(q["total_rank"], 12);
    assert_eq!(q["entries"][2][1]["rank"], 0);

    let p = assert_valid("pairing.schema.json", &["pairing", "--k", "3", "--n", "5", "--json"]);
    assert_eq!(p["rows"], 60);
    assert_eq!(p["unimodular"], true);
}

#[test]
fn text_reports() {
    let out = fitails(&["tails", &fixture("ex113a.fipres")]);
    assert_eq!(stdout(&out), "A_0 = Z/3\nA_1 = Z\nA_2 = 0\nA_3 = 0\nstable_from = 5\npoly_degree = 1\n");
    let out = fitails(&["pairing", "--k", "3", "--n", "5"]);
    assert!(stdout(&out).starts_with("unimodular: true, size 60"));
    let out = fitails(&["evaluate", &fixture("ex113a.fipres"), "--n", "7"]);
    assert_eq!(stdout(&out), "M_7 = Z^6 (+) Z/3\n");
    let out = fitails(&["xi-matrix", &fixture("ex113a.fipres"), "--ell", "1"]);
    assert!(stdout(&out).contains("1x1x2  1x2x1  x11x2"));
}

#[test]
fn output_is_deterministic() {
    let a = fixture("ex113b.fipres");
    for args in [
        vec!["tails", a.as_str(), "--json"],
        vec!["oracle", a.as_str(), "--n", "6"],
        vec!["qring", "--degree", "2", "--json"],
    ] {
        assert_eq!(fitails(&args).stdout, fitails(&args).stdout, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    let missing = fitails(&["tails", "no/such/file.fipres"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("no such file"));

    let unknown = fitails(&["tails", &fixture("ex113a.fipres"), "--frobnicate"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("--frobnicate"));

    let capped = fitails(&["oracle", &fixture("ex113a.fipres"), "--n", "6", "--max-matrix-cells", "100"]);
    assert_eq!(capped.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("above the cap of 100"));

    let below = fitails(&["evaluate", &fixture("ex113a.fipres"), "--n", "4"]);
    assert_eq!(below.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&below.stderr).contains("stable range"));

    let dir = std::env::temp_dir().join(format!("fitails-bad-{}.fipres", std::process::id()));
    std::fs::write(&dir, "generators: 2\nrelations: 3\nentry 1 1: +1*[1,9]\n").unwrap();
    let bad = fitails(&["tails", dir.to_str().unwrap()]);
    std::fs::remove_file(&dir).unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn schemas_reject_malformed_groups() {
    let schema = SchemaDir.retrieve(&Uri::parse(format!("{SCHEMA_BASE}tail_profile.schema.json")).unwrap()).unwrap();
    let validator = jsonschema::options().with_retriever(SchemaDir).build(&schema).unwrap();
    let good = serde_json::json!({"d": 1, "stable_from": 1, "invariants": [{"free_rank": 0, "torsion": ["123456789012345678901234"]}], "poly_degree": 0});
    assert!(validator.is_valid(&good));
    for bad in [
        serde_json::json!({"d": 1, "stable_from": 1, "invariants": [{"free_rank": 0, "torsion": [1]}], "poly_degree": 0}),
        serde_json::json!({"d": 1, "stable_from": 1, "invariants": [{"free_rank": -1, "torsion": []}], "poly_degree": 0}),
        serde_json::json!({"d": 1, "stable_from": 1, "invariants": [], "poly_degree": -2}),
    ] {
        assert!(!validator.is_valid(&bad), "{bad}");
    }
}
