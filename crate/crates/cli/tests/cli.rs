use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const NILPOTENT3: &str = "2 3 3\n0 1 0\n0 0 1\n0 0 0\n";
const SWAP: &str = "2 2 2\n0 1\n1 0\n";
const FORM: &str = "3 2 3 1\n0 4 7\n0 0 2\n0 0 0\n";
const FORM_P2: &str = "2 1 4 2\n0 1 0 1\n0 0 1 0\n0 0 0 1\n0 0 0 0\n\n0 0 1 0\n0 0 0 1\n0 0 0 0\n0 0 0 0\n";

fn pgrl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgrl"))
        .args(args)
        .env_remove("PGRL_MAX_ENUM")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{name}.schema.json"));
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_valid(name: &str, instance: &Value) {
    let validator = jsonschema::validator_for(&schema(name)).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}\n{instance:#}");
}

fn json_run(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--json", "-"]);
    let o = pgrl(&all);
    let v = serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (code(&o), v)
}

#[test]
fn bounds_table_exits_zero() {
    let o = pgrl(&["bounds", "--k", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("sr_odd_classical"));
    assert!(stdout(&o).contains(" 6 "));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let o = pgrl(&["frobnicate"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("Usage"));
    assert_eq!(code(&pgrl(&[])), 2);
}

#[test]
fn malformed_matrix_file_is_exit_two() {
    let dir = TempDir::new().unwrap();
    for (name, text) in [
        ("range", "2 2 2\n0 2\n1 0\n"),
        ("short", "2 2 2\n0 1\n"),
        ("empty", ""),
        ("header", "2 2\n0 1\n"),
    ] {
        let p = write(&dir, name, text);
        let o = pgrl(&["closure", "--gens", s(&p)]);
        assert_eq!(code(&o), 2, "{name}");
        assert!(stderr(&o).contains("line"), "{name}: {}", stderr(&o));
    }
    let o = pgrl(&["closure", "--gens", "/nonexistent/file"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn certificate_round_trip_and_tampering() {
    let dir = TempDir::new().unwrap();
    let gens = write(&dir, "gens", NILPOTENT3);
    let cert = dir.path().join("cert.json");
    let o = pgrl(&["zero-ideal", "--gens", s(&gens), "--unital", "--json", s(&cert)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert_valid("zero_ideal", &v);
    assert_eq!(v["dim_A"], 3);
    assert_eq!(v["checks"]["bound"], true);

    let o = pgrl(&["zero-ideal", "--gens", s(&gens), "--unital", "--verify", s(&cert)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    // Replace B by the span of the Jordan block itself, which is not square-zero.
    let mut bad = v.clone();
    bad["basis_B"] = serde_json::json!([[[0, 1, 0], [0, 0, 1], [0, 0, 0]]]);
    let tampered = write(&dir, "bad.json", &bad.to_string());
    let o = pgrl(&["zero-ideal", "--gens", s(&gens), "--unital", "--verify", s(&tampered)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("INVALID"));

    let mut bad = v.clone();
    bad["codim"] = serde_json::json!(0);
    let tampered = write(&dir, "bad2.json", &bad.to_string());
    let (c, r) = json_run(&["zero-ideal", "--gens", s(&gens), "--unital", "--verify", s(&tampered)]);
    assert_eq!(c, 1);
    assert_valid("zero_ideal_verify", &r);
    assert_eq!(r["ok"], false);

    let garbage = write(&dir, "garbage.json", "{ not json");
    let o = pgrl(&["zero-ideal", "--gens", s(&gens), "--verify", s(&garbage)]);
    assert_eq!(code(&o), 2);
}

#[test]
fn non_commutative_input_is_rejected() {
    let dir = TempDir::new().unwrap();
    let gens = write(&dir, "gens", "2 2 2\n0 1\n0 0\n\n2 2 2\n0 0\n1 0\n");
    let o = pgrl(&["zero-ideal", "--gens", s(&gens)]);
    assert_eq!(code(&o), 2);
}

#[test]
fn every_subcommand_matches_its_schema() {
    let dir = TempDir::new().unwrap();
    let gens = write(&dir, "gens", NILPOTENT3);
    let swap = write(&dir, "swap", SWAP);
    let form = write(&dir, "form", FORM);
    let form2 = write(&dir, "form2", FORM_P2);

    let (c, v) = json_run(&["closure", "--gens", s(&gens), "--unital"]);
    assert_eq!(c, 0);
    assert_valid("closure", &v);
    assert_eq!(v["dim"], 3);

    let (c, v) = json_run(&["omega-index", "--gens", s(&swap), "--p", "2"]);
    assert_eq!(c, 0);
    assert_valid("omega_index", &v);

    let (c, v) = json_run(&["abelian-type", "--gens", s(&swap)]);
    assert_eq!(c, 0);
    assert_valid("abelian_type", &v);
    assert_eq!(v["type"], "C2");

    let (c, v) = json_run(&["verbal-index", "--gens", s(&swap)]);
    assert_eq!(c, 0);
    assert_valid("verbal_index", &v);

    let (c, v) = json_run(&["build-group", "--form", s(&form), "--seed", "9"]);
    assert_eq!(c, 0);
    assert_valid("build_group", &v);
    assert_eq!(v["seed"], 9);

    let (c, v) = json_run(&["build-group", "--form", s(&form), "--check", "quotient"]);
    assert_eq!(c, 0);
    assert_valid("build_group", &v);
    assert!(v["exponent"].is_null());

    let (c, v) = json_run(&["isotropy", "--n", "4", "--k", "2", "--p", "2", "--trials", "5", "--exhaustive"]);
    assert_eq!(c, 0);
    assert_valid("isotropy_search", &v);

    let (c, v) = json_run(&["isotropy", "--form", s(&form2), "--max-dim"]);
    assert_eq!(c, 0);
    assert_valid("isotropy_max_dim", &v);

    for family in [
        vec!["verify", "semidirect", "--m", "1", "--p", "2"],
        vec!["verify", "pattern", "--n", "4", "--p", "2"],
        vec!["verify", "sylow-frattini", "--n", "4", "--p", "3"],
        vec!["verify", "d16"],
    ] {
        let (c, v) = json_run(&family);
        assert_eq!(c, 0, "{family:?}");
        assert_valid("verify", &v);
    }

    let (c, v) = json_run(&["bounds", "--k", "4", "--n", "7"]);
    assert_eq!(c, 0);
    assert_valid("bounds", &v);
    let (c, v) = json_run(&["bounds", "--k", "5"]);
    assert_eq!(c, 0);
    assert_valid("bounds", &v);
}

#[test]
fn verify_all_passes() {
    let (c, v) = json_run(&["verify", "all"]);
    assert_eq!(c, 0);
    assert_valid("verify", &v);
    assert_eq!(v["ok"], true);
    assert!(v["reports"].as_array().unwrap().len() > 10);
}

#[test]
fn output_is_deterministic() {
    let args = ["isotropy", "--n", "5", "--k", "3", "--p", "3", "--trials", "40", "--seed", "17"];
    let a = pgrl(&args);
    let b = pgrl(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("seed 17"));

    let dir = TempDir::new().unwrap();
    let form = write(&dir, "form", FORM);
    let args = ["build-group", "--form", s(&form), "--seed", "3", "--json", "-"];
    assert_eq!(pgrl(&args).stdout, pgrl(&args).stdout);
}

#[test]
fn modulus_mismatch_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let swap = write(&dir, "swap", SWAP);
    let o = pgrl(&["omega-index", "--gens", s(&swap), "--p", "3"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn enumeration_cap_from_environment() {
    let dir = TempDir::new().unwrap();
    let gens = write(&dir, "gens", "3 3 3\n1 1 0\n0 1 0\n0 0 1\n\n3 3 3\n1 0 0\n0 1 1\n0 0 1\n");
    let run = |cap: &str| {
        Command::new(env!("CARGO_BIN_EXE_pgrl"))
            .args(["verbal-index", "--gens", s(&gens)])
            .env("PGRL_MAX_ENUM", cap)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("5")), 2);
    assert_eq!(code(&run("zero")), 2);
    let o = run("1000");
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn isotropy_requires_parameters() {
    assert_eq!(code(&pgrl(&["isotropy", "--n", "4"])), 2);
    assert_eq!(code(&pgrl(&["bounds", "--k", "5", "--n", "3"])), 2);
}
