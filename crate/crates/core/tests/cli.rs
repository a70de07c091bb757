use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const MODEL3: &str = r#"{"dim": 3, "basis": [
 {"name": "e1", "matrix": [[1,0,0],[0,0,0],[0,0,0]]},
 {"name": "e2", "matrix": [[0,0,0],[0,1,0],[0,0,0]]},
 {"name": "e3", "matrix": [[0,0,0],[0,0,0],[0,0,1]]}
]}"#;

const PRODUCT: &str = r#"{"factors": [
 {"model": {"dim": 1, "basis": [{"name": "P", "matrix": [[1]]}]},
  "bundle": {"rank": 1, "c1": {"coeffs": [0]}}, "polarization": {"coeffs": [1]}},
 {"model": {"dim": 1, "basis": [{"name": "P", "matrix": [[1]]}]},
  "bundle": {"rank": 2, "c1": {"coeffs": [-3]}}, "polarization": {"coeffs": [1]}}
]}"#;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        let f = Self { dir: TempDir::new().unwrap() };
        f.write("model.json", MODEL3);
        f.write("eta.json", r#"{"coeffs": [1, 1, 1]}"#);
        f.write("from.json", r#"{"coeffs": ["-1", -1, -1]}"#);
        f.write("to.json", r#"{"coeffs": [1, 3, 5]}"#);
        f.write("bundle.json", r#"{"rank": 2, "c1": {"coeffs": [1, 0, -1]}}"#);
        f.write("product.json", PRODUCT);
        f
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn abelreg(args: &[&str], envs: &[(&str, &str)], cwd: &Path) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_abelreg"));
    cmd.args(args).current_dir(cwd).env_remove("ABELREG_SCAN_CAP");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn rho_of_eta_is_g_minus_one() {
    let f = Fixture::new();
    let o = abelreg(&["rho", "--model", "model.json", "--gamma", "eta.json", "--eta", "eta.json"], &[], f.dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("value\t2\n"));

    let o = abelreg(
        &["--json", "rho", "--model", "model.json", "--gamma", "eta.json", "--eta", "eta.json"],
        &[],
        f.dir.path(),
    );
    let v = json(&o);
    assert_eq!(v["value"], 2);
    assert!(v["lower_witness"].as_i64().unwrap() < 2);
    assert!(v["upper_witness"].as_i64().unwrap() >= 2);
    assert_eq!(v["report_below"].as_array().unwrap().len(), 3);
}

#[test]
fn verlinde_examples() {
    let cwd = std::env::temp_dir();
    // (g, r, k, s, creg)
    for (g, r, k, s, creg) in [(2, 3, 1, 2, "2"), (3, 5, 3, 3, "3"), (2, 1, 5, 2, "0"), (1, 3, 7, 3, "1")] {
        let args = [
            "verlinde".to_string(),
            "--genus".into(),
            g.to_string(),
            "--rank".into(),
            r.to_string(),
            "--level".into(),
            k.to_string(),
            "--theta-power".into(),
            s.to_string(),
            "--cross-check".into(),
        ];
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = abelreg(&args, &[], &cwd);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        let out = stdout(&o);
        assert!(out.starts_with(&format!("creg\t{creg}\n")), "{args:?}: {out}");
        assert!(out.contains("cross_check\ttrue\n"), "{out}");
    }
}

#[test]
fn verlinde_domain_errors() {
    let cwd = std::env::temp_dir();
    let o = abelreg(&["verlinde", "--genus", "2", "--rank", "2", "--level", "4", "--theta-power", "2"], &[], &cwd);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("gcd must be odd"));
    let o = abelreg(&["verlinde", "--genus", "2", "--rank", "3", "--level", "1", "--theta-power", "1"], &[], &cwd);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn malformed_file_reports_position() {
    let f = Fixture::new();
    f.write("bad.json", "{\"dim\": 1,\n \"basis\": [\n  {\"name\": \"t\", \"matrix\": [[1 2]]}]}\n");
    let o = abelreg(&["index", "--model", "bad.json", "--class", "eta.json"], &[], f.dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("bad.json:3:"), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn missing_file_and_bad_flags_are_input_errors() {
    let f = Fixture::new();
    let o = abelreg(&["index", "--model", "nope.json", "--class", "eta.json"], &[], f.dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = abelreg(&["rho", "--model", "model.json"], &[], f.dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = abelreg(&["frobnicate"], &[], f.dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn index_of_negative_definite_class() {
    let f = Fixture::new();
    let o = abelreg(&["--json", "index", "--model", "model.json", "--class", "from.json"], &[], f.dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["index"], 3);
    assert_eq!(v["inertia"]["negatives"], 3);
}

#[test]
fn bounds_subcommand() {
    let f = Fixture::new();
    let o = abelreg(
        &["--json", "bounds", "--model", "model.json", "--bundle", "bundle.json", "--eta", "eta.json"],
        &[],
        f.dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["g"], 3);
    assert_eq!(v["bound_holds"], true);
    assert!(v["creg"].as_i64().unwrap() <= v["m_e"].as_i64().unwrap());
    assert_eq!(v["violations"], Value::Array(vec![]));

    let o = abelreg(&["creg", "--model", "model.json", "--bundle", "bundle.json", "--eta", "eta.json"], &[], f.dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with(&format!("creg\t{}\n", v["creg"])));
}

#[test]
fn scan_lists_chambers() {
    let f = Fixture::new();
    let o = abelreg(&["--json", "scan", "--model", "model.json", "--from", "from.json", "--to", "to.json"], &[], f.dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    // diag(-1 + 2t, -1 + 4t, -1 + 6t) degenerates at t = 1/6, 1/4, 1/2
    assert_eq!(v["critical_params"].as_array().unwrap().len(), 3);
    let indices: Vec<i64> = v["intervals"].as_array().unwrap().iter().map(|c| c["index"].as_i64().unwrap()).collect();
    assert_eq!(indices, vec![3, 2, 1, 0]);
    assert_eq!(v["critical_params"][2]["lo"], "1/2");
}

#[test]
fn scan_cap_is_enforced() {
    let f = Fixture::new();
    let args = ["rho", "--model", "model.json", "--gamma", "eta.json", "--eta", "eta.json"];
    let o = abelreg(&args, &[("ABELREG_SCAN_CAP", "1")], f.dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("search bound exceeded"));
    let o = abelreg(&args, &[("ABELREG_SCAN_CAP", "0")], f.dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = abelreg(&args, &[("ABELREG_SCAN_CAP", "1000")], f.dir.path());
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn product_formula_check() {
    let f = Fixture::new();
    let spec = f.path("product.json");
    let o = abelreg(&["--json", "product", "--spec", spec.to_str().unwrap(), "--formula-check"], &[], f.dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    // factor values 1 and 3, so max(1 + 1, 3) = 3
    assert_eq!(v["creg"], 3);
    assert_eq!(v["closed_form"], 3);
    assert_eq!(v["kunneth_creg"], 3);
    assert_eq!(v["kunneth_agrees"], true);
}

#[test]
fn validate_single_suite() {
    let o = abelreg(&["--json", "validate", "--suite", "catalogs", "--seed", "3"], &[], &std::env::temp_dir());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["failed"], 0);
    let o = abelreg(&["validate", "--suite", "nonsense"], &[], &std::env::temp_dir());
    assert_eq!(o.status.code(), Some(1));
}
