use std::process::Command;

use flatinv_cli::{load_problem, parse_args, run, Invocation, EXIT_DOMAIN, EXIT_OK, EXIT_PARSE};
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_flatinv");

fn exec(args: &[&str]) -> (i32, Value) {
    let argv = std::iter::once("flatinv").chain(args.iter().copied());
    match parse_args(argv) {
        Invocation::Run(c) => {
            let (status, text) = run(&c);
            (status, serde_json::from_str(&text).expect("valid JSON"))
        }
        Invocation::Error(text) => (EXIT_PARSE, serde_json::from_str(&text).expect("valid JSON")),
        Invocation::Text(..) => panic!("unexpected help text"),
    }
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

const IDENTITY: &str = r#"{"variance":"ud","c":[[1,0,0],[0,1,0],[0,0,1]]}"#;

#[test]
fn identity_invariants() {
    let (status, out) = exec(&["invariants", "--metric", "euclidean:3", "--tensor", IDENTITY]);
    assert_eq!(status, EXIT_OK);
    assert_eq!(floats(&out["a"]), [3.0, 3.0, 1.0]);
    assert_eq!(floats(&out["trace_powers"]), [3.0, 3.0, 3.0]);
    assert_eq!(out["class"], "Symmetric");
    assert_eq!(out["eigenvalues"].as_array().unwrap().len(), 3);
    assert_eq!(out["ch_residual"].as_f64(), Some(0.0));
}

#[test]
fn em_field_example() {
    let (status, out) = exec(&["em", "--e", "1,0,0", "--b", "0,0,0"]);
    assert_eq!(status, EXIT_OK);
    assert_eq!(out["a2"].as_f64(), Some(-1.0));
    assert_eq!(out["a4"].as_f64(), Some(0.0));
    let text = run(match &parse_args(["flatinv", "em", "--e", "1,0,0", "--b", "0,0,0"]) {
        Invocation::Run(c) => c,
        _ => unreachable!(),
    })
    .1;
    assert!(text.contains("\"a2\": -1.0") && text.contains("\"a4\": 0.0"));
    assert!(!text.contains("-0.0"));
}

#[test]
fn em_negative_components_and_audit() {
    let (status, out) = exec(&["em", "--e", "1,2,0", "--b", "-1,0.5,3"]);
    assert_eq!(status, EXIT_OK);
    let eb: f64 = 1.0 * -1.0 + 2.0 * 0.5;
    assert_eq!(eb, 0.0);
    assert!((out["a2"].as_f64().unwrap() - (10.25 - 5.0)).abs() < 1e-12);
    assert_eq!(out["report"]["records"].as_array().unwrap().len(), 6);
}

#[test]
fn stress_energy_report() {
    let (status, out) = exec(&["stress-energy", "--d", "2", "--p", "0,0,0", "--t", "1,0,0,0,1,0,0,0,1"]);
    assert_eq!(status, EXIT_OK);
    // A^ab = diag(2, -1, -1, -1) so the mixed form is diag(2, 1, 1, 1)
    assert_eq!(floats(&out["trace_powers"]), [5.0, 7.0, 11.0, 19.0]);
    assert_eq!(floats(&out["a"]), [5.0, 9.0, 7.0, 2.0]);
    let (status, out) = exec(&["stress-energy", "--d", "2", "--p", "0,0,0", "--t", "1,0,0,0,1,0,0,0,1", "--traceless"]);
    assert_eq!(status, EXIT_DOMAIN);
    assert_eq!(out["error"], "NotTraceless");
}

#[test]
fn stress_energy_rejects_asymmetric_block() {
    let (status, out) = exec(&["stress-energy", "--d", "0", "--p", "0,0,0", "--t", "0,1,0,0,0,0,0,0,0"]);
    assert_eq!(status, EXIT_DOMAIN);
    assert_eq!(out["error"], "AsymmetricBlock");
}

#[test]
fn load_problem_examples() {
    let (m, t) = load_problem(r#"{"metric":"minkowski","tensor":{"variance":"uu","c":[[0,1,0,0],[-1,0,0,0],[0,0,0,0],[0,0,0,0]]}}"#)
        .unwrap();
    assert_eq!((m.dim(), t.dim()), (4, 4));

    let err = load_problem(r#"{"metric":"euclidean:3","tensor":{"variance":"uu","c":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}}"#)
        .unwrap_err();
    assert_eq!(err.name(), "DimensionMismatch");
    assert_eq!(err.status(), EXIT_DOMAIN);

    let err = load_problem(r#"{"metric":"minkowski","tensor":{"c":[[1]]}}"#).unwrap_err();
    assert_eq!(err.name(), "ParseError");
    assert!(err.to_string().contains("\"variance\""));

    let (m, _) = load_problem(r#"{"metric":{"dim":2,"g":[[2,0],[0,-3]]},"tensor":{"variance":"dd","c":[[1,0],[0,1]]}}"#)
        .unwrap();
    assert_eq!(m.dim(), 2);
    let err = load_problem(r#"{"metric":{"dim":3,"g":[[1,0],[0,1]]},"tensor":{"variance":"dd","c":[[1,0],[0,1]]}}"#)
        .unwrap_err();
    assert_eq!(err.name(), "DimensionMismatch");
    assert_eq!(load_problem("{not json").unwrap_err().name(), "ParseError");
    assert_eq!(load_problem(r#"{"metric":"sphere","tensor":{}}"#).unwrap_err().name(), "ParseError");
}

#[test]
fn degenerate_metric_is_a_domain_error() {
    let (status, out) = exec(&["invariants", "--metric", r#"{"dim":2,"g":[[1,1],[1,1]]}"#, "--tensor", r#"{"variance":"uu","c":[[1,0],[0,1]]}"#]);
    assert_eq!(status, EXIT_DOMAIN);
    assert_eq!(out["error"], "DegenerateMetric");
}

#[test]
fn flags_override_input_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("problem.json");
    std::fs::write(&path, format!(r#"{{"metric":{{"dim":3,"g":[[2,0,0],[0,2,0],[0,0,2]]}},"tensor":{IDENTITY}}}"#)).unwrap();
    let p = path.to_str().unwrap();
    let (_, from_file) = exec(&["invariants", "--input", p, "--tensor", r#"{"variance":"uu","c":[[1,0,0],[0,1,0],[0,0,1]]}"#]);
    // g = 2I lowers an index with a factor 2
    assert_eq!(floats(&from_file["a"]), [6.0, 12.0, 8.0]);
    let (_, overridden) = exec(&["invariants", "--input", p, "--metric", "euclidean:3"]);
    assert_eq!(floats(&overridden["a"]), [3.0, 3.0, 1.0]);
}

#[test]
fn basis_and_eigen_commands() {
    let em = r#"{"variance":"uu","c":[[0,-1,0,0],[1,0,-2,0],[0,2,0,-3],[0,0,3,0]]}"#;
    let (status, out) = exec(&["basis", "--metric", "minkowski", "--tensor", em, "--rep", "coefficients"]);
    assert_eq!(status, EXIT_OK);
    assert_eq!(out["class"], "Antisymmetric");
    let names: Vec<_> = out["entries"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["a2", "a4"]);

    let (status, out) = exec(&["basis", "--metric", "euclidean:2", "--tensor", r#"{"variance":"uu","c":[[1,2],[3,4]]}"#]);
    assert_eq!(status, EXIT_DOMAIN);
    assert_eq!(out["error"], "UnsupportedClass");

    let (status, out) = exec(&["eigen", "--metric", "euclidean:2", "--tensor", r#"{"variance":"ud","c":[[0,-2],[2,0]]}"#]);
    assert_eq!(status, EXIT_OK);
    let vals = out["eigenvalues"].as_array().unwrap();
    assert_eq!(floats(&vals[0]), [0.0, 2.0]);
    assert_eq!(floats(&vals[1]), [0.0, -2.0]);
    assert_eq!(out["eigenvectors"].as_array().unwrap().len(), 2);
}

#[test]
fn check_invariance_verdicts() {
    let em = r#"{"variance":"uu","c":[[0,-1,0,0],[1,0,-2,0],[0,2,0,-3],[0,0,3,0]]}"#;
    let (status, out) = exec(&["check-invariance", "--metric", "minkowski", "--tensor", em, "--samples", "25", "--seed", "9"]);
    assert_eq!(status, EXIT_OK);
    let verdict = |name: &str| {
        out["scalars"].as_array().unwrap().iter().find(|s| s["name"] == name).unwrap()["verdict"].clone()
    };
    assert_eq!(verdict("e.b"), "Invariant");
    assert_eq!(verdict("e.e"), "NotInvariant");
    let (_, out) = exec(&["check-invariance", "--metric", "minkowski", "--tensor", em, "--samples", "25", "--improper"]);
    let eb = out["scalars"].as_array().unwrap().iter().find(|s| s["name"] == "e.b").unwrap();
    assert_eq!(eb["verdict"], "SignFlip");
}

#[test]
fn parse_errors_are_json() {
    let (status, out) = exec(&["em", "--e", "1,0", "--b", "0,0,0"]);
    assert_eq!(status, EXIT_PARSE);
    assert_eq!(out["error"], "ParseError");
    let (status, out) = exec(&["invariants", "--metric", "euclidean:3", "--tensor", "{"]);
    assert_eq!(status, EXIT_PARSE);
    assert_eq!(out["error"], "ParseError");
    let (status, _) = exec(&["invariants", "--tol", "0", "--metric", "euclidean:3", "--tensor", IDENTITY]);
    assert_eq!(status, EXIT_PARSE);
}

#[test]
fn binary_exit_codes_and_output_file() {
    let ok = Command::new(BIN).args(["em", "--e", "1,0,0", "--b", "0,0,0"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let first: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(first["a2"].as_f64(), Some(-1.0));

    let bad = Command::new(BIN).args(["nonsense"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(err["error"], "ParseError");

    let domain = Command::new(BIN)
        .args(["invariants", "--metric", "euclidean:2", "--tensor", IDENTITY])
        .output()
        .unwrap();
    assert_eq!(domain.status.code(), Some(1));

    let help = Command::new(BIN).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("check-invariance"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let st = Command::new(BIN)
        .args(["em", "--e", "1,0,0", "--b", "0,0,0", "--output", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
    assert!(st.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), ok.stdout);
}

#[test]
fn tolerance_from_environment() {
    let near_traceless = r#"{"variance":"uu","c":[[1e-6,0],[0,0]]}"#;
    let class = |env: Option<&str>| {
        let mut cmd = Command::new(BIN);
        cmd.args(["invariants", "--metric", "euclidean:2", "--tensor", near_traceless]);
        cmd.env_remove("FLATINV_TOL");
        if let Some(v) = env {
            cmd.env("FLATINV_TOL", v);
        }
        let out: Value = serde_json::from_slice(&cmd.output().unwrap().stdout).unwrap();
        out["class"].as_str().unwrap().to_string()
    };
    // max|component| is 1e-6, so the trace 1e-6 is never small relative to it
    assert_eq!(class(None), "Symmetric");
    assert_eq!(class(Some("0.6")), "SymmetricTraceless");
}

#[test]
fn output_is_deterministic() {
    let args = ["check-invariance", "--metric", "minkowski", "--tensor",
        r#"{"variance":"ud","c":[[1,2,0,0],[0,1,3,0],[0,0,2,1],[1,0,0,1]]}"#, "--samples", "40", "--seed", "3"];
    let a = Command::new(BIN).args(args).output().unwrap();
    let b = Command::new(BIN).args(args).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    let s1 = Command::new(BIN).arg("selftest").output().unwrap();
    assert_eq!(s1.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&s1.stdout).unwrap();
    assert_eq!(report["failed"].as_u64(), Some(0));
    assert_eq!(Command::new(BIN).arg("selftest").output().unwrap().stdout, s1.stdout);
}
