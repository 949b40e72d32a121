use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str], input: &str) -> Output {
    let path = dir.join("input.json");
    std::fs::write(&path, input).unwrap();
    Command::new(env!("CARGO_BIN_EXE_uniqpair"))
        .args(args)
        .arg(&path)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn bounds_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&run(dir.path(), &["bounds"], r#"{"a": 1, "b": 2, "n": 0}"#));
    assert_eq!(v["e_down"].as_f64().unwrap(), 5.434802200544679);
    assert_eq!(v["e_up"].as_f64().unwrap(), 6.934802200544679);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let schema = run(dir.path(), &["classify"], r#"{"points": [1, "x"]}"#);
    assert_eq!(schema.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&schema.stderr).contains("line 1"));
    let strict = run(dir.path(), &["bounds"], r#"{"a": -1, "b": 1}"#);
    assert_eq!(strict.status.code(), Some(2));
    let relaxed = run(dir.path(), &["bounds", "--relaxed"], r#"{"a": -1, "b": 1}"#);
    assert_eq!(relaxed.status.code(), Some(0));
    let unknown = run(dir.path(), &["nonsense"], "{}");
    assert_eq!(unknown.status.code(), Some(2));
    let too_many = run(dir.path(), &["spectrum"], r#"{"a": 0, "b": 1, "k": 1000}"#);
    assert_eq!(too_many.status.code(), Some(2));
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let input = r#"{"lambda": {"points": [0.5, 1.0, 1.7]}, "mu": {"points": [2, 3]}}"#;
    let a = run(dir.path(), &["gse", "-o", "a.json", "--csv", "a.csv"], input);
    let b = run(dir.path(), &["gse", "-o", "b.json", "--csv", "b.csv"], input);
    assert!(a.status.success() && b.status.success());
    let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
    assert_eq!(read("a.json"), read("b.json"));
    assert_eq!(read("a.csv"), read("b.csv"));
    let csv = String::from_utf8(read("a.csv")).unwrap();
    assert!(csv.starts_with("side,j,a,b,energy,"));
    assert_eq!(csv.lines().count(), 1 + 2 + 1);
}

#[test]
fn reports_reparse() {
    let dir = tempfile::tempdir().unwrap();
    let point_set = r#"{"convention": "ordinary", "points": [0.1, 0.4, 0.8, 1.3], "tail": {"alpha": 0.5}}"#;
    for cmd in ["classify", "lemma", "convert"] {
        json(&run(dir.path(), &[cmd], point_set));
    }
    // convert emits a point set that is valid input again, and converting twice is the identity
    let once = run(dir.path(), &["convert"], point_set);
    let twice = json(&run(dir.path(), &["convert"], std::str::from_utf8(&once.stdout).unwrap()));
    assert_eq!(twice["convention"], "ordinary");
    let pts: Vec<f64> = twice["points"].as_array().unwrap().iter().map(|p| p.as_f64().unwrap()).collect();
    for (x, y) in pts.iter().zip([0.1, 0.4, 0.8, 1.3]) {
        assert!((x - y).abs() < 1e-15);
    }
    let norm = json(&run(dir.path(), &["norm"], r#"{"re": [0, 1]}"#));
    assert_eq!(norm["h_sq_spectral"], 3.0);
    let spectrum = run(dir.path(), &["spectrum", "--grid", "256", "--csv", "s.csv"], r#"{"a": 1, "b": 2, "k": 2}"#);
    let v = json(&spectrum);
    assert_eq!(v["energies"].as_array().unwrap().len(), 2);
    let csv = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert!(csv.starts_with("x,psi0,psi1\n"));
    assert_eq!(csv.lines().count(), 1 + 257);
    let h = json(&run(dir.path(), &["hermite"], r#"{"n": 0, "xs": [0]}"#));
    assert!((h["values"][0].as_f64().unwrap() - std::f64::consts::PI.powf(-0.25)).abs() < 1e-15);
}

#[test]
fn certify_command() {
    let dir = tempfile::tempdir().unwrap();
    let input = r#"{
        "lambda": {"points": [1, 2, 2.5]},
        "mu": {"points": [1, 2, 2.5]},
        "f_weights": {"re": [1, 0]},
        "f_hat_weights": {"re": [0, 0]},
        "fourier_check": "report"
    }"#;
    let v = json(&run(dir.path(), &["certify"], input));
    assert_eq!(v["verdict"], "contradiction");
    assert_eq!(v["side_lambda"].as_array().unwrap().len(), 1);
    assert!(v["broken_links"].as_array().unwrap().iter().any(|l| l == "moments == energy"));
    let enforced = input.replace("\"report\"", "\"enforce\"");
    assert_eq!(run(dir.path(), &["certify"], &enforced).status.code(), Some(2));
}
