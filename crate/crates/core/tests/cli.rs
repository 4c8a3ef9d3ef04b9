use std::path::Path;
use std::process::Command;

fn mkdv5(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mkdv5")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn small_config(dir: &Path, extra: &str) -> String {
    let path = dir.join("cfg.json");
    let text = format!(
        r#"{{"grid": {{"n": 1024, "dx": 0.15, "left": 0.5}}, "times": [1.0], "sponge": "off"{extra}}}"#
    );
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn verify_phase_succeeds() {
    let (code, stdout, _) = mkdv5(&["verify", "phase"]);
    assert_eq!(code, 0);
    assert!(stdout.lines().all(|l| l.starts_with("PASS")), "{stdout}");
}

#[test]
fn verify_model_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, _) = mkdv5(&["verify-model", "--nu", "0.1,0.5,1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{stdout}");
    assert_eq!(stdout.lines().count(), 9);
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn scatter_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, stdout, stderr) =
        mkdv5(&["scatter", "--potential", "box:1,1", "--zmin", "-1", "--zmax", "1", "--nz", "21", "--out", out]);
    assert_eq!(code, 0, "{stderr}");
    assert!(stdout.contains("PASS unitarity"));
    let csv = std::fs::read_to_string(dir.path().join("scattering.csv")).unwrap();
    assert!(csv.starts_with("z,re_a,im_a,re_b,im_b,re_r,im_r\n"));
    assert_eq!(csv.lines().count(), 22);
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "scatter");
}

#[test]
fn asymptote_writes_both_predictions() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, _, stderr) = mkdv5(&["asymptote", "--z0", "0.7", "--t", "25,50", "--out", out]);
    assert_eq!(code, 0, "{stderr}");
    for f in ["closed_form.csv", "assembled.csv"] {
        assert_eq!(std::fs::read_to_string(dir.path().join(f)).unwrap().lines().count(), 3);
    }
}

#[test]
fn evolve_small_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), r#", "potential": "gaussian:0.3,5""#);
    let out = dir.path().join("o");
    let (code, stdout, stderr) =
        mkdv5(&["evolve", "--config", &cfg, "--t-final", "0.2", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{stderr}");
    assert!(stdout.contains("mass drift"));
    assert_eq!(std::fs::read_to_string(out.join("field.csv")).unwrap().lines().count(), 1025);
}

#[test]
fn wrap_guard_violation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), r#", "potential": "gaussian:0.3,20""#);
    let out = dir.path().join("o");
    let (code, _, stderr) = mkdv5(&["evolve", "--config", &cfg, "--t-final", "0.1", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stderr.contains("wrap-around guard"), "{stderr}");
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = small_config(dir.path(), r#", "unknown_key": 1"#);
    assert_eq!(mkdv5(&["evolve", "--config", &bad, "--t-final", "1"]).0, 2);
    let missing = dir.path().join("nope.json");
    assert_eq!(mkdv5(&["asymptote", "--config", missing.to_str().unwrap()]).0, 2);
    assert_eq!(mkdv5(&["verify", "nonsense"]).0, 2);
    assert_eq!(mkdv5(&["scatter", "--potential", "triangle:1"]).0, 2);
    assert_eq!(mkdv5(&["frobnicate"]).0, 2);
    std::fs::write(dir.path().join("neg.json"), r#"{"dt": -1}"#).unwrap();
    assert_eq!(mkdv5(&["compare", "--config", dir.path().join("neg.json").to_str().unwrap()]).0, 2);
}
