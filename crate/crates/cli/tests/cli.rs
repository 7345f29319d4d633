use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bellkit"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bellkit-cli-test-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn check_counterexample_reports_violation_and_weight() {
    let out = bin()
        .args(["check", "builtin:pe", "--q", "1,2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("no-signalling: true"));
    assert!(stdout.contains("local weight: 97/100"));
    assert!(stdout.contains("1 I2233-type"));
    assert!(stdout.contains("violated = [false, false, false, true]"));
}

#[test]
fn check_noise_box_is_unremarkable() {
    let out = bin()
        .args(["check", "builtin:noise_2233"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("local weight: 1/1"));
    assert!(stdout.contains("0 CHSH-type, 0 I2233-type"));
}

#[test]
fn check_nonlocal_box_value_and_weight() {
    let out = bin().args(["check", "builtin:p_nl"]).output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("I2233 #1 -> 4/1"));
    assert!(stdout.contains("local weight: 0/1"));
}

#[test]
fn parameterized_builtin_accepts_fractions_and_decimals() {
    for eps in ["4/7", "0.5714285714285714285714285714"] {
        let out = bin()
            .args(["check", "builtin:p_iso", "--eps", eps])
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let out = bin().args(["check", "builtin:p_iso"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "missing eps must fail");
}

#[test]
fn malformed_input_exits_2() {
    let dir = temp_dir("malformed");
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("bad.json");
    std::fs::write(&file, "{\"scenario\": [2,2,3,3], \"probs\": [\"1/2\"]}").unwrap();
    let out = bin().arg("check").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["check", "builtin:nosuch"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn file_round_trip_matches_builtin() {
    let dir = temp_dir("roundtrip");
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("pe.json");
    std::fs::write(&file, bellkit::catalog::p_e().to_json_string()).unwrap();
    let out = bin().arg("check").arg(&file).output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("local weight: 97/100"));
}

#[test]
fn reproduce_writes_manifest_and_artifacts() {
    let dir = temp_dir("footnote");
    let out = bin()
        .args(["reproduce", "footnote", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.join("manifest.json").exists());
    assert!(dir.join("footnote_chain.json").exists());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["library_version"], bellkit::version());
    assert!(manifest["config_hash"].as_str().unwrap().len() == 16);
}

#[test]
fn reruns_are_byte_identical() {
    let dir1 = temp_dir("rerun1");
    let dir2 = temp_dir("rerun2");
    for dir in [&dir1, &dir2] {
        let out = bin()
            .args(["reproduce", "prop2", "--out"])
            .arg(dir)
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let a = std::fs::read(dir1.join("prop2_entropy.csv")).unwrap();
    let b = std::fs::read(dir2.join("prop2_entropy.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn unknown_target_exits_2() {
    let out = bin().args(["reproduce", "nosuch"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn orbit_counts() {
    let out = bin()
        .args(["orbit", "builtin:p_nl", "--group", "local"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("orbit size: 432"));

    let out = bin()
        .args(["orbit", "builtin:noise_2233", "--group", "full"])
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("orbit size: 1"));

    let out = bin().args(["orbit", "functional:chsh22"]).output().unwrap();
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("orbit size: 8"));
}
