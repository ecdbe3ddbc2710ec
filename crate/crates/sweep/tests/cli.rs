use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ddsense"))
}

fn scenarios() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn crlb_prints_table() {
    let out = bin()
        .arg("crlb")
        .arg(scenarios().join("fig3.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 8);
    assert!(text.contains("two_step_otfs"));
}

#[test]
fn sweep_writes_csv_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["sweep", "--plot", "--out"])
        .arg(dir.path())
        .arg(scenarios().join("fig2.json"))
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("fig2.csv")).unwrap();
    assert_eq!(csv.lines().count(), 13);
    for f in ["fig2_tau.svg", "fig2_nu.svg", "fig2_tau.dat", "fig2_nu.dat"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}

#[test]
fn seed_override_changes_bounds() {
    let run = |seed: &str| {
        let out = bin()
            .args(["--seed", seed, "crlb"])
            .arg(scenarios().join("fig1.json"))
            .output()
            .unwrap();
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(run("42"), run("42"));
    assert_ne!(run("42"), run("7"));
}

#[test]
fn validation_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        &dir,
        "bad.json",
        r#"{ "config": { "m": 8, "n": 8, "scs_hz": 15000 },
             "paths": [{ "amplitude": 1, "delay_s": -1e-6, "doppler_hz": 0 }] }"#,
    );
    assert_eq!(
        bin().arg("crlb").arg(&p).output().unwrap().status.code(),
        Some(1)
    );
    let typo = write(
        &dir,
        "typo.json",
        r#"{ "config": { "m": 8, "n": 8, "scs_hz": 15000 }, "snr": 3,
             "paths": [{ "amplitude": 1, "delay_s": 1e-6, "doppler_hz": 0 }] }"#,
    );
    assert_eq!(
        bin().arg("crlb").arg(&typo).output().unwrap().status.code(),
        Some(1)
    );
}

#[test]
fn singular_point_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = r#"{ "amplitude": 1, "delay_s": 3.33e-6, "doppler_hz": 500 }"#;
    let p = write(
        &dir,
        "dup.json",
        &format!(
            r#"{{ "config": {{ "m": 6, "n": 6, "scs_hz": 15000 }}, "paths": [{path}, {path}] }}"#
        ),
    );
    let out = bin().arg("crlb").arg(&p).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout).unwrap().contains("singular"));
}

#[test]
fn missing_file_exits_3() {
    let out = bin()
        .args(["crlb", "/nonexistent/scenario.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn selfcheck_passes() {
    let out = bin().arg("selfcheck").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 12);
}
