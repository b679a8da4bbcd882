//! Black-box tests against the built binary: determinism of the full
//! registry run, exit codes, and spec parsing.

use std::process::Command;

fn rsk() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rsk"))
}

#[test]
fn suite_all_is_byte_identical() {
    // a coarse grid keeps the two full-registry runs fast; determinism is
    // a property of the code path, not of the resolution
    let run = || {
        let out = rsk()
            .args(["suite", "--name", "all", "--grid-k", "5", "--t-min", "0.00000095367431640625"])
            .output()
            .unwrap();
        assert!(
            out.status.code() == Some(0) || out.status.code() == Some(2),
            "suite errored: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    let a = run();
    let b = run();
    assert!(!a.is_empty());
    assert_eq!(a, b, "suite output must be byte-identical across runs");
}

#[test]
fn eval_norm_indicator_closed_form() {
    let out = rsk()
        .args(["eval-norm", "--family", "lorentz:2,1", "--fn", "indicator:0.25"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!((v - 1.0).abs() < 1e-9, "{v}");
}

#[test]
fn optimal_target_prints_space() {
    let out = rsk()
        .args([
            "optimal-target", "--base", "lorentz:4/3,1", "--profile", "power:0.75", "--m", "2",
            "--no-check",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("L^(4,1)"), "{text}");
}

#[test]
fn bad_spec_exits_three() {
    let out = rsk()
        .args(["eval-norm", "--family", "lorentz:0.5,1", "--fn", "indicator:0.25"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = rsk()
        .args(["suite", "--name", "not-a-check"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn eval_op_output_round_trips() {
    let dir = std::env::temp_dir().join("rsk-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("image.json");
    let out = rsk()
        .args([
            "eval-op", "--op", "h", "--profile", "power:0.5", "--m", "2", "--fn", "power:0.3",
            "--grid-k", "4", "--t-min", "0.00006",
            "--output", path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // the written image must parse back as a function spec
    let spec = format!("file:{}", path.display());
    let out = rsk()
        .args(["eval-norm", "--family", "lp:2", "--fn", &spec])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!(v.is_finite() && v > 0.0);
}
