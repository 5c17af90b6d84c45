//! End-to-end tests of the command line: exit codes, golden JSON reports,
//! and run-to-run determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_loopext"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn exit_codes() {
    // 0: checks pass
    assert!(run(&["verify-algebra", "--type", "A1"]).status.success());
    // 2: unsupported algebra
    let out = run(&["verify-algebra", "--type", "H3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify-algebra", "--type", "E6"]);
    assert_eq!(out.status.code(), Some(2));
    // 2: malformed zeta
    let out = run(&["gl2z", "--zeta", "1.5", "--bound", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // 2: malformed theta
    let out = run(&["lift", "--theta", "spin:1", "--cocycle", "kassel", "--type", "A1"]);
    assert_eq!(out.status.code(), Some(2));
    // 1: no lift exists
    let out = run(&[
        "lift", "--theta", "base:mat:1,1,0,1", "--cocycle", "ef", "--type", "A2", "--zeta", "i",
        "--window", "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn golden_reports_are_byte_identical() {
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("verify_algebra_a1.json", vec!["verify-algebra", "--type", "A1"]),
        ("verify_algebra_g2.json", vec!["verify-algebra", "--type", "G2"]),
        (
            "cocycle_kassel_a1_d2.json",
            vec!["cocycle", "--kind", "kassel", "--type", "A1", "--n", "1", "--window", "2"],
        ),
        (
            "cocycle_ef_zeta4_a2_d1.json",
            vec!["cocycle", "--kind", "ef", "--zeta", "i", "--type", "A2", "--window", "1"],
        ),
        ("gl2z_zeta4_b1.json", vec!["gl2z", "--zeta", "i", "--bound", "1"]),
        ("gl2z_zeta0_b2.json", vec!["gl2z", "--zeta", "0", "--bound", "2"]),
        (
            "descend_a2_swap_d3.json",
            vec![
                "descend", "--type", "A2", "--aut", "diagram-swap", "--order", "2", "--window",
                "3",
            ],
        ),
        (
            "lift_weyl_a1.json",
            vec!["lift", "--theta", "weyl:e,f", "--cocycle", "kassel", "--type", "A1", "--window", "2"],
        ),
        (
            "lift_base_scale_residue.json",
            vec![
                "lift", "--theta", "base:scale:2", "--cocycle", "residue", "--type", "A1",
                "--window", "2",
            ],
        ),
    ];
    for (file, mut args) in cases {
        args.push("--format");
        args.push("json");
        let first = stdout(&args);
        assert_eq!(first, golden(file), "golden mismatch for {file}");
        let second = stdout(&args);
        assert_eq!(first, second, "nondeterministic output for {file}");
    }
}

#[test]
fn gl2z_zeta4_is_stable_under_larger_bounds() {
    for bound in ["1", "2", "3"] {
        let text = stdout(&["gl2z", "--zeta", "i", "--bound", bound]);
        assert!(text.contains(": 4 matrices"), "bound {bound}: {text}");
    }
    let text = stdout(&["gl2z", "--zeta", "0", "--bound", "2"]);
    assert!(text.contains(": 20 matrices"), "{text}");
}

#[test]
fn corrupted_tabulation_round_trip() {
    let dir = std::env::temp_dir().join(format!("loopext-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.coc");
    let bad = dir.join("bad.coc");
    assert!(run(&[
        "cocycle", "--kind", "kassel", "--type", "A1", "--n", "1", "--window", "1",
        "--export-tabulated", good.to_str().unwrap(),
    ])
    .status
    .success());
    assert!(run(&[
        "cocycle", "--kind", "kassel", "--type", "A1", "--n", "1", "--window", "1",
        "--export-tabulated", bad.to_str().unwrap(), "--corrupt",
    ])
    .status
    .success());
    let ok = run(&["cocycle", "--kind", "tabulated", "--file", good.to_str().unwrap(), "--window", "1"]);
    assert!(ok.status.success());
    let fail = run(&["cocycle", "--kind", "tabulated", "--file", bad.to_str().unwrap(), "--window", "1"]);
    assert_eq!(fail.status.code(), Some(1));
    assert!(String::from_utf8(fail.stdout).unwrap().contains("witness"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn datum_files_drive_descend() {
    let dir = std::env::temp_dir().join(format!("loopext-datum-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("a2.toml");
    std::fs::write(
        &path,
        "version = 1\nalgebra = \"A2\"\norders = [2]\n\n[[generators]]\naut = \"diagram:swap\"\n",
    )
    .unwrap();
    let flags = stdout(&[
        "descend", "--type", "A2", "--aut", "diagram-swap", "--order", "2", "--window", "2",
        "--format", "json",
    ]);
    let file = stdout(&["descend", "--datum", path.to_str().unwrap(), "--window", "2", "--format", "json"]);
    assert_eq!(flags, file);
    // bad datum: involution with the wrong order
    std::fs::write(
        &path,
        "version = 1\nalgebra = \"A2\"\norders = [3]\n\n[[generators]]\naut = \"diagram:swap\"\n",
    )
    .unwrap();
    let out = run(&["descend", "--datum", path.to_str().unwrap(), "--window", "2"]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn triality_descends() {
    let out = run(&["descend", "--type", "D4", "--aut", "triality", "--order", "3", "--window", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[0]:1"), "{text}");
}
