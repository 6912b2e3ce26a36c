//! The `psikit` binary end to end.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn psikit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psikit")).args(args).output().expect("binary runs")
}

fn scripts() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scripts");
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    v.sort();
    v
}

fn temp_script(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".psi").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn shipped_scripts_run_cleanly() {
    for s in scripts() {
        let out = psikit(&["check", s.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}: {}", s.display(), String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn json_reports_are_one_object_per_line() {
    let s = Path::new(env!("CARGO_MANIFEST_DIR")).join("scripts/gaussian.psi");
    let out = psikit(&["check", s.to_str().unwrap(), "--json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.is_empty());
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in ["command", "verdict", "trace", "millis", "engine"] {
            assert!(v.get(key).is_some(), "{key} missing in {line}");
        }
    }
}

#[test]
fn exit_codes() {
    let bad = temp_script("ring A = ZZ[x] / (x^2 -\n");
    let out = psikit(&["check", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1, column 18"));

    let unsupported = temp_script(
        "ring A = ZZ[x, y]\nring B = ZZ[x, y, z] / (z^2 - x*y)\nmap u : A -> B { x -> x, y -> y }\ncheck psi u\n",
    );
    assert_eq!(psikit(&["check", unsupported.path().to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(psikit(&["check", "/nonexistent/script.psi"]).status.code(), Some(1));
}

#[test]
fn certify_defaults_to_the_last_target() {
    let s = temp_script(
        "ring Z = ZZ\nring G = ZZ[i] / (i^2 + 1)\nprime P in Z = (2)\nmap u : Z -> G\nfact u finite\nfact u not surjective at P\n",
    );
    let out = psikit(&["certify", s.path().to_str().unwrap(), "--goal", "not-strong"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("verdict: proved"), "{text}");
    assert!(text.contains("Corollary 300"), "{text}");
}

#[test]
fn sweep_and_fuzz_commands() {
    let out = psikit(&["sweep-quadratic", "--from", "-7", "--to", "5"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "d,residue_mod_8,verdict\n-7,1,no\n-3,5,yes\n5,5,yes\n");
    let a = psikit(&["fuzz", "--seed", "3", "--count", "8", "--size-bound", "64"]);
    let b = psikit(&["fuzz", "--seed", "3", "--count", "8", "--size-bound", "64"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(psikit(&["sweep-quadratic", "--from", "5", "--to", "1"]).status.code(), Some(1));
}
