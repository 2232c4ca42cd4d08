use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_duplex-em"))
}

fn scratch(name: &str) -> PathBuf {
    let d = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out").arg(out).output().unwrap()
}

#[test]
fn every_subcommand_succeeds_with_defaults() {
    let base = scratch("defaults");
    for (cmd, file) in [
        ("dual-invariants", "dual_invariants.csv"),
        ("cavity-field", "cavity_field.csv"),
        ("quantize", "spectrum.csv"),
        ("currents", "currents.csv"),
        ("resonance-fit", "fit.csv"),
        ("ssh-solve", "gap_solution.csv"),
        ("ssh-sweep", "ssh_sweep.csv"),
    ] {
        let out = base.join(cmd);
        let o = run(&[cmd], &out);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(out.join(file).is_file(), "{cmd} wrote no {file}");
        assert!(out.join("summary.json").is_file());
    }
}

#[test]
fn same_seed_gives_identical_csv() {
    let base = scratch("seeded");
    let read = |dir: &str| {
        let out = base.join(dir);
        let o = run(&["dual-invariants", "--random", "50", "--seed", "7"], &out);
        assert_eq!(o.status.code(), Some(0));
        fs::read(out.join("dual_invariants.csv")).unwrap()
    };
    assert_eq!(read("a"), read("b"));
    let other = base.join("c");
    run(&["dual-invariants", "--random", "50", "--seed", "8"], &other);
    assert_ne!(read("a"), fs::read(other.join("dual_invariants.csv")).unwrap());
}

#[test]
fn json_format_writes_json() {
    let out = scratch("json");
    let o = run(&["--format", "json", "resonance-fit"], &out);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(out.join("fit.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v.is_object() || v.is_array());
}

#[test]
fn usage_and_config_errors_exit_with_two() {
    let base = scratch("errors");
    assert_eq!(bin().arg("no-such-command").output().unwrap().status.code(), Some(2));

    let cfg = base.join("bad.json");
    fs::write(&cfg, r#"{"cavity": {"lenght": 2.0}}"#).unwrap();
    let o = bin().arg("--config").arg(&cfg).arg("cavity-field").arg("--out").arg(base.join("o")).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lenght"));

    let missing = base.join("missing.json");
    let o = bin().arg("--config").arg(&missing).arg("quantize").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_all_prints_table_and_passes() {
    let o = bin().args(["verify-all"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.ends_with("checks, 0 failed\n"), "{text}");
}

#[test]
fn impossible_tolerance_fails_validation() {
    let o = bin().args(["verify-all", "--tol", "1e-300"]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
    assert_eq!(bin().args(["verify-all", "--tol", "0"]).output().unwrap().status.code(), Some(2));
}
