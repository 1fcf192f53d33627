use std::fs;
use std::process::{Command, Output};

fn fcring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fcring")).args(args).env_clear().output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn so16_lattice_summary() {
    let o = fcring(&["fcsets", "@so16_lvl1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("5 sets, modular: yes, distributive: no"));
}

#[test]
fn ising_vacuum_deconstruction() {
    let o = fcring(&["deconstruct", "@ising", "--twister", "0", "--format", "records"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let head = out.lines().next().unwrap();
    assert!(head.contains("sectors=1 blocks=3 group_order=1"), "{head}");
}

#[test]
fn toric_twister_has_two_sectors() {
    let o = fcring(&["deconstruct", "@toric", "--twister", "1,e", "--format", "records"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().next().unwrap().contains("twister=yes"));
    assert!(out.contains("sectors=2"));
    assert!(out.contains("group_order=2 group_order_integral=yes"));
    assert_eq!(out.lines().filter(|l| l.starts_with("record=sector")).count(), 2);
}

#[test]
fn exit_codes() {
    assert_eq!(fcring(&["deconstruct", "@fibonacci", "--twister", "0,tau"]).status.code(), Some(4));
    assert_eq!(fcring(&["classes", "@ising", "--set", "0,sigma"]).status.code(), Some(4));
    assert_eq!(fcring(&["info", "@nonexistent"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.model");
    fs::write(&bad, "name = x\nlabels = [0, a]\nweights = [0, 1/0]\nfusion = []\n").unwrap();
    let o = fcring(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    // vacuum row is not the identity
    let broken = dir.path().join("broken.model");
    fs::write(&broken, "name = x\nlabels = [0, a]\nweights = [0, 0]\nfusion = [[0, 1, 0, 1], [1, 1, 0, 1]]\n").unwrap();
    assert_eq!(fcring(&["validate", broken.to_str().unwrap()]).status.code(), Some(1));

    // Z2 fusion admits no twist of order three
    let twisted = dir.path().join("twisted.model");
    fs::write(&twisted, "name = x\nlabels = [0, a]\nweights = [0, 1/3]\nfusion = [[1, 1, 0, 1]]\n").unwrap();
    assert_eq!(fcring(&["validate", twisted.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn catalog_emit_round_trips_through_validate() {
    let dir = tempfile::tempdir().unwrap();
    let o = fcring(&["catalog", "--emit", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    for name in ["ising", "toric", "d_s3"] {
        let p = dir.path().join(format!("{name}.model"));
        let o = fcring(&["validate", p.to_str().unwrap()]);
        assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("0 failed"));
    }
    let p = dir.path().join("ising.model");
    let again = tempfile::tempdir().unwrap();
    fcring(&["catalog", "--emit", again.path().to_str().unwrap()]);
    assert_eq!(fs::read(&p).unwrap(), fs::read(again.path().join("ising.model")).unwrap());
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &["conjectures", "@d_s3", "--format", "records"][..],
        &["galois", "@ising"][..],
        &["classes", "@d_s3", "--set", "a0_0,a0_1,a0_2"][..],
    ] {
        let a = fcring(args);
        let b = fcring(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn galois_single_unit_and_env_override() {
    let o = fcring(&["galois", "@fibonacci", "--ell", "2", "--format", "records"]);
    assert!(stdout(&o).contains("record=unit ell=2 perm=tau,0 signs=+-"));
    let o = Command::new(env!("CARGO_BIN_EXE_fcring"))
        .args(["info", "@ising"])
        .env_clear()
        .env("FCRING_PRECISION", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_fcring"))
        .args(["info", "@ising"])
        .env_clear()
        .env("FCRING_FORMAT", "records")
        .output()
        .unwrap();
    assert!(stdout(&o).starts_with("record=model name=ising rank=3"));
}

#[test]
fn conjecture_suites_pass_and_lattice_file_is_written() {
    let o = fcring(&["conjectures", "@z4", "--suite", "algint,lagrange"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("0 failed"));
    assert_eq!(fcring(&["conjectures", "@z4", "--suite", "nope"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("l.dot");
    assert!(fcring(&["fcsets", "@ising", "--lattice-out", dot.to_str().unwrap()]).status.success());
    assert!(fs::read_to_string(dot).unwrap().starts_with("digraph"));
}
