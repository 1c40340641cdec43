use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fmkernel_cli::cache::{Cache, CACHE_VERSION};
use fmkernel_cli::commands::{combine, mixed_pairs};
use serde_json::Value;

fn fmkernel(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fmkernel"));
    cmd.args(args).env_remove("FMKERNEL_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("FMKERNEL_CACHE_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn theorem_c_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = fmkernel(&["verify-theorem-c", "--ell", "1", "--n", "2", "--mode", "both", "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let doc = read_json(&out);
    let rep = &doc["reports"][0];
    assert_eq!(rep["verdict"], "P_FUNCTOR(2)");
    assert_eq!(rep["mode"], "both");
    assert_eq!(rep["params"]["dim_mode"], "surface");
    assert_eq!(rep["euler_check"], true);
    let degrees: Vec<i64> = rep["cohomology"].as_array().unwrap().iter().map(|e| e["degree"].as_i64().unwrap()).collect();
    let omegas: Vec<i64> = rep["cohomology"].as_array().unwrap().iter().map(|e| e["omega"].as_i64().unwrap()).collect();
    assert_eq!((degrees, omegas), (vec![0, 2], vec![0, -1]));
}

#[test]
fn failure_exit_code() {
    let o = fmkernel(&["verify-failure", "--ell", "2", "--n", "2", "--dim", "curve"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stdout).contains("{x,z1,z2}|{x1,x2,z}"));
}

#[test]
fn open_case_exits_one() {
    // both engines leave pairs that could cancel everything off the identity support
    let o = fmkernel(&["verify-failure", "--ell", "2", "--n", "1", "--dim", "surface"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("INCONSISTENT"));
}

#[test]
fn bounds_exit_64() {
    assert_eq!(fmkernel(&["lambda-table", "--m-max", "13"], None).status.code(), Some(64));
    assert_eq!(fmkernel(&["cech-check", "--k-max", "13"], None).status.code(), Some(64));
    assert_eq!(fmkernel(&["verify-theorem-c", "--ell", "4", "--n", "5", "--engine", "concrete"], None).status.code(), Some(64));
    assert_eq!(fmkernel(&["char-check", "--oracle-max", "7"], None).status.code(), Some(64));
    // malformed arguments must not look like an expected failure
    assert_eq!(fmkernel(&["verify-theorem-c", "--ell", "1"], None).status.code(), Some(64));
    assert_eq!(fmkernel(&["verify-theorem-c", "--dim", "plane"], None).status.code(), Some(64));
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, jobs) in [(&a, "1"), (&b, "3")] {
        let o = fmkernel(&["verify-prop-a", "--n-max", "5", "--jobs", jobs, "--out", path.to_str().unwrap()], None);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn lambda_table_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let first = fmkernel(&["lambda-table", "--m-max", "6", "--d", "2"], Some(dir.path()));
    assert_eq!(first.status.code(), Some(0));
    let entry = dir.path().join(format!("v{CACHE_VERSION}/lambda/m6-d2.json"));
    let cached = read_json(&entry);
    assert_eq!(cached["version"], CACHE_VERSION);
    assert_eq!(cached["data"].as_array().unwrap().len(), 6);
    let second = fmkernel(&["lambda-table", "--m-max", "6", "--d", "2"], Some(dir.path()));
    assert_eq!(first.stdout, second.stdout);

    // an entry from another format version is ignored and replaced
    let mut stale = cached.clone();
    stale["version"] = Value::from(CACHE_VERSION + 1);
    stale["data"] = Value::Array(vec![]);
    fs::write(&entry, stale.to_string()).unwrap();
    let third = fmkernel(&["lambda-table", "--m-max", "6", "--d", "2"], Some(dir.path()));
    assert_eq!(first.stdout, third.stdout);
    assert_eq!(read_json(&entry), cached);
}

#[test]
fn cache_flag_and_disabled_cache() {
    let dir = tempfile::tempdir().unwrap();
    let o = fmkernel(&["orbit-table", "--ell", "1", "--n", "2", "--cache-dir", dir.path().to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join(format!("v{CACHE_VERSION}/orbits/l1-n2-i0-j1.json")).exists());

    let off = Cache::disabled();
    off.store("lambda", "x", &1u32).unwrap();
    assert_eq!(off.load::<u32>("lambda", "x"), None);
}

#[test]
fn model_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("point.json");
    fs::write(&good, r#"{"degrees": [0, 2], "pairing": [[0, 1], [1, 0]]}"#).unwrap();
    let o = fmkernel(&["fock-check", "--model", good.to_str().unwrap(), "--max-n", "2", "--truncation", "4"], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let degenerate = dir.path().join("bad.json");
    fs::write(&degenerate, r#"{"degrees": [0, 2], "pairing": [[0, 0], [0, 0]]}"#).unwrap();
    assert_eq!(fmkernel(&["fock-check", "--model", degenerate.to_str().unwrap()], None).status.code(), Some(64));

    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{degrees").unwrap();
    assert_eq!(fmkernel(&["fock-check", "--model", broken.to_str().unwrap()], None).status.code(), Some(65));

    let euler = dir.path().join("euler.json");
    fs::write(&euler, r#"{"chi": [[-1]]}"#).unwrap();
    let o = fmkernel(&["euler-k", "--model", euler.to_str().unwrap(), "--n-max", "3"], None);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn exit_code_priority() {
    assert_eq!(combine([0, 2, 0]), 2);
    assert_eq!(combine([2, 1, 0]), 1);
    assert_eq!(combine([]), 0);
}

#[test]
fn mixed_pair_enumeration() {
    let all: Vec<_> = (1..=6).flat_map(mixed_pairs).collect();
    assert_eq!(all.len(), 8);
    assert!(all.iter().all(|(a, b)| b.ell > a.ell && a.n > a.ell && b.n > b.ell && a.big_n() == b.big_n()));
}
