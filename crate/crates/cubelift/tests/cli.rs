use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const TREFOIL_GRID: &str = "X={2,3,4,5,1} O={5,1,2,3,4}\n";

fn cubelift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubelift")).args(args).env_remove("CUBELIFT_CORPUS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn grid_commands() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write(dir.path(), "g.txt", TREFOIL_GRID);
    let g = grid.to_str().unwrap();

    let o = cubelift(&["validate-grid", g]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "valid n=5 crossings=3 components=1\n");

    let bad = write(dir.path(), "bad.txt", "X={1,2} O={1,2}");
    let o = cubelift(&["validate-grid", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("invalid"));

    let o = cubelift(&["identify", g]);
    assert_eq!(stdout(&o), "3_1\n");

    let o = cubelift(&["build", g]);
    assert!(stdout(&o).ends_with("n=5 twisted=0 bad=0 final=5 branch=direct\n"));

    let o = cubelift(&["render", g]);
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn lift_then_validate_and_project() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write(dir.path(), "g.txt", TREFOIL_GRID);
    let o = cubelift(&["lift", grid.to_str().unwrap()]);
    assert!(o.status.success());
    let cube = write(dir.path(), "c.txt", &stdout(&o));
    let c = cube.to_str().unwrap();

    let o = cubelift(&["validate-cube", c]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = cubelift(&["project", c, "--plane", "xy"]);
    assert_eq!(stdout(&o), TREFOIL_GRID);
    let o = cubelift(&["identify", c]);
    assert_eq!(stdout(&o), "3_1\n");
    let o = cubelift(&["lift", grid.to_str().unwrap(), "--all"]);
    assert!(stdout(&o).lines().count() >= 1);

    let broken = stdout(&cubelift(&["lift", grid.to_str().unwrap()])).replacen("{1, 2, 1}", "{1, 2, 2}", 1);
    let bad = write(dir.path(), "bad.txt", &broken);
    let o = cubelift(&["validate-cube", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().count() > 1);
}

#[test]
fn search_and_count() {
    let o = cubelift(&["search", "--size", "5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n=5 total=2640 links=1200 det1=1430 nontrivial=10 lifts=3 pct=30.0\n");

    let o = cubelift(&["search", "--size", "5", "--no-determinant-filter", "--no-link-exclusion"]);
    let out = stdout(&o);
    assert!(out.contains("nontrivial=10 lifts=3"));
    assert!(out.contains("link_lifts="));
    assert!(out.contains("unknot_lifts="));

    let o = cubelift(&["search", "--size", "8"]);
    assert_eq!(o.status.code(), Some(2));

    let o = cubelift(&["count", "--size", "5"]);
    assert_eq!(stdout(&o), "n=5 formula=2640 raw=5280\n");
}

#[test]
fn interrupted_search_resumes_from_its_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck");
    let ck = ck.to_str().unwrap();
    let o = cubelift(&["search", "--size", "5", "--checkpoint", ck, "--max-outer", "20"]);
    assert_eq!(o.status.code(), Some(1));
    let o = cubelift(&["search", "--size", "5", "--checkpoint", ck]);
    assert!(stdout(&o).contains("nontrivial=10 lifts=3"));
    let o = cubelift(&["search", "--size", "5", "--checkpoint", ck, "--raw"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn corpus_verify_reports_every_entry() {
    let o = cubelift(&["corpus", "verify"]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 28);
    assert!(out.ends_with("entries=27 parsed=27 validated=27 identified=22 passed=25\n"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn corpus_environment_variable_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let head: String = cubelift::corpus::BUNDLED_CORPUS.lines().take(4).map(|l| format!("{l}\n")).collect();
    let path = write(dir.path(), "corpus.txt", &head);
    let o = Command::new(env!("CARGO_BIN_EXE_cubelift"))
        .args(["corpus", "verify"])
        .env("CUBELIFT_CORPUS", &path)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("entries=1 parsed=1 validated=1 identified=1 passed=1\n"));
}
