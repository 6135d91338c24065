use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn abtune(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abtune")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn experiment(dir: &Path) -> String {
    let path = dir.join("exp.toml");
    fs::write(
        &path,
        r#"spec-version = 1
output = "out"
base-seed = 2

[context]
seed = 9
horizon = 200

[optimizer]
m = 2
n = 1
i-max = 1

[[player]]
label = "p"
template = "B"
"#,
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn record_replay_and_compare() {
    let dir = tempfile::tempdir().unwrap();
    let spec = experiment(dir.path());
    let out = abtune(&["record", "--spec", &spec]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("status="));
    let context = dir.path().join("out/context.json");
    assert!(context.exists());

    let out = abtune(&["replay", "--spec", &spec]);
    assert!(stdout(&out).starts_with("replay=identical"), "{}", stderr(&out));

    let c = context.to_str().unwrap();
    let out = abtune(&["similarity", c, c, "--player", "green"]);
    assert_eq!(stdout(&out).trim(), "similarity=1");

    let out = abtune(&["optimize", "--spec", &spec, "--jobs", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("player=p runs=1 mean_final_similarity="));
    assert!(dir.path().join("out/summary.csv").exists());
}

#[test]
fn errors_are_one_line_with_a_kind() {
    let dir = tempfile::tempdir().unwrap();
    let spec = experiment(dir.path());
    let out = abtune(&["optimize", "--spec", &spec]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error kind=missing-context message="));
    assert_eq!(stderr(&out).lines().count(), 1);

    let out = abtune(&["optimize", "--spec", &spec, "--player", "nobody"]);
    assert!(stderr(&out).starts_with("error kind=spec "));

    let missing = dir.path().join("none.toml");
    let out = abtune(&["record", "--spec", missing.to_str().unwrap()]);
    assert!(stderr(&out).starts_with("error kind=io "));

    let out = abtune(&["landscape", "--spec", &spec]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error kind=usage "));
}

#[test]
fn export_writes_both_strategies() {
    let dir = tempfile::tempdir().unwrap();
    let out = abtune(&["export-strategies", "--out", dir.path().to_str().unwrap(), "--horizon", "1000"]);
    assert!(out.status.success(), "{}", stderr(&out));
    for f in ["a.ron", "a.toml", "b.ron", "b.toml"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let a = fs::read_to_string(dir.path().join("a.toml")).unwrap();
    assert!(a.contains("a.phase.1"));
}
