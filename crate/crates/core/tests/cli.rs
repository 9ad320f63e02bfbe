use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conesurf")).args(args).current_dir(dir).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn help_lists_commands_and_global_flags() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--help"], dir.path());
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for word in ["validate", "trace", "saddles", "cylinders", "density", "cover", "experiment", "selftest", "--tolerance-overrides", "--quiet", "--json"] {
        assert!(text.contains(word), "help lacks {word}");
    }
}

#[test]
fn validation_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"polygons": [{"id": "a", "vertices": [[0,0],[1,0],[0,1]]}], "gluings": []}"#).unwrap();
    assert_eq!(code(&run(&["validate", "--surface", p(&bad)], dir.path())), 2);
    assert_eq!(code(&run(&["validate", "--surface", "missing.json"], dir.path())), 2);
    assert_eq!(code(&run(&["frobnicate"], dir.path())), 2);
    let torus = data("torus.json");
    assert_eq!(code(&run(&["trace", "--surface", p(&torus), "--chart", "nope", "--x", "0.5", "--y", "0.5", "--dx", "1", "--dy", "0"], dir.path())), 2);

    let tol = dir.path().join("tol.json");
    std::fs::write(&tol, r#"{"lenn": 1e-6}"#).unwrap();
    assert_eq!(code(&run(&["--tolerance-overrides", p(&tol), "validate", "--surface", p(&torus)], dir.path())), 2);
    std::fs::write(&tol, r#"{"len": 1e-6}"#).unwrap();
    assert_eq!(code(&run(&["--tolerance-overrides", p(&tol), "validate", "--surface", p(&torus)], dir.path())), 0);
}

#[test]
fn json_and_quiet_output() {
    let dir = tempfile::tempdir().unwrap();
    let oct = data("octagon.json");
    let o = run(&["--json", "validate", "--surface", p(&oct)], dir.path());
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_object());
    let o = run(&["--quiet", "validate", "--surface", p(&oct)], dir.path());
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
}

#[test]
fn trace_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let oct = data("octagon.json");
    let o = run(
        &["trace", "--surface", p(&oct), "--chart", "oct", "--x", "0.05", "--y", "-0.1", "--dx", "1", "--dy", "-0.7", "--max-length", "5", "--csv", "t.csv", "--svg", "t.svg"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert!(csv.starts_with("arclength,chart,x,y,m_of_T"));
    assert!(csv.lines().count() > 100);
    let svg = std::fs::read_to_string(dir.path().join("t.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<polyline"));
}

#[test]
fn experiment_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let oct = data("octagon.json");
    let cfg = data("experiments/no_strips_octagon.json");
    for name in ["a.json", "b.json"] {
        let o = run(&["experiment", "no-strips", "--surface", p(&oct), "--config", p(&cfg), "--report", name], dir.path());
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.json")).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["verdict"], "PASS");
}

#[test]
fn failing_density_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let torus = data("torus_marked.json");
    let target = data("experiments/golden_target.json");
    let o = run(
        &["density", "--surface", p(&torus), "--target-spec", p(&target), "--lengths", "1.5,2.3", "--window", "5", "--eta", "0.05"],
        dir.path(),
    );
    assert_eq!(code(&o), 3);
}

#[test]
fn cover_from_file_matches_search() {
    let dir = tempfile::tempdir().unwrap();
    let pc = data("pillowcase.json");
    let mono = dir.path().join("mono.json");
    std::fs::write(&mono, r#"{"1": [2, 3, 1], "3": [2, 3, 1]}"#).unwrap();
    let o = run(&["cover", "--surface", p(&pc), "--degree", "3", "--monodromy", p(&mono), "--out", "cover.json", "--report", "r1.json"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["cover", "--surface", p(&pc), "--report", "r2.json"], dir.path());
    assert_eq!(code(&o), 0);
    let r1: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("r1.json")).unwrap()).unwrap();
    let r2: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("r2.json")).unwrap()).unwrap();
    assert_eq!(r1, r2);
    assert_eq!(r1["riemann_hurwitz_residual"], 0);
    // the written cover is itself a valid surface
    assert_eq!(code(&run(&["validate", "--surface", "cover.json"], dir.path())), 0);
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["selftest", "--samples", "20"], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}
