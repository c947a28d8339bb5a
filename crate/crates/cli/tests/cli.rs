use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qsub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsub"))
        .args(args)
        .env_remove("QSUB_THREADS")
        .output()
        .expect("binary runs")
}

fn qsub_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsub"))
        .args(args)
        .env("QSUB_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn ring_file(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/rings").join(name)
}

fn check_golden(ring: &str, stem: &str) {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let o = qsub(&["scan", "--ring", ring, "--out", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let want_summary = fs::read_to_string(golden(&format!("{stem}_summary.txt"))).unwrap();
    assert_eq!(stdout(&o), want_summary, "summary for {ring}");
    let got = fs::read(&report).unwrap();
    let want = fs::read(golden(&format!("{stem}_report.json"))).unwrap();
    assert!(got == want, "report for {ring} differs from the golden file");
}

#[test]
fn golden_h4() {
    check_golden("h4", "h4");
}

#[test]
fn golden_h6() {
    check_golden("h6", "h6");
}

#[test]
fn golden_i2_5() {
    check_golden("i2:5", "i2_5");
}

#[test]
fn thread_count_does_not_change_output() {
    for ring in ["h6", "i2:5"] {
        let one = qsub_threads(&["scan", "--ring", ring, "--format", "json"], "1");
        let eight = qsub_threads(&["scan", "--ring", ring, "--format", "json"], "8");
        assert_eq!(one.status.code(), Some(0));
        assert!(one.stdout == eight.stdout, "{ring}");
    }
    assert_eq!(qsub_threads(&["identities", "--n", "3"], "zero").status.code(), Some(1));
}

#[test]
fn ring_show_and_validate() {
    let o = qsub(&["ring", "show", "--ring", "h6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("1+x+ax+a^2x"));
    assert!(text.contains("(3+√13)/2"));

    let o = qsub(&["ring", "show", "--ring", "h4"]);
    assert!(stdout(&o).contains("(1+√13)/2"));

    let o = qsub(&["ring", "validate", "--ring", "i2:9"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn ring_save_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h6.json");
    let o = qsub(&["ring", "save", "--ring", "h6", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read(&path).unwrap(), fs::read(ring_file("h6.json")).unwrap());
    assert_eq!(qsub(&["ring", "save", "--ring", "h6"]).status.code(), Some(1));
}

fn write_corrupted(dir: &Path) -> PathBuf {
    let text = fs::read_to_string(ring_file("h4.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["N"][2][3][3] = 5.into();
    let path = dir.join("bad.json");
    fs::write(&path, v.to_string()).unwrap();
    path
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_corrupted(dir.path());
    let o = qsub(&["ring", "validate", "--ring", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    assert_eq!(qsub(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(qsub(&["scan"]).status.code(), Some(1));
    assert_eq!(qsub(&["scan", "--ring", "nope"]).status.code(), Some(1));
    assert_eq!(qsub(&["identities", "--n", "4"]).status.code(), Some(1));
    assert_eq!(qsub(&["--help"]).status.code(), Some(0));

    let o = qsub(&["scan", "--ring", "i2:7"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("max index"));

    // without the Jones and expressibility filters the saturated object survives
    let o = qsub(&["scan", "--ring", "h4", "--no-jones", "--no-expressibility"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("UNRESOLVED: 33/2+9/2*sqrt(13)"));
}

#[test]
fn capped_scan_of_larger_izumi_ring() {
    let o = qsub(&["scan", "--ring", "i2:7", "--max-index", "9"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("surviving nontrivial graphs"));
}

#[test]
fn explicit_candidate_list() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("cands.txt");
    fs::write(&list, "# gamma = 1 + nu\n1,1,0,0\n1,4,3,2\n").unwrap();
    let o = qsub(&["scan", "--ring", "h4", "--candidates", list.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["candidates"], 2);
    assert_eq!(v["entries"][0]["surviving"].as_array().unwrap().len(), 1);
    assert_eq!(v["entries"][1]["eliminated"][0]["elimination"]["reason"], "expressibility");

    fs::write(&list, "1,1,0\n").unwrap();
    let o = qsub(&["scan", "--ring", "h4", "--candidates", list.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn dot_export() {
    let dir = tempfile::tempdir().unwrap();
    let o = qsub(&["scan", "--ring", "h4", "--dot", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut names: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    // trivial graph plus the seven nontrivial ones
    assert_eq!(names.len(), 8);
    let text = fs::read_to_string(dir.path().join(&names[0])).unwrap();
    assert!(text.starts_with("graph "));
}

#[test]
fn saturated_identities_lattice_conjecture() {
    let o = qsub(&["saturated", "--ring", "i2:5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("w^2 = 5 (= n)"));
    assert!(text.contains("(135+25√29)/2"));

    let o = qsub(&["saturated", "--ring", "h4", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["expressibility_target"], "2");
    assert_eq!(v["verdict"]["Eliminated"]["reason"], "expressibility");

    let o = qsub(&["identities", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("PASS").count(), 2);

    let o = qsub(&["lattice", "--index", "33/2+9/2*sqrt(13)"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("(3, (11+3√13)/2)"));
    assert!(text.contains("necessary conditions only"));

    let o = qsub(&["lattice", "--gal", "3", "--dual-gal", "3", "--classes", "3"]);
    assert!(stdout(&o).contains("= 9 intermediates"));
    assert_eq!(qsub(&["lattice"]).status.code(), Some(1));

    let o = qsub(&["conjecture", "--ring", ring_file("h4.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("gamma = 1+nu+mu"));
    assert!(text.contains("feasible"));

    let o = qsub(&["obstruction", "--ring", "h4", "--index", "33/2+9/2*sqrt(13)"]);
    assert!(stdout(&o).contains("is obstructed"));
}
