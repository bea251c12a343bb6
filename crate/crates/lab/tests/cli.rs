use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cesaro-lab")).args(args).current_dir(dir).env_remove("CESARO_LAB_EXACT").output().unwrap()
}

fn body(path: &Path) -> serde_json::Value {
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    assert!(v["header"]["wall_clock_seconds"].is_number());
    v["body"].clone()
}

#[test]
fn run_writes_report_and_sidecars() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("leb.conf"), "# classical\nmeasure = density:lebesgue\ntask = moments\nN = 4\noutput = out\n").unwrap();
    let o = lab(&["run", "--config", "leb.conf"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let b = body(&dir.path().join("out/report.json"));
    assert_eq!(b["config"]["N"], "4");
    assert_eq!(b["sidecars"], serde_json::json!(["moments.csv"]));
    let csv = fs::read_to_string(dir.path().join("out/moments.csv")).unwrap();
    assert!(csv.starts_with("n,mu_n\n0,"));
    let leftovers: Vec<_> = fs::read_dir(dir.path().join("out")).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(leftovers.len(), 2, "{leftovers:?}");
}

#[test]
fn reruns_are_byte_identical_in_the_body() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.conf"), "measure = moments:power:(0.5)\ntask = carleson\ns = 0.5\nN = 1024\n").unwrap();
    let mut bodies = Vec::new();
    for out in ["a", "b"] {
        let o = lab(&["run", "--config", "c.conf", "--output", out], dir.path());
        assert_eq!(o.status.code(), Some(0));
        let text = fs::read_to_string(dir.path().join(out).join("report.json")).unwrap();
        let start = text.find("\"body\"").unwrap();
        bodies.push(text[start..].to_string());
    }
    assert_eq!(bodies[0], bodies[1]);
    let a = fs::read(dir.path().join("a/carleson_moment.csv")).unwrap();
    let b = fs::read(dir.path().join("b/carleson_moment.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn shorthand_matches_config_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("s.conf"), "task = spectrum\nmeasure = moments:cesaro\ngamma = 3\nC = 1\nN = 128\n").unwrap();
    assert_eq!(lab(&["run", "--config", "s.conf", "--output", "file"], dir.path()).status.code(), Some(0));
    let o = lab(&["spectrum", "--measure", "moments:cesaro", "--gamma", "3", "--C", "1", "--N", "128", "--output", "flags"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(body(&dir.path().join("file/report.json")), body(&dir.path().join("flags/report.json")));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("bad.conf"), "task = moments\nmeasure = density:lebesgue\n").unwrap();
    let o = lab(&["run", "--config", "bad.conf"], d);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`N`"));
    fs::write(d.join("fail.conf"), "task = hausdorff\nsequence = [1, 0.9, 0.85, 0.9, 0.8, 0.7, 0.6, 0.5]\nN = 7\nJ = 3\n").unwrap();
    assert_eq!(lab(&["run", "--config", "fail.conf"], d).status.code(), Some(2));
    fs::write(d.join("err.conf"), "task = resolvent\nmeasure = moments:cesaro\nlambda = 1\nseries = series:ones\nN = 4\n").unwrap();
    let o = lab(&["run", "--config", "err.conf", "--output", "err"], d);
    assert_eq!(o.status.code(), Some(1));
    assert!(body(&d.join("err/report.json"))["error"].is_string());
    assert_eq!(lab(&["reproduce", "nope"], d).status.code(), Some(1));
    assert_eq!(lab(&["carleson", "--measure", "moments:cesaro", "--s", "1", "--N", "16"], d).status.code(), Some(1));
    assert_eq!(lab(&["frobnicate"], d).status.code(), Some(1));
    assert_eq!(lab(&["--help"], d).status.code(), Some(0));
    assert_eq!(lab(&["run", "--config", "missing.conf"], d).status.code(), Some(1));
}

#[test]
fn reproduce_and_cases() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["cases"], dir.path());
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 13);
    let o = lab(&["reproduce", "product-bounds", "--output", "pb"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(body(&dir.path().join("pb/report.json"))["status"], "pass");
}

#[test]
fn exact_env_switch() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cesaro-lab"))
        .args(["moments", "--measure", "moments:cesaro", "--N", "4", "--output", "x"])
        .current_dir(dir.path())
        .env("CESARO_LAB_EXACT", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let b = body(&dir.path().join("x/report.json"));
    assert_eq!(b["arithmetic"], "exact");
    assert_eq!(b["data"]["exact_moments"], serde_json::json!(["1", "1/2", "1/3", "1/4", "1/5"]));
}
