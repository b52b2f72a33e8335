use std::path::PathBuf;
use std::process::{Command, Output};

fn bicontact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bicontact")).args(args).output().unwrap()
}

fn data(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    p.to_string_lossy().into_owned()
}

#[test]
fn passing_run_exits_zero_with_a_json_report() {
    let out = bicontact(&["invariants", "--example", "hyp", "--param", "C3=1+z^2", "--points", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json = String::from_utf8(out.stdout).unwrap();
    assert!(json.starts_with('{') && json.contains("\"seed\":42"));
}

#[test]
fn file_input_runs() {
    let out = bicontact(&["check", "--input", &data("hyp-c3.bcf"), "--points", "5"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn failed_check_exits_one() {
    let out = bicontact(&["normal-form", "--h", "1;0;0;1", "--points", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nf.E_eq_w"));
}

#[test]
fn point_error_exits_one() {
    let out = bicontact(&["invariants", "--example", "normal-form", "--at", "0.3,-1,0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_arguments_exit_two() {
    for args in [
        &["check"][..],
        &["check", "--example", "nope"],
        &["check", "--input", &data("does-not-exist.bcf")],
        &["check", "--example", "hyp", "--tol-deep", "0"],
        &["check", "--example", "hyp", "--bogus"],
    ] {
        assert_eq!(bicontact(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_report() {
    let path = std::env::temp_dir().join(format!("bicontact-{}.json", std::process::id()));
    let p = path.to_string_lossy().into_owned();
    let out = bicontact(&["example", "sphere", "--points", "3", "--out", &p]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let json = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(json.contains("\"tool\":\"bicontact\""));
}
