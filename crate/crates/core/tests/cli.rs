use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_paulicompat"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn exit_statuses() {
    assert_eq!(run(&["classify", "XY", "YX"]).0, 0);
    assert_eq!(run(&["paradox", "ghz", "4", "X", "Y"]).0, 1);
    let (code, stdout, stderr) = run(&["classify", "XY", "X?"]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert!(stderr.contains("^"));
    assert_eq!(run(&["verify", "theorem1", "7"]).0, 3);
    assert_eq!(run(&["no-such-command"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("paulicompat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("doc.json");
    let (code, stdout, _) = run(&["classify", "XYZ", "YXZ", "--output", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["command"], "classify");
    assert_eq!(doc["result"]["case_label"], "3.ii");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn documents_have_fixed_envelope() {
    for args in [
        &["classify", "XX", "ZZ"][..],
        &["decompose", "XY", "YX"],
        &["paradox", "mermin"],
        &["state", "psi1"],
        &["verify", "prop4"],
    ] {
        let (_, stdout, _) = run(args);
        let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
        let keys: Vec<_> = doc.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["command", "inputs", "result", "version"], "{args:?}");
        assert_eq!(doc["command"], args[0]);
    }
}
