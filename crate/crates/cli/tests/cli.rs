use std::process::{Command, Output};

fn run(args: &[&str], cache: Option<&std::path::Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_syzygy"));
    cmd.args(args).env_remove("SYZYGY_CACHE");
    if let Some(dir) = cache {
        cmd.env("SYZYGY_CACHE", dir);
    }
    cmd.output().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["betti", "--n", "7", "--d", "3"], None).status.code(), Some(0));
    // missing parameter, then d out of range
    assert_eq!(run(&["betti", "--n", "7"], None).status.code(), Some(2));
    assert_eq!(run(&["betti", "--n", "7", "--d", "5"], None).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "koszul", "--n", "8", "--d", "2", "--prime", "101"], None).status.code(),
        Some(3)
    );
}

#[test]
fn betti_row_text() {
    let out = run(&["betti", "--n", "7", "--d", "3"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "7 7"), "{text}");
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "span", "--n", "6", "--d", "2", "--format", "json"];
    let first: serde_json::Value =
        serde_json::from_slice(&run(&args, Some(dir.path())).stdout).unwrap();
    let second: serde_json::Value =
        serde_json::from_slice(&run(&args, Some(dir.path())).stdout).unwrap();
    assert_eq!(first["cached"], false);
    assert_eq!(second["cached"], true);
    assert_eq!(first["results"], second["results"]);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn macaulay_orientation_flips_columns() {
    let out = run(&["diagram", "rnc", "--k", "3", "--orientation", "macaulay"], None);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1 - -\n- 3 2\n");
}
