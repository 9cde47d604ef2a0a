use std::process::{Command, Output};

fn pebx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pebx"))
        .args(args)
        .output()
        .unwrap()
}

fn code(args: &[&str]) -> i32 {
    pebx(args).status.code().unwrap()
}

fn report(args: &[&str]) -> serde_json::Value {
    serde_json::from_slice(&pebx(args).stdout).unwrap()
}

#[test]
fn exit_codes_follow_the_verdict() {
    assert_eq!(code(&["peb", "--graph", "p2"]), 0);
    assert_eq!(
        code(&["feasible", "--board", "c6", "--pebbles", "star5"]),
        1
    );
    assert_eq!(
        code(&["feasible", "--board", "p3", "--pebbles", "star5"]),
        2
    );
    assert_eq!(code(&["aut", "--graph", "no-such-file.g"]), 2);
    assert_eq!(code(&["flips", "--graph", "c5", "--sigma", "1,3,2,4,5"]), 2);
    assert_eq!(code(&["peb", "--graph", "q3", "--cap", "10"]), 3);
    assert_eq!(code(&["reverse-square", "--n", "17"]), 3);
    assert_eq!(code(&["bogus"]), 2);
}

#[test]
fn reports_carry_the_expected_fields() {
    let r = report(&["peb", "--graph", "p2"]);
    assert_eq!(r["peb_order"], 2);
    assert!(r["elapsed_ms"].is_u64());

    let r = report(&[
        "feasible",
        "--board",
        "c6",
        "--pebbles",
        "star5",
        "--no-timing",
    ]);
    assert_eq!(r["verdict"], false);
    assert_eq!(r["rule"], "cycle");
    assert!(r.get("elapsed_ms").is_none());

    let r = report(&["classify", "--board", "theta122", "--pebbles", "star6"]);
    assert_eq!(r["rule"], "theta");

    let r = report(&[
        "feasible",
        "--board",
        "p4",
        "--pebbles",
        "c4",
        "--no-timing",
    ]);
    assert_eq!(
        (r["verdict"].as_bool(), r["rule"].as_str()),
        (Some(false), Some("bipartite"))
    );

    let r = report(&["aut", "--graph", "sq:p4"]);
    assert_eq!(r["aut_order"], 4);
}

#[test]
fn reports_are_deterministic_without_timing() {
    let args = ["flips", "--graph", "q3", "--no-timing"];
    assert_eq!(pebx(&args).stdout, pebx(&args).stdout);
}

#[test]
fn replay_prints_the_reversal() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.ms");
    let cert = cert.to_str().unwrap();
    assert_eq!(code(&["reverse-square", "--n", "7", "--out", cert]), 0);
    let out = pebx(&["replay", "--cert", cert]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "7 6 5 4 3 2 1\n");
}

#[test]
fn equivalent_writes_a_replayable_witness() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("w.ms");
    let cert = cert.to_str().unwrap();
    let args = [
        "equivalent",
        "--board",
        "k4",
        "--pebbles",
        "c4",
        "--from",
        "1,2,3,4",
        "--to",
        "2,1,3,4",
        "--out",
        cert,
    ];
    let r: serde_json::Value = serde_json::from_slice(&pebx(&args).stdout).unwrap();
    assert_eq!(r["verdict"], true);
    let out = pebx(&["replay", "--cert", cert]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "2 1 3 4\n");

    let args = [
        "equivalent",
        "--board",
        "c4",
        "--pebbles",
        "star3",
        "--from",
        "1,2,3,4",
        "--to",
        "1,2,4,3",
    ];
    assert_eq!(code(&args), 1);
}
