use std::io::Write;
use std::process::{Command, Output, Stdio};

const PSI: &str = "sig: a b\n0: 11\n1: 10 01 00\n";

fn ibc(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ibc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn psi_file(dir: &tempfile::TempDir) -> String {
    let path = dir.path().join("psi.st");
    std::fs::write(&path, PSI).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn contract_file_reproduces_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = ibc(&["contract", &psi_file(&dir), "a"], "");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "sig: a b\n0: 11 01 00\n1: 10\n");
}

#[test]
fn exit_codes() {
    assert_eq!(ibc(&["contract", "-", "a &"], PSI).status.code(), Some(2));
    assert_eq!(ibc(&["contract", "-", "a"], "sig: a b\n0: 11\n").status.code(), Some(2));
    assert_eq!(ibc(&["contract", "/nonexistent/psi.st", "a"], "").status.code(), Some(2));
    assert_eq!(ibc(&["revise", "-", "a & !a"], PSI).status.code(), Some(3));
    assert_eq!(ibc(&["ask", "-", "conditional", "a", "b"], PSI).status.code(), Some(0));
    assert_eq!(ibc(&["ask", "-", "conditional", "!a", "b"], PSI).status.code(), Some(1));
    assert_eq!(ibc(&["check", "C9PRIME"], "").status.code(), Some(1));
    assert_eq!(ibc(&["check", "CR9"], "").status.code(), Some(0));
    assert_eq!(ibc(&["check", "NOPE"], "").status.code(), Some(2));
    let err = ibc(&["revise", "-", "bot"], PSI);
    assert!(String::from_utf8_lossy(&err.stderr).contains("inconsistent"));
}

#[test]
fn piping_matches_a_repl_session() {
    let dir = tempfile::tempdir().unwrap();
    let psi = psi_file(&dir);
    for (f, g) in [("a", "a | b"), ("!b", "a <-> b"), ("a & b", "top")] {
        let first = ibc(&["contract", &psi, f], "");
        let piped = ibc(&["contract", "-", g], &stdout(&first));
        assert_eq!(piped.status.code(), Some(0));

        let saved = dir.path().join("session.st");
        let script = format!("contract {f}\ncontract {g}\nsave {}\nquit\n", saved.display());
        let repl = ibc(&["repl", &psi], &script);
        assert_eq!(repl.status.code(), Some(0));
        assert_eq!(std::fs::read_to_string(&saved).unwrap(), stdout(&piped));
    }
    let revised = ibc(&["revise", "-", "!a"], &stdout(&ibc(&["contract", &psi, "a"], "")));
    assert_eq!(stdout(&revised), "sig: a b\n0: 01 00\n1: 11\n2: 10\n");
}

#[test]
fn repl_undo_restores_the_previous_state() {
    let script = "contract a\nrevise !a\nundo\nshow\nundo\nshow\n";
    let out = stdout(&ibc(&["repl", "-"], PSI));
    assert_eq!(out, PSI, "reading the state from stdin leaves no commands");

    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&ibc(&["repl", &psi_file(&dir)], script));
    let expected = [
        PSI,
        "0: 11 01 00\n1: 10\n",
        "0: 01 00\n1: 11\n2: 10\n",
        "0: 11 01 00\n1: 10\n",
        "sig: a b\n0: 11 01 00\n1: 10\n",
        "0: 11\n1: 10 01 00\n",
        PSI,
    ]
    .concat();
    assert_eq!(out, expected);
}

#[test]
fn check_json_fields() {
    let out = ibc(&["check", "C9PRIME", "--format", "json"], "");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["postulate"], "C9PRIME");
    assert_eq!(v["verdict"]["holds"], false);
    assert!(v["verdict"]["witness"]["state"].as_str().unwrap().starts_with("sig: a b"));
    for key in ["statement", "operator", "signature", "strategy", "instances_checked", "vacuous", "elapsed_ms"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn sampled_check_is_deterministic_across_jobs() {
    let args = ["check", "IC10", "--atoms", "3", "--samples", "3000", "--seed", "5"];
    let strip = |o: Output| {
        stdout(&o)
            .lines()
            .filter(|l| !l.starts_with("elapsed"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let one = strip(ibc(&args, ""));
    let mut four = args.to_vec();
    four.extend(["--jobs", "4"]);
    assert_eq!(one, strip(ibc(&four, "")));
    assert!(one.contains("3000 checked"));
}
