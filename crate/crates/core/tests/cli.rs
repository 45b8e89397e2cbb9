use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn apg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

#[test]
fn solve_fixture_both_seats() {
    let o = apg(&["solve", "--game", &data("butterfly.apg"), "--first", "left"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "LeftWin\n");
    let o = apg(&[
        "solve",
        "--game",
        &data("butterfly.apg"),
        "--first",
        "right",
    ]);
    assert_eq!(stdout(&o), "Draw\n");
}

#[test]
fn conflicting_first_flags_are_usage_errors() {
    let o = apg(&[
        "solve",
        "--game",
        &data("butterfly.apg"),
        "--first",
        "left",
        "--first",
        "right",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_file_and_bad_syntax() {
    assert_eq!(
        apg(&["solve", "--game", "/nonexistent.apg", "--first", "left"])
            .status
            .code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = tmp(&dir, "bad.apg");
    std::fs::write(&bad, "apg 2\nL 0 5\n").unwrap();
    assert_eq!(
        apg(&["solve", "--game", bad.to_str().unwrap(), "--first", "left"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(apg(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn tiny_budget_exhausts() {
    let o = apg(&[
        "solve",
        "--game",
        &data("butterfly.apg"),
        "--first",
        "left",
        "--budget-states",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o), "Exhausted\n");
}

#[test]
fn qbf_oracle_names_the_winner() {
    assert_eq!(
        stdout(&apg(&["qbf-oracle", "--qbf", &data("falsifier.q3f")])),
        "Falsifier\n"
    );
    assert_eq!(
        stdout(&apg(&["qbf-oracle", "--qbf", &data("satisfier.q3f")])),
        "Satisfier\n"
    );
}

#[test]
fn reduce_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    for (name, f, cert) in [
        ("falsifier.q3f", "true", "Left"),
        ("satisfier.q3f", "false", "Right"),
    ] {
        let out = tmp(&dir, "g.apg");
        let layout = tmp(&dir, "g.layout");
        let o = apg(&[
            "reduce",
            "--qbf",
            &data(name),
            "--out",
            out.to_str().unwrap(),
            "--layout",
            layout.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        // 15 per variable pair, 14 per clause
        let m = if f == "true" { 2 } else { 1 };
        assert!(stdout(&o).starts_with(&format!("vertices={} ", 30 + 14 * m)));
        assert!(std::fs::read_to_string(&out).unwrap().starts_with("apg "));
        assert!(!std::fs::read_to_string(&layout).unwrap().is_empty());

        let o = apg(&["verify-cert", "--qbf", &data(name)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        let text = stdout(&o);
        assert!(text.contains(&format!("falsifier_wins={f}\n")));
        assert!(text.contains(&format!("certificate={cert}\n")));
        assert!(text.contains("verdict=Verified\n"));
    }
}

#[test]
fn trace_matches_golden() {
    let o = apg(&[
        "trace-regular",
        "--qbf",
        &data("satisfier.q3f"),
        "--left",
        "TF",
        "--right",
        "FT",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let golden = std::fs::read_to_string(data("satisfier_TF_FT.trace")).unwrap();
    assert_eq!(stdout(&o), golden);
}

#[test]
fn trace_rejects_wrong_length() {
    let o = apg(&[
        "trace-regular",
        "--qbf",
        &data("satisfier.q3f"),
        "--left",
        "T",
        "--right",
        "FT",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let read = |name: &str, seed: &str| {
        let p = tmp(&dir, name);
        assert_eq!(
            apg(&[
                "gen",
                "--n",
                "3",
                "--m",
                "4",
                "--seed",
                seed,
                "--out",
                p.to_str().unwrap()
            ])
            .status
            .code(),
            Some(0)
        );
        std::fs::read_to_string(p).unwrap()
    };
    let a = read("a.q3f", "5");
    assert_eq!(a, read("b.q3f", "5"));
    assert_ne!(a, read("c.q3f", "6"));
    assert!(a.starts_with("p q3f 3 4\n"));
    let p = tmp(&dir, "d.q3f");
    apg(&["gen", "--n", "2", "--m", "1", "--out", p.to_str().unwrap()]);
    let unseeded = std::fs::read_to_string(&p).unwrap();
    apg(&[
        "gen",
        "--n",
        "2",
        "--m",
        "1",
        "--seed",
        "0",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert_eq!(unseeded, std::fs::read_to_string(&p).unwrap());
}

#[test]
fn wrap_mm4_reports_rank() {
    let dir = tempfile::tempdir().unwrap();
    let out = tmp(&dir, "mm.apg");
    let o = apg(&[
        "wrap-mm4",
        "--game",
        &data("butterfly.apg"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "vertices=10 edges=6 rank=4\n");
    let o = apg(&["solve", "--game", out.to_str().unwrap(), "--first", "left"]);
    assert_eq!(stdout(&o), "LeftWin\n");
}

#[test]
fn play_survives_garbage_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_apg"))
        .args(["play", "--game", &data("butterfly.apg"), "--human", "left"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"\n???\n42\n-1\nb\nb\nb2\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("unknown vertex \"???\""));
    assert!(text.contains("b is taken"));
}

#[test]
fn identical_runs_print_identical_output() {
    let run = || {
        stdout(&apg(&[
            "verify-cert",
            "--qbf",
            &data("satisfier.q3f"),
            "--jobs",
            "2",
        ]))
    };
    assert_eq!(run(), run());
    assert_eq!(
        run(),
        stdout(&apg(&["verify-cert", "--qbf", &data("satisfier.q3f")]))
    );
}
