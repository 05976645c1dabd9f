use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_unitlab"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn gen_then_simulate_greedy_on_diagonal_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("diag.txt");
    let o = run(&[
        "gen",
        "--family",
        "diagonal",
        "--d",
        "2",
        "--n",
        "5",
        "--out",
        inst.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    for extra in [&[][..], &["--opt-formula"][..]] {
        let mut args = vec!["simulate", "--alg", "greedy", "--instance", inst.to_str().unwrap()];
        args.extend_from_slice(extra);
        let o = run(&args);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout(&o).lines().nth(1), Some("diagonal,2,5,greedy,0,5,2,5,2"));
    }
}

#[test]
fn golden_transcripts() {
    let dir = tempfile::tempdir().unwrap();
    for (alg, inst, seed, golden) in [
        ("grid", "grid_gap.txt", "0", "grid_gap.tx"),
        ("reweigh", "s1_d2_k4.txt", "7", "reweigh_s1_d2_k4_seed7.tx"),
    ] {
        let tx = dir.path().join(golden);
        let inst = data(inst);
        let o = run(&[
            "simulate",
            "--alg",
            alg,
            "--instance",
            inst.to_str().unwrap(),
            "--seed",
            seed,
            "--transcript",
            tx.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(
            std::fs::read(&tx).unwrap(),
            std::fs::read(data(golden)).unwrap(),
            "{golden} drifted"
        );
    }
}

#[test]
fn grid_gap_golden_pair() {
    let o = run(&[
        "simulate",
        "--alg",
        "grid",
        "--instance",
        data("grid_gap.txt").to_str().unwrap(),
    ]);
    assert_eq!(stdout(&o).lines().nth(1), Some("file,2,11,grid,0,11,6,11,6"));
    let o = run(&["opt", "--instance", data("grid_gap.txt").to_str().unwrap(), "--corners"]);
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("OPT=6"));
    assert_eq!(out.lines().count(), 7);
}

#[test]
fn gen_writes_the_documented_format() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("s1.txt");
    let o = run(&[
        "gen",
        "--family",
        "s1",
        "--d",
        "2",
        "--K",
        "4",
        "--out",
        f.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read(&f).unwrap(), std::fs::read(data("s1_d2_k4.txt")).unwrap());
    let o = run(&[
        "gen",
        "--family",
        "barycentric",
        "--d",
        "2",
        "--out",
        f.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn covering_duels() {
    let o = run(&["duel", "--adversary", "covering", "--alg", "centered", "--d", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().nth(1), Some("covering,2,4,centered,0,4,1,4,1"));
    let o = run(&["duel", "--adversary", "covering", "--alg", "grid", "--d", "1"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("covering,1,2,grid,0,2,1,2,1"));
    // the lower-corner coverer breaks the game's invariants: reported, exit 2
    let o = run(&["duel", "--adversary", "covering", "--alg", "firstfit", "--d", "2"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("# FAILED uncovered_vertices_stay_uncovered"));
}

#[test]
fn duel_log_is_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("log.jsonl");
    let o = run(&[
        "duel",
        "--adversary",
        "clustering",
        "--alg",
        "greedy",
        "--d",
        "4",
        "--K",
        "4",
        "--trials",
        "2",
        "--log",
        log.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&log).unwrap();
    let recs: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    // two rounds of 4^4 points and one certificate record per trial
    assert_eq!(recs.len(), 2 * (256 + 256 + 1));
    assert_eq!(recs[0]["trial"], 0);
    assert_eq!(recs[0]["game"], "clustering");
    assert!(recs
        .iter()
        .any(|r| r["step"].is_null() && r["action"].as_str().unwrap().starts_with("perturb")));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("clustering,")).count(), 2);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(
        code(&run(&[
            "duel",
            "--adversary",
            "covering",
            "--alg",
            "greedy",
            "--d",
            "2"
        ])),
        1
    );
    assert_eq!(
        code(&run(&[
            "duel",
            "--adversary",
            "covering",
            "--alg",
            "grid",
            "--d",
            "2",
            "--eps",
            "1/0"
        ])),
        1
    );
    assert_eq!(
        code(&run(&["simulate", "--alg", "grid", "--instance", "/no/such/file"])),
        1
    );
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn reweigh_rejects_fractional_points() {
    let o = run(&[
        "simulate",
        "--alg",
        "reweigh",
        "--instance",
        data("grid_gap.txt").to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a lattice point"));
}

#[test]
fn oracle_limit_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("big.txt");
    // 81 points in one connected blob
    let mut text = String::from("2 81 2\n");
    for x in 0..9 {
        for y in 0..9 {
            text.push_str(&format!("{x} {y}\n"));
        }
    }
    std::fs::write(&f, text).unwrap();
    let o = run(&["opt", "--instance", f.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("oracle limit"));
}

#[test]
fn report_summarizes_and_rejects_bad_rows() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let mut rows = String::from("family,d,K_or_n,alg,seed,alg_count,opt,ratio_num,ratio_den\n");
    for d in ["1", "2"] {
        let o = run(&["duel", "--adversary", "covering", "--alg", "grid", "--d", d]);
        rows.push_str(stdout(&o).lines().nth(1).unwrap());
        rows.push('\n');
    }
    std::fs::write(&a, rows).unwrap();
    let o = run(&["report", a.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("grid/covering: d=1:2.0000 d=2:4.0000"));

    let b = dir.path().join("b.csv");
    std::fs::write(&b, "s1,2,4,grid,0,4,1,4,1\nnot,a,row\ns1,2,4,grid,0,4,x,4,1\n").unwrap();
    let o = run(&["report", b.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2") && err.contains("line 3"), "{err}");

    let o = run(&["report"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 1);
}
