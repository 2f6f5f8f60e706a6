use std::path::Path;
use std::process::{Command, Output};

use mldec::codes::Limits;
use mldec::io;

fn mldec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mldec")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

#[test]
fn decode_example1() {
    let code = data("example1.code");
    let o = mldec(&["decode", "--code", &code, "--channel", "bsc:0.1", "--rx", "000", "--oracle"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "best_index 1");
    assert_eq!(lines[1], "best_codeword 001");
    assert_eq!(lines[3], "ties 1 2 3");
    assert!(lines[4].starts_with("scores "));
    assert!(out.contains("oracle_agrees true"));
}

#[test]
fn inspect_example1() {
    let o = mldec(&["inspect", "--code", &data("example1.code")]);
    assert_eq!(stdout(&o), "q=2 n=3 S=4, M: 6x4, blocks=3\n");
}

#[test]
fn usage_errors_exit_2() {
    let o = mldec(&["decode", "--channel", "bsc:0.1", "--rx", "000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    let o = mldec(&["inspect", "--builtin", "example1", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    let o = mldec(&["decode", "--builtin", "example1", "--channel", "bsc:0.1", "--rx", "000", "--tolerance", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = mldec(&["isi-decode", "--builtin", "example1", "--channel", "bsc:0.1", "--rx", "000"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_1() {
    let o = mldec(&["decode", "--builtin", "example1", "--channel", "bsc:0.1", "--rx", "020"]);
    assert_eq!(o.status.code(), Some(1));
    let o = mldec(&["decode", "--builtin", "example1", "--channel", "qsc:3,0.1", "--rx", "1 1 1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = mldec(&["list-decode", "--builtin", "example1", "--channel", "bsc:0.1", "--rx", "000", "-l", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let o = mldec(&["gen-code", "--q", "4", "--n", "5", "--k", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = mldec(&["syndrome-decode", "--code", "/nonexistent/file", "--rx", "000"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn erasure_and_syndrome() {
    let o = mldec(&["erasure-decode", "--builtin", "example1", "--rx", "0e1", "--oracle"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("best_index 1\n") && out.contains("best_score 2\n"));

    let o = mldec(&["syndrome-decode", "--builtin", "hamming74", "--rx", "0000001", "--oracle"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("codeword 0000000\n") && out.contains("coset_distance 0\n"));

    let o = mldec(&["syndrome-decode", "--builtin", "example1", "--rx", "000"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn list_decode_order() {
    let o = mldec(&["list-decode", "--builtin", "example1", "--channel", "bsc:0.1", "--rx", "000", "-l", "4", "--oracle"]);
    assert!(o.status.success());
    let idx: Vec<String> = stdout(&o)
        .lines()
        .skip(1)
        .take(4)
        .map(|l| l.split(' ').nth(1).unwrap().to_string())
        .collect();
    assert_eq!(idx, ["1", "2", "3", "4"]);
}

#[test]
fn isi_decode_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let ch = dir.path().join("isi.toml");
    std::fs::write(
        &ch,
        "kind = \"isi-dmc\"\nq = 2\nL = 1\ninitial_symbol = 1\nrows = [[0.9, 0.1], [0.6, 0.4], [0.3, 0.7], [0.2, 0.8]]\n",
    )
    .unwrap();
    let o = mldec(&["isi-decode", "--builtin", "example1", "--channel", ch.to_str().unwrap(), "--rx", "011", "--oracle"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("oracle_agrees true"));
}

#[test]
fn gen_code_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.lin");
    let b = dir.path().join("b.lin");
    for p in [&a, &b] {
        let o = mldec(&["gen-code", "--q", "2", "--n", "7", "--k", "4", "--seed", "11", "--out", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let ta = std::fs::read_to_string(&a).unwrap();
    assert_eq!(ta, std::fs::read_to_string(&b).unwrap());
    let lin = io::parse_linear_code(&ta).unwrap();
    assert_eq!((lin.n(), lin.k()), (7, 4));
    assert_eq!(io::format_linear_code(&lin), ta);

    let cb = dir.path().join("c.code");
    let o = mldec(&["gen-code", "--q", "3", "--n", "4", "--k", "2", "--codebook", "--out", cb.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&cb).unwrap();
    let code = io::parse_code(&text).unwrap();
    assert_eq!(code.len(), 9);
    assert_eq!(io::format_code(&code), text);
    let o = mldec(&["inspect", "--code", cb.to_str().unwrap()]);
    assert_eq!(stdout(&o), "q=3 n=4 S=9, M: 12x9, blocks=4\n");

    // k = n gives the whole space.
    let o = mldec(&["gen-code", "--q", "2", "--n", "3", "--k", "3"]);
    let full = io::parse_linear_code(&stdout(&o)).unwrap();
    assert_eq!(mldec::codes::enumerate_codewords(&full, &Limits::default()).unwrap().len(), 8);
}

#[test]
fn simulate_is_reproducible() {
    let args = ["simulate", "--builtin", "hamming74", "--channel", "bsc:0.05", "--trials", "20000", "--seed", "3", "--oracle"];
    let a = mldec(&args);
    let b = mldec(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a)
        .lines()
        .any(|l| l.split_whitespace().collect::<Vec<_>>() == ["oracle_disagreements", "0"]));

    let mut json = args.to_vec();
    json.extend(["--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&mldec(&json).stdout).unwrap();
    assert_eq!(v["trials"], 20000);
    assert_eq!(v["oracle_disagreements"], 0);

    let mut csv = args.to_vec();
    csv.extend(["--format", "csv", "--decoder", "syndrome"]);
    let out = stdout(&mldec(&csv));
    assert!(out.starts_with("trials,word_errors,"));
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn bench_small() {
    let o = mldec(&["bench", "--m", "24", "--s", "4,4096", "--reps", "1", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let row: Vec<&str> = out.lines().nth(2).unwrap().split(',').collect();
    assert_eq!((row[0], row[1]), ("24", "4096"));
    assert!(row[5].parse::<f64>().unwrap() >= 1.5);
}
