//! End-to-end runs of the `cfpq` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cfpq::export::JsonForest;
use tempfile::TempDir;

const SCHOOL: &str = "0\ta\t1\n1\ta\t2\n2\ta\t0\n0\tb\t3\n3\tb\t0\n";

fn cfpq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfpq")).args(args).output().expect("binary runs")
}

fn fixture(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn query_prints_start_pairs() {
    let dir = TempDir::new().unwrap();
    let g = fixture(&dir, "m.tsv", SCHOOL);
    let o = cfpq(&["query", "--graph", s(&g), "--grammar", "g1", "--starts", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "S\t0\t0\nS\t0\t3\n");
}

#[test]
fn triples_file_and_nonterminal() {
    let dir = TempDir::new().unwrap();
    let g = fixture(&dir, "m.tsv", SCHOOL);
    let t = dir.path().join("out.tsv");
    let o = cfpq(&["query", "--graph", s(&g), "--grammar", "g1", "--nonterminal", "Middle", "--triples", s(&t)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&t).unwrap(), "Middle\t2\t3\n");
}

#[test]
fn unreachable_start_exits_one_with_empty_triples() {
    let dir = TempDir::new().unwrap();
    let g = fixture(&dir, "m.tsv", SCHOOL);
    let gr = fixture(&dir, "g.txt", "S -> c S\nS -> c\n");
    let t = dir.path().join("out.tsv");
    let o = cfpq(&["query", "--graph", s(&g), "--grammar", s(&gr), "--triples", s(&t)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(std::fs::read_to_string(&t).unwrap(), "");
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let g = fixture(&dir, "m.tsv", SCHOOL);
    let bad = fixture(&dir, "bad.txt", "S ->> a\n");
    let missing = dir.path().join("nope.tsv");
    let cases: Vec<Vec<&str>> = vec![
        vec!["query", "--graph", s(&missing), "--grammar", "g1"],
        vec!["query", "--graph", s(&g), "--grammar", s(&bad)],
        vec!["query", "--graph", s(&g), "--grammar", "nosuch"],
        vec!["query", "--graph", s(&g), "--grammar", "g1", "--starts", "9"],
        vec!["query", "--graph", s(&g), "--grammar", "g1", "--sppf", "x.png"],
        vec!["paths", "--graph", s(&g), "--grammar", "g1", "--from", "0", "--max-count", "0"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let o = cfpq(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn sppf_exports() {
    let dir = TempDir::new().unwrap();
    let g = fixture(&dir, "m.tsv", SCHOOL);
    let dot = dir.path().join("f.dot");
    let json = dir.path().join("f.json");
    for out in [&dot, &json] {
        let o = cfpq(&["query", "--graph", s(&g), "--grammar", "g1", "--starts", "0", "--sppf", s(out)]);
        assert_eq!(o.status.code(), Some(0));
    }
    let dot = std::fs::read_to_string(dot).unwrap();
    assert!(dot.starts_with("digraph"));
    let forest = JsonForest::from_json(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(forest.roots.len(), 2);
    assert!(!forest.nodes.is_empty());
}

#[test]
fn paths_listing() {
    let dir = TempDir::new().unwrap();
    let g = fixture(&dir, "m.tsv", SCHOOL);
    let base = ["paths", "--graph", s(&g), "--grammar", "g1", "--from", "0"];
    let mut to3 = base.to_vec();
    to3.extend(["--to", "3", "--max-count", "2", "--max-length", "12"]);
    let o = cfpq(&to3);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0 -a-> 1 -a-> 2 -a-> 0 -b-> 3 -b-> 0 -b-> 3\n");

    let o = cfpq(&["paths", "--graph", s(&g), "--grammar", "g1", "--from", "3", "--to", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
}

#[test]
fn stats_reports_bounds() {
    let dir = TempDir::new().unwrap();
    let g = fixture(&dir, "m.tsv", SCHOOL);
    let o = cfpq(&["stats", "--graph", s(&g), "--grammar", "g0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("forest:"));
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn bench_writes_csv() {
    let o = cfpq(&["bench", "--grammar", "g2", "--sizes", "2..5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(cfpq::bench::CSV_HEADER));
    assert_eq!(lines.count(), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("nodes: f(x) ="));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let g = fixture(&dir, "m.tsv", SCHOOL);
    let mut seen = Vec::new();
    for extra in [&[][..], &["--fifo"][..], &["--no-lookahead"][..]] {
        let t = dir.path().join("t.tsv");
        let f = dir.path().join("f.json");
        let mut args = vec!["query", "--graph", s(&g), "--grammar", "g0", "--triples", s(&t), "--sppf", s(&f)];
        args.extend_from_slice(extra);
        assert_eq!(cfpq(&args).status.code(), Some(0));
        seen.push((std::fs::read(&t).unwrap(), extra.is_empty().then(|| std::fs::read(&f).unwrap())));
    }
    assert!(seen.iter().all(|x| x.0 == seen[0].0));
    // same flags, same bytes
    let f = dir.path().join("f2.json");
    cfpq(&["query", "--graph", s(&g), "--grammar", "g0", "--sppf", s(&f)]);
    assert_eq!(seen[0].1.as_deref(), Some(&std::fs::read(&f).unwrap()[..]));
}

#[test]
fn ntriples_input() {
    let dir = TempDir::new().unwrap();
    let nt = fixture(
        &dir,
        "o.nt",
        "<http://x/A> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://x/B> .\n\
         <http://x/C> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://x/B> .\n\
         <http://x/B> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://x/D> .\n",
    );
    let o = cfpq(&["query", "--graph", s(&nt), "--format", "ntriples", "--grammar", "q2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("S\thttp://x/B\thttp://x/D"), "{text}");
}
