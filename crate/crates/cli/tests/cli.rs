use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intricacy")).args(args).env_remove("INTRICACY_CACHE_DIR").output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn topo_reports_rounded_values_and_tag() {
    let out = stdout(&["topo", "--input", &data("sft_I.json")]);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("n,block_k,h_top,H_n,Asc_n,Int_n"));
    let row = lines.next().unwrap();
    assert!(row.contains("entropy=0.481;H=0.545;asc=0.399;int=0.254"), "{row}");
    assert!(row.ends_with(",same-complexity/I"), "{row}");
    assert!(!out.contains('\r'));
}

#[test]
fn forbidden_word_and_adjacency_inputs() {
    let gm = stdout(&["topo", "--input", &data("golden_mean.json"), "--n", "8"]);
    assert!(gm.contains(",0.481211825059,"), "{gm}");
    let full = stdout(&["topo", "--input", &data("full2.json"), "--n", "8"]);
    assert!(full.contains(",0.69314718056,"), "{full}");
}

#[test]
fn markov_family_series() {
    let out = stdout(&["markov", "--family", "gms-1step", "--param", "0.618"]);
    let row = out.lines().nth(1).unwrap();
    assert!(row.contains(",series,20,"), "{row}");
    assert!(row.contains("h=0.481;asc=0.266;int=0.051,gms-1step/1"), "{row}");
}

#[test]
fn markov_input_file_matches_family() {
    let file = stdout(&["markov", "--input", &data("gms2_measure.json")]);
    let fam = stdout(&["markov", "--family", "gms-2step", "--param", "0.483", "--param", "0.569"]);
    let cols = |s: &str| s.lines().nth(1).unwrap().split(',').skip(4).take(3).map(String::from).collect::<Vec<_>>();
    assert_eq!(cols(&file), cols(&fam));
}

#[test]
fn pressure_json_output() {
    let out = stdout(&["pressure", "--input", &data("pressure_2.json"), "--potential", &data("f1.json"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rec = &v.as_array().unwrap()[0];
    assert_eq!(rec["n"], 10);
    assert_eq!(rec["provenance"], "pressure/2/f1");
    assert!((rec["Asp_n"].as_f64().unwrap() - 0.722).abs() < 5e-4);
}

#[test]
fn check_suite_exits_zero() {
    let out = stdout(&["check", "--suite", "all", "--max-n", "6"]);
    assert!(out.lines().skip(1).all(|l| l.ends_with(",PASS")), "{out}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["topo"]).status.code(), Some(1));
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["topo", "--input", "/nonexistent/sft.json"]).status.code(), Some(1));
    assert_eq!(run(&["markov", "--family", "gms-1step", "--param", "0.5", "--samples", "10"]).status.code(), Some(1));
    assert_eq!(run(&["topo", "--input", &data("sft_I.json"), "--n", "30"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn sweep_finds_tagged_maximum() {
    let out = stdout(&["sweep", "--family", "gms-1step", "--objective", "asc", "--step", "0.01"]);
    let best = out.lines().find(|l| l.starts_with("best,")).unwrap();
    assert!(best.ends_with(",gms-1step/2"), "{best}");
}

#[test]
fn custom_family_file() {
    let out = stdout(&["sweep", "--family", &data("gms2_family.json"), "--objective", "h", "--step", "0.05"]);
    assert!(out.lines().any(|l| l.starts_with("best,gms-2step-template,h,")), "{out}");
}

#[test]
fn output_is_reproducible_and_thread_independent() {
    let base = ["markov", "--family", "full2-1step", "--param", "0.3", "--param", "0.6", "--samples", "3000", "--seed", "7", "--n", "12"];
    let one = stdout(&[&base[..], &["--threads", "1"]].concat());
    let four = stdout(&[&base[..], &["--threads", "4"]].concat());
    assert_eq!(one, four);
    assert_eq!(one, stdout(&base));
    let other = stdout(&[&base[..9], &["--seed", "8", "--n", "12"]].concat());
    assert_ne!(one, other);
}

#[test]
fn output_file_and_cache_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.csv");
    let cache = dir.path().join("cache");
    for _ in 0..2 {
        let st = Command::new(env!("CARGO_BIN_EXE_intricacy"))
            .args(["topo", "--input", &data("sft_II.json"), "--output", out.to_str().unwrap()])
            .env("INTRICACY_CACHE_DIR", &cache)
            .status()
            .unwrap();
        assert!(st.success());
    }
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("same-complexity/II"));
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
}
