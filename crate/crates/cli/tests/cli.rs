use std::path::Path;
use std::process::{Command, Output};

use tweetlens::synth::synthetic_csv;

const FAST: &str = "n_trees = 10\nlda_iters = 50\ncv_folds = 3\nhashtag_min_freq = 3\n";

fn tweetlens(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tweetlens"))
        .current_dir(dir)
        .args(["--config", "fast.toml", "--data", "tweets.csv", "--out", "out"])
        .args(args)
        .output()
        .unwrap()
}

fn workspace() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("tweets.csv"), synthetic_csv(300, 11)).unwrap();
    std::fs::write(dir.path().join("fast.toml"), FAST).unwrap();
    dir
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn stats_reports_histogram() {
    let dir = workspace();
    let stdout = ok(&tweetlens(dir.path(), &["stats"]));
    let stats: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(stats["total"], 300);
    assert!(dir.path().join("out/stats.json").is_file());
}

#[test]
fn evaluate_writes_table_and_is_reproducible() {
    let dir = workspace();
    let first = ok(&tweetlens(dir.path(), &["evaluate", "--combos", "U,LM"]));
    assert!(first.contains("Unigrams (Baseline)"), "{first}");
    let json = std::fs::read(dir.path().join("out/evaluation.json")).unwrap();
    let second = ok(&tweetlens(dir.path(), &["evaluate", "--combos", "U,LM"]));
    assert_eq!(first, second);
    assert_eq!(json, std::fs::read(dir.path().join("out/evaluation.json")).unwrap());
    assert!(dir.path().join("out/table1.txt").is_file());
}

#[test]
fn topics_and_attributes_produce_outputs() {
    let dir = workspace();
    ok(&tweetlens(dir.path(), &["topics"]));
    for f in ["topics_positive.json", "topics_negative.json", "wordcloud_positive.svg"] {
        assert!(dir.path().join("out").join(f).is_file(), "{f}");
    }
    let stdout = ok(&tweetlens(dir.path(), &["attributes", "--combo", "UL"]));
    assert_eq!(stdout.lines().count(), 10);
    assert!(dir.path().join("out/attributes_UL.json").is_file());
}

#[test]
fn features_train_predict_round_trip() {
    let dir = workspace();
    ok(&tweetlens(dir.path(), &["features", "--combo", "LM"]));
    let matrix = "out/features_LM.csv";
    ok(&tweetlens(dir.path(), &["train", "--matrix", matrix]));
    ok(&tweetlens(dir.path(), &["predict", "--model", "out/model.json", "--matrix", matrix]));
    let preds = std::fs::read_to_string(dir.path().join("out/predictions.csv")).unwrap();
    assert_eq!(preds.lines().next(), Some("row,actual,predicted"));
    assert_eq!(preds.lines().count(), 301);
}

#[test]
fn exit_codes() {
    let dir = workspace();
    assert_eq!(tweetlens(dir.path(), &["evaluate", "--combos", "XYZ"]).status.code(), Some(2));
    std::fs::write(dir.path().join("fast.toml"), "no_such_key = 1\n").unwrap();
    assert_eq!(tweetlens(dir.path(), &["stats"]).status.code(), Some(2));
    std::fs::write(dir.path().join("fast.toml"), FAST).unwrap();
    std::fs::remove_file(dir.path().join("tweets.csv")).unwrap();
    let out = tweetlens(dir.path(), &["stats"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
    assert_eq!(tweetlens(dir.path(), &["bogus"]).status.code(), Some(2));
}

#[test]
fn config_prints_effective_toml() {
    let dir = workspace();
    let stdout = ok(&tweetlens(dir.path(), &["--seed", "9", "config"]));
    assert!(stdout.contains("n_trees = 10"), "{stdout}");
    assert!(stdout.contains("cv_seed = 9"), "{stdout}");
}
