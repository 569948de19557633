use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::process::{Command, Output, Stdio};

use persuasion::dataset::{load_game_logs, Corpus};

fn persuade(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_persuade"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn check(o: Output) -> String {
    assert!(
        o.status.success(),
        "exit {:?}\nstdout:\n{}\nstderr:\n{}",
        o.status.code(),
        stdout(&o),
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

const SMALL: &str = r#"
[generate]
hotels = 60
train_games = 120
test_games = 30

[train]
roles = ["dmm.hc-lstm", "vm.hc-lstm", "dmm.linear"]

[train.recurrent]
max_epochs = 4
folds = 1

[experts.search.budget]
iterations = 40

[tournament]
games = 20
resamples = 200

[analyze]
experts = ["rand", "highest", "ae", "ae-sg"]
alphas = [-0.2, 0.2]
"#;

#[test]
fn full_pipeline_runs_from_one_config() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("run.toml"), SMALL).unwrap();
    let cfg = ["--config", "run.toml"];
    let with = |extra: &[&str]| -> Vec<String> { cfg.iter().chain(extra).map(|s| s.to_string()).collect() };
    let run = |args: Vec<String>| check(persuade(d, &args.iter().map(String::as_str).collect::<Vec<_>>()));

    run(with(&["generate"]));
    let train = Corpus::load(&d.join("data/train_corpus.jsonl")).unwrap();
    let test = Corpus::load(&d.join("data/test_corpus.jsonl")).unwrap();
    assert_eq!((train.len(), test.len()), (45, 15));
    assert!(train.hotels().iter().all(|h| test.hotel(h.id()).is_none()));
    let logs = load_game_logs(&d.join("data/test_logs.jsonl"), &test, 10).unwrap();
    assert_eq!(logs.logs.len(), 30);
    assert!(logs.skipped.is_empty());

    let out = run(with(&["train"]));
    assert!(out.contains("dmm.linear"), "{out}");
    assert!(d.join("models/registry.toml").exists());

    let out = run(with(&["evaluate"]));
    assert!(out.contains("dmm.hc-lstm") && out.contains("vm.hc-lstm"), "{out}");
    let eval: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("results/evaluation.json")).unwrap()).unwrap();
    let acc = eval["dmm"]["dmm.hc-lstm"]["accuracy"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&acc));

    run(with(&["tournament", "-s", "sweep.experts=[\"highest\", \"ae\"]", "-s", "sweep.csv=true"]));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("results/tournament.json")).unwrap()).unwrap();
    assert_eq!(summary.as_array().unwrap().len(), 2);
    let csv = std::fs::read_to_string(d.join("results/highest_dmm.hc-lstm+0.00.csv")).unwrap();
    assert_eq!(csv.lines().count(), 21);

    // ae-sg needs models that were not trained; it is skipped, not fatal.
    let o = persuade(d, &with(&["analyze"]).iter().map(String::as_str).collect::<Vec<_>>());
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipping ae-sg"));
    let out = check(o);
    assert!(out.contains("payoff correlation"), "{out}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("results/analysis.json")).unwrap()).unwrap();
    assert_eq!(report["runs"].as_array().unwrap().len(), 6);
    assert_eq!(report["personalization"]["highest"][0]["mean_normalized_score"], 1.0);

    // Reproducible: the same tournament twice gives the same report.
    let first = std::fs::read_to_string(d.join("results/tournament.json")).unwrap();
    run(with(&["tournament", "-s", "sweep.experts=[\"highest\", \"ae\"]"]));
    assert_eq!(first, std::fs::read_to_string(d.join("results/tournament.json")).unwrap());
}

#[test]
fn exit_codes_separate_config_and_data_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(persuade(d, &["-s", "tournament.gmaes=3", "tournament"]).status.code(), Some(2));
    assert_eq!(persuade(d, &["--config", "missing.toml", "tournament"]).status.code(), Some(2));
    // No corpus yet.
    assert_eq!(persuade(d, &["tournament"]).status.code(), Some(3));

    check(persuade(
        d,
        &["-s", "generate.hotels=60", "-s", "generate.train_games=5", "-s", "generate.test_games=5", "generate"],
    ));
    let unknown = persuade(d, &["-s", "tournament.expert=oracle", "-s", "tournament.dm=dmm.ewg", "tournament"]);
    assert_eq!(unknown.status.code(), Some(2));
    // The default DM needs trained models.
    assert_eq!(persuade(d, &["-s", "tournament.expert=rand", "tournament"]).status.code(), Some(2));
    assert_eq!(persuade(d, &["-s", "play.expert=ae", "play"]).status.code(), Some(2));

    std::fs::write(d.join("data/test_logs.jsonl"), "{ not json\n").unwrap();
    assert_eq!(persuade(d, &["evaluate"]).status.code(), Some(3));
    let ok = persuade(
        d,
        &["-s", "tournament.expert=rand", "-s", "tournament.dm=dmm.ewg", "-s", "tournament.games=10", "tournament"],
    );
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn terminal_play_reads_decisions_from_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    check(persuade(d, &["-s", "generate.hotels=40", "-s", "generate.train_games=5", "-s", "generate.test_games=5", "generate"]));
    let play = |input: &str| {
        let mut child = Command::new(env!("CARGO_BIN_EXE_persuade"))
            .current_dir(d)
            .args(["-s", "play.expert=highest", "-s", "play.seed=4", "play"])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .unwrap();
        child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
        child.wait_with_output().unwrap()
    };
    let out = check(play("a\nmaybe\na\na\na\na\na\na\na\na\na\n"));
    assert!(out.contains("please answer a or r"));
    assert!(out.contains("the expert earned 10 of 10"), "{out}");

    let short = play("r\nr\n");
    assert_eq!(short.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&short.stderr).contains("input ended"));
}

#[test]
fn serve_answers_http_requests() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    check(persuade(d, &["-s", "generate.hotels=40", "-s", "generate.train_games=5", "-s", "generate.test_games=5", "generate"]));
    let mut child = Command::new(env!("CARGO_BIN_EXE_persuade"))
        .current_dir(d)
        .args(["-s", "serve.addr=127.0.0.1:0", "-s", "serve.default_expert=median", "serve"])
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let mut lines = BufReader::new(child.stdout.take().unwrap()).lines();
    let base = loop {
        let line = lines.next().expect("server printed its address").unwrap();
        if let Some(addr) = line.strip_prefix("listening on ") {
            break addr.to_string();
        }
    };
    let rt = tokio::runtime::Builder::new_current_thread().enable_all().build().unwrap();
    let (status, body) = rt.block_on(async {
        let r = reqwest::Client::new()
            .post(format!("{base}/sessions"))
            .json(&serde_json::json!({}))
            .send()
            .await
            .unwrap();
        (r.status().as_u16(), r.json::<serde_json::Value>().await.unwrap())
    });
    child.kill().unwrap();
    child.wait().unwrap();
    assert_eq!(status, 201);
    assert_eq!(body["expert"], "median");
    assert_eq!(body["trial"], 1);
}
