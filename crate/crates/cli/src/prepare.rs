//! `generate`, `train` and `evaluate`.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Context;
use persuasion::dataset::synthetic::{generate_corpus, play_logs};
use persuasion::dataset::LogSet;
use persuasion::harness::{evaluate_dmm, evaluate_vm, train_suite, write_suite};
use persuasion::rng::derive_seed;
use serde_json::json;

use crate::config::Config;
use crate::data;

fn parent_dir(path: &Path) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(())
}

pub fn generate(config: &Config) -> anyhow::Result<()> {
    let g = &config.generate;
    data::ensure((0.0..1.0).contains(&g.test_fraction), || {
        format!("generate.test_fraction {} not in [0, 1)", g.test_fraction)
    })?;
    let corpus = generate_corpus(g.seed, g.hotels);
    let (train, test) = corpus.split(g.test_fraction, derive_seed(g.seed, 1));
    let train_logs = play_logs(&train, g.train_games, g.horizon, g.archetype, &g.experts, derive_seed(g.seed, 2))?;
    let test_logs = play_logs(&test, g.test_games, g.horizon, g.archetype, &g.experts, derive_seed(g.seed, 3))?;

    let p = &config.paths;
    for path in [&p.train_corpus, &p.test_corpus, &p.train_logs, &p.test_logs] {
        parent_dir(path)?;
    }
    train.save(&p.train_corpus)?;
    test.save(&p.test_corpus)?;
    LogSet::save(&train_logs, &p.train_logs)?;
    LogSet::save(&test_logs, &p.test_logs)?;
    println!(
        "train: {} hotels, {} games -> {}, {}",
        train.len(),
        train_logs.len(),
        p.train_corpus.display(),
        p.train_logs.display()
    );
    println!(
        "test:  {} hotels, {} games -> {}, {}",
        test.len(),
        test_logs.len(),
        p.test_corpus.display(),
        p.test_logs.display()
    );
    Ok(())
}

pub fn train(config: &Config) -> anyhow::Result<()> {
    let p = &config.paths;
    let corpus = data::corpus(&p.train_corpus)?;
    let logs = data::logs(&p.train_logs, &corpus, config.tournament.horizon)?;
    let manifest = data::manifest(config)?;
    println!("training {} roles on {} games", config.train.roles.len(), logs.len());
    let models = train_suite(&logs, &corpus, &manifest, &config.train)?;
    let listing = write_suite(&p.models, &models)?;
    for (role, _) in &models {
        println!("  {role}");
    }
    println!("registry: {}", listing.display());
    Ok(())
}

pub fn evaluate(config: &Config) -> anyhow::Result<()> {
    let p = &config.paths;
    let corpus = data::corpus(&p.test_corpus)?;
    let logs = data::logs(&p.test_logs, &corpus, config.tournament.horizon)?;
    let models = data::models(config)?;

    let mut dmm = BTreeMap::new();
    println!("{:<16} {:>9} {:>9} {:>7}", "dmm", "accuracy", "macro-f1", "trials");
    for role in models.dmm_roles() {
        let m = evaluate_dmm(models.dmm(role)?.as_ref(), &logs, &corpus)?;
        println!("{role:<16} {:>9.4} {:>9.4} {:>7}", m.accuracy, m.macro_f1, m.trials);
        dmm.insert(role.to_string(), m);
    }
    let mut vm = BTreeMap::new();
    println!("{:<16} {:>9} {:>9} {:>7}", "vm", "exact", "rmse", "trials");
    for role in models.vm_roles() {
        let m = evaluate_vm(models.vm(role)?.as_ref(), &logs, &corpus)?;
        println!("{role:<16} {:>9.4} {:>9.4} {:>7}", m.exact_accuracy, m.rmse, m.trials);
        vm.insert(role.to_string(), m);
    }
    let out = p.results.join("evaluation.json");
    data::write(&out, &serde_json::to_string_pretty(&json!({ "dmm": dmm, "vm": vm }))?)?;
    println!("report: {}", out.display());
    Ok(())
}
