//! `analyze`: runs the expert x alpha grid and reports the payoff table,
//! payoff correlation, personalization, topics per hotel tier and score bins.

use persuasion::dataset::GameLog;
use persuasion::features::FeatureMode;
use persuasion::harness::analytics::{payoff_correlation, personalization, score_bins, topics_by_tier};
use persuasion::harness::TournamentResult;
use serde_json::json;

use crate::config::Config;
use crate::data;
use crate::tournament::{self, Arena};

/// Payoffs of one expert at increasing alphas.
struct Trend<'a> {
    expert: &'a str,
    runs: Vec<&'a TournamentResult>,
}

impl Trend<'_> {
    fn monotone(&self) -> bool {
        self.runs.windows(2).all(|w| w[0].expert.mean <= w[1].expert.mean)
    }

    /// Whether the lowest- and highest-alpha intervals are disjoint.
    fn separated(&self) -> bool {
        match (self.runs.first(), self.runs.last()) {
            (Some(a), Some(b)) if self.runs.len() > 1 => !a.expert.overlaps(&b.expert),
            _ => false,
        }
    }
}

pub fn run(config: &Config) -> anyhow::Result<()> {
    let a = &config.analyze;
    data::ensure(!a.experts.is_empty() && !a.alphas.is_empty(), || {
        "analyze.experts and analyze.alphas must be non-empty".into()
    })?;
    let mut alphas = a.alphas.clone();
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();

    let arena = Arena::load(config)?;
    let mut experts = Vec::new();
    for e in &a.experts {
        if arena.available(e)? {
            experts.push(e.as_str());
        } else {
            eprintln!("warning: skipping {e}: its models are not loaded");
        }
    }
    let mut results: Vec<TournamentResult> = Vec::new();
    tournament::header();
    for e in &experts {
        for &alpha in &alphas {
            let r = arena.run(&config.tournament, e, alpha)?;
            tournament::row(&r.summary());
            results.push(r);
        }
    }
    let of = |e: &str| -> Vec<&TournamentResult> { results.iter().filter(|r| r.config.expert == e).collect() };

    println!("\nmonotone in alpha (payoff non-decreasing; extreme intervals disjoint):");
    let mut trends = Vec::new();
    for e in &experts {
        let t = Trend { expert: e, runs: of(e) };
        println!("  {:<12} non-decreasing: {:<5}  separated: {}", t.expert, t.monotone(), t.separated());
        trends.push(json!({ "expert": t.expert, "non_decreasing": t.monotone(), "separated": t.separated() }));
    }

    println!("\npayoff correlation across experts (Pearson, expert vs DM average payoff):");
    let mut correlations = Vec::new();
    for &alpha in &alphas {
        let at: Vec<TournamentResult> = results.iter().filter(|r| r.config.alpha == alpha).cloned().collect();
        let r = payoff_correlation(&at);
        match r {
            Some(r) => println!("  alpha {alpha:+.2}: {r:+.3}"),
            None => println!("  alpha {alpha:+.2}: undefined (constant payoffs or fewer than two experts)"),
        }
        correlations.push(json!({ "alpha": alpha, "pearson": r }));
    }

    println!("\nmean normalized revealed score by alpha:");
    let mut personal = serde_json::Map::new();
    for e in &experts {
        let runs = of(e);
        let groups: Vec<(f64, &[GameLog])> = runs.iter().map(|r| (r.config.alpha, r.logs.as_slice())).collect();
        let p = personalization(&groups, &arena.corpus);
        let cells: Vec<String> = p
            .iter()
            .map(|x| match x.mean_normalized_score {
                Some(v) => format!("{:+.1}:{v:.3}", x.alpha),
                None => format!("{:+.1}:-", x.alpha),
            })
            .collect();
        println!("  {e:<12} {}", cells.join("  "));
        personal.insert(e.to_string(), serde_json::to_value(p)?);
    }

    let encoder = arena.models.encoder(FeatureMode::Textual);
    println!("\ntop topics of revealed reviews by hotel tier (all alphas pooled):");
    let mut topics = serde_json::Map::new();
    let mut bins = serde_json::Map::new();
    for e in &experts {
        let logs: Vec<GameLog> = of(e).iter().flat_map(|r| r.logs.iter().cloned()).collect();
        let tiers = topics_by_tier(&logs, &arena.corpus, encoder, a.top_topics);
        println!("  {e}");
        for t in &tiers {
            let list: Vec<String> = t.topics.iter().map(|(n, f)| format!("{n} {:.0}%", f * 100.0)).collect();
            println!("    {:<7} ({:>5} reveals) {}", format!("{:?}", t.tier), t.reveals, list.join(", "));
        }
        topics.insert(e.to_string(), serde_json::to_value(&tiers)?);
        bins.insert(e.to_string(), serde_json::to_value(score_bins(&logs, &arena.corpus))?);
    }

    println!("\nrevealed reviews by within-hotel score bin (low / medium / high):");
    for e in &experts {
        let logs: Vec<GameLog> = of(e).iter().flat_map(|r| r.logs.iter().cloned()).collect();
        let b = score_bins(&logs, &arena.corpus).overall;
        let f = b.frequencies();
        let m: Vec<String> = b
            .means()
            .iter()
            .map(|x| x.map_or("-".into(), |v| format!("{v:.2}")))
            .collect();
        println!(
            "  {e:<12} freq {:.3} / {:.3} / {:.3}   mean score {}",
            f[0],
            f[1],
            f[2],
            m.join(" / ")
        );
    }

    let report = json!({
        "runs": results.iter().map(TournamentResult::summary).collect::<Vec<_>>(),
        "monotonicity": trends,
        "payoff_correlation": correlations,
        "personalization": personal,
        "topics": topics,
        "score_bins": bins,
    });
    let out = config.paths.results.join("analysis.json");
    data::write(&out, &serde_json::to_string_pretty(&report)?)?;
    println!("\nreport: {}", out.display());
    Ok(())
}
