use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{read, write, Corpus, DatasetError};
use crate::game::{GameState, TrialRecord};

const LOG_FORMAT: &str = "persuasion-gamelog";
const LOG_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameLog {
    pub game_id: String,
    pub expert_id: String,
    pub dm_id: String,
    /// Whether the DM was shown the lottery result of each trial.
    pub lottery_visible: bool,
    pub records: Vec<TrialRecord>,
}

impl GameLog {
    pub fn hotel_sequence(&self) -> Vec<String> {
        self.records.iter().map(|r| r.hotel_id.clone()).collect()
    }

    pub fn expert_payoff(&self) -> u32 {
        self.records.iter().map(|r| u32::from(r.expert_payoff)).sum()
    }

    pub fn dm_payoff(&self) -> f64 {
        self.records.iter().map(|r| r.dm_payoff).sum()
    }

    /// Replays the log against `corpus`: every hotel must exist, every
    /// revealed review and lottery must belong to its hotel, and trials must
    /// run 1..=horizon in order.
    pub fn validate(&self, corpus: &Corpus, horizon: usize) -> Result<GameState, String> {
        if self.records.len() != horizon {
            return Err(format!("{} trials, expected {horizon}", self.records.len()));
        }
        for r in &self.records {
            let hotel = corpus
                .hotel(&r.hotel_id)
                .ok_or_else(|| format!("trial {}: unknown hotel {}", r.trial_index, r.hotel_id))?;
            r.validate(Some(hotel)).map_err(|e| format!("trial {}: {e}", r.trial_index))?;
        }
        GameState::replay(self.hotel_sequence(), &self.records).map_err(|e| e.to_string())
    }
}

#[derive(Serialize, Deserialize)]
struct LogHeader {
    format: String,
    version: u32,
}

#[derive(Serialize, Deserialize)]
struct LogLine {
    game_id: String,
    expert_id: String,
    dm_id: String,
    lottery_visible: bool,
    #[serde(flatten)]
    record: TrialRecord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedLog {
    pub game_id: String,
    /// First line of the game in the file.
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LogSet {
    pub logs: Vec<GameLog>,
    pub skipped: Vec<SkippedLog>,
}

pub fn write_game_logs(logs: &[GameLog]) -> String {
    let mut out = serde_json::to_string(&LogHeader {
        format: LOG_FORMAT.into(),
        version: LOG_VERSION,
    })
    .expect("headers serialise");
    out.push('\n');
    for log in logs {
        for r in &log.records {
            let line = LogLine {
                game_id: log.game_id.clone(),
                expert_id: log.expert_id.clone(),
                dm_id: log.dm_id.clone(),
                lottery_visible: log.lottery_visible,
                record: r.clone(),
            };
            out.push_str(&serde_json::to_string(&line).expect("log lines serialise"));
            out.push('\n');
        }
    }
    out
}

/// Parses a log file. Malformed lines are errors; games that fail replay
/// against `corpus` are skipped and listed in [`LogSet::skipped`].
pub fn parse_game_logs(text: &str, corpus: &Corpus, horizon: usize) -> Result<LogSet, DatasetError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or_else(|| DatasetError::row(1, "empty log file"))?;
    let header: LogHeader = serde_json::from_str(first).map_err(|e| DatasetError::row(1, format!("bad header: {e}")))?;
    if header.format != LOG_FORMAT || header.version != LOG_VERSION {
        return Err(DatasetError::row(
            1,
            format!("unsupported log format {} version {}", header.format, header.version),
        ));
    }

    // Group contiguous lines by game id.
    let mut games: Vec<(u64, GameLog, Option<String>)> = Vec::new();
    let mut finished = std::collections::HashSet::new();
    for (i, text) in lines {
        let line_no = i as u64 + 1;
        let line: LogLine = serde_json::from_str(text).map_err(|e| DatasetError::row(line_no, e.to_string()))?;
        match games.last_mut() {
            Some((_, g, problem)) if g.game_id == line.game_id => {
                if g.expert_id != line.expert_id || g.dm_id != line.dm_id || g.lottery_visible != line.lottery_visible {
                    problem.get_or_insert_with(|| format!("line {line_no}: player ids or visibility change within the game"));
                }
                g.records.push(line.record);
            }
            _ => {
                if let Some((_, g, _)) = games.last() {
                    finished.insert(g.game_id.clone());
                }
                let problem = finished
                    .contains(&line.game_id)
                    .then(|| format!("line {line_no}: game id repeats after other games"));
                games.push((
                    line_no,
                    GameLog {
                        game_id: line.game_id,
                        expert_id: line.expert_id,
                        dm_id: line.dm_id,
                        lottery_visible: line.lottery_visible,
                        records: vec![line.record],
                    },
                    problem,
                ));
            }
        }
    }

    let mut set = LogSet::default();
    for (line, log, problem) in games {
        match problem.map_or_else(|| log.validate(corpus, horizon).map(|_| ()), Err) {
            Ok(()) => set.logs.push(log),
            Err(reason) => set.skipped.push(SkippedLog {
                game_id: log.game_id,
                line,
                reason,
            }),
        }
    }
    Ok(set)
}

pub fn load_game_logs(path: &Path, corpus: &Corpus, horizon: usize) -> Result<LogSet, DatasetError> {
    parse_game_logs(&read(path)?, corpus, horizon)
}

impl LogSet {
    pub fn save(logs: &[GameLog], path: &Path) -> Result<(), DatasetError> {
        write(path, &write_game_logs(logs))
    }
}
