//! Hotel corpora, game logs, the synthetic data generator and the
//! conversion of logs into training sequences.
//!
//! # File formats
//!
//! **Corpus CSV.** An optional first line `# persuasion-corpus {json}` carries
//! the metadata (`version`, `split`, `provenance`, `short_text_waiver`). The
//! header row names the columns `hotel_id, review_id, score, positive_text,
//! negative_text`; the original dataset's names (`Hotel`, `Review_Id`,
//! `Reviewer_Score`, `Positive_Review`, `Negative_Review`, ...) are accepted as
//! aliases. Fields follow RFC 4180: fields holding commas, quotes or line
//! breaks are quoted and embedded quotes doubled. Each hotel's seven rows are
//! contiguous.
//!
//! **Corpus JSONL.** A metadata line `{"format":"persuasion-corpus",...}`,
//! then one hotel per line: `{"id":..,"reviews":[{"id","score",
//! "positive_text","negative_text"}, ...]}`.
//!
//! **Game logs JSONL.** A header line `{"format":"persuasion-gamelog",
//! "version":1}`, then one trial per line with the trial record fields plus
//! `game_id`, `expert_id`, `dm_id` and `lottery_visible`. A game's trials are
//! contiguous and in order.

mod corpus;
mod logs;
mod sequences;
pub mod synthetic;

use thiserror::Error;

pub use corpus::{Corpus, CorpusFormat, CorpusMeta, Split, MIN_REVIEW_CHARS};
pub use logs::{load_game_logs, parse_game_logs, write_game_logs, GameLog, LogSet, SkippedLog};
pub use sequences::{build_training_sequences, TrainingSequence};
pub use synthetic::{generate_synthetic, Archetype, ArchetypeDm, SyntheticConfig};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Row { line: u64, message: String },
    #[error("invalid data: {0}")]
    Data(String),
}

impl DatasetError {
    fn row(line: u64, message: impl Into<String>) -> Self {
        DatasetError::Row {
            line,
            message: message.into(),
        }
    }
}

fn read(path: &std::path::Path) -> Result<String, DatasetError> {
    std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &std::path::Path, text: &str) -> Result<(), DatasetError> {
    std::fs::write(path, text).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })
}
