use super::{Corpus, DatasetError, GameLog};
use crate::features::FeatureEncoder;
use crate::game::GameState;
use crate::neural::SequenceExample;

/// One game as model inputs with both targets.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSequence {
    pub inputs: Vec<Vec<f64>>,
    /// 1 for accept, 0 for reject.
    pub dmm_targets: Vec<f64>,
    /// Accepts from each trial to the end of the game.
    pub vm_targets: Vec<f64>,
}

impl TrainingSequence {
    pub fn dmm_example(&self) -> SequenceExample {
        SequenceExample {
            inputs: self.inputs.clone(),
            targets: self.dmm_targets.clone(),
        }
    }

    pub fn vm_example(&self) -> SequenceExample {
        SequenceExample {
            inputs: self.inputs.clone(),
            targets: self.vm_targets.clone(),
        }
    }
}

/// Encodes each logged trial as the DM saw it, in the encoder's mode.
pub fn build_training_sequences(
    logs: &[GameLog],
    corpus: &Corpus,
    encoder: &FeatureEncoder,
) -> Result<Vec<TrainingSequence>, DatasetError> {
    logs.iter()
        .map(|log| {
            let mut state = GameState::with_horizon(log.records.len());
            let mut inputs = Vec::with_capacity(log.records.len());
            for r in &log.records {
                let hotel = corpus
                    .hotel(&r.hotel_id)
                    .ok_or_else(|| DatasetError::Data(format!("game {}: unknown hotel {}", log.game_id, r.hotel_id)))?;
                let review = hotel.review_index(&r.revealed_review_id).ok_or_else(|| {
                    DatasetError::Data(format!("game {}: review {} not in hotel", log.game_id, r.revealed_review_id))
                })?;
                inputs.push(encoder.trial_vector(&state, hotel, review));
                state
                    .apply(r.clone())
                    .map_err(|e| DatasetError::Data(format!("game {}: {e}", log.game_id)))?;
            }
            let dmm_targets: Vec<f64> = log.records.iter().map(|r| f64::from(r.expert_payoff)).collect();
            let mut vm_targets = dmm_targets.clone();
            for i in (0..vm_targets.len().saturating_sub(1)).rev() {
                vm_targets[i] += vm_targets[i + 1];
            }
            Ok(TrainingSequence {
                inputs,
                dmm_targets,
                vm_targets,
            })
        })
        .collect()
}
