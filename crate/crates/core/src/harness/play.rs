//! Playing one full game between an expert and a decision-maker.

use crate::experts::{Expert, ExpertError};
use crate::game::{resolve_trial, GameState, Hotel, TrialRecord};
use crate::models::{DecisionMaker, TrialView};
use crate::rng::{stream, GameRng};

/// Independent random streams for one game. Keeping the lottery and the DM
/// on their own streams lets different DMs face the same lotteries.
pub struct GameRngs {
    pub expert: GameRng,
    pub dm: GameRng,
    pub lottery: GameRng,
}

impl GameRngs {
    pub fn for_game(master: u64, game: u64) -> Self {
        GameRngs {
            expert: stream(master, game, 0),
            dm: stream(master, game, 1),
            lottery: stream(master, game, 2),
        }
    }
}

/// Plays `sequence` to the end and returns the final state. `on_trial` sees
/// the state before each trial, the hotel and the resulting record.
pub fn play_game<F>(
    sequence: &[&Hotel],
    expert: &mut dyn Expert,
    dm: &mut dyn DecisionMaker,
    rngs: &mut GameRngs,
    mut on_trial: F,
) -> Result<GameState, ExpertError>
where
    F: FnMut(&GameState, &Hotel, usize, &TrialRecord),
{
    let mut state = GameState::new(sequence.iter().map(|h| h.id().to_string()).collect());
    dm.reset();
    for hotel in sequence {
        let review = expert.choose_review(&state, hotel, &mut rngs.expert)?;
        let decision = dm.decide(&TrialView::new(&state, hotel, review), &mut rngs.dm);
        let record = resolve_trial(state.current_trial(), hotel, review, decision, &mut rngs.lottery)
            .expect("experts return reviews of the hotel");
        expert.observe(&state, hotel, &record);
        on_trial(&state, hotel, review, &record);
        state.apply(record).expect("records built from the state apply to it");
    }
    Ok(state)
}
