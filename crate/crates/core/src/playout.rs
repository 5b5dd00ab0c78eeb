//! Seeded playouts and the concepts measured from them.
//!
//! Trial `i` draws every random choice from a stream derived from
//! `(master_seed, i)`, and results are aggregated in trial order, so a report
//! does not depend on how many threads ran the trials.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compiler::GameSpec;
use crate::concepts::{ids, registry, ConceptId, ConceptVector};
use crate::engine::{evaluate, initial_state, Move, Outcome, OutcomeKind, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "camelCase")]
pub enum Policy {
    #[default]
    UniformRandom,
    /// Always the first move of the canonical move list.
    FirstLegal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PlayoutConfig {
    pub trials: usize,
    pub master_seed: u64,
    pub policy: Policy,
    /// Maximum moves per trial; `None` uses the game's default cap.
    pub move_cap: Option<usize>,
}

impl Default for PlayoutConfig {
    fn default() -> Self {
        PlayoutConfig { trials: 10_000, master_seed: 0, policy: Policy::UniformRandom, move_cap: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoveRecord {
    pub mover: usize,
    /// Number of legal moves the mover chose from.
    pub branching: usize,
    pub chosen: Move,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub records: Vec<MoveRecord>,
    /// `None` when the move cap cut the trial short.
    pub outcome: Option<Outcome>,
}

impl Trial {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn truncated(&self) -> bool {
        self.outcome.is_none()
    }
}

/// Seed of trial `index` under `master_seed`.
pub fn trial_seed(master_seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng.gen()
}

pub fn run_trial(spec: &GameSpec, policy: Policy, seed: u64, move_cap: Option<usize>) -> Trial {
    let cap = move_cap.unwrap_or_else(|| spec.default_move_cap());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = initial_state(spec, rng.gen());
    let mut records = Vec::new();
    loop {
        match evaluate(spec, &state) {
            Status::Over(outcome) => return Trial { records, outcome: Some(outcome) },
            Status::Ongoing(mut moves) => {
                if records.len() >= cap {
                    return Trial { records, outcome: None };
                }
                let index = match policy {
                    Policy::FirstLegal => 0,
                    Policy::UniformRandom => rng.gen_range(0..moves.len()),
                };
                let branching = moves.len();
                let chosen = moves.swap_remove(index);
                state.apply_unchecked(spec, &chosen);
                records.push(MoveRecord { mover: state.last_mover(), branching, chosen });
            }
        }
    }
}

/// Playout concepts together with how many trials hit the move cap.
#[derive(Debug, Clone, PartialEq)]
pub struct PlayoutReport {
    pub vector: ConceptVector,
    pub truncated_fraction: f64,
}

struct Summary {
    length: usize,
    branching: usize,
    tag_counts: Vec<usize>,
    outcome: Option<Outcome>,
}

/// Frequency concepts paired with their base concept, in registry order.
fn frequency_pairs() -> Vec<(ConceptId, ConceptId)> {
    registry().iter().filter_map(|d| d.frequency_of.map(|base| (d.id, base))).collect()
}

pub fn analyze(spec: &GameSpec, config: &PlayoutConfig) -> PlayoutReport {
    let pairs = frequency_pairs();
    let summaries: Vec<Summary> = (0..config.trials as u64)
        .into_par_iter()
        .map(|i| {
            let trial = run_trial(spec, config.policy, trial_seed(config.master_seed, i), config.move_cap);
            let tag_counts = pairs
                .iter()
                .map(|&(_, base)| trial.records.iter().filter(|r| r.chosen.tags.contains(base)).count())
                .collect();
            Summary {
                length: trial.len(),
                branching: trial.records.iter().map(|r| r.branching).sum(),
                tag_counts,
                outcome: trial.outcome,
            }
        })
        .collect();

    let n = summaries.len().max(1) as f64;
    let mut v = ConceptVector::new();
    let end_tags = |s: &Summary| s.outcome.map(|o| o.end_tags).unwrap_or_default();
    for (k, &(freq, base)) in pairs.iter().enumerate() {
        let value = if ids::END_TYPES.contains(&base) {
            summaries.iter().filter(|s| end_tags(s).contains(base)).count() as f64 / n
        } else {
            summaries
                .iter()
                .map(|s| if s.length == 0 { 0.0 } else { s.tag_counts[k] as f64 / s.length as f64 })
                .sum::<f64>()
                / n
        };
        v.set(freq, value).expect("frequency in range");
    }

    let moves: usize = summaries.iter().map(|s| s.length).sum();
    let branching: usize = summaries.iter().map(|s| s.branching).sum();
    v.set(ids::GAME_LENGTH, moves as f64 / n).expect("finite");
    if moves > 0 {
        v.set(ids::BRANCHING_FACTOR, branching as f64 / moves as f64).expect("finite");
    }
    let wins = |p: usize| summaries.iter().filter(|s| matches!(s.outcome, Some(Outcome { kind: OutcomeKind::Win(w), .. }) if w == p)).count();
    let total_wins: usize = (1..=spec.num_players).map(wins).sum();
    let balance = (wins(1) as f64 - total_wins as f64 / spec.num_players as f64) / n;
    v.set(ids::BALANCE, balance).expect("finite");
    let draws = summaries.iter().filter(|s| matches!(s.outcome, Some(Outcome { kind: OutcomeKind::Draw, .. }))).count();
    v.set(ids::DRAWISHNESS, draws as f64 / n).expect("fraction");
    let truncated = summaries.iter().filter(|s| s.outcome.is_none()).count();

    v.provenance = Some(config.clone());
    PlayoutReport { vector: v, truncated_fraction: truncated as f64 / n }
}
