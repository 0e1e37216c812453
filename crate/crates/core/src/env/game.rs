use rand::Rng;
use serde::{Deserialize, Serialize};

use super::grid::{GridImage, GRID_CELLS};
use super::question::{answer, parse_question, Answer, QAPair, Query};
use super::vocab::Token;
use crate::error::{Error, Result};

/// Rounds allowed when generating scripted games; enough for any grid with
/// distinct cells to shrink to a singleton.
pub const SCRIPTED_MAX_ROUNDS: usize = 8;

/// Question rounds in reinforcement-learning gameplay.
pub const PLAY_MAX_ROUNDS: usize = 4;

const GAME_RETRIES: usize = 16;

/// Subset of the nine cell indices, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CandidateSet(u16);

impl CandidateSet {
    pub fn all() -> Self {
        CandidateSet((1 << GRID_CELLS) - 1)
    }

    pub fn empty() -> Self {
        CandidateSet(0)
    }

    pub fn singleton(index: usize) -> Self {
        CandidateSet(1 << index)
    }

    pub fn insert(&mut self, index: usize) {
        assert!(index < GRID_CELLS);
        self.0 |= 1 << index;
    }

    pub fn contains(&self, index: usize) -> bool {
        index < GRID_CELLS && self.0 & (1 << index) != 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..GRID_CELLS).filter(|&i| self.contains(i))
    }

    pub fn nth(&self, n: usize) -> Option<usize> {
        self.iter().nth(n)
    }
}

impl FromIterator<usize> for CandidateSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = CandidateSet::empty();
        for i in iter {
            set.insert(i);
        }
        set
    }
}

impl std::fmt::Debug for CandidateSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Narrows `candidates` by one answered question. Invalid answers carry no
/// information; an answer contradicting every candidate leaves the set as is.
pub fn filter_candidates(candidates: CandidateSet, grid: &GridImage, qa: &QAPair) -> CandidateSet {
    let query = match (qa.answer, parse_question(&qa.question)) {
        (Answer::Invalid, _) | (_, None) => return candidates,
        (_, Some(q)) => q,
    };
    let want = qa.answer == Answer::Yes;
    let kept: CandidateSet = candidates
        .iter()
        .filter(|&i| query.matches(grid, i) == want)
        .collect();
    if kept.is_empty() {
        candidates
    } else {
        kept
    }
}

/// Candidates consistent with a whole dialog, starting from all nine cells.
pub fn surviving_candidates(grid: &GridImage, dialog: &[QAPair]) -> CandidateSet {
    dialog
        .iter()
        .fold(CandidateSet::all(), |c, qa| filter_candidates(c, grid, qa))
}

/// Queries that split `candidates`: at least one candidate matches and at
/// least one does not. Values are drawn from those present among candidates.
pub fn informative_queries(candidates: CandidateSet, grid: &GridImage) -> Vec<Query> {
    Query::all()
        .filter(|q| {
            let hits = candidates.iter().filter(|&i| q.matches(grid, i)).count();
            hits > 0 && hits < candidates.len()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScriptedStep {
    Ask(Vec<Token>),
    Terminate,
}

/// Rule-based question generator. Stops on a singleton; otherwise asks a
/// uniformly chosen informative query. A multi-cell set with no informative
/// query (identical cells) is reported as [`Error::Unsolvable`].
pub fn scripted_question<R: Rng + ?Sized>(
    candidates: CandidateSet,
    grid: &GridImage,
    rng: &mut R,
) -> Result<ScriptedStep> {
    assert!(!candidates.is_empty(), "scripted_question needs candidates");
    if candidates.len() == 1 {
        return Ok(ScriptedStep::Terminate);
    }
    let options = informative_queries(candidates, grid);
    if options.is_empty() {
        return Err(Error::Unsolvable);
    }
    let q = options[rng.gen_range(0..options.len())];
    Ok(ScriptedStep::Ask(q.tokens()))
}

/// One complete game: the grid, the hidden target, the dialog and the outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameRecord {
    pub grid: GridImage,
    pub target_index: usize,
    pub dialog: Vec<QAPair>,
    pub guess_index: usize,
    pub reward: u8,
}

impl GameRecord {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.target_index >= GRID_CELLS || self.guess_index >= GRID_CELLS {
            return Err("cell index outside 0..=8".into());
        }
        if self.reward != reward(self.guess_index, self.target_index) {
            return Err("reward disagrees with guess/target".into());
        }
        for qa in &self.dialog {
            if qa.question.last() != Some(&Token::QMARK) {
                return Err("question does not end with `?`".into());
            }
        }
        Ok(())
    }
}

/// Plays the scripted questioner against the truthful answerer until one
/// candidate remains. Failed attempts are retried with a fresh question order.
pub fn generate_game<R: Rng + ?Sized>(
    grid: &GridImage,
    target_index: usize,
    max_rounds: usize,
    rng: &mut R,
) -> Result<GameRecord> {
    assert!(target_index < GRID_CELLS);
    for _ in 0..GAME_RETRIES {
        let mut candidates = CandidateSet::all();
        let mut dialog = Vec::new();
        loop {
            match scripted_question(candidates, grid, rng)? {
                ScriptedStep::Terminate => {
                    let guess_index = guess(grid, &dialog, rng);
                    return Ok(GameRecord {
                        grid: grid.clone(),
                        target_index,
                        guess_index,
                        reward: reward(guess_index, target_index),
                        dialog,
                    });
                }
                ScriptedStep::Ask(_) if dialog.len() == max_rounds => break,
                ScriptedStep::Ask(question) => {
                    let qa = QAPair {
                        answer: answer(grid, target_index, &question),
                        question,
                    };
                    candidates = filter_candidates(candidates, grid, &qa);
                    dialog.push(qa);
                }
            }
        }
    }
    Err(Error::GameTooLong { max_rounds })
}

/// Consistency-filter guesser: uniform over the cells that survive the dialog.
pub fn guess<R: Rng + ?Sized>(grid: &GridImage, dialog: &[QAPair], rng: &mut R) -> usize {
    let survivors = surviving_candidates(grid, dialog);
    survivors
        .nth(rng.gen_range(0..survivors.len()))
        .expect("survivor set is never empty")
}

pub fn reward(guess_index: usize, target_index: usize) -> u8 {
    u8::from(guess_index == target_index)
}
