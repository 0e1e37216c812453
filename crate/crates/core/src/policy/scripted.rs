//! Deterministic rule-based questioners that speak through [`TokenPolicy`],
//! used as references and in tests.

use super::model::TokenPolicy;
use crate::env::{
    filter_candidates, Answer, CandidateSet, GameRecord, GridImage, QAPair, Query, Token,
    VOCAB_SIZE,
};

fn one_hot_log(tok: Token) -> Vec<f64> {
    let mut lp = vec![f64::NEG_INFINITY; VOCAB_SIZE];
    lp[tok.id()] = 0.0;
    lp
}

/// Replays the questions of one recorded game verbatim, repeating the last
/// question if asked for more rounds than the record holds.
#[derive(Clone, Debug)]
pub struct ReplayPolicy {
    questions: Vec<Vec<Token>>,
}

impl ReplayPolicy {
    pub fn new(game: &GameRecord) -> Self {
        assert!(
            !game.dialog.is_empty(),
            "replay needs at least one question"
        );
        ReplayPolicy {
            questions: game.dialog.iter().map(|qa| qa.question.clone()).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReplayState {
    round: usize,
    pos: usize,
}

impl TokenPolicy for ReplayPolicy {
    type State = ReplayState;

    fn start(&self, _grid: &GridImage) -> ReplayState {
        ReplayState { round: 0, pos: 0 }
    }

    fn next(&self, state: &ReplayState, input: Token) -> (Vec<f64>, ReplayState) {
        let mut s = state.clone();
        if Answer::from_token(input).is_some() {
            s.round += 1;
            s.pos = 0;
        }
        let q = &self.questions[s.round.min(self.questions.len() - 1)];
        let tok = q.get(s.pos).copied().unwrap_or(Token::QMARK);
        s.pos += 1;
        (one_hot_log(tok), s)
    }
}

/// Adaptive rule-based questioner: tracks the candidate set from the answers
/// it receives and always asks the most balanced informative query.
#[derive(Clone, Debug, Default)]
pub struct ScriptedQuestioner;

#[derive(Clone, Debug)]
pub struct ScriptedState {
    grid: GridImage,
    candidates: CandidateSet,
    pending: Vec<Token>,
    pos: usize,
}

impl ScriptedQuestioner {
    fn choose(grid: &GridImage, candidates: CandidateSet) -> Query {
        let n = candidates.len();
        Query::all()
            .min_by_key(|q| {
                let hits = candidates.iter().filter(|&i| q.matches(grid, i)).count();
                if hits == 0 || hits == n {
                    usize::MAX
                } else {
                    (2 * hits).abs_diff(n)
                }
            })
            .expect("22 queries exist")
    }
}

impl TokenPolicy for ScriptedQuestioner {
    type State = ScriptedState;

    fn start(&self, grid: &GridImage) -> ScriptedState {
        let candidates = CandidateSet::all();
        ScriptedState {
            grid: grid.clone(),
            candidates,
            pending: Self::choose(grid, candidates).tokens(),
            pos: 0,
        }
    }

    fn next(&self, state: &ScriptedState, input: Token) -> (Vec<f64>, ScriptedState) {
        let mut s = state.clone();
        if let Some(answer) = Answer::from_token(input) {
            let qa = QAPair {
                question: std::mem::take(&mut s.pending),
                answer,
            };
            s.candidates = filter_candidates(s.candidates, &s.grid, &qa);
            s.pending = Self::choose(&s.grid, s.candidates).tokens();
            s.pos = 0;
        }
        let tok = s.pending.get(s.pos).copied().unwrap_or(Token::QMARK);
        s.pos += 1;
        (one_hot_log(tok), s)
    }
}
