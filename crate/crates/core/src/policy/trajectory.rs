use crate::env::{Answer, GameRecord, GridImage, QAPair, Token};

/// One game from the questioner's side.
///
/// `tokens[0]` is always `<sos>`. `action_mask[i]` is true iff `tokens[i]`
/// was emitted by the policy; answer tokens (and `<sos>`) are false.
/// `log_probs` holds one entry per masked token, in stream order, under the
/// policy that generated the trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub grid: GridImage,
    pub target_index: usize,
    pub tokens: Vec<Token>,
    pub action_mask: Vec<bool>,
    pub log_probs: Vec<f64>,
    pub guess_index: usize,
    pub reward: f64,
}

impl Trajectory {
    pub fn num_actions(&self) -> usize {
        self.log_probs.len()
    }

    /// Per-action probabilities under the generating policy.
    pub fn probs(&self) -> Vec<f64> {
        self.log_probs.iter().map(|l| l.exp()).collect()
    }

    pub fn total_log_prob(&self) -> f64 {
        self.log_probs.iter().sum()
    }

    /// Question/answer pairs recovered from the token stream.
    pub fn dialog(&self) -> Vec<QAPair> {
        dialog_from_stream(&self.tokens, &self.action_mask)
    }

    pub fn answer_count(&self) -> usize {
        self.action_mask
            .iter()
            .zip(&self.tokens)
            .skip(1)
            .filter(|(m, _)| !**m)
            .count()
    }
}

pub(crate) fn dialog_from_stream(tokens: &[Token], mask: &[bool]) -> Vec<QAPair> {
    let mut dialog = Vec::new();
    let mut question = Vec::new();
    for (&t, &m) in tokens.iter().zip(mask).skip(1) {
        if m {
            question.push(t);
        } else {
            dialog.push(QAPair {
                question: std::mem::take(&mut question),
                answer: Answer::from_token(t).unwrap_or(Answer::Invalid),
            });
        }
    }
    dialog
}

/// Teacher-forcing stream for a scripted game: `<sos>` followed by each
/// question and its answer. Question tokens are the scored positions.
pub fn game_stream(game: &GameRecord) -> (Vec<Token>, Vec<bool>) {
    let mut tokens = vec![Token::SOS];
    let mut mask = vec![false];
    for qa in &game.dialog {
        for &t in &qa.question {
            tokens.push(t);
            mask.push(true);
        }
        tokens.push(qa.answer.token());
        mask.push(false);
    }
    (tokens, mask)
}
