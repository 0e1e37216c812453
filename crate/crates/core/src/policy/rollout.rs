use rand::Rng;

use super::model::{QuestionerPolicy, TokenPolicy};
use super::trajectory::{game_stream, Trajectory};
use crate::env::{answer, guess, reward, GameRecord, GridImage, Token, PLAY_MAX_ROUNDS};
use crate::error::Result;
use crate::nn::sample_categorical;

pub const DEFAULT_MAX_QLEN: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RolloutConfig {
    pub max_rounds: usize,
    /// Maximum question length including the closing `?`.
    pub max_qlen: usize,
}

impl Default for RolloutConfig {
    fn default() -> Self {
        RolloutConfig {
            max_rounds: PLAY_MAX_ROUNDS,
            max_qlen: DEFAULT_MAX_QLEN,
        }
    }
}

impl RolloutConfig {
    /// Upper bound on the stream length, `<sos>` included.
    pub fn max_tokens(&self) -> usize {
        self.max_rounds * (self.max_qlen + 1) + 1
    }
}

/// Plays one game. Question tokens are sampled until `?`; at `max_qlen` the
/// `?` is forced but still recorded with its model probability. Each question
/// is answered by the rule-based answerer, and after `max_rounds` questions
/// the guesser picks a cell.
pub fn rollout<P, R>(
    policy: &P,
    grid: &GridImage,
    target_index: usize,
    cfg: RolloutConfig,
    rng: &mut R,
) -> Result<Trajectory>
where
    P: TokenPolicy,
    R: Rng + ?Sized,
{
    assert!(cfg.max_qlen >= 1 && cfg.max_rounds >= 1);
    let mut tokens = Vec::with_capacity(cfg.max_tokens());
    let mut mask = Vec::with_capacity(cfg.max_tokens());
    let mut log_probs = Vec::new();
    tokens.push(Token::SOS);
    mask.push(false);

    let mut state = policy.start(grid);
    let mut input = Token::SOS;
    let mut probs = vec![0.0; crate::env::VOCAB_SIZE];
    for round in 0..cfg.max_rounds {
        let q_start = tokens.len();
        for k in 0..cfg.max_qlen {
            let (lp, next) = policy.next(&state, input);
            state = next;
            let tok = if k + 1 == cfg.max_qlen {
                Token::QMARK
            } else {
                for (p, l) in probs.iter_mut().zip(&lp) {
                    *p = l.exp();
                }
                Token::new(sample_categorical(&probs, rng)?).expect("index within vocabulary")
            };
            tokens.push(tok);
            mask.push(true);
            log_probs.push(lp[tok.id()]);
            input = tok;
            if tok == Token::QMARK {
                break;
            }
        }
        let reply = answer(grid, target_index, &tokens[q_start..]).token();
        if round + 1 < cfg.max_rounds {
            // consume `?`, then the answer becomes the next input
            let (_, next) = policy.next(&state, input);
            state = next;
            input = reply;
        }
        tokens.push(reply);
        mask.push(false);
    }

    let mut traj = Trajectory {
        grid: grid.clone(),
        target_index,
        tokens,
        action_mask: mask,
        log_probs,
        guess_index: 0,
        reward: 0.0,
    };
    traj.guess_index = guess(grid, &traj.dialog(), rng);
    traj.reward = f64::from(reward(traj.guess_index, target_index));
    Ok(traj)
}

impl QuestionerPolicy {
    /// Log-probabilities of a trajectory's actions under the current parameters.
    pub fn score_trajectory(&self, traj: &Trajectory) -> super::model::Scored {
        self.score(&traj.grid, &traj.tokens, &traj.action_mask)
    }

    /// Negative log-likelihood of a scripted game's question tokens, with
    /// answers fed as inputs. Gradients are accumulated into the store.
    pub fn mle_loss(&mut self, game: &GameRecord) -> f64 {
        let (tokens, mask) = game_stream(game);
        let scored = self.score(&game.grid, &tokens, &mask);
        self.backward(&scored.tape, 1.0);
        -scored.log_probs.iter().sum::<f64>()
    }

    /// The same loss without touching gradients.
    pub fn nll(&self, game: &GameRecord) -> (f64, usize) {
        let (tokens, mask) = game_stream(game);
        let scored = self.score(&game.grid, &tokens, &mask);
        (
            -scored.log_probs.iter().sum::<f64>(),
            scored.log_probs.len(),
        )
    }
}
