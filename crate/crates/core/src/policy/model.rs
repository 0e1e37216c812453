use rand::Rng;

use crate::env::{GridImage, Token, CONTEXT_DIM, VOCAB_SIZE};
use crate::error::{Error, Result};
use crate::nn::layers::lstm_step_unchecked;
use crate::nn::{
    log_softmax, lstm_step_backward, LstmCache, Matrix, ParamId, ParamStore, Parameterized,
    INIT_SCALE,
};

pub const DEFAULT_HIDDEN: usize = 64;
pub const DEFAULT_EMBED: usize = 16;

/// Fixed parameter names, in checkpoint order.
pub const PARAM_NAMES: [&str; 7] = [
    "embed", "ctx_W", "ctx_b", "lstm_W", "lstm_b", "out_W", "out_b",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolicyDims {
    pub hidden: usize,
    pub embed: usize,
}

impl Default for PolicyDims {
    fn default() -> Self {
        PolicyDims {
            hidden: DEFAULT_HIDDEN,
            embed: DEFAULT_EMBED,
        }
    }
}

impl PolicyDims {
    fn shapes(&self) -> [(usize, usize); 7] {
        let (h, e) = (self.hidden, self.embed);
        [
            (VOCAB_SIZE, e),
            (2 * h, CONTEXT_DIM),
            (1, 2 * h),
            (4 * h, e + h),
            (1, 4 * h),
            (VOCAB_SIZE, h),
            (1, VOCAB_SIZE),
        ]
    }
}

#[derive(Clone, Copy, Debug)]
struct Ids {
    embed: ParamId,
    ctx_w: ParamId,
    ctx_b: ParamId,
    lstm_w: ParamId,
    lstm_b: ParamId,
    out_w: ParamId,
    out_b: ParamId,
}

/// Recurrent state `(h, c)` of the questioner.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrentState {
    pub h: Vec<f64>,
    pub c: Vec<f64>,
}

/// Anything that can drive a game token by token: given the grid it produces
/// an initial state, and given a state and the previous token it produces
/// log-probabilities over the vocabulary plus the next state.
pub trait TokenPolicy {
    type State: Clone;

    fn start(&self, grid: &GridImage) -> Self::State;

    fn next(&self, state: &Self::State, input: Token) -> (Vec<f64>, Self::State);
}

/// LSTM questioner: token embedding, grid encoder producing the initial
/// `(h, c)`, one LSTM cell and a softmax projection over the vocabulary.
#[derive(Clone, Debug)]
pub struct QuestionerPolicy {
    dims: PolicyDims,
    params: ParamStore,
    ids: Ids,
}

/// Cached activations of one teacher-forced step.
#[derive(Clone, Debug)]
pub(crate) struct StepTape {
    input: Token,
    lstm: LstmCache,
    h: Vec<f64>,
    log_probs: Vec<f64>,
    target: Option<Token>,
}

/// Activations of a teacher-forced pass, kept for [`QuestionerPolicy::backward`].
#[derive(Clone, Debug)]
pub struct Tape {
    context: Vec<f64>,
    steps: Vec<StepTape>,
}

/// Result of [`QuestionerPolicy::score`].
#[derive(Clone, Debug)]
pub struct Scored {
    /// Log-probability of each masked token under the scoring parameters.
    pub log_probs: Vec<f64>,
    pub tape: Tape,
}

impl Scored {
    pub fn probs(&self) -> Vec<f64> {
        self.log_probs.iter().map(|l| l.exp()).collect()
    }
}

impl QuestionerPolicy {
    /// Entries drawn from uniform(-0.08, 0.08).
    pub fn new<R: Rng + ?Sized>(dims: PolicyDims, rng: &mut R) -> Self {
        Self::build(dims, |r, c| Matrix::uniform(r, c, INIT_SCALE, rng))
    }

    /// All-zero parameters: uniform output distribution, zero context state.
    pub fn zeros(dims: PolicyDims) -> Self {
        Self::build(dims, Matrix::zeros)
    }

    fn build(dims: PolicyDims, mut init: impl FnMut(usize, usize) -> Matrix) -> Self {
        assert!(dims.hidden > 0 && dims.embed > 0);
        let mut params = ParamStore::new();
        for (name, (r, c)) in PARAM_NAMES.iter().zip(dims.shapes()) {
            params.add(name, init(r, c));
        }
        Self::from_params(params).expect("freshly built layout is valid")
    }

    /// Wraps a loaded parameter store, inferring hidden and embedding sizes.
    pub fn from_params(params: ParamStore) -> Result<Self> {
        let lookup = |name: &str| {
            params
                .id(name)
                .ok_or_else(|| Error::ConfigInvalid(format!("checkpoint lacks parameter `{name}`")))
        };
        let ids = Ids {
            embed: lookup("embed")?,
            ctx_w: lookup("ctx_W")?,
            ctx_b: lookup("ctx_b")?,
            lstm_w: lookup("lstm_W")?,
            lstm_b: lookup("lstm_b")?,
            out_w: lookup("out_W")?,
            out_b: lookup("out_b")?,
        };
        if params.len() != PARAM_NAMES.len() {
            return Err(Error::ConfigInvalid(
                "checkpoint has unexpected parameters".into(),
            ));
        }
        let dims = PolicyDims {
            hidden: params.value(ids.out_w).cols(),
            embed: params.value(ids.embed).cols(),
        };
        for (name, want) in PARAM_NAMES.iter().zip(dims.shapes()) {
            let got = params.value(params.id(name).unwrap()).shape();
            if got != want {
                return Err(Error::shape(
                    "QuestionerPolicy",
                    format!("{name} {want:?}"),
                    format!("{got:?}"),
                ));
            }
        }
        Ok(QuestionerPolicy { dims, params, ids })
    }

    pub fn dims(&self) -> PolicyDims {
        self.dims
    }

    pub fn into_params(self) -> ParamStore {
        self.params
    }

    /// Grid context through the linear encoder; the first `H` outputs are `h₀`,
    /// the remaining `H` are `c₀`.
    pub fn encode_context(&self, grid: &GridImage) -> RecurrentState {
        self.encode_vector(&grid.encode())
    }

    fn encode_vector(&self, x: &[f64]) -> RecurrentState {
        let hidden = self.dims.hidden;
        let mut out = vec![0.0; 2 * hidden];
        let w = self.params.value(self.ids.ctx_w);
        w.affine_into(x, self.params.value(self.ids.ctx_b).as_slice(), &mut out);
        let c = out.split_off(hidden);
        RecurrentState { h: out, c }
    }

    fn forward_step(
        &self,
        state: &RecurrentState,
        input: Token,
    ) -> (Vec<f64>, RecurrentState, LstmCache) {
        let p = &self.params;
        let x = p.value(self.ids.embed).row(input.id());
        let (h, c, cache) = lstm_step_unchecked(
            x,
            &state.h,
            &state.c,
            p.value(self.ids.lstm_w),
            p.value(self.ids.lstm_b).as_slice(),
        );
        let mut logits = vec![0.0; VOCAB_SIZE];
        p.value(self.ids.out_w)
            .affine_into(&h, p.value(self.ids.out_b).as_slice(), &mut logits);
        (log_softmax(&logits), RecurrentState { h, c }, cache)
    }

    /// One step: embedding, LSTM cell, projection and softmax. Returns the
    /// distribution over the 34 tokens and the next state.
    pub fn policy_step(&self, state: &RecurrentState, input: Token) -> (Vec<f64>, RecurrentState) {
        let (log_probs, next, _) = self.forward_step(state, input);
        (log_probs.iter().map(|l| l.exp()).collect(), next)
    }

    /// Teacher-forced pass over a token stream. Returns the log-probability of
    /// each masked token and the activations needed by [`Self::backward`].
    pub fn score(&self, grid: &GridImage, tokens: &[Token], mask: &[bool]) -> Scored {
        assert_eq!(tokens.len(), mask.len(), "token/mask length mismatch");
        let context = grid.encode();
        let mut state = self.encode_vector(&context);
        let last = mask.iter().rposition(|m| *m).unwrap_or(0);
        let mut steps = Vec::with_capacity(last);
        let mut log_probs = Vec::new();
        for t in 1..=last {
            let input = tokens[t - 1];
            let (lp, next, lstm) = self.forward_step(&state, input);
            let target = mask[t].then_some(tokens[t]);
            if let Some(tok) = target {
                log_probs.push(lp[tok.id()]);
            }
            steps.push(StepTape {
                input,
                lstm,
                h: next.h.clone(),
                log_probs: lp,
                target,
            });
            state = next;
        }
        Scored {
            log_probs,
            tape: Tape { context, steps },
        }
    }

    /// Accumulates `∇θ [−coef · Σ log p(masked tokens)]` into the gradients.
    pub fn backward(&mut self, tape: &Tape, coef: f64) {
        let hidden = self.dims.hidden;
        let ids = self.ids;
        let mut dh_next = vec![0.0; hidden];
        let mut dc_next = vec![0.0; hidden];
        let mut dlogits = vec![0.0; VOCAB_SIZE];
        for step in tape.steps.iter().rev() {
            let mut dh = std::mem::take(&mut dh_next);
            if let Some(target) = step.target {
                for (k, d) in dlogits.iter_mut().enumerate() {
                    *d = coef * step.log_probs[k].exp();
                }
                dlogits[target.id()] -= coef;
                let (out_w, g_out_w) = self.params.value_and_grad_mut(ids.out_w);
                g_out_w.add_outer(&dlogits, &step.h);
                out_w.add_transpose_mul(&dlogits, &mut dh);
                for (g, d) in self
                    .params
                    .grad_mut(ids.out_b)
                    .as_mut_slice()
                    .iter_mut()
                    .zip(&dlogits)
                {
                    *g += d;
                }
            }
            let grads = {
                let (lstm_w, g_lstm_w) = self.params.value_and_grad_mut(ids.lstm_w);
                let mut db = vec![0.0; 4 * hidden];
                let grads =
                    lstm_step_backward(&step.lstm, lstm_w, &dh, &dc_next, g_lstm_w, &mut db);
                for (g, d) in self
                    .params
                    .grad_mut(ids.lstm_b)
                    .as_mut_slice()
                    .iter_mut()
                    .zip(&db)
                {
                    *g += d;
                }
                grads
            };
            for (g, d) in self
                .params
                .grad_mut(ids.embed)
                .row_mut(step.input.id())
                .iter_mut()
                .zip(&grads.dx)
            {
                *g += d;
            }
            dh_next = grads.dh_prev;
            dc_next = grads.dc_prev;
        }
        let mut dctx = dh_next;
        dctx.extend_from_slice(&dc_next);
        self.params
            .grad_mut(ids.ctx_w)
            .add_outer(&dctx, &tape.context);
        for (g, d) in self
            .params
            .grad_mut(ids.ctx_b)
            .as_mut_slice()
            .iter_mut()
            .zip(&dctx)
        {
            *g += d;
        }
    }
}

impl Parameterized for QuestionerPolicy {
    fn params(&self) -> &ParamStore {
        &self.params
    }

    fn params_mut(&mut self) -> &mut ParamStore {
        &mut self.params
    }
}

impl TokenPolicy for QuestionerPolicy {
    type State = RecurrentState;

    fn start(&self, grid: &GridImage) -> RecurrentState {
        self.encode_context(grid)
    }

    fn next(&self, state: &RecurrentState, input: Token) -> (Vec<f64>, RecurrentState) {
        let (lp, next, _) = self.forward_step(state, input);
        (lp, next)
    }
}
