use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::env::{GridImage, GRID_CELLS};
use crate::error::Result;
use crate::policy::{rollout, RolloutConfig, TokenPolicy};

/// Plays one game per grid and returns the mean reward. The target of grid
/// `i` is `(i + k) mod 9` where the offset `k` is drawn from `rng`, and the
/// same `rng` drives token sampling and guessing.
pub fn evaluate<P, R>(
    policy: &P,
    grids: &[GridImage],
    cfg: RolloutConfig,
    rng: &mut R,
) -> Result<f64>
where
    P: TokenPolicy,
    R: Rng + ?Sized,
{
    if grids.is_empty() {
        return Ok(0.0);
    }
    let offset = rng.gen_range(0..GRID_CELLS);
    let mut wins = 0.0;
    for (i, grid) in grids.iter().enumerate() {
        let traj = rollout(policy, grid, (i + offset) % GRID_CELLS, cfg, rng)?;
        wins += traj.reward;
    }
    Ok(wins / grids.len() as f64)
}

/// A fixed evaluation set. Every call replays the same random stream, so
/// two policies are compared on identical targets and guesser draws.
#[derive(Clone, Debug)]
pub struct Evaluator {
    grids: Vec<GridImage>,
    cfg: RolloutConfig,
    seed: u64,
}

impl Evaluator {
    pub fn new(grids: Vec<GridImage>, cfg: RolloutConfig, seed: u64) -> Self {
        Evaluator { grids, cfg, seed }
    }

    pub fn len(&self) -> usize {
        self.grids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grids.is_empty()
    }

    pub fn success<P: TokenPolicy>(&self, policy: &P) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        evaluate(policy, &self.grids, self.cfg, &mut rng)
    }
}
