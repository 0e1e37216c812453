use crate::env::{GridImage, Token};
use crate::policy::Trajectory;

/// A stored trajectory together with the behavior probabilities `q_t` of its
/// actions. With probability updating on, `stored_log_probs` is overwritten
/// by every retention pass.
#[derive(Clone, Debug, PartialEq)]
pub struct MemoryEntry {
    pub grid: GridImage,
    pub target_index: usize,
    pub tokens: Vec<Token>,
    pub action_mask: Vec<bool>,
    pub stored_log_probs: Vec<f64>,
    pub reward: f64,
}

impl MemoryEntry {
    pub fn stored_probs(&self) -> Vec<f64> {
        self.stored_log_probs.iter().map(|l| l.exp()).collect()
    }
}

impl From<Trajectory> for MemoryEntry {
    fn from(t: Trajectory) -> Self {
        MemoryEntry {
            grid: t.grid,
            target_index: t.target_index,
            tokens: t.tokens,
            action_mask: t.action_mask,
            stored_log_probs: t.log_probs,
            reward: t.reward,
        }
    }
}

/// Insertion-ordered trajectory store for one epoch.
#[derive(Clone, Debug, Default)]
pub struct MemoryBuffer {
    entries: Vec<MemoryEntry>,
    epoch: usize,
    positive_only: bool,
}

impl MemoryBuffer {
    pub fn new(positive_only: bool) -> Self {
        MemoryBuffer {
            entries: Vec::new(),
            epoch: 0,
            positive_only,
        }
    }

    /// Stores the trajectory unless the positive-only rule rejects it.
    pub fn push(&mut self, traj: Trajectory) -> bool {
        if self.positive_only && traj.reward <= 0.0 {
            return false;
        }
        self.entries.push(traj.into());
        true
    }

    pub fn push_entry(&mut self, entry: MemoryEntry) {
        self.entries.push(entry);
    }

    pub fn clear(&mut self, epoch: usize) {
        self.entries.clear();
        self.epoch = epoch;
    }

    pub fn epoch(&self) -> usize {
        self.epoch
    }

    pub fn positive_only(&self) -> bool {
        self.positive_only
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[MemoryEntry] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [MemoryEntry] {
        &mut self.entries
    }
}
