//! The symbolic GuessNumber game: attributed 3×3 grids, a templated question
//! grammar, the rule-based answerer and guesser, and scripted-dialog datasets.

pub mod dataset;
pub mod game;
pub mod grid;
pub mod question;
pub mod vocab;

pub use dataset::{
    build_splits, generate_dataset, read_records, read_split, write_records, Split, SplitSizes,
};
pub use game::{
    filter_candidates, generate_game, guess, informative_queries, reward, scripted_question,
    surviving_candidates, CandidateSet, GameRecord, ScriptedStep, PLAY_MAX_ROUNDS,
    SCRIPTED_MAX_ROUNDS,
};
pub use grid::{
    generate_grid, AttributeSlot, BgColor, Cell, Color, GridImage, Style, CONTEXT_DIM, GRID_CELLS,
};
pub use question::{answer, parse_question, Answer, QAPair, Query};
pub use vocab::{Token, VOCAB_SIZE};
