//! Fixed 34-token vocabulary shared by the game, the questioner and the
//! dataset files. Ids are part of the on-disk format and must not change.

use std::fmt;

use serde::{Deserialize, Serialize};

pub const VOCAB_SIZE: usize = 34;

const WORDS: [&str; VOCAB_SIZE] = [
    "<pad>",
    "<sos>",
    "?",
    "<yes>",
    "<no>",
    "<invalid>",
    "is",
    "it",
    "digit",
    "color",
    "bgcolor",
    "style",
    "zero",
    "one",
    "two",
    "three",
    "four",
    "five",
    "six",
    "seven",
    "eight",
    "nine",
    "red",
    "blue",
    "green",
    "purple",
    "brown",
    "cyan",
    "yellow",
    "white",
    "silver",
    "salmon",
    "flat",
    "stroke",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Token(u8);

impl Token {
    pub const PAD: Token = Token(0);
    pub const SOS: Token = Token(1);
    pub const QMARK: Token = Token(2);
    pub const YES: Token = Token(3);
    pub const NO: Token = Token(4);
    pub const INVALID: Token = Token(5);
    pub const IS: Token = Token(6);
    pub const IT: Token = Token(7);
    pub const DIGIT: Token = Token(8);
    pub const COLOR: Token = Token(9);
    pub const BGCOLOR: Token = Token(10);
    pub const STYLE: Token = Token(11);

    /// First attribute-value token (`zero`); value tokens run contiguously
    /// through `stroke` in one-hot indicator order.
    pub const FIRST_VALUE: u8 = 12;

    pub fn new(id: usize) -> Option<Token> {
        (id < VOCAB_SIZE).then_some(Token(id as u8))
    }

    pub fn id(self) -> usize {
        self.0 as usize
    }

    pub fn word(self) -> &'static str {
        WORDS[self.id()]
    }

    pub fn from_word(word: &str) -> Option<Token> {
        WORDS
            .iter()
            .position(|w| *w == word)
            .map(|i| Token(i as u8))
    }

    pub fn all() -> impl Iterator<Item = Token> {
        (0..VOCAB_SIZE as u8).map(Token)
    }
}

impl TryFrom<u8> for Token {
    type Error = String;

    fn try_from(id: u8) -> Result<Self, Self::Error> {
        Token::new(id as usize).ok_or_else(|| format!("token id {id} outside vocabulary"))
    }
}

impl From<Token> for u8 {
    fn from(t: Token) -> u8 {
        t.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.word())
    }
}

/// Renders a token sequence as space-separated words.
pub fn render(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(|t| t.word())
        .collect::<Vec<_>>()
        .join(" ")
}
