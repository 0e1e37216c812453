use serde::{Deserialize, Serialize};

use super::grid::{AttributeSlot, GridImage};
use super::vocab::Token;

/// Number of tokens in a well-formed question `[is, it, <slot>, <value>, ?]`.
pub const TEMPLATE_LEN: usize = 5;

/// A parsed question: "does the target's `slot` equal `value`?".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Query {
    pub slot: AttributeSlot,
    pub value: u8,
}

impl Query {
    pub fn new(slot: AttributeSlot, value: u8) -> Self {
        assert!(value < slot.domain_size(), "value outside {slot:?} domain");
        Query { slot, value }
    }

    pub fn tokens(&self) -> Vec<Token> {
        vec![
            Token::IS,
            Token::IT,
            self.slot.token(),
            self.slot.value_token(self.value),
            Token::QMARK,
        ]
    }

    /// Every well-formed (slot, value) pair: 22 in total.
    pub fn all() -> impl Iterator<Item = Query> {
        AttributeSlot::ALL
            .into_iter()
            .flat_map(|slot| (0..slot.domain_size()).map(move |value| Query { slot, value }))
    }

    pub fn matches(&self, grid: &GridImage, cell: usize) -> bool {
        grid.cell(cell).value(self.slot) == self.value
    }
}

/// Returns the query iff `tokens` is exactly `[is, it, <slot>, <value>, ?]`
/// with `<value>` drawn from `<slot>`'s domain. Anything else is malformed.
pub fn parse_question(tokens: &[Token]) -> Option<Query> {
    match tokens {
        [Token::IS, Token::IT, slot, value, Token::QMARK] => {
            let slot = AttributeSlot::from_token(*slot)?;
            let value = slot.value_of(*value)?;
            Some(Query { slot, value })
        }
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Token", into = "Token")]
pub enum Answer {
    Yes,
    No,
    Invalid,
}

impl Answer {
    pub fn token(self) -> Token {
        match self {
            Answer::Yes => Token::YES,
            Answer::No => Token::NO,
            Answer::Invalid => Token::INVALID,
        }
    }

    pub fn from_token(token: Token) -> Option<Answer> {
        match token {
            Token::YES => Some(Answer::Yes),
            Token::NO => Some(Answer::No),
            Token::INVALID => Some(Answer::Invalid),
            _ => None,
        }
    }
}

impl TryFrom<Token> for Answer {
    type Error = String;

    fn try_from(t: Token) -> Result<Self, Self::Error> {
        Answer::from_token(t).ok_or_else(|| format!("token {t} is not an answer"))
    }
}

impl From<Answer> for Token {
    fn from(a: Answer) -> Token {
        a.token()
    }
}

/// Rule-based answerer: `<yes>` iff the target cell carries the questioned
/// attribute value, `<no>` otherwise, `<invalid>` for malformed questions.
pub fn answer(grid: &GridImage, target_index: usize, question: &[Token]) -> Answer {
    match parse_question(question) {
        None => Answer::Invalid,
        Some(q) if q.matches(grid, target_index) => Answer::Yes,
        Some(_) => Answer::No,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QAPair {
    #[serde(rename = "q")]
    pub question: Vec<Token>,
    #[serde(rename = "a")]
    pub answer: Answer,
}
