use rand::Rng;
use serde::{Deserialize, Serialize};

use super::vocab::Token;

/// Number of cells in a grid (3×3, row-major).
pub const GRID_CELLS: usize = 9;

/// One-hot indicators per cell: 10 digits + 5 colors + 5 bgcolors + 2 styles.
pub const CELL_FEATURES: usize = 22;

/// Length of the grid context vector fed to the questioner.
pub const CONTEXT_DIM: usize = GRID_CELLS * CELL_FEATURES;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AttributeSlot {
    Digit,
    Color,
    Bgcolor,
    Style,
}

impl AttributeSlot {
    pub const ALL: [AttributeSlot; 4] = [
        AttributeSlot::Digit,
        AttributeSlot::Color,
        AttributeSlot::Bgcolor,
        AttributeSlot::Style,
    ];

    pub fn domain_size(self) -> u8 {
        match self {
            AttributeSlot::Digit => 10,
            AttributeSlot::Color | AttributeSlot::Bgcolor => 5,
            AttributeSlot::Style => 2,
        }
    }

    /// The token naming this slot in a question.
    pub fn token(self) -> Token {
        match self {
            AttributeSlot::Digit => Token::DIGIT,
            AttributeSlot::Color => Token::COLOR,
            AttributeSlot::Bgcolor => Token::BGCOLOR,
            AttributeSlot::Style => Token::STYLE,
        }
    }

    pub fn from_token(token: Token) -> Option<AttributeSlot> {
        AttributeSlot::ALL.into_iter().find(|s| s.token() == token)
    }

    /// Offset of this slot's first value inside the 22-wide cell encoding.
    fn feature_offset(self) -> u8 {
        match self {
            AttributeSlot::Digit => 0,
            AttributeSlot::Color => 10,
            AttributeSlot::Bgcolor => 15,
            AttributeSlot::Style => 20,
        }
    }

    pub fn value_token(self, value: u8) -> Token {
        debug_assert!(value < self.domain_size());
        Token::new((Token::FIRST_VALUE + self.feature_offset() + value) as usize)
            .expect("value token in vocabulary")
    }

    /// Decodes a value token, but only if it belongs to this slot's domain.
    pub fn value_of(self, token: Token) -> Option<u8> {
        let base = (Token::FIRST_VALUE + self.feature_offset()) as usize;
        let id = token.id();
        (id >= base && id < base + self.domain_size() as usize).then(|| (id - base) as u8)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
    Green,
    Purple,
    Brown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BgColor {
    Cyan,
    Yellow,
    White,
    Silver,
    Salmon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    Flat,
    Stroke,
}

impl Color {
    const ALL: [Color; 5] = [
        Color::Red,
        Color::Blue,
        Color::Green,
        Color::Purple,
        Color::Brown,
    ];
}

impl BgColor {
    const ALL: [BgColor; 5] = [
        BgColor::Cyan,
        BgColor::Yellow,
        BgColor::White,
        BgColor::Silver,
        BgColor::Salmon,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCell")]
pub struct Cell {
    pub digit: u8,
    pub color: Color,
    pub bgcolor: BgColor,
    pub style: Style,
}

#[derive(Deserialize)]
struct RawCell {
    digit: u8,
    color: Color,
    bgcolor: BgColor,
    style: Style,
}

impl TryFrom<RawCell> for Cell {
    type Error = String;

    fn try_from(raw: RawCell) -> Result<Self, Self::Error> {
        if raw.digit > 9 {
            return Err(format!("digit {} outside 0..=9", raw.digit));
        }
        Ok(Cell {
            digit: raw.digit,
            color: raw.color,
            bgcolor: raw.bgcolor,
            style: raw.style,
        })
    }
}

impl Cell {
    /// Value index of `slot` within its domain.
    pub fn value(&self, slot: AttributeSlot) -> u8 {
        match slot {
            AttributeSlot::Digit => self.digit,
            AttributeSlot::Color => self.color as u8,
            AttributeSlot::Bgcolor => self.bgcolor as u8,
            AttributeSlot::Style => self.style as u8,
        }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Cell {
        Cell {
            digit: rng.gen_range(0..10),
            color: Color::ALL[rng.gen_range(0..5)],
            bgcolor: BgColor::ALL[rng.gen_range(0..5)],
            style: if rng.gen_range(0..2) == 0 {
                Style::Flat
            } else {
                Style::Stroke
            },
        }
    }

    fn write_features(&self, out: &mut [f64]) {
        for slot in AttributeSlot::ALL {
            out[(slot.feature_offset() + self.value(slot)) as usize] = 1.0;
        }
    }
}

/// A 3×3 grid of attributed cells, row-major (`index = 3 * row + col`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Cell>", into = "Vec<Cell>")]
pub struct GridImage {
    cells: [Cell; GRID_CELLS],
}

impl TryFrom<Vec<Cell>> for GridImage {
    type Error = String;

    fn try_from(cells: Vec<Cell>) -> Result<Self, Self::Error> {
        let n = cells.len();
        let cells: [Cell; GRID_CELLS] = cells
            .try_into()
            .map_err(|_| format!("grid needs exactly {GRID_CELLS} cells, got {n}"))?;
        Ok(GridImage { cells })
    }
}

impl From<GridImage> for Vec<Cell> {
    fn from(g: GridImage) -> Vec<Cell> {
        g.cells.to_vec()
    }
}

impl GridImage {
    pub fn new(cells: [Cell; GRID_CELLS]) -> Self {
        GridImage { cells }
    }

    pub fn cells(&self) -> &[Cell; GRID_CELLS] {
        &self.cells
    }

    pub fn cell(&self, index: usize) -> &Cell {
        &self.cells[index]
    }

    /// True if two cells carry identical attributes and can never be told
    /// apart by any question.
    pub fn has_duplicate_cells(&self) -> bool {
        (0..GRID_CELLS).any(|i| (i + 1..GRID_CELLS).any(|j| self.cells[i] == self.cells[j]))
    }

    /// 198-dim one-hot context: 22 indicators per cell, cells in row-major order.
    pub fn encode(&self) -> Vec<f64> {
        let mut x = vec![0.0; CONTEXT_DIM];
        for (i, cell) in self.cells.iter().enumerate() {
            cell.write_features(&mut x[i * CELL_FEATURES..(i + 1) * CELL_FEATURES]);
        }
        x
    }
}

/// Samples every attribute of every cell independently and uniformly.
pub fn generate_grid<R: Rng + ?Sized>(rng: &mut R) -> GridImage {
    GridImage {
        cells: std::array::from_fn(|_| Cell::random(rng)),
    }
}
