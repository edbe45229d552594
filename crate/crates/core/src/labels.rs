use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
    C,
}

impl Letter {
    pub const ALL: [Letter; 3] = [Letter::A, Letter::B, Letter::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Letter {
        Letter::ALL[i % 3]
    }

    /// A -> B -> C -> A.
    pub fn next(self) -> Letter {
        Letter::from_index(self.index() + 1)
    }

    pub fn prev(self) -> Letter {
        Letter::from_index(self.index() + 2)
    }
}

/// One of the twelve curves `A_i, B_i, C_i`, `0 <= i <= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveLabel {
    pub letter: Letter,
    pub index: u8,
}

impl CurveLabel {
    pub const fn new(letter: Letter, index: u8) -> Self {
        CurveLabel { letter, index }
    }

    /// All twelve labels in coefficient order `A0..A3, B0..B3, C0..C3`.
    pub fn all() -> [CurveLabel; 12] {
        let mut out = [CurveLabel::new(Letter::A, 0); 12];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = CurveLabel::new(Letter::from_index(i / 4), (i % 4) as u8);
        }
        out
    }

    /// Position in [`CurveLabel::all`].
    pub fn position(self) -> usize {
        self.letter.index() * 4 + self.index as usize
    }

    pub fn is_boundary(self) -> bool {
        self.index == 0 || self.index == 3
    }

    pub fn is_internal(self) -> bool {
        !self.is_boundary()
    }
}

/// The six boundary curves in scan order.
pub const BOUNDARY: [CurveLabel; 6] = [
    CurveLabel::new(Letter::A, 0),
    CurveLabel::new(Letter::B, 0),
    CurveLabel::new(Letter::C, 0),
    CurveLabel::new(Letter::A, 3),
    CurveLabel::new(Letter::B, 3),
    CurveLabel::new(Letter::C, 3),
];

/// Boundary curves carrying the stored restriction blocks.
pub const MARKED: [CurveLabel; 3] = [BOUNDARY[0], BOUNDARY[1], BOUNDARY[2]];

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Letter::A => 'A',
            Letter::B => 'B',
            Letter::C => 'C',
        };
        write!(f, "{c}")
    }
}

impl fmt::Display for CurveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter, self.index)
    }
}

impl FromStr for Letter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "A" | "a" => Ok(Letter::A),
            "B" | "b" => Ok(Letter::B),
            "C" | "c" => Ok(Letter::C),
            _ => Err(Error::Parse(format!("unknown curve letter {s:?}"))),
        }
    }
}

impl FromStr for CurveLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let mut chars = s.chars();
        let (Some(l), Some(i), None) = (chars.next(), chars.next(), chars.next()) else {
            return Err(Error::Parse(format!("bad curve label {s:?}")));
        };
        let letter: Letter = l.to_string().parse()?;
        let index = i
            .to_digit(10)
            .filter(|&d| d <= 3)
            .ok_or_else(|| Error::Parse(format!("bad curve index in {s:?}")))?;
        Ok(CurveLabel::new(letter, index as u8))
    }
}
