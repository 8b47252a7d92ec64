use std::fmt;

use serde::{Deserialize, Serialize};

/// A letter of a partial word: 0, 1, or the hole `?`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symbol {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "?")]
    Hole,
}

impl Symbol {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '0' => Some(Symbol::Zero),
            '1' => Some(Symbol::One),
            '?' => Some(Symbol::Hole),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::Hole => '?',
        }
    }

    pub fn from_bit(b: u8) -> Self {
        if b == 0 {
            Symbol::Zero
        } else {
            Symbol::One
        }
    }

    /// 0 or 1 for resolved symbols.
    pub fn bit(self) -> Option<u8> {
        match self {
            Symbol::Zero => Some(0),
            Symbol::One => Some(1),
            Symbol::Hole => None,
        }
    }

    pub fn is_hole(self) -> bool {
        self == Symbol::Hole
    }

    #[inline]
    pub(crate) fn code(self) -> u8 {
        self as u8
    }

    #[inline]
    pub(crate) fn from_code(c: u8) -> Self {
        match c {
            0 => Symbol::Zero,
            1 => Symbol::One,
            _ => Symbol::Hole,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}
