//! Block frequencies and window codes over the periodic word `X_T`.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::words::pair::ViablePair;
use crate::words::partial::PartialWord;
use crate::words::symbol::Symbol;

/// Largest supported window radius; windows are packed into `u32` codes.
pub const MAX_RADIUS: u32 = 15;

/// Code of a window that contains a hole.
pub const UNRESOLVED: u32 = u32::MAX;

/// Frequency of a block as the interval `[certain, possible]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockFrequency {
    pub certain: Ratio<u64>,
    pub possible: Ratio<u64>,
}

/// Frequency of `block` among the `n_T` cyclic positions of level `t`.
///
/// A position counts as certain when the block is read there with every
/// symbol resolved, and as possible when every resolved symbol agrees.
pub fn block_frequency(pair: &ViablePair, t: usize, block: &[u8]) -> Result<BlockFrequency> {
    let lvl = pair.level(t);
    if block.is_empty() || block.len() as u64 > lvl.n {
        return Err(Error::InvalidInput(format!(
            "block length {} must be in [1, {}]",
            block.len(),
            lvl.n
        )));
    }
    if block.iter().any(|&b| b > 1) {
        return Err(Error::InvalidInput("block must be a 0/1 word".into()));
    }
    let syms = lvl.word.to_symbols();
    let n = syms.len();
    let (mut certain, mut possible) = (0u64, 0u64);
    for start in 0..n {
        let mut exact = true;
        let mut compatible = true;
        for (j, &b) in block.iter().enumerate() {
            match syms[(start + j) % n].bit() {
                Some(x) if x != b => {
                    compatible = false;
                    break;
                }
                Some(_) => {}
                None => exact = false,
            }
        }
        if compatible {
            possible += 1;
            if exact {
                certain += 1;
            }
        }
    }
    Ok(BlockFrequency {
        certain: Ratio::new(certain, n as u64),
        possible: Ratio::new(possible, n as u64),
    })
}

/// For each `m ∈ [0, n)`, the code of the cyclic window `x(m−C) … x(m+C)`
/// with `x(m−C)` as the most significant bit, or [`UNRESOLVED`].
pub fn window_codes(word: &PartialWord, radius: u32) -> Vec<u32> {
    assert!(radius <= MAX_RADIUS, "window radius {radius} above {MAX_RADIUS}");
    let n = word.len() as i128;
    let width = 2 * radius as i128 + 1;
    let mask: u32 = if width >= 32 { u32::MAX } else { (1u32 << width) - 1 };
    let syms = word.to_symbols();
    let at = |i: i128| syms[i.rem_euclid(n) as usize];

    let mut out = Vec::with_capacity(n as usize);
    let mut code = 0u32;
    // index of the most recent hole pushed into the rolling window
    let mut last_hole = i128::MIN;
    for j in -(radius as i128)..n + radius as i128 {
        let s = at(j);
        code = ((code << 1) | s.bit().unwrap_or(0) as u32) & mask;
        if s.is_hole() {
            last_hole = j;
        }
        let centre = j - radius as i128;
        if centre >= 0 {
            out.push(if last_hole > j - width { UNRESOLVED } else { code });
        }
    }
    out
}

/// Counts of each resolved window of radius `C` over the cyclic word,
/// plus the number of windows containing a hole.
pub fn window_histogram(word: &PartialWord, radius: u32) -> (Vec<u64>, u64) {
    let mut counts = vec![0u64; 1usize << (2 * radius + 1)];
    let mut unresolved = 0;
    for code in window_codes(word, radius) {
        if code == UNRESOLVED {
            unresolved += 1;
        } else {
            counts[code as usize] += 1;
        }
    }
    (counts, unresolved)
}

/// Renders a window code of radius `C` as its 0/1 string.
pub fn window_string(code: u32, radius: u32) -> String {
    let width = 2 * radius + 1;
    (0..width)
        .rev()
        .map(|b| Symbol::from_bit(((code >> b) & 1) as u8).as_char())
        .collect()
}
