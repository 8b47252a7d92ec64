use std::fmt;

use crate::error::{Error, Result};
use crate::words::symbol::Symbol;

/// Words longer than this are stored run-length encoded.
pub const RLE_THRESHOLD: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StorageKind {
    /// 2 bits per symbol.
    Packed,
    /// Runs of equal symbols, located by binary search.
    RunLength,
}

#[derive(Clone, PartialEq, Eq)]
enum Storage {
    Packed(Vec<u64>),
    RunLength { runs: Vec<(Symbol, u64)>, starts: Vec<u64> },
}

/// A finite word over `{0, 1, ?}`.
#[derive(Clone, PartialEq, Eq)]
pub struct PartialWord {
    len: u64,
    holes: u64,
    storage: Storage,
}

impl PartialWord {
    pub fn from_symbols(symbols: &[Symbol]) -> Self {
        let kind = if symbols.len() as u64 > RLE_THRESHOLD {
            StorageKind::RunLength
        } else {
            StorageKind::Packed
        };
        Self::with_storage(symbols, kind)
    }

    pub fn with_storage(symbols: &[Symbol], kind: StorageKind) -> Self {
        let holes = symbols.iter().filter(|s| s.is_hole()).count() as u64;
        let storage = match kind {
            StorageKind::Packed => {
                let mut data = vec![0u64; symbols.len().div_ceil(32)];
                for (i, s) in symbols.iter().enumerate() {
                    data[i / 32] |= (s.code() as u64) << (2 * (i % 32));
                }
                Storage::Packed(data)
            }
            StorageKind::RunLength => {
                let mut runs: Vec<(Symbol, u64)> = Vec::new();
                for &s in symbols {
                    match runs.last_mut() {
                        Some((last, n)) if *last == s => *n += 1,
                        _ => runs.push((s, 1)),
                    }
                }
                Self::run_storage(runs)
            }
        };
        Self {
            len: symbols.len() as u64,
            holes,
            storage,
        }
    }

    pub fn from_runs(runs: Vec<(Symbol, u64)>) -> Result<Self> {
        if runs.iter().any(|&(_, n)| n == 0) {
            return Err(Error::Format("run-length entry with zero length".into()));
        }
        let len = runs.iter().map(|&(_, n)| n).sum();
        let holes = runs.iter().filter(|(s, _)| s.is_hole()).map(|&(_, n)| n).sum();
        Ok(Self {
            len,
            holes,
            storage: Self::run_storage(runs),
        })
    }

    fn run_storage(runs: Vec<(Symbol, u64)>) -> Storage {
        let mut starts = Vec::with_capacity(runs.len());
        let mut acc = 0;
        for &(_, n) in &runs {
            starts.push(acc);
            acc += n;
        }
        Storage::RunLength { runs, starts }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let symbols = text
            .chars()
            .enumerate()
            .map(|(i, c)| {
                Symbol::from_char(c)
                    .ok_or_else(|| Error::Format(format!("symbol {c:?} at {i} is not one of 0, 1, ?")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_symbols(&symbols))
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn hole_count(&self) -> u64 {
        self.holes
    }

    pub fn storage_kind(&self) -> StorageKind {
        match self.storage {
            Storage::Packed(_) => StorageKind::Packed,
            Storage::RunLength { .. } => StorageKind::RunLength,
        }
    }

    #[inline]
    pub fn get(&self, i: u64) -> Symbol {
        assert!(i < self.len, "index {i} out of range for word of length {}", self.len);
        match &self.storage {
            Storage::Packed(data) => {
                let i = i as usize;
                Symbol::from_code((data[i / 32] >> (2 * (i % 32)) & 3) as u8)
            }
            Storage::RunLength { runs, starts } => {
                let idx = starts.partition_point(|&s| s <= i) - 1;
                runs[idx].0
            }
        }
    }

    /// Symbol at `i mod len` for any integer `i`.
    #[inline]
    pub fn get_cyclic(&self, i: i128) -> Symbol {
        self.get(i.rem_euclid(self.len as i128) as u64)
    }

    pub fn to_symbols(&self) -> Vec<Symbol> {
        match &self.storage {
            Storage::Packed(_) => (0..self.len).map(|i| self.get(i)).collect(),
            Storage::RunLength { runs, .. } => {
                let mut out = Vec::with_capacity(self.len as usize);
                for &(s, n) in runs {
                    out.extend(std::iter::repeat_n(s, n as usize));
                }
                out
            }
        }
    }

    pub fn runs(&self) -> Vec<(Symbol, u64)> {
        match &self.storage {
            Storage::RunLength { runs, .. } => runs.clone(),
            Storage::Packed(_) => {
                let mut runs: Vec<(Symbol, u64)> = Vec::new();
                for s in self.to_symbols() {
                    match runs.last_mut() {
                        Some((last, n)) if *last == s => *n += 1,
                        _ => runs.push((s, 1)),
                    }
                }
                runs
            }
        }
    }

    /// Positions of holes, increasing.
    pub fn hole_positions(&self) -> Vec<u64> {
        match &self.storage {
            Storage::RunLength { runs, starts } => runs
                .iter()
                .zip(starts)
                .filter(|((s, _), _)| s.is_hole())
                .flat_map(|(&(_, n), &st)| st..st + n)
                .collect(),
            Storage::Packed(_) => (0..self.len).filter(|&i| self.get(i).is_hole()).collect(),
        }
    }
}

impl fmt::Display for PartialWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.to_symbols().into_iter().map(Symbol::as_char).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for PartialWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 64 {
            write!(f, "PartialWord({self})")
        } else {
            write!(f, "PartialWord(len={}, holes={})", self.len, self.holes)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sym() -> impl Strategy<Value = Symbol> {
        prop_oneof![Just(Symbol::Zero), Just(Symbol::One), Just(Symbol::Hole)]
    }

    #[test]
    fn parse_and_count() {
        let w = PartialWord::parse("0?1??").unwrap();
        assert_eq!(w.len(), 5);
        assert_eq!(w.hole_count(), 3);
        assert_eq!(w.get(2), Symbol::One);
        assert_eq!(w.get_cyclic(-1), Symbol::Hole);
        assert_eq!(w.get_cyclic(-5), Symbol::Zero);
        assert_eq!(w.hole_positions(), vec![1, 3, 4]);
        assert_eq!(w.to_string(), "0?1??");
        assert!(PartialWord::parse("01x").is_err());
    }

    #[test]
    fn large_words_use_runs() {
        let mut syms = vec![Symbol::Zero; RLE_THRESHOLD as usize + 5];
        syms[7] = Symbol::Hole;
        let w = PartialWord::from_symbols(&syms);
        assert_eq!(w.storage_kind(), StorageKind::RunLength);
        assert_eq!(w.runs().len(), 3);
        assert_eq!(w.get(7), Symbol::Hole);
        assert_eq!(w.hole_positions(), vec![7]);
    }

    proptest! {
        #[test]
        fn storages_agree(symbols in prop::collection::vec(sym(), 1..300)) {
            let packed = PartialWord::with_storage(&symbols, StorageKind::Packed);
            let runs = PartialWord::with_storage(&symbols, StorageKind::RunLength);
            prop_assert_eq!(packed.to_symbols(), symbols.clone());
            prop_assert_eq!(runs.to_symbols(), symbols.clone());
            prop_assert_eq!(packed.hole_count(), runs.hole_count());
            prop_assert_eq!(packed.hole_count(), symbols.iter().filter(|s| s.is_hole()).count() as u64);
            for i in 0..symbols.len() as u64 {
                prop_assert_eq!(packed.get(i), runs.get(i));
            }
            prop_assert_eq!(PartialWord::from_runs(packed.runs()).unwrap().to_symbols(), symbols);
        }
    }
}
