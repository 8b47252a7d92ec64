use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::ntcore::counting::rho_max;
use crate::words::meta::ConstructionMeta;
use crate::words::partial::PartialWord;
use crate::words::symbol::Symbol;

/// One level `(n_t, x_t)` of a tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub n: u64,
    pub word: PartialWord,
}

/// A materialised prefix `(n_t, x_t)_{t ≤ T}` of a viable pair.
///
/// The tower is immutable once built; every query is a pure read.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViablePair {
    levels: Vec<Level>,
    meta: Option<ConstructionMeta>,
    checkpoints: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// A resolved symbol of `x_t` was changed in the copy at `x_{t+1}`.
    Refinement,
    /// A boundary position is still a hole at the top level.
    Unresolved,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub level: usize,
    pub position: u64,
    pub kind: ViolationKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Viability {
    pub viable: bool,
    pub violation: Option<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuestionStat {
    pub level: usize,
    pub n: u64,
    pub holes: u64,
    pub hole_ratio: Ratio<u64>,
    /// `?_t·ρ_k(n_t)/n_t` when an exponent was supplied.
    pub rho_weighted: Option<Ratio<u128>>,
}

impl ViablePair {
    /// Checks the tower shape: word lengths match, `n_t | n_{t+1}`, and the
    /// moduli strictly increase. Refinement is checked by [`Self::viability_check`].
    pub fn new(levels: Vec<Level>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidInput("a pair needs at least one level".into()));
        }
        for (t, lvl) in levels.iter().enumerate() {
            if lvl.n == 0 || lvl.word.len() != lvl.n {
                return Err(Error::InvalidInput(format!(
                    "level {t}: word length {} does not match n = {}",
                    lvl.word.len(),
                    lvl.n
                )));
            }
        }
        for (t, w) in levels.windows(2).enumerate() {
            if w[1].n <= w[0].n || w[1].n % w[0].n != 0 {
                return Err(Error::InvalidInput(format!(
                    "level {}: n = {} is not a proper multiple of n = {}",
                    t + 1,
                    w[1].n,
                    w[0].n
                )));
            }
        }
        Ok(Self {
            levels,
            meta: None,
            checkpoints: Vec::new(),
        })
    }

    /// Convenience constructor from literal words; `n_t` is the word length.
    pub fn from_words(words: &[&str]) -> Result<Self> {
        let levels = words
            .iter()
            .map(|w| {
                let word = PartialWord::parse(w)?;
                Ok(Level { n: word.len(), word })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(levels)
    }

    pub fn with_meta(mut self, meta: ConstructionMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn with_checkpoints(mut self, checkpoints: Vec<u64>) -> Self {
        self.checkpoints = checkpoints;
        self
    }

    pub fn meta(&self) -> Option<&ConstructionMeta> {
        self.meta.as_ref()
    }

    pub fn checkpoints(&self) -> &[u64] {
        &self.checkpoints
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn level(&self, t: usize) -> &Level {
        &self.levels[t]
    }

    /// Index of the top materialised level.
    pub fn top_index(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn top(&self) -> &Level {
        self.levels.last().expect("non-empty by construction")
    }

    pub fn moduli(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.n).collect()
    }

    /// Verifies refinement between consecutive levels and boundary
    /// resolution: for `i < n_{T-1}` both `x_T(i)` and `x_T(n_T - i mod n_T)`
    /// must be resolved at the top level T.
    pub fn viability_check(&self) -> Viability {
        for t in 0..self.top_index() {
            let lo = &self.levels[t];
            let hi = &self.levels[t + 1];
            let lo_syms = lo.word.to_symbols();
            let hi_syms = hi.word.to_symbols();
            for (j, &s) in hi_syms.iter().enumerate() {
                let base = lo_syms[j % lo.n as usize];
                if !base.is_hole() && s != base {
                    return Viability {
                        viable: false,
                        violation: Some(Violation {
                            level: t + 1,
                            position: j as u64,
                            kind: ViolationKind::Refinement,
                        }),
                    };
                }
            }
        }
        if self.levels.len() >= 2 {
            let top = self.top();
            let horizon = self.levels[self.top_index() - 1].n;
            for i in 0..horizon {
                let mirror = (top.n - i % top.n) % top.n;
                for pos in [i, mirror] {
                    if top.word.get(pos).is_hole() {
                        return Viability {
                            viable: false,
                            violation: Some(Violation {
                                level: self.top_index(),
                                position: pos,
                                kind: ViolationKind::Unresolved,
                            }),
                        };
                    }
                }
            }
        }
        Viability { viable: true, violation: None }
    }

    /// First non-hole symbol at position `i` across levels, with the level
    /// that resolves it; `(Hole, T)` if no materialised level does.
    pub fn symbol_at(&self, i: i128) -> (Symbol, usize) {
        for (t, lvl) in self.levels.iter().enumerate() {
            let s = lvl.word.get_cyclic(i);
            if !s.is_hole() {
                return (s, t);
            }
        }
        (Symbol::Hole, self.top_index())
    }

    /// Symbol at `i` read from the top level only. For viable pairs this
    /// agrees with [`Self::symbol_at`].
    #[inline]
    pub fn resolved_symbol(&self, i: i128) -> Symbol {
        self.top().word.get_cyclic(i)
    }

    pub fn question_stats(&self, k: Option<u64>) -> Vec<QuestionStat> {
        self.levels
            .iter()
            .enumerate()
            .map(|(t, lvl)| {
                let holes = lvl.word.hole_count();
                QuestionStat {
                    level: t,
                    n: lvl.n,
                    holes,
                    hole_ratio: Ratio::new(holes, lvl.n),
                    rho_weighted: k.map(|k| {
                        Ratio::new(holes as u128 * rho_max(k, lvl.n) as u128, lvl.n as u128)
                    }),
                }
            })
            .collect()
    }

    /// Copy of the pair whose top level has every hole replaced by `fill(position)`.
    /// Refinement is preserved since only holes change.
    pub fn with_top_filled(&self, mut fill: impl FnMut(u64) -> Symbol) -> Self {
        let mut out = self.clone();
        let top = out.levels.last_mut().expect("non-empty");
        let mut syms = top.word.to_symbols();
        for (i, s) in syms.iter_mut().enumerate() {
            if s.is_hole() {
                let f = fill(i as u64);
                assert!(!f.is_hole(), "fill must produce 0 or 1");
                *s = f;
            }
        }
        top.word = PartialWord::with_storage(&syms, top.word.storage_kind());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn viability_examples() {
        let p = ViablePair::from_words(&["?", "01"]).unwrap();
        assert!(p.viability_check().viable);

        let p = ViablePair::from_words(&["0?", "0?0?"]).unwrap();
        let v = p.viability_check();
        assert!(!v.viable);
        let bad = v.violation.unwrap();
        assert_eq!((bad.position, bad.kind), (1, ViolationKind::Unresolved));

        let p = ViablePair::from_words(&["01", "0110"]).unwrap();
        let v = p.viability_check();
        assert_eq!(
            v.violation,
            Some(Violation { level: 1, position: 2, kind: ViolationKind::Refinement })
        );
    }

    #[test]
    fn rejects_bad_towers() {
        assert!(ViablePair::from_words(&["01", "011"]).is_err());
        assert!(ViablePair::from_words(&["01", "01"]).is_err());
        assert!(ViablePair::from_words(&[]).is_err());
    }

    #[test]
    fn symbol_lookup() {
        let p = ViablePair::from_words(&["?", "01"]).unwrap();
        assert_eq!(p.symbol_at(-1), (Symbol::One, 1));
        assert_eq!(p.symbol_at(4), (Symbol::Zero, 1));
        let c = ViablePair::from_words(&["0"]).unwrap();
        for i in -5..5 {
            assert_eq!(c.symbol_at(i), (Symbol::Zero, 0));
        }
        let h = ViablePair::from_words(&["?", "0?"]).unwrap();
        assert_eq!(h.symbol_at(1), (Symbol::Hole, 1));
        assert_eq!(h.symbol_at(2), (Symbol::Zero, 1));
    }

    #[test]
    fn question_counts() {
        let c = ViablePair::from_words(&["0", "00"]).unwrap();
        assert!(c.question_stats(None).iter().all(|q| q.holes == 0));
        let h = ViablePair::from_words(&["?", "0?"]).unwrap();
        let stats = h.question_stats(Some(2));
        assert_eq!(stats[1].holes, 1);
        assert_eq!(stats[1].hole_ratio, Ratio::new(1, 2));
        // ρ_2(2) = 1
        assert_eq!(stats[1].rho_weighted, Some(Ratio::new(1, 2)));
    }

    #[test]
    fn filling_top_keeps_viability() {
        let h = ViablePair::from_words(&["?", "0?"]).unwrap();
        let f = h.with_top_filled(|_| Symbol::One);
        assert_eq!(f.top().word.to_string(), "01");
        assert!(f.viability_check().viable);
    }
}
