//! Block-pair construction along a permutative polynomial: two words per
//! level, each next-level word a concatenation of current ones driven by
//! a sign word.

use crate::constructions::config::ConstructionConfig;
use crate::constructions::normalize::normalize_poly;
use crate::constructions::strict::check_iwanik_growth;
use crate::error::{Error, Result};
use crate::ntcore::perm::is_permutation_mod;
use crate::ntcore::poly::IntPolynomial;
use crate::ntcore::residue::ResidueSet;
use crate::words::meta::{ConstructionKind, ConstructionMeta, Mode};
use crate::words::pair::{Level, ViablePair};
use crate::words::partial::PartialWord;
use crate::words::symbol::Symbol;

/// The pair `B_t^(0)`, `B_t^(1)` at one level and the positions where they differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLevel {
    pub n: u64,
    pub block0: Vec<u8>,
    pub block1: Vec<u8>,
    pub diff: ResidueSet,
}

impl BlockLevel {
    pub fn block(&self, eps: u8) -> &[u8] {
        if eps == 0 {
            &self.block0
        } else {
            &self.block1
        }
    }
}

/// Sign words used to go from level `t` to `t+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockStep {
    pub m: u64,
    pub eps: Vec<u8>,
    pub eps_prime: Vec<u8>,
    /// `(block index, forced sign)` pairs imposed by the polynomial.
    pub pins: Vec<(u64, u8)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IwanikBlocks {
    /// The normalised polynomial the pins were computed with.
    pub poly: IntPolynomial,
    pub levels: Vec<BlockLevel>,
    pub steps: Vec<BlockStep>,
}

impl IwanikBlocks {
    pub fn height(&self) -> usize {
        self.levels.len() - 1
    }
}

/// Number of zeros a sign word of length m must contain.
pub fn zero_quota(m: u64) -> u64 {
    m.div_ceil(2)
}

fn concat(level: &BlockLevel, signs: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(level.n as usize * signs.len());
    for &e in signs {
        out.extend_from_slice(level.block(e));
    }
    out
}

/// `C_t = max{i ≥ 1 : P(i) < n_{t+1} - n_t}`, or 0 if no such i.
pub fn iwanik_checkpoint(poly: &IntPolynomial, n: u64, n_next: u64) -> u64 {
    let limit = (n_next - n) as i128;
    let mut c = 0u64;
    let mut i = 1u64;
    while poly.eval_checked(i as i128).is_some_and(|v| v < limit) {
        c = i;
        i += 1;
    }
    c
}

fn sign_step(level: &BlockLevel, t: usize, n_next: u64, poly: &IntPolynomial) -> Result<BlockStep> {
    let n = level.n;
    let m = n_next / n;
    let mut eps: Vec<Option<u8>> = vec![None; m as usize];
    eps[0] = Some(0);
    eps[m as usize - 1] = Some(1);
    // The average at C_t is pushed positive on even t and negative on odd t.
    let target = if t.is_multiple_of(2) { 0u8 } else { 1u8 };
    let mut pins = Vec::new();
    let mut i = n + 1;
    while let Some(v) = poly.eval_checked(i as i128) {
        if v < 0 || v >= (n_next - n) as i128 {
            break;
        }
        let v = v as u64;
        let offset = v % n;
        if level.diff.contains(offset) {
            let block = v / n;
            let sign = if level.block0[offset as usize] == target { 0 } else { 1 };
            match eps[block as usize] {
                Some(s) if s != sign => {
                    return Err(Error::PinConflict {
                        level: t,
                        detail: format!("block {block} needs sign {sign} but already has {s}"),
                    })
                }
                _ => eps[block as usize] = Some(sign),
            }
            pins.push((block, sign));
        }
        i += 1;
    }
    let quota = zero_quota(m);
    let zeros = eps.iter().filter(|e| **e == Some(0)).count() as u64;
    let ones = eps.iter().filter(|e| **e == Some(1)).count() as u64;
    if zeros > quota || ones > m - quota {
        return Err(Error::PinConflict {
            level: t,
            detail: format!("{zeros} forced zeros and {ones} forced ones cannot meet the zero quota {quota} of {m}"),
        });
    }
    let mut missing = quota - zeros;
    let eps: Vec<u8> = eps
        .into_iter()
        .map(|e| match e {
            Some(s) => s,
            None if missing > 0 => {
                missing -= 1;
                0
            }
            None => 1,
        })
        .collect();
    let last = eps.len() - 1;
    let eps_prime = eps
        .iter()
        .enumerate()
        .map(|(i, &e)| if i == 0 { 0 } else if i == last { 1 } else { 1 - e })
        .collect();
    Ok(BlockStep { m, eps, eps_prime, pins })
}

/// Builds the block pairs over `n_0 = 1, n_1, ...` and the viable pair
/// whose level-t word is `B_t^(0)` with holes on the difference set `A_t`.
///
/// The polynomial is normalised first; it must permute every tower
/// modulus, and all ratios `m_t = n_{t+1}/n_t` must share a parity.
pub fn build_iwanik(cfg: &ConstructionConfig) -> Result<(ViablePair, IwanikBlocks)> {
    if cfg.kind != ConstructionKind::Iwanik {
        return Err(Error::InvalidInput("configuration is not for the block-pair construction".into()));
    }
    let raw = cfg
        .poly
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("the block-pair construction needs a polynomial".into()))?;
    let poly = normalize_poly(raw)?.poly;
    let mut moduli = vec![1u64];
    moduli.extend(&cfg.tower);
    if moduli.len() < 2 {
        return Err(Error::InvalidInput("the tower needs at least one modulus".into()));
    }
    for w in moduli.windows(2) {
        if w[1] <= w[0] || w[1] % w[0] != 0 || w[1] / w[0] < 2 {
            return Err(Error::InvalidInput(format!(
                "tower moduli must strictly increase by divisibility ({} then {})",
                w[0], w[1]
            )));
        }
    }
    let parity = (moduli[1] / moduli[0]) % 2;
    if let Some(w) = moduli.windows(2).find(|w| (w[1] / w[0]) % 2 != parity) {
        return Err(Error::Hypothesis(format!(
            "all ratios n_(t+1)/n_t must share a parity; {} / {} breaks it",
            w[1], w[0]
        )));
    }
    if let Some(&n) = moduli.iter().find(|&&n| n > cfg.budget) {
        return Err(Error::BoundExceeded { what: "level length", value: n as u128, limit: cfg.budget as u128 });
    }
    for &n in &moduli[1..] {
        if !is_permutation_mod(&poly, n)? {
            return Err(Error::Hypothesis(format!("{} is not a permutation mod {n}", poly.render("x"))));
        }
    }
    if cfg.mode == Mode::Strict {
        let checks = check_iwanik_growth(poly.leading_magnitude(), poly.degree(), &moduli);
        if let Some(bad) = checks.iter().find(|c| c.holds == Some(false)) {
            return Err(Error::StrictInfeasible {
                condition: bad.condition.into(),
                detail: bad.requirement.clone(),
            });
        }
    }

    let mut levels = vec![BlockLevel {
        n: 1,
        block0: vec![0],
        block1: vec![1],
        diff: ResidueSet::full(1),
    }];
    let mut steps = Vec::new();
    for t in 0..cfg.tower.len() {
        let step = sign_step(&levels[t], t, moduli[t + 1], &poly)?;
        let block0 = concat(&levels[t], &step.eps);
        let block1 = concat(&levels[t], &step.eps_prime);
        let diff = ResidueSet::from_iter(
            moduli[t + 1],
            (0..moduli[t + 1]).filter(|&i| block0[i as usize] != block1[i as usize]),
        );
        levels.push(BlockLevel { n: moduli[t + 1], block0, block1, diff });
        steps.push(step);
    }

    let words = levels
        .iter()
        .map(|b| {
            let syms: Vec<Symbol> = b
                .block0
                .iter()
                .enumerate()
                .map(|(i, &bit)| if b.diff.contains(i as u64) { Symbol::Hole } else { Symbol::from_bit(bit) })
                .collect();
            Level { n: b.n, word: PartialWord::from_symbols(&syms) }
        })
        .collect();
    let checkpoints = moduli.windows(2).map(|w| iwanik_checkpoint(&poly, w[0], w[1])).collect();
    let meta = ConstructionMeta {
        kind: ConstructionKind::Iwanik,
        k: None,
        l: None,
        mode: cfg.mode,
        fill_policy: cfg.fill.name().into(),
        seed: cfg.fill.seed(),
        overrides: cfg.overrides(),
        tower: moduli,
        poly: poly.coefficients().to_vec(),
    };
    let pair = ViablePair::new(words)?.with_meta(meta).with_checkpoints(checkpoints);
    Ok((pair, IwanikBlocks { poly, levels, steps }))
}
