//! The two hole-carving constructions: A keeps holes on unit k-th power
//! residues, B keeps them on the non-l-th-power set.

use crate::constructions::config::ConstructionConfig;
use crate::constructions::fill::Filler;
use crate::constructions::strict::{check_b_modulus, plan_strict_a, plan_strict_b};
use crate::error::{Error, Result};
use crate::ntcore::aset::build_a_set;
use crate::ntcore::arith::{iroot, is_prime, pow_mod};
use crate::ntcore::counting::power_residues;
use crate::ntcore::primes::ntlem_params;
use crate::ntcore::residue::ResidueSet;
use crate::words::meta::{ConstructionKind, ConstructionMeta, Mode};
use crate::words::pair::{Level, ViablePair};
use crate::words::partial::PartialWord;
use crate::words::symbol::Symbol;

fn concat_copies(word: &[Symbol], copies: u64) -> Vec<Symbol> {
    let mut out = Vec::with_capacity(word.len() * copies as usize);
    for _ in 0..copies {
        out.extend_from_slice(word);
    }
    out
}

/// Fills every hole outside `keep`, and every hole in the first and last
/// `n_prev` positions, with the policy.
fn batch_fill(syms: &mut [Symbol], n_prev: u64, keep: &ResidueSet, filler: &mut Filler) {
    let n = syms.len() as u64;
    for (i, s) in syms.iter_mut().enumerate() {
        let i = i as u64;
        if s.is_hole() && (i < n_prev || i >= n - n_prev || !keep.contains(i)) {
            *s = filler.next();
        }
    }
}

/// Fills the holes at `i^k mod n` for `i ∈ [0, ⌊n^{1/k}⌋]` with 0 on even
/// levels `t` and 1 on odd ones.
fn power_fill(syms: &mut [Symbol], k: u64, t: usize) {
    let n = syms.len() as u64;
    let value = if t.is_multiple_of(2) { Symbol::Zero } else { Symbol::One };
    for i in 0..=iroot(n, k as u32) {
        let pos = pow_mod(i, k, n) as usize;
        if syms[pos].is_hole() {
            syms[pos] = value;
        }
    }
}

fn assemble(
    cfg: &ConstructionConfig,
    levels: Vec<Vec<Symbol>>,
    moduli: Vec<u64>,
) -> Result<ViablePair> {
    let checkpoints = moduli[1..].iter().map(|&n| iroot(n, cfg.k as u32)).collect();
    let levels = levels
        .into_iter()
        .zip(&moduli)
        .map(|(syms, &n)| Level { n, word: PartialWord::from_symbols(&syms) })
        .collect();
    let meta = ConstructionMeta {
        kind: cfg.kind,
        k: Some(cfg.k),
        l: Some(cfg.l),
        mode: cfg.mode,
        fill_policy: cfg.fill.name().into(),
        seed: cfg.fill.seed(),
        overrides: cfg.overrides(),
        tower: moduli,
        poly: Vec::new(),
    };
    Ok(ViablePair::new(levels)?.with_meta(meta).with_checkpoints(checkpoints))
}

fn check_budget(moduli: &[u64], budget: u64) -> Result<()> {
    if let Some(&n) = moduli.iter().find(|&&n| n > budget) {
        return Err(Error::BoundExceeded {
            what: "level length",
            value: n as u128,
            limit: budget as u128,
        });
    }
    Ok(())
}

/// Construction A (`k ∤ l`).
///
/// From `x_0 = ?`, level `t+1` concatenates `p_{t+1}` copies of `x_t`, fills
/// (per the fill policy) every hole in `[0, n_t) ∪ [n_{t+1}-n_t, n_{t+1})`
/// or outside the unit k-th power residues mod `n_{t+1}`, then writes 0
/// (even t) or 1 (odd t) on the still-open positions `i^k`,
/// `i ≤ ⌊n_{t+1}^{1/k}⌋`. Checkpoints are `C_t = ⌊n_{t+1}^{1/k}⌋`.
pub fn build_construction_a(cfg: &ConstructionConfig) -> Result<ViablePair> {
    if cfg.kind != ConstructionKind::A {
        return Err(Error::InvalidInput("configuration is not for construction A".into()));
    }
    cfg.check_mode()?;
    let params = ntlem_params(cfg.k, cfg.l)?;
    let primes = match cfg.mode {
        Mode::Strict => {
            let plan = plan_strict_a(cfg.k, cfg.l, cfg.levels, cfg.budget)?;
            if plan.buildable_levels() < cfg.levels {
                return Err(plan.into_error());
            }
            if let Some(bad) = plan.first_failure() {
                return Err(Error::StrictInfeasible {
                    condition: bad.condition.into(),
                    detail: bad.requirement.clone(),
                });
            }
            plan.primes.iter().map(|ps| ps[0]).collect()
        }
        Mode::Relaxed => {
            for (i, &p) in cfg.primes.iter().enumerate() {
                if !is_prime(p) {
                    return Err(Error::InvalidPrime { p, reason: "not prime".into() });
                }
                if !params.admits(p) {
                    return Err(Error::InvalidPrime {
                        p,
                        reason: format!(
                            "gcd(p-1, {}) != {}",
                            params.gcd_modulus, params.gcd_target
                        ),
                    });
                }
                if i > 0 && p <= cfg.primes[i - 1] {
                    return Err(Error::InvalidPrime { p, reason: "primes must strictly increase".into() });
                }
            }
            cfg.primes.clone()
        }
    };

    let mut moduli = vec![1u64];
    for &p in &primes {
        let n = moduli.last().unwrap().checked_mul(p).ok_or(Error::Overflow("tower modulus"))?;
        moduli.push(n);
    }
    check_budget(&moduli, cfg.budget)?;

    let mut filler = Filler::new(cfg.fill);
    let mut levels = vec![vec![Symbol::Hole]];
    for t in 0..primes.len() {
        let (n, n1) = (moduli[t], moduli[t + 1]);
        let mut syms = concat_copies(&levels[t], n1 / n);
        let keep = power_residues(n1, cfg.k, true);
        batch_fill(&mut syms, n, &keep, &mut filler);
        power_fill(&mut syms, cfg.k, t);
        levels.push(syms);
    }
    assemble(cfg, levels, moduli)
}

/// Construction B (`k | l`, `k > 1`).
///
/// Same skeleton as construction A with the two fill steps swapped: the
/// power positions are written first, then every hole in the boundary
/// blocks or outside `A_{t+1}` is filled by policy. Holes of `x_t` stay
/// inside `A_t`.
pub fn build_construction_b(cfg: &ConstructionConfig) -> Result<ViablePair> {
    if cfg.kind != ConstructionKind::B {
        return Err(Error::InvalidInput("configuration is not for construction B".into()));
    }
    cfg.check_mode()?;
    if cfg.k < 2 || !cfg.l.is_multiple_of(cfg.k) {
        return Err(Error::Hypothesis(format!(
            "construction B needs k | l and k > 1 (k={}, l={})",
            cfg.k, cfg.l
        )));
    }
    let tower = match cfg.mode {
        Mode::Strict => {
            let plan = plan_strict_b(cfg.k, cfg.l, cfg.levels, cfg.budget)?;
            if plan.buildable_levels() < cfg.levels {
                return Err(plan.into_error());
            }
            plan.moduli[1..].to_vec()
        }
        Mode::Relaxed => cfg.tower.clone(),
    };
    let mut moduli = vec![1u64];
    moduli.extend(&tower);
    for w in moduli.windows(2) {
        if w[1] <= w[0] || w[1] % w[0] != 0 {
            return Err(Error::InvalidInput(format!(
                "tower moduli must strictly increase by divisibility ({} then {})",
                w[0], w[1]
            )));
        }
    }
    for &n in &tower {
        check_b_modulus(n, cfg.l)?;
    }
    check_budget(&moduli, cfg.budget)?;

    let mut filler = Filler::new(cfg.fill);
    let mut levels = vec![vec![Symbol::Hole]];
    for t in 0..tower.len() {
        let (n, n1) = (moduli[t], moduli[t + 1]);
        let mut syms = concat_copies(&levels[t], n1 / n);
        power_fill(&mut syms, cfg.k, t);
        let a = build_a_set(n1, cfg.k, cfg.l)?;
        batch_fill(&mut syms, n, &a.set, &mut filler);
        levels.push(syms);
    }
    assemble(cfg, levels, moduli)
}
