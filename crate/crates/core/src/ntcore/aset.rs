//! The non-l-th-power set A used for construction B, and the shifted
//! preimage counts that bound hole hits along l-th powers.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ntcore::arith::{factorize, gcd, pow_mod};
use crate::ntcore::counting::power_histogram;
use crate::ntcore::residue::ResidueSet;

/// Exact evaluation cap (on the modulus) for the shift maximisations.
pub const DEFAULT_SHIFT_LIMIT: u64 = 100_000;

#[derive(Clone, Debug)]
pub struct ASet {
    pub set: ResidueSet,
    pub omega: u32,
    pub phi: u64,
    /// Lower bound `φ(n)(1 - 2^{-ω/4}) / k^ω`.
    pub est1_bound: f64,
    /// Whether every prime factor exceeds `(12kl)²`, so the lower bound is guaranteed.
    pub strict: bool,
}

impl ASet {
    pub fn len(&self) -> u64 {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn est1_holds(&self) -> bool {
        self.set.len() as f64 > self.est1_bound
    }
}

/// Builds `A = {a ∈ ((Z/nZ)*)^k : #{p | n : a mod p ∉ F_p^l} > ln ω(n)}`.
///
/// Membership is decided coordinate-wise through CRT: one k-th and one
/// l-th power table per prime, then a single pass over `[0, n)`.
pub fn build_a_set(n: u64, k: u64, l: u64) -> Result<ASet> {
    if k == 0 || l == 0 || !l.is_multiple_of(k) {
        return Err(Error::Hypothesis(format!("need k | l with k, l >= 1 (k={k}, l={l})")));
    }
    let fact = factorize(n)?;
    if fact.omega() == 0 {
        return Err(Error::Hypothesis("need ω(n) >= 1".into()));
    }
    if !fact.is_squarefree() {
        return Err(Error::Hypothesis(format!("{n} is not squarefree")));
    }
    let primes: Vec<u64> = fact.primes().collect();
    if let Some(&p) = primes.iter().find(|&&p| (p - 1) % l != 0) {
        return Err(Error::Hypothesis(format!("l={l} does not divide p-1 for p={p}")));
    }
    let omega = fact.omega();
    let threshold = (omega as f64).ln();

    // Per-prime tables: nonzero k-th powers and l-th powers of F_p.
    let tables: Vec<(Vec<bool>, Vec<bool>)> = primes
        .iter()
        .map(|&p| {
            let mut kp = vec![false; p as usize];
            let mut lp = vec![false; p as usize];
            for x in 1..p {
                kp[pow_mod(x, k, p) as usize] = true;
                lp[pow_mod(x, l, p) as usize] = true;
            }
            (kp, lp)
        })
        .collect();

    let mut set = ResidueSet::empty(n);
    'outer: for a in 0..n {
        let mut misses = 0u32;
        for (&p, (kp, lp)) in primes.iter().zip(&tables) {
            let r = (a % p) as usize;
            if !kp[r] {
                continue 'outer;
            }
            if !lp[r] {
                misses += 1;
            }
        }
        if misses as f64 > threshold {
            set.insert(a);
        }
    }

    let phi = fact.phi();
    let est1_bound =
        phi as f64 * (1.0 - 2f64.powf(-(omega as f64) / 4.0)) / (k as f64).powi(omega as i32);
    let strict_floor = (12 * k * l) as u128;
    let strict = primes.iter().all(|&p| p as u128 > strict_floor * strict_floor);
    let a = ASet {
        set,
        omega,
        phi,
        est1_bound,
        strict,
    };
    if a.strict && !a.est1_holds() {
        return Err(Error::Hypothesis(format!(
            "|A| = {} does not exceed the lower bound {:.3} although all primes exceed (12kl)^2",
            a.len(),
            a.est1_bound
        )));
    }
    Ok(a)
}

/// Maximum of a shifted correlation together with the smallest maximiser.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShiftMax {
    pub max: u64,
    pub argmax: u64,
    /// False when only a sample of shifts was examined (then `max` is a lower bound).
    pub exact: bool,
}

/// Which way the shift enters the correlation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftDirection {
    /// `count(s) = Σ_v w(v)·[v + s ∈ T]`
    Add,
    /// `count(s) = Σ_v w(v)·[v - s ∈ T]`
    Subtract,
}

/// Exact `max_s Σ_v weights[v]·[v ± s ∈ target]` over all `s ∈ [0, n)`.
///
/// Work is `O(|support(weights)|·|target|)`; partial count vectors are
/// accumulated per thread and merged, so the result does not depend on
/// scheduling.
pub fn max_shift_correlation(weights: &[u64], target: &ResidueSet, dir: ShiftDirection) -> ShiftMax {
    let n = target.modulus();
    assert_eq!(weights.len() as u64, n);
    let support: Vec<(u64, u64)> = weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0)
        .map(|(v, &w)| (v as u64, w))
        .collect();
    let targets = target.to_vec();
    if support.is_empty() || targets.is_empty() {
        return ShiftMax { max: 0, argmax: 0, exact: true };
    }
    let counts = targets
        .par_chunks(256)
        .fold(
            || vec![0u64; n as usize],
            |mut acc, chunk| {
                for &t in chunk {
                    for &(v, w) in &support {
                        let s = match dir {
                            ShiftDirection::Add => (t + n - v) % n,
                            ShiftDirection::Subtract => (v + n - t) % n,
                        };
                        acc[s as usize] += w;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; n as usize],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let (argmax, max) = counts
        .iter()
        .enumerate()
        .fold((0usize, 0u64), |best, (i, &c)| if c > best.1 { (i, c) } else { best });
    ShiftMax { max, argmax: argmax as u64, exact: true }
}

/// Correlation evaluated at the given shifts only; a lower bound on the maximum.
pub fn sampled_shift_correlation(
    weights: &[u64],
    target: &ResidueSet,
    dir: ShiftDirection,
    shifts: &[u64],
) -> ShiftMax {
    let n = target.modulus();
    let support: Vec<(u64, u64)> = weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0)
        .map(|(v, &w)| (v as u64, w))
        .collect();
    let eval = |s: u64| -> u64 {
        support
            .iter()
            .filter(|&&(v, _)| {
                let t = match dir {
                    ShiftDirection::Add => (v + s) % n,
                    ShiftDirection::Subtract => (v + n - s % n) % n,
                };
                target.contains(t)
            })
            .map(|&(_, w)| w)
            .sum()
    };
    let mut best = ShiftMax { max: 0, argmax: 0, exact: false };
    for &s in shifts {
        let s = s % n;
        let c = eval(s);
        if c > best.max || (c == best.max && s < best.argmax) {
            best.max = c;
            best.argmax = s;
        }
    }
    best
}

/// `max_i |{x ∈ Z/nZ : x^l - i ∈ A}|` and the smallest maximising shift.
pub fn max_power_preimage_over_shifts(n: u64, l: u64, a: &ResidueSet) -> Result<ShiftMax> {
    max_power_preimage_bounded(n, l, a, DEFAULT_SHIFT_LIMIT)
}

pub fn max_power_preimage_bounded(n: u64, l: u64, a: &ResidueSet, limit: u64) -> Result<ShiftMax> {
    if a.modulus() != n {
        return Err(Error::InvalidInput(format!(
            "set modulus {} differs from n = {n}",
            a.modulus()
        )));
    }
    if n > limit {
        return Err(Error::BoundExceeded {
            what: "shift maximisation modulus",
            value: n as u128,
            limit: limit as u128,
        });
    }
    let hist = power_histogram(l, n);
    Ok(max_shift_correlation(&hist, a, ShiftDirection::Subtract))
}

/// The (est2) reference value `n·(2/3)^{ln ω(n)}`.
pub fn est2_bound(n: u64) -> Result<f64> {
    let omega = factorize(n)?.omega();
    Ok(n as f64 * (2.0f64 / 3.0).powf((omega.max(1) as f64).ln()))
}

/// Whether every prime factor of n is at least `bound`; used by callers
/// deciding if (est2) may be asserted.
pub fn all_prime_factors_exceed(n: u64, bound: u128) -> Result<bool> {
    Ok(factorize(n)?.primes().all(|p| p as u128 > bound))
}

/// Units of Z/nZ that are k-th powers of units.
pub fn unit_power_residues(n: u64, k: u64) -> ResidueSet {
    let mut s = ResidueSet::empty(n);
    for m in 0..n {
        if gcd(m, n) == 1 {
            s.insert(pow_mod(m, k, n));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_set_for_221() {
        let a = build_a_set(221, 2, 4).unwrap();
        assert_eq!(a.len(), 36);
        assert_eq!(a.omega, 2);
        assert!((a.est1_bound - 14.0589).abs() < 1e-3);
        assert!(a.est1_holds());
        assert!(!a.strict);
        assert!(a.set.is_subset(&unit_power_residues(221, 2)));
    }

    #[test]
    fn single_prime_threshold_is_zero() {
        // ω = 1, ln 1 = 0: A is the unit squares that are not fourth powers.
        let a = build_a_set(13, 2, 4).unwrap();
        let squares = unit_power_residues(13, 2);
        let fourths = unit_power_residues(13, 4);
        let expect: Vec<u64> = squares.iter().filter(|&r| !fourths.contains(r)).collect();
        assert_eq!(a.set.to_vec(), expect);
    }

    #[test]
    fn equal_exponents_give_empty_set() {
        assert_eq!(build_a_set(221, 4, 4).unwrap().len(), 0);
    }

    #[test]
    fn hypothesis_errors() {
        assert!(matches!(build_a_set(13 * 13, 2, 4), Err(Error::Hypothesis(_))));
        assert!(matches!(build_a_set(7 * 13, 2, 4), Err(Error::Hypothesis(_))));
        assert!(matches!(build_a_set(13, 3, 4), Err(Error::Hypothesis(_))));
        assert!(matches!(build_a_set(1, 2, 4), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn trivial_targets() {
        let empty = ResidueSet::empty(221);
        let r = max_power_preimage_over_shifts(221, 4, &empty).unwrap();
        assert_eq!((r.max, r.argmax), (0, 0));
        let full = ResidueSet::full(221);
        let r = max_power_preimage_over_shifts(221, 4, &full).unwrap();
        assert_eq!((r.max, r.argmax), (221, 0));
    }

    #[test]
    fn preimage_matches_quadratic_scan() {
        let a = build_a_set(221, 2, 4).unwrap().set;
        let fast = max_power_preimage_over_shifts(221, 4, &a).unwrap();
        let mut best = (0u64, 0u64);
        for i in 0..221u64 {
            let c = (0..221u64)
                .filter(|&x| a.contains((pow_mod(x, 4, 221) + 221 - i) % 221))
                .count() as u64;
            if c > best.0 {
                best = (c, i);
            }
        }
        assert_eq!((fast.max, fast.argmax), best);
        // empirical comparison with n·(2/3)^{ln ω}
        assert!(est2_bound(221).unwrap() > 166.0);
    }

    #[test]
    fn preimage_budget_error() {
        let a = ResidueSet::empty(1000);
        assert!(matches!(
            max_power_preimage_bounded(1000, 2, &a, 999),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn sampled_is_a_lower_bound() {
        let a = build_a_set(221, 2, 4).unwrap().set;
        let hist = power_histogram(4, 221);
        let exact = max_shift_correlation(&hist, &a, ShiftDirection::Subtract);
        let shifts: Vec<u64> = (0..221).step_by(7).collect();
        let sampled = sampled_shift_correlation(&hist, &a, ShiftDirection::Subtract, &shifts);
        assert!(!sampled.exact);
        assert!(sampled.max <= exact.max);
        let all: Vec<u64> = (0..221).collect();
        let full = sampled_shift_correlation(&hist, &a, ShiftDirection::Subtract, &all);
        assert_eq!((full.max, full.argmax), (exact.max, exact.argmax));
    }
}
