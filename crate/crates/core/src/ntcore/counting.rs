//! Power-residue counting: ρ_k, power-residue images, and exhaustive
//! solution counts for `x^k - y^l = a` over prime fields.

use crate::error::{Error, Result};
use crate::ntcore::arith::{gcd, pow_mod};
use crate::ntcore::residue::ResidueSet;

/// Histogram of `m^k mod n` over one full period `m ∈ [0, n)`.
pub fn power_histogram(k: u64, n: u64) -> Vec<u64> {
    let mut hist = vec![0u64; n as usize];
    for m in 0..n {
        hist[pow_mod(m, k, n) as usize] += 1;
    }
    hist
}

/// Number of `m ∈ [1, N]` with `m^k ≡ a (mod n)`.
pub fn rho(k: u64, big_n: u64, n: u64, a: i64) -> u64 {
    assert!(k >= 1 && n >= 1, "k and n must be positive");
    let target = (a as i128).rem_euclid(n as i128) as u64;
    let hits = |upto: u64| (1..=upto).filter(|&m| pow_mod(m, k, n) == target).count() as u64;
    let full = big_n / n;
    let rest = big_n % n;
    let per_period = if full > 0 { hits(n) } else { 0 };
    full * per_period + hits(rest)
}

/// `max_a ρ_k(n; n, a)`.
pub fn rho_max(k: u64, n: u64) -> u64 {
    assert!(k >= 1 && n >= 1, "k and n must be positive");
    // m ranges over [1, n]; m = n hits the same residue as m = 0.
    power_histogram(k, n).into_iter().max().unwrap_or(0)
}

/// Image of `m ↦ m^k` on Z/nZ, optionally restricted to units.
pub fn power_residues(n: u64, k: u64, units_only: bool) -> ResidueSet {
    assert!(k >= 1 && n >= 1, "k and n must be positive");
    let mut set = ResidueSet::empty(n);
    for m in 0..n {
        let v = pow_mod(m, k, n);
        if !units_only || gcd(v, n) == 1 {
            set.insert(v);
        }
    }
    set
}

/// Exact solution count of `x^k - y^l = a` over F_p.
#[derive(Clone, Debug, PartialEq)]
pub struct WeilCount {
    pub count: u64,
    /// `kl√p`.
    pub bound: f64,
    /// Whether the bound's hypotheses (a ≢ 0, k, l < p) hold, so it was checked.
    pub asserted: bool,
}

/// Counts solutions in O(p) from value histograms of `x^k` and `y^l + a`.
///
/// When `a ≢ 0` and `k, l < p` the deviation `|count - p|` is compared
/// against `kl√p` in exact integer arithmetic; a violation is an error.
pub fn weil_count(p: u64, k: u64, l: u64, a: i64) -> Result<WeilCount> {
    if p < 2 || k == 0 || l == 0 {
        return Err(Error::InvalidInput(format!(
            "weil_count needs p >= 2 and k, l >= 1 (p={p}, k={k}, l={l})"
        )));
    }
    let a = (a as i128).rem_euclid(p as i128) as u64;
    let xs = power_histogram(k, p);
    let mut ys = vec![0u64; p as usize];
    for y in 0..p {
        ys[((pow_mod(y, l, p) + a) % p) as usize] += 1;
    }
    let count: u64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let asserted = a != 0 && k < p && l < p;
    if asserted {
        let dev = count.abs_diff(p) as u128;
        let rhs = (k as u128 * l as u128).pow(2) * p as u128;
        if dev * dev > rhs {
            return Err(Error::WeilViolation { p, k, l, a, count });
        }
    }
    Ok(WeilCount {
        count,
        bound: (k * l) as f64 * (p as f64).sqrt(),
        asserted,
    })
}
