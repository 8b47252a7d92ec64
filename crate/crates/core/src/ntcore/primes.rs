//! Prime selection for the divisibility towers.

use crate::error::{Error, Result};
use crate::ntcore::arith::{gcd, is_prime, valuation};

/// Exponent reduction for a pair `k ∤ l`: primes p with `gcd(p-1, G) = g`
/// satisfy `gcd(p-1, k) = k'` and `gcd(p-1, l) = l'` with `k' > l'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NtlemParams {
    pub k: u64,
    pub l: u64,
    /// Prime with `ν_q(k) > ν_q(l)`.
    pub q: u64,
    pub k_reduced: u64,
    pub l_reduced: u64,
    /// `G` in the condition `gcd(p-1, G) = g`.
    pub gcd_modulus: u64,
    /// `g` in the condition `gcd(p-1, G) = g`.
    pub gcd_target: u64,
}

impl NtlemParams {
    /// The gcd condition on its own.
    pub fn admits(&self, p: u64) -> bool {
        p >= 2 && gcd(p - 1, self.gcd_modulus) == self.gcd_target
    }

    /// Prime, gcd condition, and the resulting reduced exponents.
    pub fn admits_prime(&self, p: u64) -> bool {
        self.admits(p)
            && is_prime(p)
            && gcd(p - 1, self.k) == self.k_reduced
            && gcd(p - 1, self.l) == self.l_reduced
    }
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Chooses q and the reduced exponents for `k ∤ l`.
///
/// Among primes with `ν_q(k) > ν_q(l)`, those not dividing l are preferred
/// (smallest first) so that `l' = 1` whenever l is odd; otherwise the
/// smallest such prime is used.
pub fn ntlem_params(k: u64, l: u64) -> Result<NtlemParams> {
    if k == 0 || l == 0 {
        return Err(Error::InvalidInput("k and l must be positive".into()));
    }
    if l.is_multiple_of(k) {
        return Err(Error::InvalidInput(format!("k={k} divides l={l}")));
    }
    let candidates: Vec<u64> = prime_divisors(k)
        .into_iter()
        .filter(|&q| valuation(k, q) > valuation(l, q))
        .collect();
    let q = candidates
        .iter()
        .copied()
        .find(|&q| !l.is_multiple_of(q))
        .or_else(|| candidates.first().copied())
        .expect("k does not divide l, so some prime has larger valuation in k");
    let vl = valuation(l, q);
    let params = if q == 2 {
        NtlemParams {
            k,
            l,
            q,
            k_reduced: 1 << (vl + 1),
            l_reduced: 1 << vl,
            gcd_modulus: k * l,
            gcd_target: 1 << (vl + 1),
        }
    } else {
        let qv = q.pow(vl);
        NtlemParams {
            k,
            l,
            q,
            k_reduced: qv * q * gcd(k, 2),
            l_reduced: qv * gcd(l, 2),
            gcd_modulus: 2 * k * l,
            gcd_target: 2 * qv * q,
        }
    };
    debug_assert!(params.k_reduced > params.l_reduced);
    debug_assert_eq!(k % params.k_reduced, 0);
    debug_assert_eq!(l % params.l_reduced, 0);
    Ok(params)
}

/// Default width of the scanned interval before a search gives up.
pub const DEFAULT_SEARCH_SPAN: u64 = 1 << 32;

const SEGMENT: u64 = 1 << 16;

/// The first `count` primes `>= floor` satisfying `pred`, in increasing order.
///
/// Candidates come from a segmented sieve of Eratosthenes; the scan stops
/// with [`Error::SearchExhausted`] after `span` integers.
pub fn find_primes<F: Fn(u64) -> bool>(pred: F, count: usize, floor: u64, span: u64) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return Ok(out);
    }
    let start = floor.max(2);
    let end = start.saturating_add(span);
    let mut lo = start;
    let mut base: Vec<u64> = Vec::new();
    let mut base_limit = 1u64;
    while lo < end {
        let hi = lo.saturating_add(SEGMENT).min(end);
        let need = crate::ntcore::arith::iroot(hi - 1, 2);
        if need > base_limit {
            base = small_primes(need);
            base_limit = need;
        }
        let mut composite = vec![false; (hi - lo) as usize];
        for &p in &base {
            let first = (lo.div_ceil(p) * p).max(p * p);
            let mut m = first;
            while m < hi {
                composite[(m - lo) as usize] = true;
                m += p;
            }
        }
        for (i, &c) in composite.iter().enumerate() {
            let n = lo + i as u64;
            if !c && n >= 2 && pred(n) {
                out.push(n);
                if out.len() == count {
                    return Ok(out);
                }
            }
        }
        lo = hi;
    }
    Err(Error::SearchExhausted { from: start, to: end })
}

/// Primes admissible for the given exponent reduction.
pub fn find_ntlem_primes(params: &NtlemParams, count: usize, floor: u64) -> Result<Vec<u64>> {
    find_primes(|p| params.admits_prime(p), count, floor, DEFAULT_SEARCH_SPAN)
}

fn small_primes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut sieve = vec![true; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_branch_examples() {
        let p = ntlem_params(2, 3).unwrap();
        assert_eq!((p.q, p.k_reduced, p.l_reduced), (2, 2, 1));
        assert_eq!((p.gcd_modulus, p.gcd_target), (6, 2));
        assert_eq!(find_ntlem_primes(&p, 1, 2).unwrap(), vec![3]);

        let p = ntlem_params(4, 6).unwrap();
        assert_eq!((p.q, p.k_reduced, p.l_reduced), (2, 4, 2));
        assert_eq!((p.gcd_modulus, p.gcd_target), (24, 4));
        assert_eq!(find_ntlem_primes(&p, 1, 2).unwrap(), vec![5]);
    }

    #[test]
    fn odd_branch_example() {
        let p = ntlem_params(9, 3).unwrap();
        assert_eq!((p.q, p.k_reduced, p.l_reduced), (3, 9, 3));
        assert_eq!((p.gcd_modulus, p.gcd_target), (54, 18));
        assert_eq!(find_ntlem_primes(&p, 1, 2).unwrap(), vec![19]);
    }

    #[test]
    fn rejects_divisible_pairs() {
        assert!(ntlem_params(3, 6).is_err());
        assert!(ntlem_params(2, 2).is_err());
    }

    #[test]
    fn prefers_prime_coprime_to_l() {
        // q = 3 has ν_3(45) = 2 > ν_3(3) = 1, but q = 5 does not divide l.
        let p = ntlem_params(45, 3).unwrap();
        assert_eq!(p.q, 5);
        assert_eq!(p.l_reduced, 1);
    }

    #[test]
    fn reduced_exponents_hold_for_found_primes() {
        for k in 2..16u64 {
            for l in 1..16u64 {
                if l % k == 0 {
                    continue;
                }
                let params = ntlem_params(k, l).unwrap();
                assert!(params.k_reduced > params.l_reduced);
                assert_eq!(k % params.k_reduced, 0, "k={k} l={l}");
                assert_eq!(l % params.l_reduced, 0, "k={k} l={l}");
                let primes = find_primes(|p| params.admits(p) && is_prime(p), 5, 2, 1 << 24).unwrap();
                for p in primes {
                    assert_eq!(gcd(p - 1, k), params.k_reduced, "k={k} l={l} p={p}");
                    assert_eq!(gcd(p - 1, l), params.l_reduced, "k={k} l={l} p={p}");
                }
            }
        }
    }

    #[test]
    fn find_primes_examples() {
        assert_eq!(find_primes(|p| gcd(p - 1, 6) == 2, 3, 2, 1000).unwrap(), vec![3, 5, 11]);
        assert_eq!(find_primes(|p| (p - 1) % 4 == 0, 2, 2, 1000).unwrap(), vec![5, 13]);
        assert!(find_primes(|_| true, 0, 2, 10).unwrap().is_empty());
        assert_eq!(find_primes(|_| true, 4, 1_000_000_000, 1000).unwrap()[0], 1_000_000_007);
    }

    #[test]
    fn search_budget_reported() {
        let err = find_primes(|_| false, 1, 100, 50).unwrap_err();
        assert_eq!(err, Error::SearchExhausted { from: 100, to: 150 });
    }

    #[test]
    fn sieve_matches_primality_test() {
        let found = find_primes(|_| true, 2000, 2, 1 << 20).unwrap();
        let direct: Vec<u64> = (2..).filter(|&n| is_prime(n)).take(2000).collect();
        assert_eq!(found, direct);
    }
}
