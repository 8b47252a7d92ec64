//! Permutation polynomials modulo n and Dickson polynomials.

use crate::error::{Error, Result};
use crate::ntcore::arith::is_prime;
use crate::ntcore::poly::IntPolynomial;
use crate::ntcore::residue::ResidueSet;

/// Default enumeration limit for [`is_permutation_mod`].
pub const DEFAULT_PERMUTATION_LIMIT: u64 = 1 << 32;

/// Whether `P` induces a bijection on Z/nZ, using the default limit.
pub fn is_permutation_mod(p: &IntPolynomial, n: u64) -> Result<bool> {
    is_permutation_mod_bounded(p, n, DEFAULT_PERMUTATION_LIMIT)
}

pub fn is_permutation_mod_bounded(p: &IntPolynomial, n: u64, limit: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    if n > limit {
        return Err(Error::BoundExceeded {
            what: "permutation modulus",
            value: n as u128,
            limit: limit as u128,
        });
    }
    let mut seen = ResidueSet::empty(n);
    for x in 0..n {
        if !seen.insert(p.eval_mod(x as i128, n)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Permutation mod p with a derivative that never vanishes mod p; for a
/// prime p this is equivalent to being a permutation mod p² (and mod
/// every power of p).
pub fn lift_criterion(p: &IntPolynomial, prime: u64) -> Result<bool> {
    if !is_prime(prime) {
        return Err(Error::InvalidPrime {
            p: prime,
            reason: "lift criterion needs a prime modulus".into(),
        });
    }
    if !is_permutation_mod(p, prime)? {
        return Ok(false);
    }
    let dp = p.derivative();
    Ok((0..prime).all(|x| dp.eval_mod(x as i128, prime) != 0))
}

/// `D_n(α, x)` from `D_1 = x`, `D_2 = x² - 2α`, `D_{m+1} = x·D_m - α·D_{m-1}`.
pub fn dickson(n: u32, alpha: i64) -> Result<IntPolynomial> {
    if n == 0 {
        return Err(Error::InvalidInput("Dickson index must be positive".into()));
    }
    let alpha = alpha as i128;
    let overflow = || Error::Overflow("Dickson recurrence");
    // prev = D_{m-1}, cur = D_m; seed D_0 = 2 so that D_2 follows from the recurrence.
    let mut prev: Vec<i128> = vec![2];
    let mut cur: Vec<i128> = vec![0, 1];
    for _ in 1..n {
        let mut next = vec![0i128; cur.len() + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] = c;
        }
        for (i, &c) in prev.iter().enumerate() {
            let t = c.checked_mul(alpha).ok_or_else(overflow)?;
            next[i] = next[i].checked_sub(t).ok_or_else(overflow)?;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    let coeffs = cur
        .into_iter()
        .map(|c| i64::try_from(c).map_err(|_| overflow()))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntPolynomial::new(coeffs))
}
