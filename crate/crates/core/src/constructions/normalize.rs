use crate::error::{Error, Result};
use crate::ntcore::poly::IntPolynomial;

/// Largest shift tried before giving up.
const MAX_SHIFT: i64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedPoly {
    /// `σ·P(x + shift)`.
    pub poly: IntPolynomial,
    pub shift: i64,
    /// `+1` or `-1`.
    pub sign: i8,
}

/// Whether `r(n) > 0` for every integer `n ≥ 1`.
///
/// Past the Cauchy root bound `1 + max|a_i|/a_e` the leading term
/// dominates, so only the integers below it are checked one by one.
fn positive_from_one(r: &IntPolynomial) -> bool {
    if r.is_zero() || r.leading_coefficient() < 0 {
        return false;
    }
    let c = r.coefficients();
    let lead = *c.last().unwrap() as i128;
    let tail = c[..c.len() - 1].iter().map(|a| (*a as i128).abs()).max().unwrap_or(0);
    let bound = 1 + tail / lead + 1;
    (1..=bound).all(|n| r.eval_checked(n).is_some_and(|v| v > 0))
}

fn sub(a: &IntPolynomial, b: &IntPolynomial) -> Option<IntPolynomial> {
    let len = a.coefficients().len().max(b.coefficients().len());
    let get = |p: &IntPolynomial, i: usize| p.coefficients().get(i).copied().unwrap_or(0);
    (0..len)
        .map(|i| get(a, i).checked_sub(get(b, i)))
        .collect::<Option<Vec<_>>>()
        .map(IntPolynomial::new)
}

/// Smallest `shift ≥ 0` and a sign such that `Q(x) = σ·P(x + shift)` has
/// `Q(n+1) − Q(n) > n` and `Q(n) > M·n^d` for every `n ≥ 1`, where `M` is
/// the leading magnitude and `d` the degree.
///
/// The sign is that of the leading coefficient, the only one for which the
/// growth conditions can hold.
pub fn normalize_poly(p: &IntPolynomial) -> Result<NormalizedPoly> {
    let d = p.degree();
    if p.is_zero() || d <= 1 {
        return Err(Error::InvalidInput(format!("need degree > 1, got {}", p.render("x"))));
    }
    let sign: i8 = if p.leading_coefficient() > 0 { 1 } else { -1 };
    let base = if sign > 0 { p.clone() } else { p.negate() };
    let lead_term = IntPolynomial::monomial(base.leading_coefficient(), d);
    for shift in 0..=MAX_SHIFT {
        let q = base.shift(shift)?;
        let Some(growth) = sub(&q, &lead_term) else {
            return Err(Error::Overflow("polynomial normalisation"));
        };
        // Q(n+1) - Q(n) - n
        let step = sub(&sub(&q.shift(1)?, &q).ok_or(Error::Overflow("polynomial normalisation"))?, &IntPolynomial::identity())
            .ok_or(Error::Overflow("polynomial normalisation"))?;
        if positive_from_one(&growth) && positive_from_one(&step) {
            return Ok(NormalizedPoly { poly: q, shift, sign });
        }
    }
    Err(Error::InvalidInput(format!(
        "no shift up to {MAX_SHIFT} normalises {}",
        p.render("x")
    )))
}
