//! Exact Birkhoff averages `(1/N) Σ_{m<N} F(σ^{P(m)+r} x)` and the
//! checkpoint divergence report.

use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ntcore::poly::IntPolynomial;
use crate::orbitstats::cylinder::{CylinderFunction, IntervalValue, Rational};
use crate::words::freq::{window_codes, UNRESOLVED};
use crate::words::meta::ConstructionKind;
use crate::words::pair::ViablePair;
use crate::words::partial::PartialWord;

/// Levels up to this length get a precomputed window-code table.
const TABLE_LIMIT: u64 = 1 << 26;

/// Positions evaluated per parallel task.
const CHUNK: u64 = 1 << 14;

enum Windows<'a> {
    Table(Vec<u32>),
    Lazy(&'a PartialWord, u32),
}

impl Windows<'_> {
    #[inline]
    fn code(&self, i: u64) -> u32 {
        match self {
            Windows::Table(codes) => codes[i as usize],
            Windows::Lazy(word, radius) => {
                let r = *radius as i128;
                let mut code = 0u32;
                for j in -r..=r {
                    match word.get_cyclic(i as i128 + j).bit() {
                        Some(b) => code = (code << 1) | b as u32,
                        None => return UNRESOLVED,
                    }
                }
                code
            }
        }
    }
}

/// Integer partial sums: resolved numerators plus sample counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub sum: i128,
    pub resolved: u64,
    pub unresolved: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            sum: self.sum + o.sum,
            resolved: self.resolved + o.resolved,
            unresolved: self.unresolved + o.unresolved,
        }
    }

    fn scale(self, q: u64) -> Result<Tally> {
        let q128 = q as i128;
        Ok(Tally {
            sum: self.sum.checked_mul(q128).ok_or(Error::Overflow("orbit sum"))?,
            resolved: self.resolved.checked_mul(q).ok_or(Error::Overflow("sample count"))?,
            unresolved: self.unresolved.checked_mul(q).ok_or(Error::Overflow("sample count"))?,
        })
    }
}

/// Reusable evaluator for one pair and one cylinder function; reads
/// windows from the top level.
pub struct OrbitEvaluator<'a> {
    f: &'a CylinderFunction,
    n: u64,
    windows: Windows<'a>,
}

impl<'a> OrbitEvaluator<'a> {
    pub fn new(pair: &'a ViablePair, f: &'a CylinderFunction) -> Self {
        let top = pair.top();
        let windows = if top.n <= TABLE_LIMIT {
            Windows::Table(window_codes(&top.word, f.radius()))
        } else {
            Windows::Lazy(&top.word, f.radius())
        };
        Self { f, n: top.n, windows }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    fn tally_range(&self, poly: &IntPolynomial, r: i128, range: Range<u64>) -> Tally {
        let n = self.n;
        let shift = r.rem_euclid(n as i128) as u64;
        let starts: Vec<u64> = range.clone().step_by(CHUNK as usize).collect();
        // Chunks are summed independently and merged in index order; the
        // sums are integers, so the result is exact and chunking-invariant.
        let parts: Vec<Tally> = starts
            .par_iter()
            .map(|&s| {
                let mut t = Tally::default();
                for m in s..(s + CHUNK).min(range.end) {
                    let pos = (poly.eval_mod(m as i128, n) as u128 + shift as u128) % n as u128;
                    let code = self.windows.code(pos as u64);
                    if code == UNRESOLVED {
                        t.unresolved += 1;
                    } else {
                        t.sum += self.f.numer(code);
                        t.resolved += 1;
                    }
                }
                t
            })
            .collect();
        parts.into_iter().fold(Tally::default(), Tally::merge)
    }

    /// Integer tally over `m ∈ [0, N)`, using that `P(m) mod n_T` has period `n_T`.
    pub fn tally(&self, poly: &IntPolynomial, r: i128, big_n: u64) -> Result<Tally> {
        let q = big_n / self.n;
        let rem = big_n % self.n;
        let mut total = self.tally_range(poly, r, 0..rem);
        if q > 0 {
            total = total.merge(self.tally_range(poly, r, 0..self.n).scale(q)?);
        }
        Ok(total)
    }

    /// Interval-valued sum `Σ_{m<N} F(σ^{P(m)+r} x)`.
    pub fn sum(&self, poly: &IntPolynomial, r: i128, big_n: u64) -> Result<IntervalValue> {
        self.to_interval(self.tally(poly, r, big_n)?, 1)
    }

    /// Interval-valued average `(1/N) Σ_{m<N} F(σ^{P(m)+r} x)`.
    pub fn average(&self, poly: &IntPolynomial, r: i128, big_n: u64) -> Result<IntervalValue> {
        if big_n == 0 {
            return Err(Error::InvalidInput("N must be at least 1".into()));
        }
        self.to_interval(self.tally(poly, r, big_n)?, big_n)
    }

    fn to_interval(&self, t: Tally, divisor: u64) -> Result<IntervalValue> {
        let u = t.unresolved as i128;
        let lo = u
            .checked_mul(self.f.min_numer())
            .and_then(|v| v.checked_add(t.sum))
            .ok_or(Error::Overflow("orbit sum"))?;
        let hi = u
            .checked_mul(self.f.max_numer())
            .and_then(|v| v.checked_add(t.sum))
            .ok_or(Error::Overflow("orbit sum"))?;
        let d = (divisor as i128).checked_mul(self.f.denom()).ok_or(Error::Overflow("denominator"))?;
        Ok(IntervalValue {
            low: Rational::new(lo, d),
            high: Rational::new(hi, d),
            resolved: t.resolved,
            unresolved: t.unresolved,
        })
    }
}

/// `(1/N) Σ_{m<N} F(σ^{P(m)+r} x)` as an exact interval; positions whose
/// window touches a hole contribute `[min F, max F]`.
pub fn birkhoff_average(
    pair: &ViablePair,
    poly: &IntPolynomial,
    r: i128,
    big_n: u64,
    f: &CylinderFunction,
) -> Result<IntervalValue> {
    OrbitEvaluator::new(pair, f).average(poly, r, big_n)
}

/// Outcome of the sign test at one checkpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignVerdict {
    Positive,
    Negative,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckpointEntry {
    pub level: usize,
    pub checkpoint: u64,
    /// `None` when the checkpoint is 0 (nothing to average).
    pub average: Option<IntervalValue>,
    pub sign: SignVerdict,
    /// Positive for even levels, negative for odd ones.
    pub expected: SignVerdict,
    /// Lower bound on `|average|`.
    pub gap: Rational,
}

impl CheckpointEntry {
    pub fn matches_expected(&self) -> bool {
        self.average.is_none() || self.sign == self.expected
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckpointReport {
    pub poly: IntPolynomial,
    pub entries: Vec<CheckpointEntry>,
}

impl CheckpointReport {
    /// Every evaluated checkpoint has the expected sign.
    pub fn signs_as_expected(&self) -> bool {
        self.entries.iter().all(CheckpointEntry::matches_expected)
    }

    /// At least two evaluated checkpoints, all with alternating signs.
    pub fn alternates(&self) -> bool {
        self.entries.iter().filter(|e| e.average.is_some()).count() >= 2 && self.signs_as_expected()
    }

    /// Smallest gap over the evaluated checkpoints.
    pub fn min_gap(&self) -> Option<Rational> {
        self.entries.iter().filter(|e| e.average.is_some()).map(|e| e.gap).min()
    }
}

/// Polynomial a construction's checkpoints refer to.
pub fn construction_poly(pair: &ViablePair) -> Option<IntPolynomial> {
    let meta = pair.meta()?;
    match meta.kind {
        ConstructionKind::A | ConstructionKind::B => Some(IntPolynomial::monomial(1, meta.k? as usize)),
        ConstructionKind::Iwanik => Some(IntPolynomial::new(meta.poly.clone())),
    }
}

/// Average of `G` over `m ∈ [0, C_t)` for each checkpoint `C_t` carried by
/// the pair. `poly` defaults to the construction's own polynomial.
pub fn checkpoint_report(pair: &ViablePair, poly: Option<&IntPolynomial>) -> Result<CheckpointReport> {
    if pair.checkpoints().is_empty() {
        return Err(Error::MissingCheckpoints("pair carries no checkpoints".into()));
    }
    let poly = match poly {
        Some(p) => p.clone(),
        None => construction_poly(pair)
            .ok_or_else(|| Error::MissingCheckpoints("no construction metadata and no polynomial given".into()))?,
    };
    let g = CylinderFunction::g();
    let eval = OrbitEvaluator::new(pair, &g);
    let zero = Rational::from_integer(0);
    let mut entries = Vec::new();
    for (t, &c) in pair.checkpoints().iter().enumerate() {
        let expected = if t % 2 == 0 { SignVerdict::Positive } else { SignVerdict::Negative };
        if c == 0 {
            entries.push(CheckpointEntry {
                level: t,
                checkpoint: 0,
                average: None,
                sign: SignVerdict::Undetermined,
                expected,
                gap: zero,
            });
            continue;
        }
        let avg = eval.average(&poly, 0, c)?;
        let sign = if avg.low > zero {
            SignVerdict::Positive
        } else if avg.high < zero {
            SignVerdict::Negative
        } else {
            SignVerdict::Undetermined
        };
        entries.push(CheckpointEntry { level: t, checkpoint: c, gap: avg.min_abs(), average: Some(avg), sign, expected });
    }
    Ok(CheckpointReport { poly, entries })
}
