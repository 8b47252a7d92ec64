//! Residue coverage, density verdicts for polynomial orbits and the
//! almost-prime obstruction.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::ntcore::arith::factorize;
use crate::ntcore::perm::is_permutation_mod;
use crate::ntcore::poly::IntPolynomial;
use crate::ntcore::residue::ResidueSet;
use crate::words::freq::{window_codes, window_string, MAX_RADIUS, UNRESOLVED};
use crate::words::pair::ViablePair;
use crate::words::periods::essential_period_certificate;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coverage {
    pub modulus: u64,
    pub attained: ResidueSet,
    pub missing: Vec<u64>,
}

impl Coverage {
    pub fn full(&self) -> bool {
        self.missing.is_empty()
    }
}

/// Residues mod `s` attained by `P` (decided on one period `[0, s)`).
pub fn residues_covered(poly: &IntPolynomial, s: u64) -> Result<Coverage> {
    if s == 0 {
        return Err(Error::InvalidInput("modulus must be at least 1".into()));
    }
    let attained = ResidueSet::from_iter(s, (0..s).map(|m| poly.eval_mod(m as i128, s)));
    Ok(Coverage { modulus: s, missing: attained.complement().to_vec(), attained })
}

/// Residues mod `s` attained by a finite integer sequence.
pub fn sequence_residues_covered(seq: &[i128], s: u64) -> Result<Coverage> {
    if s == 0 {
        return Err(Error::InvalidInput("modulus must be at least 1".into()));
    }
    let attained = ResidueSet::from_iter(s, seq.iter().map(|a| a.rem_euclid(s as i128) as u64));
    Ok(Coverage { modulus: s, missing: attained.complement().to_vec(), attained })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityVerdict {
    DenseCertified,
    NotDense,
    Undecided,
}

impl DensityVerdict {
    pub fn label(self) -> &'static str {
        match self {
            DensityVerdict::DenseCertified => "DENSE-CERTIFIED",
            DensityVerdict::NotDense => "NOT-DENSE",
            DensityVerdict::Undecided => "UNDECIDED",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub verdict: DensityVerdict,
    pub level: usize,
    pub n: u64,
    pub essential_periods: Vec<u64>,
    /// First essential period `P` fails to cover, with the missing residues.
    pub obstruction: Option<Coverage>,
    pub permutation_mod_n: bool,
    pub certificate_unknown: bool,
}

/// Density of `{σ^{P(m)} x}` judged from the essential periods certified at level `t`.
///
/// A certified essential period that `P` does not cover rules density out.
/// Density is certified only when `P` permutes `Z/n_t` and level `t` is
/// hole-free, so that the certified periods are all the periods there are.
pub fn density_verdict(pair: &ViablePair, poly: &IntPolynomial, t: usize) -> Result<DensityReport> {
    if t > pair.top_index() {
        return Err(Error::InvalidInput(format!("level {t} not materialised")));
    }
    let lvl = pair.level(t);
    let cert = essential_period_certificate(pair, t);
    let essential_periods = cert.essential_periods();
    let mut obstruction = None;
    for &s in &essential_periods {
        let cov = residues_covered(poly, s)?;
        if !cov.full() {
            obstruction = Some(cov);
            break;
        }
    }
    let permutation_mod_n = is_permutation_mod(poly, lvl.n)?;
    let certificate_unknown = cert.has_unknown();
    let verdict = if obstruction.is_some() {
        DensityVerdict::NotDense
    } else if !certificate_unknown && permutation_mod_n && lvl.word.hole_count() == 0 {
        DensityVerdict::DenseCertified
    } else {
        DensityVerdict::Undecided
    };
    Ok(DensityReport {
        verdict,
        level: t,
        n: lvl.n,
        essential_periods,
        obstruction,
        permutation_mod_n,
        certificate_unknown,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub max_radius: u32,
    /// Resolved cylinders examined over all radii.
    pub cylinders: usize,
    /// `(radius, window)` never visited by `σ^{P(m)} x`, `m ∈ [0, n_T]`.
    pub missing: Vec<(u32, String)>,
}

impl WitnessReport {
    pub fn ok(&self) -> bool {
        self.missing.is_empty()
    }
}

/// Checks that every resolved window of the top level with radius
/// `≤ max_radius` is visited by `σ^{P(m)} x` for some `m ≤ n_T`.
pub fn cylinder_witness_search(pair: &ViablePair, poly: &IntPolynomial, max_radius: u32) -> Result<WitnessReport> {
    if max_radius > MAX_RADIUS {
        return Err(Error::InvalidInput(format!("radius {max_radius} above {MAX_RADIUS}")));
    }
    let top = pair.top();
    let n = top.n;
    let visited_positions: Vec<u64> = (0..=n).map(|m| poly.eval_mod(m as i128, n)).collect();
    let mut cylinders = 0;
    let mut missing = Vec::new();
    for radius in 0..=max_radius {
        let codes = window_codes(&top.word, radius);
        let present: HashSet<u32> = codes.iter().copied().filter(|&c| c != UNRESOLVED).collect();
        let visited: HashSet<u32> = visited_positions.iter().map(|&p| codes[p as usize]).collect();
        cylinders += present.len();
        let mut absent: Vec<u32> = present.difference(&visited).copied().collect();
        absent.sort_unstable();
        missing.extend(absent.into_iter().map(|c| (radius, window_string(c, radius))));
    }
    Ok(WitnessReport { max_radius, cylinders, missing })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub witness: u64,
    pub big_omega: u32,
    /// Smallest tower modulus with more than `l` prime factors.
    pub minimal_witness: u64,
    /// Residue mod `witness` no `l`-almost prime attains.
    pub uncovered_residue: u64,
}

/// A tower modulus with more than `l` prime factors (with multiplicity);
/// no `l`-almost prime is divisible by it, so residue 0 is never attained.
///
/// In a strictly increasing divisibility chain `n_1 | n_2 | …` the
/// `(l+2)`-th modulus always has at least `l+1` prime factors, so that is
/// the witness reported; shorter towers fall back to the first modulus
/// whose factorisation exceeds `l`.
pub fn almost_prime_obstruction(l: u32, tower: &[u64]) -> Result<Obstruction> {
    if l == 0 {
        return Err(Error::InvalidInput("l must be at least 1".into()));
    }
    if tower.is_empty() || tower[0] < 1 {
        return Err(Error::InvalidInput("tower must be a non-empty list of positive moduli".into()));
    }
    if let Some(w) = tower.windows(2).find(|w| w[1] <= w[0] || w[1] % w[0] != 0) {
        return Err(Error::InvalidInput(format!("{} does not properly divide {}", w[0], w[1])));
    }
    let omegas = tower.iter().map(|&n| Ok(factorize(n)?.big_omega())).collect::<Result<Vec<u32>>>()?;
    let Some(first) = omegas.iter().position(|&o| o > l) else {
        return Err(Error::SearchExhausted { from: tower[0], to: *tower.last().unwrap() });
    };
    let idx = tower.get(l as usize + 1).map_or(first, |_| l as usize + 1);
    Ok(Obstruction {
        witness: tower[idx],
        big_omega: omegas[idx],
        minimal_witness: tower[first],
        uncovered_residue: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::periods::divisors;

    #[test]
    fn squares_mod_4() {
        let c = residues_covered(&IntPolynomial::monomial(1, 2), 4).unwrap();
        assert!(!c.full());
        assert_eq!(c.missing, vec![2, 3]);
        assert!(residues_covered(&IntPolynomial::monomial(1, 2), 2).unwrap().full());
        for s in 1..30 {
            assert!(residues_covered(&IntPolynomial::identity(), s).unwrap().full());
        }
    }

    #[test]
    fn sequence_coverage() {
        let c = sequence_residues_covered(&[-1, 4, 9], 5).unwrap();
        assert_eq!(c.missing, vec![0, 1, 2, 3]);
    }

    #[test]
    fn periodic_cubes_dense() {
        let pair = ViablePair::from_words(&["01"]).unwrap();
        let p = IntPolynomial::monomial(1, 3);
        let rep = density_verdict(&pair, &p, 0).unwrap();
        assert_eq!(rep.verdict, DensityVerdict::DenseCertified);
        let w = cylinder_witness_search(&pair, &p, 3).unwrap();
        assert!(w.ok());
        assert_eq!(w.cylinders, 8);
    }

    #[test]
    fn period_four_squares_not_dense() {
        let pair = ViablePair::from_words(&["0001"]).unwrap();
        let rep = density_verdict(&pair, &IntPolynomial::monomial(1, 2), 0).unwrap();
        assert_eq!(rep.verdict, DensityVerdict::NotDense);
        let obs = rep.obstruction.unwrap();
        assert_eq!((obs.modulus, obs.missing), (4, vec![2, 3]));
    }

    #[test]
    fn unknown_certificate_undecided() {
        let pair = ViablePair::from_words(&["?", "0?"]).unwrap();
        let rep = density_verdict(&pair, &IntPolynomial::identity(), 1).unwrap();
        assert!(rep.certificate_unknown);
        assert_eq!(rep.verdict, DensityVerdict::Undecided);
    }

    #[test]
    fn dense_certified_implies_witnesses() {
        // exhaustive over short hole-free words and small permutation polynomials
        let polys = [IntPolynomial::identity(), IntPolynomial::monomial(1, 3), IntPolynomial::new(vec![1, 2]), IntPolynomial::monomial(1, 5)];
        for len in 1..=6u32 {
            for bits in 0..(1u32 << len) {
                let w: String = (0..len).map(|i| if bits >> i & 1 == 1 { '1' } else { '0' }).collect();
                let pair = ViablePair::from_words(&[w.as_str()]).unwrap();
                for p in &polys {
                    let rep = density_verdict(&pair, p, 0).unwrap();
                    if rep.verdict == DensityVerdict::DenseCertified {
                        assert!(cylinder_witness_search(&pair, p, 3).unwrap().ok(), "{w} {}", p.render("m"));
                    }
                }
            }
        }
        assert_eq!(divisors(6), vec![1, 2, 3, 6]);
    }

    #[test]
    fn obstruction_examples() {
        let powers: Vec<u64> = (1..=10).map(|e| 1u64 << e).collect();
        let o = almost_prime_obstruction(2, &powers).unwrap();
        assert_eq!((o.witness, o.big_omega, o.uncovered_residue), (16, 4, 0));
        assert_eq!(o.minimal_witness, 8);
        assert_eq!(almost_prime_obstruction(1, &[2, 4]).unwrap().witness, 4);
        assert!(almost_prime_obstruction(0, &[2, 4]).is_err());
        assert!(matches!(almost_prime_obstruction(3, &[2, 4]), Err(Error::SearchExhausted { .. })));
        assert!(almost_prime_obstruction(1, &[4, 6]).is_err());
    }
}
