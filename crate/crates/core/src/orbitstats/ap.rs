//! Aligned block frequencies and their closed form on block-pair towers.

use num_rational::Ratio;
use num_traits::Signed;

use crate::constructions::iwanik::IwanikBlocks;
use crate::error::{Error, Result};
use crate::orbitstats::cylinder::Rational;

/// `(|B|/|C|)·|{i : C[i|B|, (i+1)|B|) = B}|`.
pub fn ap_frequency(b: &[u8], c: &[u8]) -> Result<Ratio<u64>> {
    if b.is_empty() || c.is_empty() || !c.len().is_multiple_of(b.len()) {
        return Err(Error::InvalidInput(format!(
            "block length {} must divide word length {}",
            b.len(),
            c.len()
        )));
    }
    if b.iter().chain(c).any(|&x| x > 1) {
        return Err(Error::InvalidInput("blocks must be 0/1 words".into()));
    }
    let hits = c.chunks(b.len()).filter(|chunk| *chunk == b).count() as u64;
    Ok(Ratio::new(hits * b.len() as u64, c.len() as u64))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApEntry {
    pub eps: u8,
    pub eps_prime: u8,
    pub value: Ratio<u64>,
    pub expected: Ratio<u64>,
}

impl ApEntry {
    pub fn matches(&self) -> bool {
        self.value == self.expected
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApReport {
    pub t: usize,
    pub s: usize,
    pub entries: Vec<ApEntry>,
    /// `max |ap − ½|` over the four pairs.
    pub max_deviation: Rational,
}

impl ApReport {
    pub fn all_match(&self) -> bool {
        self.entries.iter().all(ApEntry::matches)
    }
}

/// Closed form `½(1 ± Π_j c_j)` with `c_j = 1/m_j` for odd `m_j` and 0 for
/// even `m_j`, taken over the steps `t ≤ j < s`; `+` iff `ε = ε'`.
pub fn ap_closed_form(ms: &[u64], same_sign: bool) -> Ratio<u64> {
    let half = Ratio::new(1, 2);
    if ms.iter().any(|m| m % 2 == 0) {
        return half;
    }
    let prod: u64 = ms.iter().product();
    let delta = Ratio::new(1, 2 * prod);
    if same_sign {
        half + delta
    } else {
        half - delta
    }
}

/// All four `ap(B_t^{(ε)}, B_s^{(ε')})` compared with the closed form.
pub fn iwanik_ap_check(blocks: &IwanikBlocks, t: usize, s: usize) -> Result<ApReport> {
    if t >= s || s > blocks.height() {
        return Err(Error::InvalidInput(format!(
            "need t < s ≤ {}, got t = {t}, s = {s}",
            blocks.height()
        )));
    }
    let ms: Vec<u64> = blocks.steps[t..s].iter().map(|st| st.m).collect();
    let half = Rational::new(1, 2);
    let mut entries = Vec::with_capacity(4);
    let mut max_deviation = Rational::from_integer(0);
    for eps in 0..2u8 {
        for eps_prime in 0..2u8 {
            let value = ap_frequency(blocks.levels[t].block(eps), blocks.levels[s].block(eps_prime))?;
            let dev = (Rational::new(*value.numer() as i128, *value.denom() as i128) - half).abs();
            max_deviation = max_deviation.max(dev);
            entries.push(ApEntry { eps, eps_prime, value, expected: ap_closed_form(&ms, eps == eps_prime) });
        }
    }
    Ok(ApReport { t, s, entries, max_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_iwanik, ConstructionConfig};
    use crate::ntcore::poly::IntPolynomial;
    use crate::words::meta::Mode;

    #[test]
    fn ap_examples() {
        assert_eq!(ap_frequency(&[0], &[0, 0, 0, 1, 1]).unwrap(), Ratio::new(3, 5));
        assert_eq!(ap_frequency(&[0, 1], &[0, 1, 0, 1]).unwrap(), Ratio::from_integer(1));
        assert_eq!(ap_frequency(&[1, 1, 0], &[1, 1, 0]).unwrap(), Ratio::from_integer(1));
        assert!(ap_frequency(&[0, 1], &[0, 1, 0]).is_err());
        assert!(ap_frequency(&[], &[0]).is_err());
    }

    fn blocks(poly: IntPolynomial, tower: Vec<u64>) -> IwanikBlocks {
        build_iwanik(&ConstructionConfig::iwanik(poly, tower, Mode::Relaxed)).unwrap().1
    }

    #[test]
    fn odd_step_of_five() {
        let b = blocks(IntPolynomial::monomial(1, 3), vec![5]);
        let rep = iwanik_ap_check(&b, 0, 1).unwrap();
        assert!(rep.all_match());
        assert_eq!(rep.entries[0].value, Ratio::new(3, 5));
        assert_eq!(rep.entries[1].value, Ratio::new(2, 5));
        assert_eq!(rep.max_deviation, Rational::new(1, 10));
    }

    #[test]
    fn even_tower_is_half() {
        let b = blocks(IntPolynomial::new(vec![0, 1, 210]), vec![4, 16, 64]);
        for t in 0..3 {
            for s in t + 1..=3 {
                let rep = iwanik_ap_check(&b, t, s).unwrap();
                assert!(rep.all_match());
                assert!(rep.entries.iter().all(|e| e.value == Ratio::new(1, 2)));
            }
        }
    }

    #[test]
    fn multi_level_odd_tower() {
        let b = blocks(IntPolynomial::new(vec![0, 1, 210]), vec![5, 35, 315]);
        for t in 0..3 {
            for s in t + 1..=3 {
                assert!(iwanik_ap_check(&b, t, s).unwrap().all_match(), "t={t} s={s}");
            }
        }
        assert!(iwanik_ap_check(&b, 2, 2).is_err());
        assert!(iwanik_ap_check(&b, 0, 4).is_err());
    }
}
