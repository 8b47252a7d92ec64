//! Periodic structure: the sets Per^(ε)_s, finite-level certificates for
//! essential periods, and the separation radius of periodic words.

use crate::ntcore::residue::ResidueSet;
use crate::words::pair::ViablePair;
use crate::words::symbol::Symbol;

/// Residues `r mod s` such that every position `j ≡ r` of the window
/// (starting at `offset`) carries `eps`. Classes with no position in the
/// window are included vacuously. Holes never count as `eps`.
pub fn per_residues(window: &[Symbol], offset: i128, s: u64, eps: Symbol) -> ResidueSet {
    assert!(s >= 1, "period must be positive");
    let mut bad = ResidueSet::empty(s);
    for (i, &sym) in window.iter().enumerate() {
        if sym != eps {
            bad.insert((offset + i as i128).rem_euclid(s as i128) as u64);
        }
    }
    bad.complement()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidueStatus {
    /// Whole progression resolved and constant.
    Member(Symbol),
    /// Progression contains both symbols.
    NotMember,
    /// Holes prevent a decision.
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EssentialVerdict {
    Essential,
    NotEssential,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct PeriodEntry {
    pub s: u64,
    /// Certified members of Per^(0)_s.
    pub per0: ResidueSet,
    /// Certified members of Per^(1)_s.
    pub per1: ResidueSet,
    status: Vec<ResidueStatus>,
    pub verdict: EssentialVerdict,
}

impl PeriodEntry {
    /// Certified image of Per_s.
    pub fn per(&self) -> ResidueSet {
        ResidueSet::from_iter(self.s, self.per0.iter().chain(self.per1.iter()))
    }

    pub fn status(&self, r: u64) -> ResidueStatus {
        self.status[(r % self.s) as usize]
    }

    pub fn unknown(&self) -> ResidueSet {
        ResidueSet::from_iter(
            self.s,
            (0..self.s).filter(|&r| self.status[r as usize] == ResidueStatus::Unknown),
        )
    }
}

/// Per-divisor certificates computed from the `n_T`-periodic word `X_T`.
#[derive(Clone, Debug)]
pub struct PeriodCertificate {
    pub level: usize,
    pub n: u64,
    /// One entry per divisor of `n`, ascending.
    pub entries: Vec<PeriodEntry>,
}

impl PeriodCertificate {
    pub fn entry(&self, s: u64) -> Option<&PeriodEntry> {
        self.entries.iter().find(|e| e.s == s)
    }

    pub fn essential_periods(&self) -> Vec<u64> {
        self.entries
            .iter()
            .filter(|e| e.verdict == EssentialVerdict::Essential)
            .map(|e| e.s)
            .collect()
    }

    pub fn has_unknown(&self) -> bool {
        self.entries.iter().any(|e| e.verdict == EssentialVerdict::Unknown)
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn residue_status(syms: &[Symbol], s: u64) -> Vec<ResidueStatus> {
    // bit 0: saw 0, bit 1: saw 1, bit 2: saw hole
    let mut seen = vec![0u8; s as usize];
    for (j, &sym) in syms.iter().enumerate() {
        seen[j % s as usize] |= match sym {
            Symbol::Zero => 1,
            Symbol::One => 2,
            Symbol::Hole => 4,
        };
    }
    seen.into_iter()
        .map(|b| match b {
            1 => ResidueStatus::Member(Symbol::Zero),
            2 => ResidueStatus::Member(Symbol::One),
            b if b & 3 == 3 => ResidueStatus::NotMember,
            _ => ResidueStatus::Unknown,
        })
        .collect()
}

/// Certificates for every divisor `s` of `n_T`.
///
/// A residue is certified in `Per_s` only when its whole progression in
/// `X_T` is resolved and constant; deeper levels only fill holes, so such
/// residues stay members. `s` is certified essential when, for every
/// proper divisor `s'`, some certified member of `Per_s` reduces to a
/// residue certainly outside `Per_{s'}`.
pub fn essential_period_certificate(pair: &ViablePair, level: usize) -> PeriodCertificate {
    let lvl = pair.level(level);
    let syms = lvl.word.to_symbols();
    let divs = divisors(lvl.n);
    let statuses: Vec<Vec<ResidueStatus>> = divs.iter().map(|&s| residue_status(&syms, s)).collect();

    let entries = divs
        .iter()
        .enumerate()
        .map(|(idx, &s)| {
            let st = &statuses[idx];
            let members = |eps: Symbol| {
                ResidueSet::from_iter(
                    s,
                    (0..s).filter(|&r| st[r as usize] == ResidueStatus::Member(eps)),
                )
            };
            let per0 = members(Symbol::Zero);
            let per1 = members(Symbol::One);
            let certified: Vec<u64> = per0.iter().chain(per1.iter()).collect();
            let all_decided = st.iter().all(|x| *x != ResidueStatus::Unknown);

            let proper: Vec<usize> = (0..idx).filter(|&j| s % divs[j] == 0).collect();
            let separated_from = |j: usize| {
                certified
                    .iter()
                    .any(|&r| statuses[j][(r % divs[j]) as usize] == ResidueStatus::NotMember)
            };
            let coincides_with = |j: usize| {
                let sub = &statuses[j];
                all_decided
                    && sub.iter().all(|x| *x != ResidueStatus::Unknown)
                    && (0..s).all(|r| {
                        let here = matches!(st[r as usize], ResidueStatus::Member(_));
                        let below = matches!(sub[(r % divs[j]) as usize], ResidueStatus::Member(_));
                        here == below
                    })
            };

            let verdict = if certified.is_empty() && all_decided {
                EssentialVerdict::NotEssential
            } else if !certified.is_empty() && proper.iter().all(|&j| separated_from(j)) {
                EssentialVerdict::Essential
            } else if proper.iter().any(|&j| coincides_with(j)) {
                EssentialVerdict::NotEssential
            } else {
                EssentialVerdict::Unknown
            };
            PeriodEntry {
                s,
                per0,
                per1,
                status: st.clone(),
                verdict,
            }
        })
        .collect();

    PeriodCertificate {
        level,
        n: lvl.n,
        entries,
    }
}

/// Radius `M` such that `x` and `σ^n x` differ somewhere on `[0, M]`
/// whenever `s ∤ n`, for a word that is fully resolved at the top level.
///
/// Follows the separation argument: pick a position `a` in `Per_s` whose
/// class lies outside `Per_{s'}` for each proper divisor `s'`, take the
/// shortest `ν = x[a, a+N]` that already exhibits `Per^(ε)_s`, and let
/// `M` be the largest gap between occurrences of `ν` plus `N`.
/// Returns `None` if the top level has holes, `s ∤ n_T`, or no such `a` exists.
pub fn separation_radius(pair: &ViablePair, s: u64) -> Option<u64> {
    let top = pair.top();
    let n = top.n;
    if top.word.hole_count() > 0 || s == 0 || !n.is_multiple_of(s) {
        return None;
    }
    let syms = top.word.to_symbols();
    let st = residue_status(&syms, s);
    let proper: Vec<(u64, Vec<ResidueStatus>)> = divisors(s)
        .into_iter()
        .filter(|&d| d < s)
        .map(|d| (d, residue_status(&syms, d)))
        .collect();
    let a = (0..s).find(|&r| {
        matches!(st[r as usize], ResidueStatus::Member(_))
            && proper
                .iter()
                .all(|(d, sub)| sub[(r % d) as usize] == ResidueStatus::NotMember)
    })?;
    let eps = syms[a as usize];
    let at = |j: u64| syms[((a + j) % n) as usize];
    // N_i: first offset j ≡ i (mod s) with x(a + j) ≠ ε, for classes outside Per^ε_s.
    let mut big_n = 0u64;
    for i in 0..s {
        if st[((a + i) % s) as usize] == ResidueStatus::Member(eps) {
            continue;
        }
        let mut j = i;
        while at(j) == eps {
            j += s;
        }
        big_n = big_n.max(j);
    }
    let nu: Vec<Symbol> = (0..=big_n).map(at).collect();
    let occurrences: Vec<u64> = (0..n)
        .filter(|&c| (0..=big_n).all(|j| syms[((c + j) % n) as usize] == nu[j as usize]))
        .collect();
    let first = *occurrences.first()?;
    let mut gap = first + n - occurrences.last()?;
    for w in occurrences.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    Some(gap + big_n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn syms(s: &str) -> Vec<Symbol> {
        s.chars().map(|c| Symbol::from_char(c).unwrap()).collect()
    }

    #[test]
    fn per_residue_examples() {
        let w = syms("0101");
        assert_eq!(per_residues(&w, 0, 2, Symbol::Zero).to_vec(), vec![0]);
        assert_eq!(per_residues(&syms("000"), 0, 1, Symbol::Zero).to_vec(), vec![0]);
        assert!(per_residues(&syms("010"), 0, 1, Symbol::Zero).is_empty());
        assert_eq!(per_residues(&w, 0, 4, Symbol::One).to_vec(), vec![1, 3]);
        // offsets shift the residues
        assert_eq!(per_residues(&w, 1, 2, Symbol::Zero).to_vec(), vec![1]);
    }

    #[test]
    fn certificate_examples() {
        let p = ViablePair::from_words(&["01"]).unwrap();
        let c = essential_period_certificate(&p, 0);
        assert_eq!(c.essential_periods(), vec![2]);
        assert_eq!(c.entry(1).unwrap().verdict, EssentialVerdict::NotEssential);
        assert_eq!(c.entry(2).unwrap().per().len(), 2);

        let p = ViablePair::from_words(&["0"]).unwrap();
        assert_eq!(essential_period_certificate(&p, 0).essential_periods(), vec![1]);

        let p = ViablePair::from_words(&["?", "0?"]).unwrap();
        let c = essential_period_certificate(&p, 1);
        let e2 = c.entry(2).unwrap();
        assert_eq!(e2.per0.to_vec(), vec![0]);
        assert_eq!(e2.status(1), ResidueStatus::Unknown);
        assert_eq!(e2.verdict, EssentialVerdict::Unknown);
        assert!(c.has_unknown());
    }

    #[test]
    fn period_four_word() {
        // Per_2 = {0} already differs from Per_1 = ∅, so 2 is essential too
        let p = ViablePair::from_words(&["0001"]).unwrap();
        let c = essential_period_certificate(&p, 0);
        assert_eq!(c.essential_periods(), vec![2, 4]);
        // "0011" repeated twice has the same essential period
        let p = ViablePair::from_words(&["00110011"]).unwrap();
        assert_eq!(essential_period_certificate(&p, 0).essential_periods(), vec![4]);
    }

    #[test]
    fn divisor_list() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    fn word_strategy() -> impl Strategy<Value = String> {
        prop::collection::vec(prop_oneof![Just('0'), Just('1'), Just('?')], 1..25)
            .prop_map(|v| v.into_iter().collect())
    }

    proptest! {
        #[test]
        fn certificates_are_consistent(word in word_strategy()) {
            let pair = ViablePair::from_words(&[&word]).unwrap();
            let cert = essential_period_certificate(&pair, 0);
            let symbols = syms(&word);
            for e in &cert.entries {
                // Per_s is the union of the two ε-images and they are disjoint.
                prop_assert_eq!(e.per().len(), e.per0.len() + e.per1.len());
                // with no holes the certified sets are exactly per_residues
                if !word.contains('?') {
                    prop_assert_eq!(e.per0.to_vec(), per_residues(&symbols, 0, e.s, Symbol::Zero).to_vec());
                    prop_assert_eq!(e.per1.to_vec(), per_residues(&symbols, 0, e.s, Symbol::One).to_vec());
                }
                // divisor monotonicity: s' | s lifts members of Per_{s'} into Per_s
                for f in &cert.entries {
                    if e.s % f.s == 0 {
                        for r in f.per().iter() {
                            for lift in (r..e.s).step_by(f.s as usize) {
                                prop_assert!(e.per().contains(lift));
                            }
                        }
                    }
                }
            }
        }

        #[test]
        fn certified_periods_grow_with_resolution(word in word_strategy(), fill in prop::collection::vec(any::<bool>(), 25)) {
            let filled: String = word
                .chars()
                .enumerate()
                .map(|(i, c)| if c == '?' { if fill[i] { '1' } else { '0' } } else { c })
                .collect();
            let coarse = essential_period_certificate(&ViablePair::from_words(&[&word]).unwrap(), 0);
            let fine = essential_period_certificate(&ViablePair::from_words(&[&filled]).unwrap(), 0);
            for (c, f) in coarse.entries.iter().zip(&fine.entries) {
                prop_assert!(c.per0.is_subset(&f.per0));
                prop_assert!(c.per1.is_subset(&f.per1));
                if c.verdict == EssentialVerdict::Essential {
                    prop_assert_eq!(f.verdict, EssentialVerdict::Essential);
                }
            }
        }

        #[test]
        fn separation_holds_on_periodic_words(bits in prop::collection::vec(any::<bool>(), 1..24)) {
            let word: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
            let pair = ViablePair::from_words(&[&word]).unwrap();
            let n = pair.top().n as i128;
            let cert = essential_period_certificate(&pair, 0);
            for s in cert.essential_periods() {
                if let Some(m) = separation_radius(&pair, s) {
                    let m = m as i128;
                    for shift in 1..=n {
                        if shift % s as i128 == 0 {
                            continue;
                        }
                        let differs = (-m..=m).any(|j| pair.resolved_symbol(j) != pair.resolved_symbol(j + shift));
                        prop_assert!(differs, "word {} s={} shift={} M={}", word, s, shift, m);
                    }
                }
            }
        }
    }

    #[test]
    fn separation_radius_simple() {
        let p = ViablePair::from_words(&["01"]).unwrap();
        let m = separation_radius(&p, 2).unwrap();
        assert!(m >= 1);
        let p = ViablePair::from_words(&["?", "0?"]).unwrap();
        assert_eq!(separation_radius(&p, 2), None);
    }
}
