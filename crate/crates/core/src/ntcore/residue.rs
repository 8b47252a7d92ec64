use std::fmt;

/// A subset of Z/nZ stored as a bitset over `[0, n)`.
#[derive(Clone, PartialEq, Eq)]
pub struct ResidueSet {
    modulus: u64,
    bits: Vec<u64>,
    len: u64,
}

impl ResidueSet {
    pub fn empty(modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        let words = modulus.div_ceil(64) as usize;
        Self {
            modulus,
            bits: vec![0; words],
            len: 0,
        }
    }

    pub fn full(modulus: u64) -> Self {
        let mut s = Self::empty(modulus);
        for r in 0..modulus {
            s.insert(r);
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = u64>>(modulus: u64, members: I) -> Self {
        let mut s = Self::empty(modulus);
        for r in members {
            s.insert(r % modulus);
        }
        s
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, r: u64) -> bool {
        r < self.modulus && self.bits[(r >> 6) as usize] >> (r & 63) & 1 == 1
    }

    /// Returns whether the residue was newly added.
    pub fn insert(&mut self, r: u64) -> bool {
        assert!(r < self.modulus, "residue {r} out of range for modulus {}", self.modulus);
        let w = &mut self.bits[(r >> 6) as usize];
        let mask = 1u64 << (r & 63);
        if *w & mask == 0 {
            *w |= mask;
            self.len += 1;
            true
        } else {
            false
        }
    }

    pub fn remove(&mut self, r: u64) -> bool {
        if r >= self.modulus {
            return false;
        }
        let w = &mut self.bits[(r >> 6) as usize];
        let mask = 1u64 << (r & 63);
        if *w & mask != 0 {
            *w &= !mask;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as u64;
                w &= w - 1;
                Some(i as u64 * 64 + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    /// Complement within `[0, n)`.
    pub fn complement(&self) -> Self {
        let mut out = Self::empty(self.modulus);
        for r in 0..self.modulus {
            if !self.contains(r) {
                out.insert(r);
            }
        }
        out
    }

    pub fn is_subset(&self, other: &ResidueSet) -> bool {
        self.modulus == other.modulus
            && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ResidueSet(mod {}, ", self.modulus)?;
        f.debug_set().entries(self.iter()).finish()?;
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinality_tracks_membership() {
        let mut s = ResidueSet::empty(130);
        assert!(s.insert(0));
        assert!(s.insert(129));
        assert!(!s.insert(129));
        assert!(s.insert(64));
        assert_eq!(s.len(), 3);
        assert_eq!(s.to_vec(), vec![0, 64, 129]);
        assert!(s.remove(64));
        assert!(!s.remove(64));
        assert_eq!(s.len(), 2);
        assert!(!s.contains(500));
        assert_eq!(s.complement().len(), 128);
        assert!(s.is_subset(&ResidueSet::full(130)));
    }
}
