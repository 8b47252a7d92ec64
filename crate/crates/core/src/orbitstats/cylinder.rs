use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::words::freq::MAX_RADIUS;

pub type Rational = Ratio<i128>;

/// A function of the window `y(−C) … y(C)`, given as a table over all
/// `2^{2C+1}` fully resolved windows. Table index = window code with
/// `y(−C)` as the most significant bit.
///
/// Values are stored as integer numerators over one common denominator so
/// that sums can be accumulated in integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderFunction {
    radius: u32,
    numers: Vec<i128>,
    denom: i128,
}

impl CylinderFunction {
    pub fn new(radius: u32, values: Vec<Rational>) -> Result<Self> {
        if radius > MAX_RADIUS {
            return Err(Error::InvalidInput(format!("cylinder radius {radius} above {MAX_RADIUS}")));
        }
        let len = 1usize << (2 * radius + 1);
        if values.len() != len {
            return Err(Error::InvalidInput(format!(
                "cylinder of radius {radius} needs {len} table entries, got {}",
                values.len()
            )));
        }
        let denom = values.iter().fold(1i128, |acc, v| acc.lcm(v.denom()));
        let numers = values.iter().map(|v| v.numer() * (denom / v.denom())).collect();
        Ok(Self { radius, numers, denom })
    }

    /// Builds the table from a function of the window bits `[y(−C), …, y(C)]`.
    pub fn from_fn(radius: u32, f: impl Fn(&[u8]) -> Rational) -> Result<Self> {
        if radius > MAX_RADIUS {
            return Err(Error::InvalidInput(format!("cylinder radius {radius} above {MAX_RADIUS}")));
        }
        let width = 2 * radius + 1;
        let values = (0..1u32 << width)
            .map(|code| {
                let bits: Vec<u8> = (0..width).rev().map(|b| ((code >> b) & 1) as u8).collect();
                f(&bits)
            })
            .collect();
        Self::new(radius, values)
    }

    /// `G(y) = (−1)^{y(0)}`.
    pub fn g() -> Self {
        Self { radius: 0, numers: vec![1, -1], denom: 1 }
    }

    /// Indicator of `y(0) = bit`.
    pub fn indicator(bit: u8) -> Self {
        let numers = if bit == 0 { vec![1, 0] } else { vec![0, 1] };
        Self { radius: 0, numers, denom: 1 }
    }

    /// Indicator of the centred block `y(−C) … y(C) = block`; the block
    /// length must be odd.
    pub fn block_indicator(block: &[u8]) -> Result<Self> {
        if block.len().is_multiple_of(2) || block.iter().any(|&b| b > 1) {
            return Err(Error::InvalidInput("block must be an odd-length 0/1 word".into()));
        }
        let radius = (block.len() / 2) as u32;
        Self::from_fn(radius, |w| Rational::from_integer((w == block) as i128))
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn table_len(&self) -> usize {
        self.numers.len()
    }

    #[inline]
    pub fn numer(&self, code: u32) -> i128 {
        self.numers[code as usize]
    }

    pub fn denom(&self) -> i128 {
        self.denom
    }

    pub fn value(&self, code: u32) -> Rational {
        Rational::new(self.numers[code as usize], self.denom)
    }

    pub fn min_numer(&self) -> i128 {
        *self.numers.iter().min().expect("non-empty table")
    }

    pub fn max_numer(&self) -> i128 {
        *self.numers.iter().max().expect("non-empty table")
    }

    pub fn min(&self) -> Rational {
        Rational::new(self.min_numer(), self.denom)
    }

    pub fn max(&self) -> Rational {
        Rational::new(self.max_numer(), self.denom)
    }

    /// `sup |F|`.
    pub fn sup_abs(&self) -> Rational {
        let m = self.min_numer().abs().max(self.max_numer().abs());
        Rational::new(m, self.denom)
    }
}

/// Exact interval for a quantity some of whose inputs are still holes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalValue {
    pub low: Rational,
    pub high: Rational,
    /// Samples whose window was fully resolved.
    pub resolved: u64,
    /// Samples whose window touched a hole.
    pub unresolved: u64,
}

impl IntervalValue {
    pub fn point(v: Rational) -> Self {
        Self { low: v, high: v, resolved: 1, unresolved: 0 }
    }

    pub fn is_point(&self) -> bool {
        self.low == self.high
    }

    pub fn width(&self) -> Rational {
        self.high - self.low
    }

    /// Largest `|a − b|` with `a` in `self` and `b` in `other`.
    pub fn worst_gap(&self, other: &IntervalValue) -> Rational {
        (self.high - other.low).abs().max((other.high - self.low).abs())
    }

    /// Distance between the two intervals (zero when they overlap).
    pub fn distance(&self, other: &IntervalValue) -> Rational {
        let zero = Rational::from_integer(0);
        (self.low - other.high).max(other.low - self.high).max(zero)
    }

    /// Smallest `|v|` over the interval.
    pub fn min_abs(&self) -> Rational {
        let zero = Rational::from_integer(0);
        if self.low > zero {
            self.low
        } else if self.high < zero {
            -self.high
        } else {
            zero
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_table() {
        let g = CylinderFunction::g();
        assert_eq!(g.value(0), Rational::from_integer(1));
        assert_eq!(g.value(1), Rational::from_integer(-1));
        assert_eq!(g.table_len(), 2);
    }

    #[test]
    fn common_denominator() {
        let f = CylinderFunction::new(0, vec![Rational::new(1, 2), Rational::new(-1, 3)]).unwrap();
        assert_eq!(f.denom(), 6);
        assert_eq!(f.value(0), Rational::new(1, 2));
        assert_eq!(f.value(1), Rational::new(-1, 3));
        assert_eq!(f.min(), Rational::new(-1, 3));
    }

    #[test]
    fn block_indicator_is_centred() {
        let f = CylinderFunction::block_indicator(&[0, 1, 1]).unwrap();
        assert_eq!(f.radius(), 1);
        assert_eq!(f.value(0b011), Rational::from_integer(1));
        assert_eq!(f.value(0b110), Rational::from_integer(0));
        assert!(CylinderFunction::block_indicator(&[0, 1]).is_err());
    }

    #[test]
    fn table_size_checked() {
        assert!(CylinderFunction::new(1, vec![Rational::from_integer(0); 4]).is_err());
    }

    #[test]
    fn interval_helpers() {
        let a = IntervalValue { low: Rational::new(-1, 2), high: Rational::new(1, 2), resolved: 1, unresolved: 1 };
        let b = IntervalValue::point(Rational::from_integer(1));
        assert_eq!(a.worst_gap(&b), Rational::new(3, 2));
        assert_eq!(a.distance(&b), Rational::new(1, 2));
        assert_eq!(a.min_abs(), Rational::from_integer(0));
    }
}
