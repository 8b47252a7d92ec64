use std::fmt;

use crate::error::{Error, Result};

/// Integer polynomial, coefficients stored constant term first.
///
/// The coefficient vector is always trimmed, so the last entry is the
/// nonzero leading coefficient (the zero polynomial is the empty vector).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// `c * x^d`.
    pub fn monomial(c: i64, d: usize) -> Self {
        let mut coeffs = vec![0; d + 1];
        coeffs[d] = c;
        Self::new(coeffs)
    }

    pub fn identity() -> Self {
        Self::monomial(1, 1)
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading_coefficient(&self) -> i64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Absolute value of the leading coefficient.
    pub fn leading_magnitude(&self) -> u64 {
        self.leading_coefficient().unsigned_abs()
    }

    /// P(x) mod n in `[0, n)`, Horner with reduction at each step.
    pub fn eval_mod(&self, x: i128, n: u64) -> u64 {
        if n == 1 {
            return 0;
        }
        let n = n as i128;
        let x = x.rem_euclid(n);
        let mut acc: i128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = (acc * x + (c as i128).rem_euclid(n)) % n;
        }
        acc as u64
    }

    /// Exact value, `None` on overflow.
    pub fn eval_checked(&self, x: i128) -> Option<i128> {
        let mut acc: i128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(x)?.checked_add(c as i128)?;
        }
        Some(acc)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * i as i64)
            .collect();
        Self::new(coeffs)
    }

    pub fn negate(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    /// `P(x + k)`, expanded with binomial coefficients in checked arithmetic.
    pub fn shift(&self, k: i64) -> Result<Self> {
        let d = self.coeffs.len();
        let mut out = vec![0i128; d];
        for (i, &c) in self.coeffs.iter().enumerate() {
            // c * (x + k)^i = c * sum_j binom(i, j) k^(i-j) x^j
            let mut binom: i128 = 1;
            for j in (0..=i).rev() {
                let kp = (k as i128)
                    .checked_pow((i - j) as u32)
                    .ok_or(Error::Overflow("polynomial shift"))?;
                let term = (c as i128)
                    .checked_mul(binom)
                    .and_then(|v| v.checked_mul(kp))
                    .ok_or(Error::Overflow("polynomial shift"))?;
                out[j] = out[j]
                    .checked_add(term)
                    .ok_or(Error::Overflow("polynomial shift"))?;
                // binom(i, j-1) = binom(i, j) * j / (i - j + 1)
                if j > 0 {
                    binom = binom * j as i128 / (i - j + 1) as i128;
                }
            }
        }
        let coeffs = out
            .into_iter()
            .map(|v| i64::try_from(v).map_err(|_| Error::Overflow("polynomial shift")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }

    /// Canonical rendering with the given variable name.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0 { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&mag.to_string());
            } else if mag == 1 {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("m"))
    }
}
