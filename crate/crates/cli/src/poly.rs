//! Text form of integer polynomials: integer coefficients, one variable
//! (`m` or `x`), `+ - * ^` and non-negative integer exponents.
//!
//! ```text
//! expr   := sign? term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' UINT)?
//! atom   := UINT | 'm' | 'x'
//! ```

use thiserror::Error;
use toeplitz_core::ntcore::IntPolynomial;

/// Largest exponent accepted, to keep coefficient vectors small.
const MAX_DEGREE: u64 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    /// `column` is 1-based.
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("non-integer coefficient at column {column}")]
    NonInteger { column: usize },
    #[error("coefficient overflow at column {column}")]
    Overflow { column: usize },
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    idx: usize,
    src: &'a str,
    var: Option<char>,
}

type Coeffs = Vec<i128>;

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.chars.get(self.idx).is_some_and(|(_, c)| c.is_whitespace()) {
            self.idx += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.idx).map(|&(_, c)| c)
    }

    fn column(&self) -> usize {
        let byte = self.chars.get(self.idx).map_or(self.src.len(), |&(b, _)| b);
        self.src[..byte].chars().count() + 1
    }

    fn syntax(&self, message: impl Into<String>) -> PolyError {
        PolyError::Syntax { column: self.column(), message: message.into() }
    }

    fn uint(&mut self) -> Result<u128, PolyError> {
        self.skip_ws();
        let column = self.column();
        let start = self.idx;
        while self.chars.get(self.idx).is_some_and(|(_, c)| c.is_ascii_digit()) {
            self.idx += 1;
        }
        if start == self.idx {
            return Err(self.syntax("expected an integer"));
        }
        if self.chars.get(self.idx).is_some_and(|&(_, c)| c == '.' || c == '/') {
            return Err(PolyError::NonInteger { column });
        }
        let digits: String = self.chars[start..self.idx].iter().map(|&(_, c)| c).collect();
        digits.parse::<u128>().map_err(|_| PolyError::Overflow { column })
    }

    fn atom(&mut self) -> Result<Coeffs, PolyError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let column = self.column();
                let v = self.uint()?;
                let v = i128::try_from(v).map_err(|_| PolyError::Overflow { column })?;
                Ok(vec![v])
            }
            Some(c @ ('m' | 'x')) => {
                if self.var.is_some_and(|v| v != c) {
                    return Err(self.syntax("mixing the variables m and x"));
                }
                self.var = Some(c);
                self.idx += 1;
                Ok(vec![0, 1])
            }
            Some('.') => Err(PolyError::NonInteger { column: self.column() }),
            Some(c) => Err(self.syntax(format!("unexpected '{c}'"))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn factor(&mut self) -> Result<Coeffs, PolyError> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.idx += 1;
        if self.peek().is_some_and(|c| !c.is_ascii_digit()) {
            return Err(self.syntax("exponent must be a plain non-negative integer"));
        }
        let column = self.column();
        let e = self.uint()?;
        if e > MAX_DEGREE as u128 {
            return Err(PolyError::Syntax { column, message: format!("exponent above {MAX_DEGREE}") });
        }
        let mut out = vec![1i128];
        for _ in 0..e {
            out = mul(&out, &base).ok_or(PolyError::Overflow { column })?;
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<Coeffs, PolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.idx += 1;
            let column = self.column();
            let f = self.factor()?;
            acc = mul(&acc, &f).ok_or(PolyError::Overflow { column })?;
        }
        Ok(acc)
    }

    fn expr(&mut self) -> Result<Coeffs, PolyError> {
        let mut sign = 1i128;
        if let Some(c @ ('+' | '-')) = self.peek() {
            self.idx += 1;
            if c == '-' {
                sign = -1;
            }
        }
        let mut acc = Coeffs::new();
        loop {
            let column = self.column();
            let t = self.term()?;
            acc = add(&acc, &t, sign).ok_or(PolyError::Overflow { column })?;
            match self.peek() {
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                None => return Ok(acc),
                Some(c) => return Err(self.syntax(format!("unexpected '{c}'"))),
            }
            self.idx += 1;
        }
    }
}

fn mul(a: &[i128], b: &[i128]) -> Option<Coeffs> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = out[i + j].checked_add(x.checked_mul(y)?)?;
        }
    }
    Some(out)
}

fn add(a: &[i128], b: &[i128], sign: i128) -> Option<Coeffs> {
    let mut out = vec![0i128; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = x.checked_add(y.checked_mul(sign)?)?;
    }
    Some(out)
}

/// Parses e.g. `"m^2"` or `"3*m^3 - m + 7"` into a coefficient vector.
pub fn parse_polynomial(text: &str) -> Result<IntPolynomial, PolyError> {
    let mut p = Parser { chars: text.char_indices().collect(), idx: 0, src: text, var: None };
    let coeffs = p.expr()?;
    let coeffs = coeffs
        .into_iter()
        .map(|c| i64::try_from(c).map_err(|_| PolyError::Overflow { column: 1 }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntPolynomial::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_forms() {
        assert_eq!(parse_polynomial("m^2").unwrap().coefficients(), &[0, 0, 1]);
        assert_eq!(parse_polynomial("3*m^3 - m + 7").unwrap().coefficients(), &[7, -1, 0, 3]);
        assert_eq!(parse_polynomial(" - x ^ 3 ").unwrap().coefficients(), &[0, 0, 0, -1]);
        assert_eq!(parse_polynomial("2*3*m*m + 2^3").unwrap().coefficients(), &[8, 0, 6]);
        assert_eq!(parse_polynomial("m - m").unwrap().coefficients(), &[] as &[i64]);
        assert_eq!(parse_polynomial("m^0").unwrap().coefficients(), &[1]);
    }

    #[test]
    fn parenthesised_exponent_rejected() {
        assert_eq!(
            parse_polynomial("m^(2)"),
            Err(PolyError::Syntax { column: 3, message: "exponent must be a plain non-negative integer".into() })
        );
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse_polynomial("1.5*m"), Err(PolyError::NonInteger { column: 1 })));
        assert!(matches!(parse_polynomial("m + "), Err(PolyError::Syntax { column: 5, .. })));
        assert!(matches!(parse_polynomial("m x"), Err(PolyError::Syntax { column: 3, .. })));
        assert!(matches!(parse_polynomial("m + x"), Err(PolyError::Syntax { column: 5, .. })));
        assert!(matches!(parse_polynomial("3 m"), Err(PolyError::Syntax { column: 3, .. })));
        assert!(matches!(parse_polynomial("99999999999999999999*m"), Err(PolyError::Overflow { .. })));
        assert!(matches!(parse_polynomial(""), Err(PolyError::Syntax { column: 1, .. })));
    }
}
