//! Polynomials in the central element `K` with arbitrary-precision integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{AlgebraError, Result};

/// An element of `Z[K]`. Zero coefficients are never stored, so the zero
/// polynomial is the empty map and structural equality is ring equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KPolynomial {
    coefficients: BTreeMap<u32, BigInt>,
}

impl KPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// The central element `K` itself.
    pub fn k() -> Self {
        Self::monomial(1, 1)
    }

    /// `c * K^exponent`.
    pub fn monomial(c: impl Into<BigInt>, exponent: u32) -> Self {
        let c = c.into();
        let mut coefficients = BTreeMap::new();
        if !c.is_zero() {
            coefficients.insert(exponent, c);
        }
        Self { coefficients }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// Degree in `K`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coefficients.keys().next_back().copied()
    }

    /// The value of a constant polynomial (zero included).
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.coefficients.len() {
            0 => Some(BigInt::zero()),
            1 => self.coefficients.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn coefficient(&self, exponent: u32) -> BigInt {
        self.coefficients.get(&exponent).cloned().unwrap_or_default()
    }

    /// `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (u32, &BigInt)> {
        self.coefficients.iter().map(|(e, c)| (*e, c))
    }

    /// Evaluates at `K = value`.
    pub fn evaluate(&self, value: &BigInt) -> BigInt {
        // Horner from the top exponent down.
        let mut acc = BigInt::zero();
        let mut last = self.degree().unwrap_or(0);
        for (e, c) in self.coefficients.iter().rev() {
            for _ in *e..last {
                acc *= value;
            }
            acc += c;
            last = *e;
        }
        for _ in 0..last {
            acc *= value;
        }
        acc
    }

    /// The constant polynomial obtained by substituting `K = value`.
    pub fn substitute(&self, value: &BigInt) -> Self {
        Self::constant(self.evaluate(value))
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            coefficients: self
                .coefficients
                .iter()
                .map(|(e, c)| (*e, c * factor))
                .collect(),
        }
    }

    /// Divides every coefficient by `divisor`, failing unless the division is exact.
    pub fn exact_div(&self, divisor: &BigInt) -> Result<Self> {
        let mut coefficients = BTreeMap::new();
        for (e, c) in &self.coefficients {
            if divisor.is_zero() || !(c % divisor).is_zero() {
                return Err(AlgebraError::InexactDivision {
                    coefficient: c.to_string(),
                    divisor: divisor.to_string(),
                });
            }
            coefficients.insert(*e, c / divisor);
        }
        Ok(Self { coefficients })
    }

    fn add_term(&mut self, exponent: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coefficients.entry(exponent).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coefficients.remove(&exponent);
        }
    }

    /// Parses the expanded form produced by `Display`, e.g. `-K - 2` or `3*K^2 + K`.
    /// Whitespace is ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let s: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |position: usize, message: &str| AlgebraError::Parse {
            position,
            message: message.to_string(),
        };
        if s.is_empty() {
            return Err(err(0, "empty polynomial"));
        }
        let mut out = Self::zero();
        let mut pos = 0;
        while pos < s.len() {
            let mut negative = false;
            if s[pos] == '+' || s[pos] == '-' {
                negative = s[pos] == '-';
                pos += 1;
            } else if pos != 0 {
                return Err(err(pos, "expected '+' or '-'"));
            }
            let start = pos;
            while pos < s.len() && s[pos].is_ascii_digit() {
                pos += 1;
            }
            let mut c: BigInt = if pos > start {
                s[start..pos]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| err(start, "bad integer"))?
            } else {
                BigInt::one()
            };
            let mut exponent = 0;
            if pos < s.len() && (s[pos] == '*' || s[pos] == 'K') {
                if s[pos] == '*' {
                    if pos == start {
                        return Err(err(pos, "'*' without a coefficient"));
                    }
                    pos += 1;
                }
                if pos >= s.len() || s[pos] != 'K' {
                    return Err(err(pos, "expected 'K'"));
                }
                pos += 1;
                exponent = 1;
                if pos < s.len() && s[pos] == '^' {
                    pos += 1;
                    let es = pos;
                    while pos < s.len() && s[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    exponent = s[es..pos]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| err(es, "bad exponent"))?;
                }
            } else if pos == start {
                return Err(err(pos, "expected a term"));
            }
            if negative {
                c = -c;
            }
            out.add_term(exponent, c);
        }
        Ok(out)
    }
}

impl From<i64> for KPolynomial {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl From<BigInt> for KPolynomial {
    fn from(c: BigInt) -> Self {
        Self::constant(c)
    }
}

impl AddAssign<&KPolynomial> for KPolynomial {
    fn add_assign(&mut self, rhs: &KPolynomial) {
        for (e, c) in &rhs.coefficients {
            self.add_term(*e, c.clone());
        }
    }
}

impl Add<&KPolynomial> for &KPolynomial {
    type Output = KPolynomial;
    fn add(self, rhs: &KPolynomial) -> KPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&KPolynomial> for &KPolynomial {
    type Output = KPolynomial;
    fn sub(self, rhs: &KPolynomial) -> KPolynomial {
        let mut out = self.clone();
        out += &-rhs;
        out
    }
}

impl Neg for &KPolynomial {
    type Output = KPolynomial;
    fn neg(self) -> KPolynomial {
        KPolynomial {
            coefficients: self.coefficients.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for KPolynomial {
    type Output = KPolynomial;
    fn neg(self) -> KPolynomial {
        -&self
    }
}

impl Mul<&KPolynomial> for &KPolynomial {
    type Output = KPolynomial;
    fn mul(self, rhs: &KPolynomial) -> KPolynomial {
        // Constant factors dominate in practice.
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        let mut out = KPolynomial::zero();
        for (ea, ca) in &self.coefficients {
            for (eb, cb) in &rhs.coefficients {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for KPolynomial {
    /// Expanded form, highest power of `K` first: `-K - 2`, `3*K^2 + K`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.coefficients.iter().rev().enumerate() {
            let magnitude = c.abs();
            match (idx, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match *e {
                0 => write!(f, "{magnitude}")?,
                _ => {
                    if !magnitude.is_one() {
                        write!(f, "{magnitude}*")?;
                    }
                    f.write_str("K")?;
                    if *e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_matches_expanded_form() {
        let p = &(-&KPolynomial::k()) - &KPolynomial::constant(2);
        assert_eq!(p.to_string(), "-K - 2");
        let q = &KPolynomial::monomial(3, 2) + &KPolynomial::k();
        assert_eq!(q.to_string(), "3*K^2 + K");
        assert_eq!(KPolynomial::zero().to_string(), "0");
        assert_eq!(KPolynomial::constant(-7).to_string(), "-7");
    }

    #[test]
    fn parse_inverts_display() {
        for text in ["-K - 2", "3*K^2 + K", "0", "-7", "K^3 - 12*K + 1"] {
            assert_eq!(KPolynomial::parse(text).unwrap().to_string(), text);
        }
        assert_eq!(KPolynomial::parse("2K").unwrap(), KPolynomial::monomial(2, 1));
        assert!(KPolynomial::parse("").is_err());
        assert!(KPolynomial::parse("K K").is_err());
        assert!(KPolynomial::parse("*K").is_err());
    }

    #[test]
    fn arithmetic_is_exact() {
        // (K + 2)(K - 2) = K^2 - 4
        let a = &KPolynomial::k() + &KPolynomial::constant(2);
        let b = &KPolynomial::k() - &KPolynomial::constant(2);
        assert_eq!((&a * &b).to_string(), "K^2 - 4");
        assert!((&a - &a).is_zero());
        let big = KPolynomial::constant(BigInt::from(10).pow(40));
        assert_eq!((&big * &big).as_constant().unwrap(), BigInt::from(10).pow(80));
    }

    #[test]
    fn evaluation_and_division() {
        let p = KPolynomial::parse("K^2 - 3*K + 5").unwrap();
        assert_eq!(p.evaluate(&BigInt::from(-2)), BigInt::from(15));
        assert_eq!(KPolynomial::parse("K^3").unwrap().evaluate(&BigInt::from(2)), BigInt::from(8));
        let q = KPolynomial::parse("6*K - 12").unwrap();
        assert_eq!(q.exact_div(&BigInt::from(6)).unwrap().to_string(), "K - 2");
        assert!(q.exact_div(&BigInt::from(5)).is_err());
    }
}
