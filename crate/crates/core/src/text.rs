//! The text form shared by reports and the CLI.
//!
//! ```text
//! element := "0" | ['-'] term { ('+' | '-') term }
//! term    := '(' kpoly ')' [ '*' factor { factor } ] | factor { factor }
//! factor  := 'F[' i ',' j ';' r ']'
//! ```
//!
//! A term whose coefficient is `±1` prints as its bare word; other integer
//! coefficients print their magnitude in parentheses after the sign; a
//! coefficient involving `K` is printed whole, e.g. `(-K - 2)*F[3,4;-1]`.
//! Vacuum vectors append `|0>`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::algebra::{merge_into, Element, Generator, Rank, Word};
use crate::error::{AlgebraError, Result};
use crate::kpoly::KPolynomial;

pub(crate) fn write_word(f: &mut impl fmt::Write, word: &[Generator]) -> fmt::Result {
    for g in word {
        write!(f, "{g}")?;
    }
    Ok(())
}

pub(crate) fn write_terms<'a>(
    f: &mut impl fmt::Write,
    terms: impl Iterator<Item = (&'a Word, &'a KPolynomial)>,
) -> fmt::Result {
    let mut first = true;
    for (word, c) in terms {
        let (negative, body_coeff): (bool, Option<String>) = match c.as_constant() {
            Some(v) => {
                let m = v.abs();
                (v.is_negative(), (!m.is_one() || word.is_empty()).then(|| m.to_string()))
            }
            None => (false, Some(c.to_string())),
        };
        match (first, negative) {
            (true, true) => f.write_str("-")?,
            (true, false) => {}
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
        }
        first = false;
        if let Some(coeff) = body_coeff {
            write!(f, "({coeff})")?;
            if !word.is_empty() {
                f.write_str("*")?;
            }
        }
        write_word(f, word)?;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    rank: Rank,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(AlgebraError::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.s[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            Ok(())
        } else {
            self.err(format!("expected '{token}'"))
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        match std::str::from_utf8(&self.s[start..self.pos]).ok().and_then(|t| t.parse().ok()) {
            Some(v) => Ok(v),
            None => {
                self.pos = start;
                self.err("expected an integer")
            }
        }
    }

    fn index(&mut self) -> Result<u32> {
        let at = self.pos;
        let v = self.integer()?;
        match u32::try_from(v) {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = at;
                self.err("index must be positive")
            }
        }
    }

    /// One factor, skew-normalized; `None` for `F[i,i;r]`.
    fn factor(&mut self) -> Result<Option<(i8, Generator)>> {
        self.expect("F[")?;
        let i = self.index()?;
        self.expect(",")?;
        let j = self.index()?;
        self.expect(";")?;
        let r = self.integer()?;
        self.expect("]")?;
        self.rank.check_index(i)?;
        self.rank.check_index(j)?;
        Ok(Generator::normalized(i, j, r))
    }

    fn term(&mut self) -> Result<(KPolynomial, Word)> {
        let mut coeff = KPolynomial::one();
        let mut word = Vec::new();
        let mut needs_factor = true;
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let close = match self.s[self.pos..].iter().position(|&c| c == b')') {
                Some(off) => self.pos + off,
                None => return self.err("unclosed '('"),
            };
            let text = std::str::from_utf8(&self.s[self.pos..close]).expect("ascii input");
            coeff = KPolynomial::parse(text).map_err(|e| match e {
                AlgebraError::Parse { position, message } => AlgebraError::Parse {
                    position: self.pos + position,
                    message,
                },
                other => other,
            })?;
            self.pos = close + 1;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                needs_factor = false;
            }
        }
        if needs_factor && self.peek() != Some(b'F') {
            return self.err("expected a factor");
        }
        while self.peek() == Some(b'F') {
            match self.factor()? {
                Some((sign, g)) => {
                    if sign < 0 {
                        coeff = -coeff;
                    }
                    word.push(g);
                }
                None => coeff = KPolynomial::zero(),
            }
        }
        Ok((coeff, word))
    }

    fn element(&mut self) -> Result<Element> {
        if self.s == b"0" {
            return Ok(Element::zero(self.rank));
        }
        let mut terms = std::collections::BTreeMap::new();
        let mut first = true;
        while self.pos < self.s.len() || first {
            let negative = match self.peek() {
                Some(b'-') => true,
                Some(b'+') => false,
                _ if first => {
                    first = false;
                    let (c, w) = self.term()?;
                    merge_into(&mut terms, w, c);
                    continue;
                }
                _ => return self.err("expected '+' or '-'"),
            };
            self.pos += 1;
            first = false;
            let (c, w) = self.term()?;
            let c = if negative { c.scale(&BigInt::from(-1)) } else { c };
            merge_into(&mut terms, w, c);
        }
        Ok(Element::from_map(self.rank, terms))
    }
}

impl Element {
    /// Parses the text form. Factors with `i > j` are skew-normalized and
    /// words are kept in the order written (call `canonicalize` afterwards
    /// if needed). Whitespace is ignored.
    pub fn parse(rank: Rank, text: &str) -> Result<Element> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if !compact.is_ascii() {
            return Err(AlgebraError::Parse {
                position: 0,
                message: "non-ASCII input".into(),
            });
        }
        let mut p = Parser {
            s: compact.as_bytes(),
            pos: 0,
            rank,
        };
        p.element()
    }
}
