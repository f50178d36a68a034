use std::fmt;

use crate::scalar::Scalar;

/// A polynomial whose terms do not share one degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("terms of different degrees")]
pub struct MixedDegrees;

/// A noncommutative polynomial: a sum of scalar multiples of words in the
/// generators (generator indices, left to right).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcPolynomial<S> {
    pub terms: Vec<(S, Vec<usize>)>,
}

impl<S: Scalar> NcPolynomial<S> {
    pub fn zero() -> Self {
        NcPolynomial { terms: Vec::new() }
    }

    pub fn monomial(c: S, word: Vec<usize>) -> Self {
        let mut p = NcPolynomial { terms: vec![(c, word)] };
        p.normalize();
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merges repeated words, drops zero terms and sorts by word.
    pub fn normalize(&mut self) {
        let mut terms = std::mem::take(&mut self.terms);
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        for (c, w) in terms {
            match self.terms.last_mut() {
                Some((d, v)) if *v == w => *d += c,
                _ => self.terms.push((c, w)),
            }
        }
        self.terms.retain(|(c, _)| !c.is_zero());
    }

    /// Degrees of the terms, given the generator degrees.
    pub fn term_degrees<'a>(&'a self, degrees: &'a [usize]) -> impl Iterator<Item = usize> + 'a {
        self.terms.iter().map(move |(_, w)| w.iter().map(|&g| degrees[g]).sum())
    }

    /// The common degree of all terms, `Ok(None)` for zero.
    pub fn homogeneous_degree(&self, degrees: &[usize]) -> Result<Option<usize>, MixedDegrees> {
        let mut it = self.term_degrees(degrees);
        let Some(first) = it.next() else { return Ok(None) };
        if it.all(|d| d == first) {
            Ok(Some(first))
        } else {
            Err(MixedDegrees)
        }
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a, S> {
        PolyDisplay { poly: self, names }
    }
}

/// Renders a polynomial in the surface syntax accepted by [`parse_poly`].
pub struct PolyDisplay<'a, S> {
    poly: &'a NcPolynomial<S>,
    names: &'a [String],
}

impl<S: Scalar> fmt::Display for PolyDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (c, w)) in self.poly.terms.iter().enumerate() {
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, text.as_str()),
            };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag != "1" {
                write!(f, "{mag}*")?;
            }
            let word: Vec<&str> = w.iter().map(|&g| self.names[g].as_str()).collect();
            write!(f, "{}", word.join("*"))?;
        }
        Ok(())
    }
}

/// Error from [`parse_poly`]; `col` is a 1-based character column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyParseError {
    pub col: usize,
    pub kind: PolyParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyParseErrorKind {
    Syntax(String),
    UnknownGenerator(String),
    BadScalar(String),
}

impl fmt::Display for PolyParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PolyParseErrorKind::Syntax(m) => write!(f, "column {}: {m}", self.col),
            PolyParseErrorKind::UnknownGenerator(g) => write!(f, "column {}: unknown generator `{g}`", self.col),
            PolyParseErrorKind::BadScalar(m) => write!(f, "column {}: {m}", self.col),
        }
    }
}

impl std::error::Error for PolyParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, PolyParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push((col, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((col, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((col, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((col, Tok::Slash));
                i += 1;
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v = s.parse::<i64>().map_err(|_| PolyParseError {
                    col,
                    kind: PolyParseErrorKind::BadScalar(format!("integer `{s}` out of range")),
                })?;
                out.push((col, Tok::Int(v)));
            }
            a if a.is_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                out.push((col, Tok::Ident(chars[start..i].iter().collect())));
            }
            other => {
                return Err(PolyParseError { col, kind: PolyParseErrorKind::Syntax(format!("unexpected `{other}`")) })
            }
        }
    }
    Ok(out)
}

/// Parses `poly := term (('+'|'-') term)*`, `term := [scalar '*'] gen ('*' gen)*`,
/// `scalar := int | int '/' int`. A leading sign is allowed, and so is the
/// literal `0` for the zero polynomial.
pub fn parse_poly<S: Scalar>(text: &str, names: &[String]) -> Result<NcPolynomial<S>, PolyParseError> {
    let toks = lex(text)?;
    let end_col = text.chars().count() + 1;
    if toks.len() == 1 && toks[0].1 == Tok::Int(0) {
        return Ok(NcPolynomial::zero());
    }
    let mut pos = 0;
    let peek = |pos: usize| toks.get(pos).map(|(c, t)| (*c, t));
    let syntax = |col: usize, m: &str| PolyParseError { col, kind: PolyParseErrorKind::Syntax(m.to_string()) };
    let mut terms = Vec::new();
    let mut sign = 1i64;
    if let Some((_, Tok::Minus)) = peek(pos) {
        sign = -1;
        pos += 1;
    } else if let Some((_, Tok::Plus)) = peek(pos) {
        pos += 1;
    }
    loop {
        let mut coeff = S::from_i64(sign);
        if let Some((col, Tok::Int(n))) = peek(pos) {
            let n = *n;
            pos += 1;
            let mut den = 1i64;
            if let Some((_, Tok::Slash)) = peek(pos) {
                pos += 1;
                match peek(pos) {
                    Some((_, Tok::Int(d))) => {
                        den = *d;
                        pos += 1;
                    }
                    Some((c, _)) => return Err(syntax(c, "expected denominator")),
                    None => return Err(syntax(end_col, "expected denominator")),
                }
            }
            let value = S::from_ratio(n, den).ok_or(PolyParseError {
                col,
                kind: PolyParseErrorKind::BadScalar(format!("`{n}/{den}` is not a field element")),
            })?;
            coeff *= value;
            match peek(pos) {
                Some((_, Tok::Star)) => pos += 1,
                Some((c, _)) => return Err(syntax(c, "expected `*` after scalar")),
                None => return Err(syntax(end_col, "a term needs at least one generator")),
            }
        }
        let mut word = Vec::new();
        loop {
            match peek(pos) {
                Some((col, Tok::Ident(name))) => {
                    let g = names.iter().position(|n| n == name).ok_or(PolyParseError {
                        col,
                        kind: PolyParseErrorKind::UnknownGenerator(name.clone()),
                    })?;
                    word.push(g);
                    pos += 1;
                }
                Some((c, _)) => return Err(syntax(c, "expected a generator name")),
                None => return Err(syntax(end_col, "expected a generator name")),
            }
            match peek(pos) {
                Some((_, Tok::Star)) => pos += 1,
                _ => break,
            }
        }
        terms.push((coeff, word));
        match peek(pos) {
            None => break,
            Some((_, Tok::Plus)) => sign = 1,
            Some((_, Tok::Minus)) => sign = -1,
            Some((c, _)) => return Err(syntax(c, "expected `+` or `-`")),
        }
        pos += 1;
    }
    let mut p = NcPolynomial { terms };
    p.normalize();
    Ok(p)
}
