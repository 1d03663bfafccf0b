//! Integer-coefficient multilinear polynomials over binary variables,
//! with a small text parser.
//!
//! Text grammar (whitespace-insensitive):
//!
//! ```text
//! poly   := [sign] term { sign term }
//! sign   := '+' | '-'
//! term   := factor { '*' factor }
//! factor := INTEGER | 'x' DIGITS
//! ```
//!
//! Inputs must be multilinear: a variable may appear at most once per
//! term (`x0*x0` is rejected; reduce x² = x before parsing). Terms with
//! equal variable sets are merged and zero terms dropped, so the parsed
//! form is canonical.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One monomial: an integer coefficient times a product of distinct
/// binary variables. Empty `vars` is a constant term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    #[serde(rename = "c")]
    pub coeff: i64,
    pub vars: Vec<usize>,
}

impl Term {
    pub fn new(coeff: i64, vars: &[usize]) -> Self {
        let mut vars = vars.to_vec();
        vars.sort_unstable();
        Term { coeff, vars }
    }

    pub fn constant(coeff: i64) -> Self {
        Term {
            coeff,
            vars: Vec::new(),
        }
    }
}

/// Canonical term list of a multilinear polynomial over `num_vars`
/// binary variables x0..x{n-1}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialSpec {
    #[serde(rename = "n")]
    pub num_vars: usize,
    pub terms: Vec<Term>,
}

impl PolynomialSpec {
    /// Build from raw terms, canonicalizing: variables sorted within each
    /// term, terms sorted by variable set, equal variable sets merged,
    /// zero coefficients dropped.
    pub fn new(num_vars: usize, terms: Vec<Term>) -> Result<Self> {
        for term in &terms {
            for pair in term.vars.windows(2) {
                if pair[0] == pair[1] {
                    return Err(Error::InvalidArgument(format!(
                        "variable x{} repeated within one term; inputs must be multilinear",
                        pair[0]
                    )));
                }
            }
            if let Some(&v) = term.vars.last() {
                if v >= num_vars {
                    return Err(Error::InvalidArgument(format!(
                        "variable x{v} out of range for {num_vars} variables"
                    )));
                }
            }
        }
        Ok(PolynomialSpec {
            num_vars,
            terms: canonicalize(terms)?,
        })
    }

    pub fn constant(num_vars: usize, value: i64) -> Self {
        PolynomialSpec {
            num_vars,
            terms: canonicalize(vec![Term::constant(value)]).expect("single term cannot overflow"),
        }
    }

    /// Parse the text grammar. The variable count is inferred as the
    /// largest index plus one.
    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).parse()
    }

    /// JSON alternative to the text grammar:
    /// `{"n": int, "terms": [{"c": int, "vars": [int...]}]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PolynomialSpec =
            serde_json::from_str(text).map_err(|e| Error::parse(0, e.to_string()))?;
        let mut terms = raw.terms;
        for term in &mut terms {
            term.vars.sort_unstable();
        }
        Self::new(raw.num_vars, terms)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial serialization cannot fail")
    }

    /// Widen the variable count (new variables simply never appear).
    pub fn with_num_vars(mut self, num_vars: usize) -> Result<Self> {
        let needed = self.terms.iter().flat_map(|t| t.vars.iter()).max();
        if let Some(&v) = needed {
            if v >= num_vars {
                return Err(Error::InvalidArgument(format!(
                    "polynomial uses x{v}; cannot shrink to {num_vars} variables"
                )));
            }
        }
        self.num_vars = num_vars;
        Ok(self)
    }

    /// Classical evaluation; the reference oracle for everything built on
    /// top of the encoder. Accumulates in 128 bits and saturates to i64
    /// (only reachable with coefficients near the i64 limits, which no
    /// realizable register layout accepts anyway).
    pub fn evaluate_bits(&self, bits: &[bool]) -> i64 {
        assert_eq!(bits.len(), self.num_vars, "assignment length mismatch");
        self.terms
            .iter()
            .map(|t| {
                if t.vars.iter().all(|&v| bits[v]) {
                    t.coeff as i128
                } else {
                    0
                }
            })
            .sum::<i128>()
            .clamp(i64::MIN as i128, i64::MAX as i128) as i64
    }

    /// Evaluate at the assignment encoded by a key index, x0 being the
    /// most significant key bit.
    pub fn evaluate_key(&self, key: usize) -> i64 {
        let n = self.num_vars;
        self.terms
            .iter()
            .map(|t| {
                if t.vars.iter().all(|&v| (key >> (n - 1 - v)) & 1 == 1) {
                    t.coeff as i128
                } else {
                    0
                }
            })
            .sum::<i128>()
            .clamp(i64::MIN as i128, i64::MAX as i128) as i64
    }

    /// Cheap attainable-value bounds: each non-constant term contributes
    /// either 0 or its coefficient. Saturating at the i64 limits.
    pub fn value_bounds(&self) -> (i64, i64) {
        let mut min = 0i128;
        let mut max = 0i128;
        for t in &self.terms {
            if t.vars.is_empty() {
                min += t.coeff as i128;
                max += t.coeff as i128;
            } else if t.coeff < 0 {
                min += t.coeff as i128;
            } else {
                max += t.coeff as i128;
            }
        }
        (
            min.clamp(i64::MIN as i128, i64::MAX as i128) as i64,
            max.clamp(i64::MIN as i128, i64::MAX as i128) as i64,
        )
    }
}

impl fmt::Display for PolynomialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            let coeff = if i == 0 {
                if term.coeff < 0 {
                    write!(f, "-")?;
                }
                term.coeff.unsigned_abs()
            } else {
                write!(f, " {} ", if term.coeff < 0 { "-" } else { "+" })?;
                term.coeff.unsigned_abs()
            };
            if term.vars.is_empty() {
                write!(f, "{coeff}")?;
            } else {
                if coeff != 1 {
                    write!(f, "{coeff}*")?;
                }
                let vars: Vec<String> = term.vars.iter().map(|v| format!("x{v}")).collect();
                write!(f, "{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

fn canonicalize(mut terms: Vec<Term>) -> Result<Vec<Term>> {
    terms.sort_by(|a, b| a.vars.cmp(&b.vars));
    let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
    for term in terms {
        match merged.last_mut() {
            Some(last) if last.vars == term.vars => {
                last.coeff = last.coeff.checked_add(term.coeff).ok_or_else(|| {
                    Error::InvalidArgument("merged coefficient overflows 64 bits".into())
                })?;
            }
            _ => merged.push(term),
        }
    }
    merged.retain(|t| t.coeff != 0);
    Ok(merged)
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Token {
    Int(i64),
    Var(usize),
    Plus,
    Minus,
    Star,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn parse(mut self) -> Result<PolynomialSpec> {
        let mut terms = Vec::new();
        let mut num_vars = 0usize;
        let mut sign = match self.peek_token()? {
            Some(Token::Minus) => {
                self.next_token()?;
                -1i64
            }
            Some(Token::Plus) => {
                self.next_token()?;
                1
            }
            Some(_) => 1,
            None => return Err(Error::parse(self.pos, "empty polynomial")),
        };
        loop {
            let term = self.parse_term(sign)?;
            if let Some(&v) = term.vars.last() {
                num_vars = num_vars.max(v + 1);
            }
            terms.push(term);
            match self.next_token()? {
                None => break,
                Some(Token::Plus) => sign = 1,
                Some(Token::Minus) => sign = -1,
                Some(tok) => {
                    return Err(Error::parse(
                        self.pos,
                        format!("expected '+' or '-' between terms, found {tok:?}"),
                    ))
                }
            }
        }
        PolynomialSpec::new(num_vars, terms)
    }

    /// factor { '*' factor }, with the running sign folded into the
    /// coefficient.
    fn parse_term(&mut self, sign: i64) -> Result<Term> {
        let mut coeff = sign;
        let mut vars: Vec<usize> = Vec::new();
        loop {
            let factor_pos = self.pos;
            match self.next_token()? {
                Some(Token::Int(value)) => {
                    coeff = coeff
                        .checked_mul(value)
                        .ok_or_else(|| Error::parse(factor_pos, "coefficient overflows 64 bits"))?;
                }
                Some(Token::Var(index)) => {
                    if vars.contains(&index) {
                        return Err(Error::parse(
                            factor_pos,
                            format!(
                                "variable x{index} repeated within one term; inputs must be multilinear (reduce x² = x first)"
                            ),
                        ));
                    }
                    vars.push(index);
                }
                Some(tok) => {
                    return Err(Error::parse(
                        factor_pos,
                        format!("expected integer or variable, found {tok:?}"),
                    ))
                }
                None => return Err(Error::parse(factor_pos, "expected integer or variable")),
            }
            if self.peek_token()? == Some(Token::Star) {
                self.next_token()?;
            } else {
                return Ok(Term::new(coeff, &vars));
            }
        }
    }

    fn skip_whitespace(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek_token(&mut self) -> Result<Option<Token>> {
        let saved = self.pos;
        let tok = self.next_token()?;
        self.pos = saved;
        Ok(tok)
    }

    fn next_token(&mut self) -> Result<Option<Token>> {
        self.skip_whitespace();
        let Some(&byte) = self.src.get(self.pos) else {
            return Ok(None);
        };
        let start = self.pos;
        match byte {
            b'+' => {
                self.pos += 1;
                Ok(Some(Token::Plus))
            }
            b'-' => {
                self.pos += 1;
                Ok(Some(Token::Minus))
            }
            b'*' => {
                self.pos += 1;
                Ok(Some(Token::Star))
            }
            b'x' => {
                self.pos += 1;
                let digits = self.take_digits();
                if digits.is_empty() {
                    return Err(Error::parse(start, "expected digits after 'x'"));
                }
                let index: usize = digits
                    .parse()
                    .map_err(|_| Error::parse(start, "variable index too large"))?;
                Ok(Some(Token::Var(index)))
            }
            b'0'..=b'9' => {
                let digits = self.take_digits();
                let value: i64 = digits
                    .parse()
                    .map_err(|_| Error::parse(start, "integer literal overflows 64 bits"))?;
                Ok(Some(Token::Int(value)))
            }
            other => Err(Error::parse(
                start,
                format!("unexpected character {:?}", other as char),
            )),
        }
    }

    fn take_digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }
}
