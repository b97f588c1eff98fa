//! Recursive-descent parser for banded-operator expressions over the
//! atoms U, U*, I, i, and decimal scalars. Multiplication is
//! juxtaposition or an explicit "·"; "*" is always the adjoint
//! postfix; "^" takes a nonnegative integer power. Precedence is
//! power and adjoint, then product, then sum. Evaluation is exact
//! banded algebra, so a parsed expression IS its operator.

use num_complex::Complex64;
use posinorm::qtop::{
    qt_add, qt_adjoint, qt_from_symbol, qt_multiply, qt_power, qt_scale, QuasiToeplitzOperator,
};
use posinorm::{Error, Result};

/// Powers above this blow up the bandwidth without analytic value.
const MAX_POWER: u32 = 512;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Character offset into the expression, 0-based.
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "parse error at position {}: {}", self.position, self.message)
    }
}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Input(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Shift,
    Identity,
    ImagUnit,
    Number(f64),
    Plus,
    Minus,
    Dot,
    Star,
    Caret,
    LParen,
    RParen,
    Equals,
}

fn lex(text: &str) -> std::result::Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < chars.len() {
        let c = chars[pos];
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                pos += 1;
                continue;
            }
            'U' => Tok::Shift,
            'I' => Tok::Identity,
            'i' => Tok::ImagUnit,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '·' => Tok::Dot,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '=' => Tok::Equals,
            '0'..='9' => {
                let start = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos < chars.len() && chars[pos] == '.' {
                    pos += 1;
                    if pos >= chars.len() || !chars[pos].is_ascii_digit() {
                        return Err(ParseError::new(pos, "expected digits after decimal point"));
                    }
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                }
                let lit: String = chars[start..pos].iter().collect();
                let value: f64 = lit
                    .parse()
                    .map_err(|_| ParseError::new(start, format!("bad number literal '{lit}'")))?;
                out.push((start, Tok::Number(value)));
                continue;
            }
            other => {
                return Err(ParseError::new(pos, format!("unexpected character '{other}'")));
            }
        };
        out.push((pos, tok));
        pos += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    cursor: usize,
    end: usize,
}

type PResult<T> = std::result::Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.cursor).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks
            .get(self.cursor)
            .map(|(p, _)| *p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.cursor).map(|(_, t)| t.clone());
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn scalar(c: Complex64) -> QuasiToeplitzOperator {
        if c == Complex64::ZERO {
            QuasiToeplitzOperator::zero()
        } else {
            qt_from_symbol(&[(0, c)]).expect("nonzero scalar symbol")
        }
    }

    fn sum(&mut self) -> PResult<QuasiToeplitzOperator> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                negate = true;
            }
            Some(Tok::Plus) => {
                self.bump();
            }
            _ => {}
        }
        let mut acc = self.product()?;
        if negate {
            acc = qt_scale(Complex64::new(-1.0, 0.0), &acc);
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.product()?;
                    acc = qt_add(&acc, &rhs);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.product()?;
                    acc = qt_add(&acc, &qt_scale(Complex64::new(-1.0, 0.0), &rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> PResult<QuasiToeplitzOperator> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Dot) => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = qt_multiply(&acc, &rhs);
                }
                // Juxtaposition: a factor can start right away.
                Some(Tok::Shift | Tok::Identity | Tok::ImagUnit | Tok::Number(_) | Tok::LParen) => {
                    let rhs = self.factor()?;
                    acc = qt_multiply(&acc, &rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> PResult<QuasiToeplitzOperator> {
        let mut acc = self.primary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = qt_adjoint(&acc);
                }
                Some(Tok::Caret) => {
                    let caret_pos = self.pos();
                    self.bump();
                    let exp_pos = self.pos();
                    match self.bump() {
                        Some(Tok::Number(v)) => {
                            if v.fract() != 0.0 || v < 0.0 {
                                return Err(ParseError::new(
                                    exp_pos,
                                    "power must be a nonnegative integer",
                                ));
                            }
                            if v > f64::from(MAX_POWER) {
                                return Err(ParseError::new(
                                    exp_pos,
                                    format!("power exceeds the supported maximum {MAX_POWER}"),
                                ));
                            }
                            acc = qt_power(&acc, v as usize);
                        }
                        _ => {
                            return Err(ParseError::new(
                                caret_pos + 1,
                                "expected an integer exponent after '^'",
                            ))
                        }
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn primary(&mut self) -> PResult<QuasiToeplitzOperator> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Shift) => Ok(QuasiToeplitzOperator::shift()),
            Some(Tok::Identity) => Ok(QuasiToeplitzOperator::identity()),
            Some(Tok::ImagUnit) => Ok(Self::scalar(Complex64::new(0.0, 1.0))),
            Some(Tok::Number(v)) => Ok(Self::scalar(Complex64::new(v, 0.0))),
            Some(Tok::LParen) => {
                let inner = self.sum()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(ParseError::new(self.end, "unclosed parenthesis")),
                }
            }
            Some(other) => Err(ParseError::new(
                pos,
                format!("expected U, I, i, a number, or '(', found {other:?}"),
            )),
            None => Err(ParseError::new(pos, "unexpected end of expression")),
        }
    }
}

fn parser_for(text: &str) -> PResult<Parser> {
    let toks = lex(text)?;
    Ok(Parser {
        toks,
        cursor: 0,
        end: text.chars().count(),
    })
}

/// Parses a single operator expression.
pub fn parse_expression(text: &str) -> std::result::Result<QuasiToeplitzOperator, ParseError> {
    let mut p = parser_for(text)?;
    if p.peek().is_none() {
        return Err(ParseError::new(0, "empty expression"));
    }
    let op = p.sum()?;
    if let Some(t) = p.peek() {
        return Err(ParseError::new(p.pos(), format!("unexpected trailing {t:?}")));
    }
    Ok(op)
}

/// Parses "lhs = rhs" into the two operators.
pub fn parse_equation(
    text: &str,
) -> std::result::Result<(QuasiToeplitzOperator, QuasiToeplitzOperator), ParseError> {
    let mut p = parser_for(text)?;
    if p.peek().is_none() {
        return Err(ParseError::new(0, "empty equation"));
    }
    let lhs = p.sum()?;
    match p.bump() {
        Some(Tok::Equals) => {}
        _ => {
            return Err(ParseError::new(
                p.pos().min(p.end),
                "expected '=' between the two sides",
            ))
        }
    }
    let rhs = p.sum()?;
    if let Some(t) = p.peek() {
        return Err(ParseError::new(p.pos(), format!("unexpected trailing {t:?}")));
    }
    Ok((lhs, rhs))
}

/// Convenience for callers that treat parse failures as input errors.
pub fn expression_operator(text: &str) -> Result<QuasiToeplitzOperator> {
    parse_expression(text).map_err(Error::from)
}
