//! Expression grammar shared by the command line and the presentation files.
//!
//! ```text
//! sum     := ['-'] tensor (('+' | '-') tensor)*
//! tensor  := product ('(x)' product)*
//! product := power ('*' power)*
//! power   := atom ['^' INT]
//! atom    := INT ['/' INT] | IDENT | '(' sum ')'
//! ```
//!
//! `q`, `i` and `zeta` are scalar constants; every other identifier must name a
//! generator of the chosen presentation. The three characters `(x)` always lex as
//! the tensor separator, so a parenthesized generator named `x` needs spaces.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::engine::{Element, Presentation, Word};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("parse error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unknown generator `{name}` at column {column} for algebra {algebra}")]
    UnknownGenerator {
        name: String,
        column: usize,
        algebra: String,
    },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScalarLit {
    Int(BigInt),
    Frac(BigInt, BigInt),
    Q,
    I,
    Zeta,
}

impl ScalarLit {
    pub fn value(&self) -> Result<Scalar, ParseError> {
        Ok(match self {
            ScalarLit::Int(n) => Scalar::from_rational(BigRational::from_integer(n.clone())),
            ScalarLit::Frac(n, d) => {
                if d.is_zero() {
                    return Err(ParseError::Invalid("zero denominator".into()));
                }
                Scalar::from_rational(BigRational::new(n.clone(), d.clone()))
            }
            ScalarLit::Q => Scalar::q(),
            ScalarLit::I => Scalar::i(),
            ScalarLit::Zeta => Scalar::zeta(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprAst {
    Scalar(ScalarLit),
    Gen(String),
    Product(Vec<ExprAst>),
    Sum(Vec<(Sign, ExprAst)>),
    Pow(Box<ExprAst>, u32),
    Tensor(Vec<ExprAst>),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Tensor,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Tensor => f.write_str("`(x)`"),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = k + 1;
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let s: String = chars[k..]
                .iter()
                .take_while(|c| c.is_ascii_digit())
                .collect();
            k += s.len();
            out.push((Tok::Int(s.parse().expect("digits")), col));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let s: String = chars[k..]
                .iter()
                .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                .collect();
            k += s.len();
            out.push((Tok::Ident(s), col));
            continue;
        }
        if c == '(' && chars.get(k + 1) == Some(&'x') && chars.get(k + 2) == Some(&')') {
            out.push((Tok::Tensor, col));
            k += 3;
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                return Err(ParseError::Syntax {
                    column: col,
                    message: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push((t, col));
        k += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
    p: &'a Presentation,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn err<T>(&self, message: &str) -> Result<T, ParseError> {
        let found = match self.peek() {
            None => "end of input".to_string(),
            Some(t) => t.to_string(),
        };
        Err(ParseError::Syntax {
            column: self.col(),
            message: format!("{message}, found {found}"),
        })
    }

    fn sum(&mut self) -> Result<ExprAst, ParseError> {
        let mut terms = Vec::new();
        let mut sign = Sign::Plus;
        let mut explicit = false;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            sign = Sign::Minus;
            explicit = true;
        }
        terms.push((sign, self.tensor()?));
        loop {
            let s = match self.peek() {
                Some(Tok::Plus) => Sign::Plus,
                Some(Tok::Minus) => Sign::Minus,
                _ => break,
            };
            self.pos += 1;
            terms.push((s, self.tensor()?));
        }
        if terms.len() == 1 && !explicit {
            return Ok(terms.pop().unwrap().1);
        }
        Ok(ExprAst::Sum(terms))
    }

    fn tensor(&mut self) -> Result<ExprAst, ParseError> {
        let mut fs = vec![self.product()?];
        while self.peek() == Some(&Tok::Tensor) {
            self.pos += 1;
            fs.push(self.product()?);
        }
        Ok(if fs.len() == 1 {
            fs.pop().unwrap()
        } else {
            ExprAst::Tensor(fs)
        })
    }

    fn product(&mut self) -> Result<ExprAst, ParseError> {
        let mut fs = vec![self.power()?];
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            fs.push(self.power()?);
        }
        Ok(if fs.len() == 1 {
            fs.pop().unwrap()
        } else {
            ExprAst::Product(fs)
        })
    }

    fn power(&mut self) -> Result<ExprAst, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek() {
            Some(Tok::Int(n)) => {
                let Ok(e) = u32::try_from(n.clone()) else {
                    return self.err("exponent too large");
                };
                self.pos += 1;
                Ok(ExprAst::Pow(Box::new(base), e))
            }
            _ => self.err("expected a nonnegative integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<ExprAst, ParseError> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) => {
                            if d.is_zero() {
                                return self.err("zero denominator");
                            }
                            self.pos += 1;
                            Ok(ExprAst::Scalar(ScalarLit::Frac(n, d)))
                        }
                        _ => self.err("expected a denominator"),
                    }
                } else {
                    Ok(ExprAst::Scalar(ScalarLit::Int(n)))
                }
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(match s.as_str() {
                    "q" => ExprAst::Scalar(ScalarLit::Q),
                    "i" => ExprAst::Scalar(ScalarLit::I),
                    "zeta" => ExprAst::Scalar(ScalarLit::Zeta),
                    _ => {
                        if self.p.index_of(&s).is_err() {
                            return Err(ParseError::UnknownGenerator {
                                name: s,
                                column: col,
                                algebra: self.p.name().to_string(),
                            });
                        }
                        ExprAst::Gen(s)
                    }
                })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            _ => self.err("expected a number, symbol or `(`"),
        }
    }
}

pub fn parse(input: &str, p: &Presentation) -> Result<ExprAst, ParseError> {
    let toks = lex(input)?;
    if toks.is_empty() {
        return Err(ParseError::Syntax {
            column: 1,
            message: "empty input".into(),
        });
    }
    let mut parser = Parser {
        toks,
        pos: 0,
        end_col: input.chars().count() + 1,
        p,
    };
    let e = parser.sum()?;
    if parser.pos != parser.toks.len() {
        return parser.err("unexpected trailing input");
    }
    Ok(e)
}

fn needs_parens(e: &ExprAst) -> bool {
    matches!(
        e,
        ExprAst::Sum(_) | ExprAst::Tensor(_) | ExprAst::Product(_)
    )
}

/// Canonical rendering; reparses to an equal tree.
pub fn render_ast(e: &ExprAst) -> String {
    let wrap = |x: &ExprAst| {
        if needs_parens(x) {
            format!("({})", render_ast(x))
        } else {
            render_ast(x)
        }
    };
    match e {
        ExprAst::Scalar(ScalarLit::Int(n)) => n.to_string(),
        ExprAst::Scalar(ScalarLit::Frac(n, d)) => format!("{n}/{d}"),
        ExprAst::Scalar(ScalarLit::Q) => "q".into(),
        ExprAst::Scalar(ScalarLit::I) => "i".into(),
        ExprAst::Scalar(ScalarLit::Zeta) => "zeta".into(),
        ExprAst::Gen(g) => g.clone(),
        ExprAst::Pow(b, k) => {
            let base = match **b {
                ExprAst::Scalar(ScalarLit::Frac(..)) | ExprAst::Pow(..) => {
                    format!("({})", render_ast(b))
                }
                _ => wrap(b),
            };
            format!("{base}^{k}")
        }
        ExprAst::Product(fs) => fs.iter().map(wrap).collect::<Vec<_>>().join("*"),
        ExprAst::Tensor(fs) => fs.iter().map(wrap).collect::<Vec<_>>().join(" (x) "),
        ExprAst::Sum(ts) => {
            let mut out = String::new();
            for (k, (s, t)) in ts.iter().enumerate() {
                let body = if matches!(t, ExprAst::Sum(_)) {
                    format!("({})", render_ast(t))
                } else {
                    render_ast(t)
                };
                match (k, s) {
                    (0, Sign::Plus) => {}
                    (0, Sign::Minus) => out.push('-'),
                    (_, Sign::Plus) => out.push_str(" + "),
                    (_, Sign::Minus) => out.push_str(" - "),
                }
                out.push_str(&body);
            }
            out
        }
    }
}

pub fn contains_tensor(e: &ExprAst) -> bool {
    match e {
        ExprAst::Tensor(_) => true,
        ExprAst::Scalar(_) | ExprAst::Gen(_) => false,
        ExprAst::Pow(b, _) => contains_tensor(b),
        ExprAst::Product(fs) => fs.iter().any(contains_tensor),
        ExprAst::Sum(ts) => ts.iter().any(|(_, t)| contains_tensor(t)),
    }
}

/// Evaluate to an unnormalized element (products are free concatenation).
pub fn eval_element(e: &ExprAst, p: &Presentation) -> Result<Element, ParseError> {
    Ok(match e {
        ExprAst::Scalar(s) => Element::from_scalar(s.value()?),
        ExprAst::Gen(g) => p
            .gen(g)
            .map_err(|err| ParseError::Invalid(err.to_string()))?,
        ExprAst::Pow(b, k) => {
            let base = eval_element(b, p)?;
            let mut acc = Element::one();
            for _ in 0..*k {
                acc = acc.concat(&base);
            }
            acc
        }
        ExprAst::Product(fs) => {
            let mut acc = Element::one();
            for f in fs {
                acc = acc.concat(&eval_element(f, p)?);
            }
            acc
        }
        ExprAst::Sum(ts) => {
            let mut acc = Element::zero();
            for (s, t) in ts {
                let v = eval_element(t, p)?;
                match s {
                    Sign::Plus => acc += &v,
                    Sign::Minus => acc -= &v,
                }
            }
            acc
        }
        ExprAst::Tensor(_) => {
            return Err(ParseError::Invalid(
                "tensor expression where an element was expected".into(),
            ))
        }
    })
}

/// Parse and evaluate to an unnormalized element.
pub fn parse_element(input: &str, p: &Presentation) -> Result<Element, ParseError> {
    eval_element(&parse(input, p)?, p)
}

/// A single word with coefficient one, as required for rule left-hand sides.
pub fn parse_word(input: &str, p: &Presentation) -> Result<Word, ParseError> {
    let e = parse_element(input, p)?;
    match e.terms().next() {
        Some((w, c)) if e.len() == 1 && c.is_one() => Ok(w.clone()),
        _ => Err(ParseError::Invalid(format!(
            "`{input}` is not a single monomial"
        ))),
    }
}
