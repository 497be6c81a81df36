//! Surface syntax for forms and operators.
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' integer)?
//! atom    := integer | E2 | E4 | E6 | D | Delta | name '(' sum ')' | '(' sum ')'
//! ```
//!
//! `D` is the skew generator, so products are evaluated in the operator
//! ring: `D*E4` becomes `E4*D - (1/3)*E6`. Division is only by nonzero
//! constants. The builtins are `phi(p)`, `psi(p)`, `kz(k)` and `dn(n)`.

use mldo_core::families::{dn_operator, kaneko_zagier, phi_p, psi_p};
use mldo_core::scalar::rat_to_i64;
use mldo_core::{Error, Mldo, ModForm, QuasiModForm, Rat, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rat),
    E2,
    E4,
    E6,
    D,
    Delta,
    Call(String, Box<Expr>, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            out.push((pos, Tok::Int(s.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((pos, Tok::Ident(chars[start..i].iter().map(|&(_, c)| c).collect())));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else if c == '−' {
            out.push((pos, Tok::Sym('-')));
            i += 1;
        } else {
            return Err(syntax(pos, format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected '{c}'")))
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let pos = self.pos();
                self.at += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), pos);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                let e = u32::try_from(n).map_err(|_| syntax(pos, "exponent too large"))?;
                Ok(Expr::Pow(Box::new(base), e))
            }
            _ => Err(syntax(pos, "expected a nonnegative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(Expr::Num(Rat::from_integer(n)))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                match name.as_str() {
                    "E2" => Ok(Expr::E2),
                    "E4" => Ok(Expr::E4),
                    "E6" => Ok(Expr::E6),
                    "D" => Ok(Expr::D),
                    "Delta" => Ok(Expr::Delta),
                    "phi" | "psi" | "kz" | "dn" => {
                        self.expect('(')?;
                        let arg = self.sum()?;
                        self.expect(')')?;
                        Ok(Expr::Call(name, Box::new(arg), pos))
                    }
                    _ => Err(syntax(pos, format!("unknown name {name:?}"))),
                }
            }
            Some(Tok::Sym(c)) => Err(syntax(pos, format!("unexpected '{c}'"))),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }
}

/// Parses `text` into a syntax tree.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        end: text.len(),
    };
    let e = p.sum()?;
    if p.at < p.toks.len() {
        return Err(syntax(p.pos(), "trailing input"));
    }
    Ok(e)
}

type Op = Mldo<QuasiModForm>;

fn form(f: QuasiModForm) -> Op {
    Mldo::from_coeff(f)
}

fn as_constant(a: &Op) -> Option<Rat> {
    match a.ord() {
        None => Some(Rat::zero()),
        Some(0) => a.coeff(0).as_constant(),
        _ => None,
    }
}

fn builtin(name: &str, arg: &Rat, pos: usize) -> Result<Op> {
    let int_arg = || rat_to_i64(arg).ok_or_else(|| syntax(pos, format!("{name} needs an integer argument")));
    let op = match name {
        "phi" => phi_p(arg),
        "psi" => psi_p(arg),
        "kz" => kaneko_zagier(int_arg()?)?,
        _ => {
            let n = u32::try_from(int_arg()?).map_err(|_| syntax(pos, "dn needs a positive argument"))?;
            dn_operator(n)?
        }
    };
    Ok(op.to_quasi())
}

impl Expr {
    /// Evaluates to a normal form in the operator ring over quasimodular
    /// coefficients.
    pub fn eval(&self) -> Result<Op> {
        Ok(match self {
            Expr::Num(c) => form(QuasiModForm::constant(c.clone())),
            Expr::E2 => form(QuasiModForm::e2()),
            Expr::E4 => form(QuasiModForm::e4()),
            Expr::E6 => form(QuasiModForm::e6()),
            Expr::D => Mldo::delta(),
            Expr::Delta => form(ModForm::delta().into_quasi()),
            Expr::Call(name, arg, pos) => {
                let v = as_constant(&arg.eval()?).ok_or_else(|| syntax(*pos, format!("{name} needs a rational argument")))?;
                builtin(name, &v, *pos)?
            }
            Expr::Neg(a) => -a.eval()?,
            Expr::Add(a, b) => a.eval()? + b.eval()?,
            Expr::Sub(a, b) => a.eval()? - b.eval()?,
            Expr::Mul(a, b) => a.eval()? * b.eval()?,
            Expr::Div(a, b, pos) => {
                let d = as_constant(&b.eval()?).ok_or_else(|| syntax(*pos, "division by a non-constant"))?;
                if d.is_zero() {
                    return Err(syntax(*pos, "division by zero"));
                }
                a.eval()? * form(QuasiModForm::constant(Rat::one() / d))
            }
            Expr::Pow(a, e) => a.eval()?.pow(*e),
        })
    }
}

/// Parses and normalizes an operator or form.
pub fn parse(text: &str) -> Result<Op> {
    parse_expr(text)?.eval()
}

/// Parses an operator with modular coefficients (no `E2`).
pub fn parse_operator(text: &str) -> Result<Mldo<ModForm>> {
    parse(text)?
        .to_modular()
        .ok_or_else(|| Error::WeightError(format!("{text:?} has E2 in a coefficient")))
}

/// Parses a quasimodular form (no `D`).
pub fn parse_form(text: &str) -> Result<QuasiModForm> {
    let a = parse(text)?;
    match a.ord() {
        None => Ok(QuasiModForm::zero()),
        Some(0) => Ok(a.coeff(0)),
        Some(_) => Err(Error::WeightError(format!("{text:?} is an operator, expected a form"))),
    }
}

/// Parses a homogeneous operator with modular coefficients.
pub fn parse_homogeneous_operator(text: &str) -> Result<Mldo<ModForm>> {
    let a = parse_operator(text)?;
    if !a.is_homogeneous() {
        return Err(Error::WeightError(format!("{text:?} is not homogeneous")));
    }
    Ok(a)
}
