//! Real-valued expressions of one variable `t`.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?          right-associative
//! primary := number | 't' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{EvalError, ParseError, ParseErrorKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::E => std::f64::consts::E,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::E => "e",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Cot,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Cot,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Cot => "cot",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Const(Constant),
    Var,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    /// True when the expression does not mention `t`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Const(_) => true,
            Expr::Var => false,
            Expr::Neg(e) | Expr::Call(_, e) => e.is_constant(),
            Expr::Binary(_, l, r) => l.is_constant() && r.is_constant(),
        }
    }

    /// Literal zero, as produced by an omitted coefficient.
    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Num(v) if *v == 0.0)
    }

    pub fn eval(&self, t: f64) -> Result<f64, EvalError> {
        let fault = |reason| EvalError {
            expr: self.to_string(),
            t,
            reason,
        };
        let v = match self {
            Expr::Num(v) => *v,
            Expr::Const(c) => c.value(),
            Expr::Var => t,
            Expr::Neg(e) => -e.eval(t)?,
            Expr::Binary(op, l, r) => {
                let x = l.eval(t)?;
                let y = r.eval(t)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(fault("division by zero"));
                        }
                        x / y
                    }
                    BinOp::Pow => {
                        if x < 0.0 && y.fract() != 0.0 {
                            return Err(fault("negative base with non-integer exponent"));
                        }
                        if x == 0.0 && y < 0.0 {
                            return Err(fault("zero raised to a negative power"));
                        }
                        x.powf(y)
                    }
                }
            }
            Expr::Call(f, e) => {
                let x = e.eval(t)?;
                let pole = 4.0 * f64::EPSILON * x.abs().max(1.0);
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Tan => {
                        let c = x.cos();
                        if c.abs() <= pole {
                            return Err(fault("tan pole"));
                        }
                        x.sin() / c
                    }
                    Func::Cot => {
                        let s = x.sin();
                        if s.abs() <= pole {
                            return Err(fault("cot pole"));
                        }
                        x.cos() / s
                    }
                    Func::Exp => x.exp(),
                    Func::Log => {
                        if x <= 0.0 {
                            return Err(fault("log of a non-positive value"));
                        }
                        x.ln()
                    }
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(fault("sqrt of a negative value"));
                        }
                        x.sqrt()
                    }
                    Func::Abs => x.abs(),
                }
            }
        };
        if !v.is_finite() {
            return Err(fault("non-finite result"));
        }
        Ok(v)
    }

    /// Evaluate an expression that must not depend on `t`.
    pub fn eval_const(&self) -> Result<f64, EvalError> {
        self.eval(0.0)
    }
}

/// Fully parenthesized form; parsing it back yields an identical tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Const(c) => f.write_str(c.name()),
            Expr::Var => f.write_str("t"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

impl FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s)
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(e),
        Some(b')') => Err(p.error(ParseErrorKind::UnbalancedParens)),
        Some(_) => Err(p.error(ParseErrorKind::TrailingInput)),
    }
}

/// Parse an expression and reject any dependence on `t`.
pub fn parse_const_expr(src: &str) -> Result<Expr, ParseError> {
    let e = parse_expr(src)?;
    if !e.is_constant() {
        let offset = src.find('t').unwrap_or(0);
        return Err(ParseError {
            offset,
            kind: ParseErrorKind::NotConstant,
        });
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            offset: self.pos,
            kind,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat(b'+') {
                BinOp::Add
            } else if self.eat(b'-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat(b'*') {
                BinOp::Mul
            } else if self.eat(b'/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.eat(b'^') {
            self.skip_ws();
            let at = self.pos;
            let exp = self.unary()?;
            if !exp.is_constant() {
                return Err(ParseError {
                    offset: at,
                    kind: ParseErrorKind::NonConstantExponent,
                });
            }
            return Ok(Expr::binary(BinOp::Pow, base, exp));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None | Some(b')') | Some(b'+') | Some(b'*') | Some(b'/') | Some(b'^') => {
                Err(self.error(ParseErrorKind::EmptyOperand))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    self.skip_ws();
                    return Err(self.error(ParseErrorKind::UnbalancedParens));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match name {
                    "t" => Ok(Expr::Var),
                    "pi" => Ok(Expr::Const(Constant::Pi)),
                    "e" => Ok(Expr::Const(Constant::E)),
                    _ => {
                        let Some(func) = Func::from_name(name) else {
                            return Err(ParseError {
                                offset: start,
                                kind: ParseErrorKind::UnknownIdentifier(name.to_string()),
                            });
                        };
                        if !self.eat(b'(') {
                            self.skip_ws();
                            return Err(self.error(ParseErrorKind::UnbalancedParens));
                        }
                        let arg = self.expr()?;
                        if !self.eat(b')') {
                            self.skip_ws();
                            return Err(self.error(ParseErrorKind::UnbalancedParens));
                        }
                        Ok(Expr::call(func, arg))
                    }
                }
            }
            Some(_) => {
                let rest = std::str::from_utf8(&self.src[start..]).unwrap_or("?");
                let ch = rest.chars().next().unwrap_or('?');
                Err(self.error(ParseErrorKind::UnexpectedChar(ch)))
            }
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.peek().is_some_and(|c| c.is_ascii_digit()) {
                p.pos += 1;
            }
        };
        digits(self);
        if self.peek() == Some(b'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                digits(self);
            } else {
                // not an exponent: leave `e` for the next token
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(Expr::Num)
            .ok_or(ParseError {
                offset: start,
                kind: ParseErrorKind::InvalidNumber(text.to_string()),
            })
    }
}
