//! User phases written as expressions in `x1, x2, xi1, xi2`.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | primary
//! primary := number | 'pi' | variable | func '(' args ')' | '(' expr ')'
//! func    := abs(e) | sqrt(e) | norm(e) | norm(e, e)
//! ```
//!
//! `norm(a, b)` is `sqrt(a^2 + b^2)` and `norm(a)` is `|a|`. Derivatives are
//! symbolic, so [`ExprPhase`] supplies exact gradients and mixed Hessians.
//! Where a derivative has the form `0/0` (the gradient of `norm` at the
//! origin) it evaluates to 0, the same convention the built-in phases use.

use std::fmt;

use fiolab_core::fio::{MixedHessian, Phase};
use fiolab_core::Point;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X1,
    X2,
    Xi1,
    Xi2,
}

impl Var {
    const X: [Var; 2] = [Var::X1, Var::X2];
    const XI: [Var; 2] = [Var::Xi1, Var::Xi2];

    fn name(self) -> &'static str {
        match self {
            Var::X1 => "x1",
            Var::X2 => "x2",
            Var::Xi1 => "xi1",
            Var::Xi2 => "xi2",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Abs(Box<Expr>),
    Sqrt(Box<Expr>),
    Norm(Box<Expr>, Box<Expr>),
    /// Derivative of `abs`; not reachable from the grammar.
    Sign(Box<Expr>),
}

fn num(e: &Expr) -> Option<f64> {
    match e {
        Expr::Num(v) => Some(*v),
        _ => None,
    }
}

// Constructors with constant folding and the identities 0 + a, 1 * a, etc.
fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(v) => Expr::Num(-v),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (num(&a), num(&b)) {
        (Some(x), Some(y)) => Expr::Num(x + y),
        (Some(0.0), _) => b,
        (_, Some(0.0)) => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (num(&a), num(&b)) {
        (Some(x), Some(y)) => Expr::Num(x - y),
        (Some(0.0), _) => neg(b),
        (_, Some(0.0)) => a,
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (num(&a), num(&b)) {
        (Some(x), Some(y)) => Expr::Num(x * y),
        (Some(x), _) | (_, Some(x)) if x == 0.0 => Expr::Num(0.0),
        (Some(1.0), _) => b,
        (_, Some(1.0)) => a,
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (num(&a), num(&b)) {
        (Some(x), Some(y)) if y != 0.0 => Expr::Num(x / y),
        (Some(0.0), _) => Expr::Num(0.0),
        (_, Some(1.0)) => a,
        _ => Expr::Div(Box::new(a), Box::new(b)),
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = tokenize(src)?;
        let mut parser = Parser { tokens, pos: 0 };
        let e = parser.expr()?;
        match parser.peek() {
            None => Ok(e),
            Some(t) => Err(Error::Expression(format!("unexpected {t:?} after a complete expression"))),
        }
    }

    pub fn eval(&self, x: &Point, xi: &Point) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(Var::X1) => x[0],
            Expr::Var(Var::X2) => x[1],
            Expr::Var(Var::Xi1) => xi[0],
            Expr::Var(Var::Xi2) => xi[1],
            Expr::Neg(a) => -a.eval(x, xi),
            Expr::Add(a, b) => a.eval(x, xi) + b.eval(x, xi),
            Expr::Sub(a, b) => a.eval(x, xi) - b.eval(x, xi),
            Expr::Mul(a, b) => a.eval(x, xi) * b.eval(x, xi),
            Expr::Div(a, b) => {
                let top = a.eval(x, xi);
                if top == 0.0 {
                    0.0
                } else {
                    top / b.eval(x, xi)
                }
            }
            Expr::Abs(a) => a.eval(x, xi).abs(),
            Expr::Sqrt(a) => a.eval(x, xi).sqrt(),
            Expr::Norm(a, b) => a.eval(x, xi).hypot(b.eval(x, xi)),
            Expr::Sign(a) => {
                let v = a.eval(x, xi);
                if v == 0.0 {
                    0.0
                } else {
                    v.signum()
                }
            }
        }
    }

    pub fn derivative(&self, v: Var) -> Expr {
        match self {
            Expr::Num(_) | Expr::Sign(_) => Expr::Num(0.0),
            Expr::Var(u) => Expr::Num(if *u == v { 1.0 } else { 0.0 }),
            Expr::Neg(a) => neg(a.derivative(v)),
            Expr::Add(a, b) => add(a.derivative(v), b.derivative(v)),
            Expr::Sub(a, b) => sub(a.derivative(v), b.derivative(v)),
            Expr::Mul(a, b) => add(mul(a.derivative(v), (**b).clone()), mul((**a).clone(), b.derivative(v))),
            Expr::Div(a, b) => div(
                sub(mul(a.derivative(v), (**b).clone()), mul((**a).clone(), b.derivative(v))),
                mul((**b).clone(), (**b).clone()),
            ),
            Expr::Abs(a) => mul(Expr::Sign(a.clone()), a.derivative(v)),
            Expr::Sqrt(a) => div(a.derivative(v), mul(Expr::Num(2.0), self.clone())),
            Expr::Norm(a, b) => div(add(mul((**a).clone(), a.derivative(v)), mul((**b).clone(), b.derivative(v))), self.clone()),
        }
    }

    /// Replace a variable by a constant and fold.
    pub fn substitute(&self, v: Var, value: f64) -> Expr {
        let s = |e: &Expr| e.substitute(v, value);
        match self {
            Expr::Num(_) => self.clone(),
            Expr::Var(u) if *u == v => Expr::Num(value),
            Expr::Var(_) => self.clone(),
            Expr::Neg(a) => neg(s(a)),
            Expr::Add(a, b) => add(s(a), s(b)),
            Expr::Sub(a, b) => sub(s(a), s(b)),
            Expr::Mul(a, b) => mul(s(a), s(b)),
            Expr::Div(a, b) => div(s(a), s(b)),
            Expr::Abs(a) => match s(a) {
                Expr::Num(c) => Expr::Num(c.abs()),
                other => Expr::Abs(Box::new(other)),
            },
            Expr::Sqrt(a) => match s(a) {
                Expr::Num(c) => Expr::Num(c.sqrt()),
                other => Expr::Sqrt(Box::new(other)),
            },
            Expr::Norm(a, b) => match (s(a), s(b)) {
                (Expr::Num(c), Expr::Num(d)) => Expr::Num(c.hypot(d)),
                (p, Expr::Num(0.0)) => Expr::Abs(Box::new(p)),
                (p, q) => Expr::Norm(Box::new(p), Box::new(q)),
            },
            Expr::Sign(a) => match s(a) {
                Expr::Num(c) => Expr::Num(if c == 0.0 { 0.0 } else { c.signum() }),
                other => Expr::Sign(Box::new(other)),
            },
        }
    }

    pub fn depends_on(&self, v: Var) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(u) => *u == v,
            Expr::Neg(a) | Expr::Abs(a) | Expr::Sqrt(a) | Expr::Sign(a) => a.depends_on(v),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Norm(a, b) => {
                a.depends_on(v) || b.depends_on(v)
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Abs(a) => write!(f, "abs({a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Norm(a, b) => write!(f, "norm({a}, {b})"),
            Expr::Sign(a) => write!(f, "sign({a})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse().map_err(|_| Error::Expression(format!("bad number {text:?} at {start}")))?;
            out.push(Token::Num(v));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/(),".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Expression(format!("unexpected character {c:?} at {i}")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<()> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(Error::Expression(format!("expected {op:?}, found {:?}", self.peek())))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        loop {
            if self.eat('+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        loop {
            if self.eat('*') {
                e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
            } else if self.eat('/') {
                e = Expr::Div(Box::new(e), Box::new(self.unary()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.primary()
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Token::Num(v)) => Ok(Expr::Num(v)),
            Some(Token::Op('(')) => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Token::Ident(name)) => match name.as_str() {
                "x1" => Ok(Expr::Var(Var::X1)),
                "x2" => Ok(Expr::Var(Var::X2)),
                "xi1" => Ok(Expr::Var(Var::Xi1)),
                "xi2" => Ok(Expr::Var(Var::Xi2)),
                "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                "abs" | "sqrt" | "norm" => self.call(&name),
                _ => Err(Error::Expression(format!("unknown identifier {name:?}"))),
            },
            other => Err(Error::Expression(format!("expected an operand, found {other:?}"))),
        }
    }

    fn call(&mut self, name: &str) -> Result<Expr> {
        self.expect('(')?;
        let first = self.expr()?;
        let second = if self.eat(',') { Some(self.expr()?) } else { None };
        self.expect(')')?;
        match (name, second) {
            ("abs", None) => Ok(Expr::Abs(Box::new(first))),
            ("sqrt", None) => Ok(Expr::Sqrt(Box::new(first))),
            ("norm", None) => Ok(Expr::Abs(Box::new(first))),
            ("norm", Some(b)) => Ok(Expr::Norm(Box::new(first), Box::new(b))),
            (_, Some(_)) => Err(Error::Expression(format!("{name} takes one argument"))),
            _ => unreachable!(),
        }
    }
}

/// A phase given by an expression, with symbolic first derivatives and mixed
/// Hessian. On one-dimensional grids `x2` and `xi2` are fixed to 0.
#[derive(Clone, Debug)]
pub struct ExprPhase {
    source: String,
    phi: Expr,
    grad_x: [Expr; 2],
    grad_xi: [Expr; 2],
    hessian: [[Expr; 2]; 2],
    translation_form: bool,
}

impl ExprPhase {
    pub fn parse(source: &str, dim: usize) -> Result<Self> {
        let mut phi = Expr::parse(source)?;
        if dim == 1 {
            phi = phi.substitute(Var::X2, 0.0).substitute(Var::Xi2, 0.0);
        }
        let grad_x = Var::X.map(|v| phi.derivative(v));
        let grad_xi = Var::XI.map(|v| phi.derivative(v));
        let hessian = [0, 1].map(|j| Var::XI.map(|v| grad_x[j].derivative(v)));
        // phi - x.xi must not depend on x: d phi / dx_j has to be exactly xi_j.
        let translation_form = (0..2).all(|j| {
            let expected = if dim == 1 && j == 1 { Expr::Num(0.0) } else { Expr::Var(Var::XI[j]) };
            grad_x[j] == expected
        });
        Ok(Self { source: source.to_string(), phi, grad_x, grad_xi, hessian, translation_form })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn expr(&self) -> &Expr {
        &self.phi
    }
}

impl Phase for ExprPhase {
    fn eval(&self, x: &Point, xi: &Point) -> f64 {
        self.phi.eval(x, xi)
    }

    fn grad_xi(&self, x: &Point, xi: &Point) -> Point {
        [self.grad_xi[0].eval(x, xi), self.grad_xi[1].eval(x, xi)]
    }

    fn grad_x(&self, x: &Point, xi: &Point) -> Point {
        [self.grad_x[0].eval(x, xi), self.grad_x[1].eval(x, xi)]
    }

    fn mixed_hessian(&self, x: &Point, xi: &Point) -> MixedHessian {
        [0, 1].map(|j| [0, 1].map(|k| self.hessian[j][k].eval(x, xi)))
    }

    fn is_translation_form(&self) -> bool {
        self.translation_form
    }
}
