//! Coefficient expressions: parsing, printing and evaluation into jets.
//!
//! Grammar (standard precedence, `^` right-associative and binding tighter
//! than unary minus, so `-x^2 = -(x^2)` and `2^-1 = 0.5`):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::jet::{Elementary, Jet};

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
    Elem(Elementary),
    Atan2,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Elem(f) => f.name(),
            Func::Atan2 => "atan2",
        }
    }

    fn arity(self) -> usize {
        match self {
            Func::Elem(_) => 1,
            Func::Atan2 => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Coord(usize, String),
    Param(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

/// Parameter table: name → value.
pub type Params = BTreeMap<String, f64>;

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Num(v) if *v == 0.0)
    }

    /// Plain recursive evaluation.
    pub fn eval(&self, point: &[f64], params: &Params) -> Result<f64> {
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::Coord(i, _) => point[*i],
            Expr::Param(name) => *params
                .get(name)
                .ok_or_else(|| Error::UnknownIdentifier(name.clone()))?,
            Expr::Neg(a) => -a.eval(point, params)?,
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(point, params)?, b.eval(point, params)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(f, args) => match f {
                Func::Elem(e) => e.eval(args[0].eval(point, params)?),
                Func::Atan2 => {
                    f64::atan2(args[0].eval(point, params)?, args[1].eval(point, params)?)
                }
            },
        })
    }

    /// Jet of the expression at `point`, truncated at `order`.
    pub fn eval_jet(&self, point: &[f64], order: usize, params: &Params) -> Result<Jet> {
        let vars: Vec<Jet> = (0..point.len())
            .map(|i| Jet::variable(point.len(), order, i, point[i]))
            .collect();
        self.jet_with(&vars, params)
    }

    /// Jet evaluation against pre-seeded coordinate jets.
    pub fn jet_with(&self, vars: &[Jet], params: &Params) -> Result<Jet> {
        let like = &vars[0];
        Ok(match self {
            Expr::Num(v) => like.lift(*v),
            Expr::Coord(i, _) => vars[*i].clone(),
            Expr::Param(name) => like.lift(
                *params
                    .get(name)
                    .ok_or_else(|| Error::UnknownIdentifier(name.clone()))?,
            ),
            Expr::Neg(a) => -a.jet_with(vars, params)?,
            Expr::Bin(op, a, b) => {
                let ja = a.jet_with(vars, params)?;
                if *op == BinOp::Pow {
                    if let Some(p) = b.constant_value(params) {
                        return ja.powf(p);
                    }
                }
                let jb = b.jet_with(vars, params)?;
                match op {
                    BinOp::Add => &ja + &jb,
                    BinOp::Sub => &ja - &jb,
                    BinOp::Mul => &ja * &jb,
                    BinOp::Div => ja.checked_div(&jb)?,
                    BinOp::Pow => ja.pow(&jb)?,
                }
            }
            Expr::Call(f, args) => match f {
                Func::Elem(e) => args[0].jet_with(vars, params)?.apply(*e)?,
                Func::Atan2 => {
                    let y = args[0].jet_with(vars, params)?;
                    let x = args[1].jet_with(vars, params)?;
                    y.atan2(&x)?
                }
            },
        })
    }

    /// Value of a coordinate-free subexpression.
    fn constant_value(&self, params: &Params) -> Option<f64> {
        match self {
            Expr::Num(v) => Some(*v),
            Expr::Param(name) => params.get(name).copied(),
            Expr::Neg(a) => a.constant_value(params).map(|v| -v),
            _ => None,
        }
    }

    /// Replace every occurrence of parameter `name` by `with`.
    pub fn substitute(&self, name: &str, with: &Expr) -> Expr {
        match self {
            Expr::Param(p) if p == name => with.clone(),
            Expr::Num(_) | Expr::Coord(..) | Expr::Param(_) => self.clone(),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(name, with))),
            Expr::Bin(op, a, b) => bin(*op, a.substitute(name, with), b.substitute(name, with)),
            Expr::Call(f, args) => {
                Expr::Call(*f, args.iter().map(|a| a.substitute(name, with)).collect())
            }
        }
    }

    /// Symbolic partial derivative in coordinate `i`. Only zeros and ones are simplified.
    pub fn diff(&self, i: usize) -> Expr {
        use Elementary as E;
        match self {
            Expr::Num(_) | Expr::Param(_) => Expr::Num(0.0),
            Expr::Coord(j, _) => Expr::Num(if *j == i { 1.0 } else { 0.0 }),
            Expr::Neg(a) => neg(a.diff(i)),
            Expr::Bin(op, a, b) => {
                let (da, db) = (a.diff(i), b.diff(i));
                let (a, b) = (a.as_ref().clone(), b.as_ref().clone());
                match op {
                    BinOp::Add => add(da, db),
                    BinOp::Sub => sub(da, db),
                    BinOp::Mul => add(mul(da, b), mul(a, db)),
                    BinOp::Div => div(
                        sub(mul(da, b.clone()), mul(a, db)),
                        bin(BinOp::Pow, b, Expr::Num(2.0)),
                    ),
                    BinOp::Pow if db.is_zero() => mul(
                        mul(b.clone(), bin(BinOp::Pow, a, sub(b, Expr::Num(1.0)))),
                        da,
                    ),
                    BinOp::Pow => {
                        let ln_a = call(E::Ln, a.clone());
                        let inner = add(mul(db, ln_a), div(mul(b.clone(), da), a.clone()));
                        mul(bin(BinOp::Pow, a, b), inner)
                    }
                }
            }
            Expr::Call(Func::Atan2, args) => {
                let (y, x) = (args[0].clone(), args[1].clone());
                let num = sub(mul(x.clone(), y.diff(i)), mul(y.clone(), x.diff(i)));
                let den = add(
                    bin(BinOp::Pow, x, Expr::Num(2.0)),
                    bin(BinOp::Pow, y, Expr::Num(2.0)),
                );
                div(num, den)
            }
            Expr::Call(Func::Elem(f), args) => {
                let u = args[0].clone();
                let du = u.diff(i);
                if du.is_zero() {
                    return Expr::Num(0.0);
                }
                let sq = |e: Expr| bin(BinOp::Pow, e, Expr::Num(2.0));
                let one_minus_sq = || sub(Expr::Num(1.0), sq(u.clone()));
                let outer = match f {
                    E::Sin => call(E::Cos, u.clone()),
                    E::Cos => neg(call(E::Sin, u.clone())),
                    E::Tan => sq(call(E::Sec, u.clone())),
                    E::Sec => mul(call(E::Sec, u.clone()), call(E::Tan, u.clone())),
                    E::Csc => neg(mul(call(E::Csc, u.clone()), call(E::Cot, u.clone()))),
                    E::Cot => neg(sq(call(E::Csc, u.clone()))),
                    E::Exp => call(E::Exp, u.clone()),
                    E::Ln => div(Expr::Num(1.0), u.clone()),
                    E::Sinh => call(E::Cosh, u.clone()),
                    E::Cosh => call(E::Sinh, u.clone()),
                    E::Tanh => sq(call(E::Sech, u.clone())),
                    E::Sech => neg(mul(call(E::Sech, u.clone()), call(E::Tanh, u.clone()))),
                    E::Csch => neg(mul(call(E::Csch, u.clone()), call(E::Coth, u.clone()))),
                    E::Coth => neg(sq(call(E::Csch, u.clone()))),
                    E::Sqrt => div(Expr::Num(0.5), call(E::Sqrt, u.clone())),
                    E::Asin => div(Expr::Num(1.0), call(E::Sqrt, one_minus_sq())),
                    E::Acos => neg(div(Expr::Num(1.0), call(E::Sqrt, one_minus_sq()))),
                    E::Atan => div(Expr::Num(1.0), add(Expr::Num(1.0), sq(u.clone()))),
                    E::Asinh => div(
                        Expr::Num(1.0),
                        call(E::Sqrt, add(Expr::Num(1.0), sq(u.clone()))),
                    ),
                };
                mul(outer, du)
            }
        }
    }
}

fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
    Expr::Bin(op, Box::new(a), Box::new(b))
}

fn call(f: Elementary, a: Expr) -> Expr {
    Expr::Call(Func::Elem(f), vec![a])
}

fn is_one(e: &Expr) -> bool {
    matches!(e, Expr::Num(v) if *v == 1.0)
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(v) => Expr::Num(-v),
        a => Expr::Neg(Box::new(a)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (a.is_zero(), b.is_zero()) {
        (true, _) => b,
        (_, true) => a,
        _ => bin(BinOp::Add, a, b),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (a.is_zero(), b.is_zero()) {
        (_, true) => a,
        (true, _) => neg(b),
        _ => bin(BinOp::Sub, a, b),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    if a.is_zero() || b.is_zero() {
        Expr::Num(0.0)
    } else if is_one(&a) {
        b
    } else if is_one(&b) {
        a
    } else {
        bin(BinOp::Mul, a, b)
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    if a.is_zero() {
        Expr::Num(0.0)
    } else if is_one(&b) {
        a
    } else {
        bin(BinOp::Div, a, b)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Coord(_, name) => write!(f, "{name}"),
            Expr::Param(name) => write!(f, "{name}"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Bin(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let v: f64 = text[start..i].parse().map_err(|_| Error::Syntax {
                pos: start,
                msg: format!("bad number `{}`", &text[start..i]),
            })?;
            out.push((Tok::Num(v), start));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
            continue;
        }
        let tok = match c {
            '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            _ => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push((tok, start));
        i += c.len_utf8();
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    coords: &'a [String],
    params: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax {
            pos: self.offset(),
            msg: msg.to_string(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(&format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            let op = if *c == '+' { BinOp::Add } else { BinOp::Sub };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek() {
            let op = if *c == '*' { BinOp::Mul } else { BinOp::Div };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Op('-')) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Op('^')) {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let start = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Expr::Num(v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    return self.call(&name, start);
                }
                if let Some(i) = self.coords.iter().position(|c| *c == name) {
                    return Ok(Expr::Coord(i, name));
                }
                if self.params.iter().any(|p| *p == name) {
                    return Ok(Expr::Param(name));
                }
                match name.as_str() {
                    "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                    "e" => Ok(Expr::Num(std::f64::consts::E)),
                    _ => Err(Error::UnknownIdentifier(name)),
                }
            }
            Some(_) => self.err("expected a number, identifier or `(`"),
            None => self.err("unexpected end of input"),
        }
    }

    fn call(&mut self, name: &str, start: usize) -> Result<Expr> {
        let func = match name {
            "atan2" => Func::Atan2,
            _ => match Elementary::from_name(name) {
                Some(f) => Func::Elem(f),
                None => return Err(Error::UnknownIdentifier(name.to_string())),
            },
        };
        let mut args = vec![self.expr()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            args.push(self.expr()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        if args.len() != func.arity() {
            return Err(Error::Syntax {
                pos: start,
                msg: format!(
                    "{} takes {} argument(s), got {}",
                    func.name(),
                    func.arity(),
                    args.len()
                ),
            });
        }
        Ok(Expr::Call(func, args))
    }
}

/// Parse `text` against the given coordinate and parameter names.
pub fn parse(text: &str, coords: &[String], params: &[String]) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        coords,
        params,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}
