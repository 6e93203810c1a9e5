//! A small expression language for series formulas.
//!
//! Precedence, tightest first: `^` (integer exponents), unary `-`, `*`/`/`,
//! `+`/`-`; binary operators associate to the left. Atoms are integer
//! literals, the variables `z`, `y`, `x`, parenthesized expressions and
//! function applications `name(arg, ...)`.

use std::fmt;

use cychom::Rat;
use num_traits::FromPrimitive;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, PartialEq, Debug)]
pub enum Expr {
    Lit(Rat),
    Var(Var),
    Neg(Box<Spanned>),
    Bin(BinOp, Box<Spanned>, Box<Spanned>),
    Pow(Box<Spanned>, i64),
    Call(String, Vec<Spanned>),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    Z,
    Y,
    X,
}

/// An expression node with its source span.
#[derive(Clone, PartialEq, Debug)]
pub struct Spanned {
    pub node: Expr,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at offset {} (line {}, column {}): {}",
            self.offset, self.line, self.column, self.message
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Int(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

struct Lexer<'a> {
    src: &'a str,
    tokens: Vec<(Tok, Span)>,
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let mut line = 1;
    let mut col = 1;
    for (i, c) in src.char_indices() {
        if i >= offset {
            break;
        }
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

fn err(src: &str, offset: usize, message: impl Into<String>) -> ParseError {
    let (line, column) = line_col(src, offset);
    ParseError {
        offset,
        line,
        column,
        message: message.into(),
    }
}

impl<'a> Lexer<'a> {
    fn lex(src: &'a str) -> Result<Self, ParseError> {
        let bytes = src.as_bytes();
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            let start = i;
            match c {
                ' ' | '\t' | '\n' | '\r' => {
                    i += 1;
                }
                '+' => {
                    tokens.push((Tok::Plus, Span::new(start, i + 1)));
                    i += 1;
                }
                '-' => {
                    tokens.push((Tok::Minus, Span::new(start, i + 1)));
                    i += 1;
                }
                '*' => {
                    tokens.push((Tok::Star, Span::new(start, i + 1)));
                    i += 1;
                }
                '/' => {
                    tokens.push((Tok::Slash, Span::new(start, i + 1)));
                    i += 1;
                }
                '^' => {
                    tokens.push((Tok::Caret, Span::new(start, i + 1)));
                    i += 1;
                }
                '(' => {
                    tokens.push((Tok::LParen, Span::new(start, i + 1)));
                    i += 1;
                }
                ')' => {
                    tokens.push((Tok::RParen, Span::new(start, i + 1)));
                    i += 1;
                }
                ',' => {
                    tokens.push((Tok::Comma, Span::new(start, i + 1)));
                    i += 1;
                }
                '0'..='9' => {
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let text = &src[start..i];
                    let value: u64 = text
                        .parse()
                        .map_err(|_| err(src, start, format!("integer `{text}` is too large")))?;
                    tokens.push((Tok::Int(value), Span::new(start, i)));
                }
                'a'..='z' | 'A'..='Z' | '_' => {
                    while i < bytes.len()
                        && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                    {
                        i += 1;
                    }
                    tokens.push((Tok::Ident(src[start..i].to_string()), Span::new(start, i)));
                }
                _ => return Err(err(src, i, format!("unexpected character `{c}`"))),
            }
        }
        Ok(Lexer { src, tokens })
    }
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<(Tok, Span)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&(Tok, Span)> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<(Tok, Span)> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn end_offset(&self) -> usize {
        self.src.len()
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Span, ParseError> {
        match self.next() {
            Some((t, s)) if t == tok => Ok(s),
            Some((_, s)) => Err(err(self.src, s.start, format!("expected {what}"))),
            None => Err(err(self.src, self.end_offset(), format!("expected {what}"))),
        }
    }

    fn expr(&mut self) -> Result<Spanned, ParseError> {
        let mut lhs = self.term()?;
        while let Some((tok, _)) = self.peek() {
            let op = match tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.next();
            let rhs = self.term()?;
            let span = Span::new(lhs.span.start, rhs.span.end);
            lhs = Spanned {
                node: Expr::Bin(op, Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Spanned, ParseError> {
        let mut lhs = self.factor()?;
        while let Some((tok, _)) = self.peek() {
            let op = match tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.next();
            let rhs = self.factor()?;
            let span = Span::new(lhs.span.start, rhs.span.end);
            lhs = Spanned {
                node: Expr::Bin(op, Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Spanned, ParseError> {
        if let Some((Tok::Minus, s)) = self.peek().cloned() {
            self.next();
            let inner = self.factor()?;
            let span = Span::new(s.start, inner.span.end);
            return Ok(Spanned {
                node: Expr::Neg(Box::new(inner)),
                span,
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Spanned, ParseError> {
        let mut base = self.atom()?;
        while let Some((Tok::Caret, _)) = self.peek() {
            self.next();
            // exponent: an optionally negated integer literal
            let neg = matches!(self.peek(), Some((Tok::Minus, _)));
            if neg {
                self.next();
            }
            match self.next() {
                Some((Tok::Int(v), s)) => {
                    let e = v as i64 * if neg { -1 } else { 1 };
                    let span = Span::new(base.span.start, s.end);
                    base = Spanned {
                        node: Expr::Pow(Box::new(base), e),
                        span,
                    };
                }
                Some((_, s)) => {
                    return Err(err(self.src, s.start, "expected an integer exponent"));
                }
                None => {
                    return Err(err(
                        self.src,
                        self.end_offset(),
                        "expected an integer exponent",
                    ));
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Spanned, ParseError> {
        match self.next() {
            Some((Tok::Int(v), s)) => Ok(Spanned {
                node: Expr::Lit(Rat::from_u64(v).unwrap()),
                span: s,
            }),
            Some((Tok::Ident(name), s)) => match name.as_str() {
                "z" => Ok(Spanned {
                    node: Expr::Var(Var::Z),
                    span: s,
                }),
                "y" => Ok(Spanned {
                    node: Expr::Var(Var::Y),
                    span: s,
                }),
                "x" => Ok(Spanned {
                    node: Expr::Var(Var::X),
                    span: s,
                }),
                _ => {
                    self.expect(Tok::LParen, "`(` after a function name")?;
                    let mut args = Vec::new();
                    if let Some((Tok::RParen, _)) = self.peek() {
                        // empty argument lists are never valid; report at `)`
                        let (_, rs) = self.next().unwrap();
                        return Err(err(
                            self.src,
                            rs.start,
                            format!("function `{name}` needs at least one argument"),
                        ));
                    }
                    loop {
                        args.push(self.expr()?);
                        match self.next() {
                            Some((Tok::Comma, _)) => continue,
                            Some((Tok::RParen, rs)) => {
                                let span = Span::new(s.start, rs.end);
                                return Ok(Spanned {
                                    node: Expr::Call(name, args),
                                    span,
                                });
                            }
                            Some((_, es)) => {
                                return Err(err(self.src, es.start, "expected `,` or `)`"));
                            }
                            None => {
                                return Err(err(
                                    self.src,
                                    self.end_offset(),
                                    "expected `,` or `)`",
                                ));
                            }
                        }
                    }
                }
            },
            Some((Tok::LParen, s)) => {
                let inner = self.expr()?;
                let rs = self.expect(Tok::RParen, "`)`")?;
                Ok(Spanned {
                    node: inner.node,
                    span: Span::new(s.start, rs.end),
                })
            }
            Some((_, s)) => Err(err(self.src, s.start, "expected a value")),
            None => Err(err(self.src, self.end_offset(), "expected a value")),
        }
    }
}

/// Parse an expression; errors carry the offending offset and line/column.
pub fn parse(src: &str) -> Result<Spanned, ParseError> {
    let lexer = Lexer::lex(src)?;
    let mut parser = Parser {
        src,
        tokens: lexer.tokens,
        pos: 0,
    };
    let e = parser.expr()?;
    if let Some((_, s)) = parser.peek() {
        return Err(err(src, s.start, "unexpected trailing input"));
    }
    Ok(e)
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, _, _) => 1,
        Expr::Bin(BinOp::Mul | BinOp::Div, _, _) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(_, _) => 4,
        _ => 5,
    }
}

fn render_prec(e: &Spanned, min: u8, out: &mut String) {
    let p = precedence(&e.node);
    if p < min {
        out.push('(');
    }
    match &e.node {
        Expr::Lit(v) => out.push_str(&v.to_string()),
        Expr::Var(Var::Z) => out.push('z'),
        Expr::Var(Var::Y) => out.push('y'),
        Expr::Var(Var::X) => out.push('x'),
        Expr::Neg(inner) => {
            out.push('-');
            render_prec(inner, 3, out);
        }
        Expr::Bin(op, l, r) => {
            let (sym, lp, rp) = match op {
                BinOp::Add => (" + ", 1, 1),
                BinOp::Sub => (" - ", 1, 2),
                BinOp::Mul => ("*", 2, 2),
                BinOp::Div => ("/", 2, 3),
            };
            render_prec(l, lp, out);
            out.push_str(sym);
            render_prec(r, rp, out);
        }
        Expr::Pow(base, exp) => {
            render_prec(base, 5, out);
            out.push('^');
            if *exp < 0 {
                out.push_str(&format!("({exp})"));
            } else {
                out.push_str(&exp.to_string());
            }
        }
        Expr::Call(name, args) => {
            out.push_str(name);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                render_prec(a, 1, out);
            }
            out.push(')');
        }
    }
    if p < min {
        out.push(')');
    }
}

/// Canonical rendering; `parse(render(parse(s)))` equals `parse(s)` up to
/// spans.
pub fn render(e: &Spanned) -> String {
    let mut out = String::new();
    render_prec(e, 1, &mut out);
    out
}

/// Structural equality ignoring spans.
pub fn same_shape(a: &Spanned, b: &Spanned) -> bool {
    match (&a.node, &b.node) {
        (Expr::Lit(x), Expr::Lit(y)) => x == y,
        (Expr::Var(x), Expr::Var(y)) => x == y,
        (Expr::Neg(x), Expr::Neg(y)) => same_shape(x, y),
        (Expr::Bin(o1, l1, r1), Expr::Bin(o2, l2, r2)) => {
            o1 == o2 && same_shape(l1, l2) && same_shape(r1, r2)
        }
        (Expr::Pow(b1, e1), Expr::Pow(b2, e2)) => e1 == e2 && same_shape(b1, b2),
        (Expr::Call(n1, a1), Expr::Call(n2, a2)) => {
            n1 == n2 && a1.len() == a2.len() && a1.iter().zip(a2).all(|(x, y)| same_shape(x, y))
        }
        _ => false,
    }
}
