//! The expression language: a tree of constants, the variable `x`, unary
//! builtins, and binary arithmetic, with a recursive-descent parser and a
//! canonical printer.
//!
//! Grammar (standard precedence, `^` right-associative and binding tighter
//! than unary minus):
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := ("-")? power
//! power  := atom ("^" factor)?
//! atom   := number | "x" | "pi" | "e" | func "(" expr ")" | "(" expr ")"
//! func   := "exp" | "log" | "sin" | "cos" | "tan" | "atan" | "sqrt"
//! ```
//!
//! `pi` and `e` expand to full double precision at parse time.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;

/// Unary operators: negation plus the builtin functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Exp,
    Log,
    Sin,
    Cos,
    Tan,
    Atan,
    Sqrt,
}

impl UnaryOp {
    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "neg",
            UnaryOp::Exp => "exp",
            UnaryOp::Log => "log",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Tan => "tan",
            UnaryOp::Atan => "atan",
            UnaryOp::Sqrt => "sqrt",
        }
    }
}

/// Binary arithmetic operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    pub fn name(self) -> &'static str {
        match self {
            BinaryOp::Add => "add",
            BinaryOp::Sub => "sub",
            BinaryOp::Mul => "mul",
            BinaryOp::Div => "div",
            BinaryOp::Pow => "pow",
        }
    }

    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }
}

/// A node of the expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprNode {
    /// A finite numeric constant. The parser only produces non-negative
    /// constants (a leading minus becomes a `Neg` node).
    Constant(f64),
    /// The single variable `x`.
    Variable,
    Unary(UnaryOp, Box<ExprNode>),
    Binary(BinaryOp, Box<ExprNode>, Box<ExprNode>),
}

impl ExprNode {
    /// Number of nodes in the tree.
    pub fn node_count(&self) -> usize {
        match self {
            ExprNode::Constant(_) | ExprNode::Variable => 1,
            ExprNode::Unary(_, a) => 1 + a.node_count(),
            ExprNode::Binary(_, a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    /// Canonical text form. For trees produced by [`parse`] (whose constants
    /// are non-negative), `parse(render(t))` returns a structurally identical
    /// tree.
    pub fn render(&self) -> String {
        let mut out = String::new();
        render_into(self, Ctx::Loosest, &mut out);
        out
    }
}

impl fmt::Display for ExprNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// What the grammar allows at a given position without parentheses, from the
/// loosest slot (top level, parentheses, function argument) down to a bare
/// atom (left operand of `^`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Ctx {
    /// Any expression.
    Loosest,
    /// A `term`: right operand of `+`/`-` (left associativity).
    Term,
    /// A `factor`: right operand of `*`/`/` and right operand of `^`.
    Factor,
    /// A `power`: operand of unary minus (no doubled minus).
    Power,
    /// A bare `atom`: left operand of `^`.
    Atom,
}

/// The tightest context in which this node is still grammatical without
/// parentheses.
fn binds_at(node: &ExprNode) -> Ctx {
    match node {
        ExprNode::Constant(_) | ExprNode::Variable => Ctx::Atom,
        ExprNode::Unary(UnaryOp::Neg, _) => Ctx::Factor,
        ExprNode::Unary(_, _) => Ctx::Atom,
        ExprNode::Binary(BinaryOp::Add | BinaryOp::Sub, _, _) => Ctx::Loosest,
        ExprNode::Binary(BinaryOp::Mul | BinaryOp::Div, _, _) => Ctx::Term,
        ExprNode::Binary(BinaryOp::Pow, _, _) => Ctx::Power,
    }
}

fn render_into(node: &ExprNode, ctx: Ctx, out: &mut String) {
    let needs_parens = binds_at(node) < ctx;
    if needs_parens {
        out.push('(');
        render_into(node, Ctx::Loosest, out);
        out.push(')');
        return;
    }
    match node {
        ExprNode::Constant(c) => {
            out.push_str(&format!("{c}"));
        }
        ExprNode::Variable => out.push('x'),
        ExprNode::Unary(UnaryOp::Neg, a) => {
            out.push('-');
            render_into(a, Ctx::Power, out);
        }
        ExprNode::Unary(op, a) => {
            out.push_str(op.name());
            out.push('(');
            render_into(a, Ctx::Loosest, out);
            out.push(')');
        }
        ExprNode::Binary(op @ (BinaryOp::Add | BinaryOp::Sub), a, b) => {
            render_into(a, Ctx::Loosest, out);
            out.push(op.symbol());
            render_into(b, Ctx::Term, out);
        }
        ExprNode::Binary(op @ (BinaryOp::Mul | BinaryOp::Div), a, b) => {
            render_into(a, Ctx::Term, out);
            out.push(op.symbol());
            render_into(b, Ctx::Factor, out);
        }
        ExprNode::Binary(BinaryOp::Pow, a, b) => {
            render_into(a, Ctx::Atom, out);
            out.push('^');
            render_into(b, Ctx::Factor, out);
        }
    }
}

/// A parse failure, pointing at the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    EmptyInput,
    UnexpectedChar(char),
    InvalidNumber,
    UnknownIdentifier(String),
    /// A builtin function name was not followed by a parenthesized argument.
    MissingCallParens(String),
    UnexpectedToken(String),
    UnexpectedEnd,
    TrailingInput,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: ", self.offset)?;
        match &self.kind {
            ParseErrorKind::EmptyInput => write!(f, "empty expression"),
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character '{c}'"),
            ParseErrorKind::InvalidNumber => write!(f, "malformed numeric literal"),
            ParseErrorKind::UnknownIdentifier(s) => write!(f, "unknown identifier '{s}'"),
            ParseErrorKind::MissingCallParens(s) => {
                write!(f, "function '{s}' takes exactly one parenthesized argument")
            }
            ParseErrorKind::UnexpectedToken(s) => write!(f, "unexpected {s}"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::TrailingInput => write!(f, "trailing input after expression"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number '{v}'"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Plus => "'+'".to_string(),
            Tok::Minus => "'-'".to_string(),
            Tok::Star => "'*'".to_string(),
            Tok::Slash => "'/'".to_string(),
            Tok::Caret => "'^'".to_string(),
            Tok::LParen => "'('".to_string(),
            Tok::RParen => "')'".to_string(),
        }
    }
}

fn lex(src: &str) -> Result<alloc::vec::Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = alloc::vec::Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            b'/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            b'^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            b'(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    if i >= bytes.len() || !bytes[i].is_ascii_digit() {
                        return Err(ParseError {
                            offset: start,
                            kind: ParseErrorKind::InvalidNumber,
                        });
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    // Only take the exponent if it is well formed; otherwise
                    // leave the 'e' for the identifier lexer (e.g. "2e" ends
                    // the number at "2" and "e" is Euler's constant).
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError {
                    offset: start,
                    kind: ParseErrorKind::InvalidNumber,
                })?;
                if !value.is_finite() {
                    return Err(ParseError {
                        offset: start,
                        kind: ParseErrorKind::InvalidNumber,
                    });
                }
                toks.push((Tok::Num(value), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(src[start..i].to_string()), start));
            }
            _ => {
                let c = src[i..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    offset: i,
                    kind: ParseErrorKind::UnexpectedChar(c),
                });
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: alloc::vec::Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::RParen) => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(ParseError {
                offset: self.offset(),
                kind: ParseErrorKind::UnexpectedToken(t.describe()),
            }),
            None => Err(ParseError {
                offset: self.end,
                kind: ParseErrorKind::UnexpectedEnd,
            }),
        }
    }

    fn expr(&mut self) -> Result<ExprNode, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinaryOp::Add,
                Some(Tok::Minus) => BinaryOp::Sub,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = ExprNode::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<ExprNode, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => BinaryOp::Mul,
                Some(Tok::Slash) => BinaryOp::Div,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = ExprNode::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<ExprNode, ParseError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.pos += 1;
            let inner = self.power()?;
            return Ok(ExprNode::Unary(UnaryOp::Neg, Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprNode, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            let exponent = self.factor()?;
            return Ok(ExprNode::Binary(
                BinaryOp::Pow,
                Box::new(base),
                Box::new(exponent),
            ));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ExprNode, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(ExprNode::Constant(v)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "x" => Ok(ExprNode::Variable),
                "pi" => Ok(ExprNode::Constant(core::f64::consts::PI)),
                "e" => Ok(ExprNode::Constant(core::f64::consts::E)),
                "exp" | "log" | "sin" | "cos" | "tan" | "atan" | "sqrt" => {
                    let op = match name.as_str() {
                        "exp" => UnaryOp::Exp,
                        "log" => UnaryOp::Log,
                        "sin" => UnaryOp::Sin,
                        "cos" => UnaryOp::Cos,
                        "tan" => UnaryOp::Tan,
                        "atan" => UnaryOp::Atan,
                        _ => UnaryOp::Sqrt,
                    };
                    if !matches!(self.peek(), Some(Tok::LParen)) {
                        return Err(ParseError {
                            offset,
                            kind: ParseErrorKind::MissingCallParens(name),
                        });
                    }
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    Ok(ExprNode::Unary(op, Box::new(arg)))
                }
                _ => Err(ParseError {
                    offset,
                    kind: ParseErrorKind::UnknownIdentifier(name),
                }),
            },
            Some(t) => Err(ParseError {
                offset,
                kind: ParseErrorKind::UnexpectedToken(t.describe()),
            }),
            None => Err(ParseError {
                offset: self.end,
                kind: ParseErrorKind::UnexpectedEnd,
            }),
        }
    }
}

/// Parse expression text into a tree.
pub fn parse(src: &str) -> Result<ExprNode, ParseError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(ParseError {
            offset: 0,
            kind: ParseErrorKind::EmptyInput,
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let node = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ParseError {
            offset: p.offset(),
            kind: ParseErrorKind::TrailingInput,
        });
    }
    Ok(node)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var() -> Box<ExprNode> {
        Box::new(ExprNode::Variable)
    }

    #[test]
    fn parses_bare_variable() {
        assert_eq!(parse("x").unwrap(), ExprNode::Variable);
    }

    #[test]
    fn parses_builtin_call() {
        assert_eq!(
            parse("exp(x)").unwrap(),
            ExprNode::Unary(UnaryOp::Exp, var())
        );
    }

    #[test]
    fn unbalanced_parenthesis_reports_offset() {
        let err = parse("sin(").unwrap_err();
        assert_eq!(err.offset, 4);
        assert_eq!(err.kind, ParseErrorKind::UnexpectedEnd);
    }

    #[test]
    fn unknown_identifier_is_reported() {
        let err = parse("2*y").unwrap_err();
        assert_eq!(err.offset, 2);
        assert!(matches!(err.kind, ParseErrorKind::UnknownIdentifier(ref s) if s == "y"));
    }

    #[test]
    fn builtin_without_argument_is_an_arity_error() {
        let err = parse("exp + 1").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::MissingCallParens(_)));
    }

    #[test]
    fn named_constants_expand_at_parse_time() {
        assert_eq!(
            parse("pi").unwrap(),
            ExprNode::Constant(core::f64::consts::PI)
        );
        assert_eq!(parse("e").unwrap(), ExprNode::Constant(core::f64::consts::E));
    }

    #[test]
    fn pow_is_right_associative_and_binds_tighter_than_neg() {
        // -x^2 == -(x^2)
        let t = parse("-x^2").unwrap();
        assert_eq!(
            t,
            ExprNode::Unary(
                UnaryOp::Neg,
                Box::new(ExprNode::Binary(
                    BinaryOp::Pow,
                    var(),
                    Box::new(ExprNode::Constant(2.0))
                ))
            )
        );
        // x^2^3 == x^(2^3)
        let t = parse("x^2^3").unwrap();
        let inner = ExprNode::Binary(
            BinaryOp::Pow,
            Box::new(ExprNode::Constant(2.0)),
            Box::new(ExprNode::Constant(3.0)),
        );
        assert_eq!(t, ExprNode::Binary(BinaryOp::Pow, var(), Box::new(inner)));
    }

    #[test]
    fn subtraction_is_left_associative() {
        // 1 - x - 1 == (1 - x) - 1
        let t = parse("1-x-1").unwrap();
        match t {
            ExprNode::Binary(BinaryOp::Sub, lhs, _) => {
                assert!(matches!(*lhs, ExprNode::Binary(BinaryOp::Sub, _, _)));
            }
            other => panic!("unexpected tree {other:?}"),
        }
    }

    #[test]
    fn scientific_literals_parse() {
        assert_eq!(parse("2.5e-1").unwrap(), ExprNode::Constant(0.25));
        assert_eq!(parse("1E3").unwrap(), ExprNode::Constant(1000.0));
        // "2e" is the number 2 followed by Euler's constant: trailing input.
        assert!(parse("2e").is_err());
    }

    #[test]
    fn render_round_trips_tricky_shapes() {
        for src in [
            "x",
            "exp(x)",
            "-x^2",
            "x-(1-x)",
            "2^3^2",
            "(x+1)*(x-1)",
            "1/(1+x^2)",
            "x/(1+x)/2",
            "-(x+1)",
            "x^(1+x)",
            "(2*x)^2",
            "x-1+2",
            "x*(2/(1+x))",
            "sin(cos(x))",
            "-sqrt(x+0.5)",
        ] {
            let t = parse(src).unwrap();
            let rendered = t.render();
            let back = parse(&rendered).unwrap_or_else(|e| {
                panic!("render of {src:?} produced unparsable {rendered:?}: {e}")
            });
            assert_eq!(back, t, "round trip failed: {src:?} -> {rendered:?}");
        }
    }
}
