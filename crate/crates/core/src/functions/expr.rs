//! Expression grammar for scalar functions of one variable.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?          right associative, binds tighter than unary minus
//! atom   := number | 'pi' | 'x' | 't' | func '(' expr ')' | '(' expr ')'
//! func   := sin | cos | exp | log | abs | sqrt
//! ```
//!
//! `x` and `t` both name the single variable.

use std::fmt;

use super::FunctionError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
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

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Abs,
    Sqrt,
}

impl Func {
    const ALL: [Func; 6] = [
        Func::Sin,
        Func::Cos,
        Func::Exp,
        Func::Log,
        Func::Abs,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
        }
    }

    fn lookup(name: &str) -> Option<Func> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Exp => v.exp(),
            Func::Log => v.ln(),
            Func::Abs => v.abs(),
            Func::Sqrt => v.sqrt(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Pi,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Evaluates at `v`; the result may be non-finite (callers report that).
    pub fn eval(&self, v: f64) -> f64 {
        match self {
            Expr::Num(c) => *c,
            Expr::Var => v,
            Expr::Pi => std::f64::consts::PI,
            Expr::Neg(e) => -e.eval(v),
            Expr::Bin(op, l, r) => {
                let (a, b) = (l.eval(v), r.eval(v));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(f, e) => f.apply(e.eval(v)),
        }
    }
}

/// Fully parenthesized form; re-parses to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) => write!(f, "{c:?}"),
            Expr::Var => write!(f, "x"),
            Expr::Pi => write!(f, "pi"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Bin(op, l, r) => write!(f, "({l}{}{r})", op.symbol()),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn syntax(pos: usize, msg: impl Into<String>) -> FunctionError {
    FunctionError::Syntax {
        pos,
        message: msg.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, FunctionError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        if ch.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if ch.is_ascii_digit() || ch == '.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // exponent part, only if followed by digits
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
            let lit = &text[start..i];
            let v: f64 = lit
                .parse()
                .map_err(|_| syntax(start, format!("malformed number '{lit}'")))?;
            out.push((start, Tok::Num(v)));
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else {
            let tok = match ch {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(ch),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(syntax(start, format!("unexpected character '{ch}'"))),
            };
            out.push((start, tok));
            i += 1;
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn eat_op(&mut self, ops: &[char]) -> Option<char> {
        match self.peek() {
            Some(Tok::Op(c)) if ops.contains(c) => {
                let c = *c;
                self.pos += 1;
                Some(c)
            }
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Expr, FunctionError> {
        let mut lhs = self.term()?;
        while let Some(c) = self.eat_op(&['+', '-']) {
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, FunctionError> {
        let mut lhs = self.unary()?;
        while let Some(c) = self.eat_op(&['*', '/']) {
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, FunctionError> {
        if self.eat_op(&['-']).is_some() {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, FunctionError> {
        let base = self.atom()?;
        if self.eat_op(&['^']).is_some() {
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn expect_rparen(&mut self) -> Result<(), FunctionError> {
        match self.peek() {
            Some(Tok::RParen) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(syntax(self.offset(), "expected ')'")),
        }
    }

    fn atom(&mut self) -> Result<Expr, FunctionError> {
        let at = self.offset();
        let Some((_, tok)) = self.toks.get(self.pos).cloned() else {
            return Err(syntax(at, "unexpected end of expression"));
        };
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "x" | "t" => Ok(Expr::Var),
                "pi" => Ok(Expr::Pi),
                _ => {
                    let Some(func) = Func::lookup(&name) else {
                        return Err(FunctionError::UnknownIdentifier { pos: at, name });
                    };
                    if self.peek() != Some(&Tok::LParen) {
                        return Err(syntax(self.offset(), format!("expected '(' after {name}")));
                    }
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    Ok(Expr::Call(func, Box::new(arg)))
                }
            },
            Tok::RParen => Err(syntax(at, "unexpected ')'")),
            Tok::Op(c) => Err(syntax(at, format!("unexpected operator '{c}'"))),
        }
    }
}

/// Parses `text` into an expression tree; errors carry the byte offset.
pub fn parse(text: &str) -> Result<Expr, FunctionError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn precedence() {
        assert_eq!(parse("1+2*3").unwrap().eval(0.0), 7.0);
        assert_eq!(parse("2^3^2").unwrap().eval(0.0), 512.0);
        assert_eq!(parse("-2^2").unwrap().eval(0.0), -4.0);
        assert_eq!(parse("2^-1").unwrap().eval(0.0), 0.5);
        assert_eq!(parse("(1-x)/4").unwrap().eval(3.0), -0.5);
        assert_eq!(parse("8/2/2").unwrap().eval(0.0), 2.0);
        assert!((parse("2*pi").unwrap().eval(0.0) - std::f64::consts::TAU).abs() < 1e-15);
        assert_eq!(parse("1.5e2").unwrap().eval(0.0), 150.0);
    }

    #[test]
    fn reference_functions() {
        let a = parse("2*sin(x)+cos(2*x)").unwrap();
        assert_eq!(a.eval(0.0), 1.0);
        let c = parse("x^(-1/4)").unwrap();
        assert!((c.eval(1.0 / 16.0) - 2.0).abs() < 1e-15);
        assert_eq!(parse("1").unwrap(), Expr::Num(1.0));
        assert_eq!(parse("t").unwrap(), Expr::Var);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse("2*foo(x)"),
            Err(FunctionError::UnknownIdentifier {
                pos: 2,
                name: "foo".into()
            })
        );
        match parse("1+*2") {
            Err(FunctionError::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        match parse("sin(x") {
            Err(FunctionError::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse(""),
            Err(FunctionError::Syntax { pos: 0, .. })
        ));
        assert!(matches!(
            parse("1 2"),
            Err(FunctionError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            parse("3 $"),
            Err(FunctionError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(parse("sin x"), Err(FunctionError::Syntax { .. })));
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0.0f64..1e6).prop_map(Expr::Num),
            Just(Expr::Var),
            Just(Expr::Pi),
        ];
        leaf.prop_recursive(5, 48, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (
                    prop_oneof![
                        Just(BinOp::Add),
                        Just(BinOp::Sub),
                        Just(BinOp::Mul),
                        Just(BinOp::Div),
                        Just(BinOp::Pow)
                    ],
                    inner.clone(),
                    inner.clone()
                )
                    .prop_map(|(op, l, r)| Expr::Bin(op, Box::new(l), Box::new(r))),
                (prop::sample::select(Func::ALL.to_vec()), inner)
                    .prop_map(|(f, e)| Expr::Call(f, Box::new(e))),
            ]
        })
    }

    proptest! {
        #[test]
        fn printed_tree_reparses_identically(e in arb_expr()) {
            let printed = e.to_string();
            prop_assert_eq!(parse(&printed).unwrap(), e);
        }
    }
}
