//! Recursive-descent parser for form expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? int)?
//! atom   := number | symbol | 'd' ('^' int)? '(' expr ')' | '(' expr ')'
//! ```
//!
//! Symbols: `q`, `q[i,j]`, `dx[i]`, `w[i,j]`, `A[i]`, `dA[i,j]`, `v[i]`,
//! `f[i,...]`, `P<k>[i,j]`, `g`, `ginv`, `alpha`. Indices are one-based.

use num_bigint::BigInt;
use num_rational::BigRational;
use qcurv_core::{Base, Coefficient, FormExpr, Gen, Nilpotency, RingMode};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character '{0}'")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),
    #[error("grade inconsistency: grade {0} combined with grade {1}")]
    GradeMismatch(u32, u32),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number {n}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Op(c) => format!("'{c}'"),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push((Tok::Num(s.parse().expect("digits")), pos));
        } else if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_alphanumeric()) {
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push((Tok::Ident(s), pos));
        } else if "+-*/^()[],".contains(c) {
            chars.next();
            col += 1;
            out.push((Tok::Op(c), pos));
        } else {
            return Err(ParseError { line, col, kind: ParseErrorKind::UnexpectedChar(c) });
        }
    }
    out.push((Tok::End, Pos { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn err_at(pos: Pos, kind: ParseErrorKind) -> ParseError {
        ParseError { line: pos.line, col: pos.col, kind }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        Parser::err_at(
            self.pos(),
            ParseErrorKind::Unexpected { expected: expected.into(), found: self.peek().describe() },
        )
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Op(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{c}'")))
        }
    }

    fn int(&mut self) -> PResult<BigInt> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.at += 1;
                Ok(n)
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn small(&mut self) -> PResult<u32> {
        let pos = self.pos();
        let n = self.int()?;
        u32::try_from(n).map_err(|_| Parser::err_at(pos, ParseErrorKind::Invalid("integer out of range".into())))
    }

    fn index(&mut self) -> PResult<u32> {
        let pos = self.pos();
        let i = self.small()?;
        if i == 0 {
            return Err(Parser::err_at(pos, ParseErrorKind::Invalid("indices start at 1".into())));
        }
        Ok(i)
    }

    fn indices(&mut self) -> PResult<Vec<u32>> {
        self.expect('[')?;
        let mut ix = vec![self.index()?];
        while self.eat(',') {
            ix.push(self.index()?);
        }
        self.expect(']')?;
        Ok(ix)
    }

    fn indices_n(&mut self, n: usize, name: &str) -> PResult<Vec<u32>> {
        let pos = self.pos();
        let ix = self.indices()?;
        if ix.len() != n {
            let msg = format!("{name} takes {n} indices, got {}", ix.len());
            return Err(Parser::err_at(pos, ParseErrorKind::Invalid(msg)));
        }
        Ok(ix)
    }

    fn expr(&mut self) -> PResult<FormExpr> {
        let mut acc = self.term()?;
        loop {
            let pos = self.pos();
            let neg = if self.eat('+') {
                false
            } else if self.eat('-') {
                true
            } else {
                return Ok(acc);
            };
            let rhs = self.term()?;
            check_grades(&acc, &rhs, pos)?;
            acc = if neg { acc - rhs } else { acc + rhs };
        }
    }

    fn term(&mut self) -> PResult<FormExpr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = acc.mul(&rhs);
            } else if *self.peek() == Tok::Op('/') {
                let pos = self.pos();
                self.at += 1;
                let rhs = self.unary()?;
                let inv = scalar_of(&rhs)
                    .and_then(|c| c.inverse().ok())
                    .ok_or_else(|| Parser::err_at(pos, ParseErrorKind::Invalid("can only divide by a monomial scalar".into())))?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> PResult<FormExpr> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> PResult<FormExpr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        let pos = self.pos();
        self.at += 1;
        let neg = self.eat('-');
        let e = self.small()?;
        if !neg {
            return Ok(base.pow(e));
        }
        let inv = scalar_of(&base)
            .and_then(|c| c.inverse().ok())
            .ok_or_else(|| Parser::err_at(pos, ParseErrorKind::Invalid("negative powers need a monomial scalar".into())))?;
        Ok(FormExpr::scalar(inv.pow(e)))
    }

    fn atom(&mut self) -> PResult<FormExpr> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(n) => Ok(FormExpr::scalar(Coefficient::from_rational(BigRational::from_integer(n)))),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => self.symbol(&name, pos),
            _ => {
                self.at -= 1;
                Err(self.unexpected("a number, symbol or '('"))
            }
        }
    }

    fn symbol(&mut self, name: &str, pos: Pos) -> PResult<FormExpr> {
        let gen = |base: Base| Ok(FormExpr::gen(Gen::new(base)));
        match name {
            "q" => {
                if *self.peek() == Tok::Op('[') {
                    let ix = self.indices_n(2, "q")?;
                    let c = Coefficient::pair(ix[0], ix[1])
                        .map_err(|e| Parser::err_at(pos, ParseErrorKind::Invalid(e.to_string())))?;
                    Ok(FormExpr::scalar(c))
                } else {
                    Ok(FormExpr::scalar(Coefficient::q_pow(1, RingMode::Free)))
                }
            }
            "d" if matches!(self.peek(), Tok::Op('(') | Tok::Op('^')) => {
                let r = if self.eat('^') { self.small()? } else { 1 };
                self.expect('(')?;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner.d_pow(r, Nilpotency::Unbounded))
            }
            "dx" => gen(Base::Coord(self.indices_n(1, name)?[0])),
            "w" => {
                let ix = self.indices_n(2, name)?;
                gen(Base::Connection(ix[0], ix[1]))
            }
            "A" => gen(Base::Potential(self.indices_n(1, name)?[0])),
            "dA" => {
                let ix = self.indices_n(2, name)?;
                gen(Base::PotentialGrad(ix[0], ix[1]))
            }
            "v" => gen(Base::VectorComp(self.indices_n(1, name)?[0])),
            "f" => gen(Base::Component(self.indices()?)),
            "g" => gen(Base::Group),
            "ginv" => gen(Base::GroupInv),
            "alpha" => gen(Base::Alpha),
            _ => {
                if let Some(grade) = name.strip_prefix('P').and_then(|g| g.parse::<u32>().ok()) {
                    let ix = self.indices_n(2, "P")?;
                    return gen(Base::Flat { grade, row: ix[0], col: ix[1] });
                }
                Err(Parser::err_at(pos, ParseErrorKind::UnknownSymbol(name.into())))
            }
        }
    }
}

fn scalar_of(e: &FormExpr) -> Option<Coefficient> {
    if e.is_zero() {
        return None;
    }
    if e.terms().all(|(w, _)| w.is_empty()) {
        Some(e.coefficient_of(&[]))
    } else {
        None
    }
}

fn grade_at(e: &FormExpr, pos: Pos) -> PResult<Option<u32>> {
    e.grade().map_err(|err| match err {
        qcurv_core::Error::Inhomogeneous(a, b) => Parser::err_at(pos, ParseErrorKind::GradeMismatch(a, b)),
        other => Parser::err_at(pos, ParseErrorKind::Invalid(other.to_string())),
    })
}

fn check_grades(a: &FormExpr, b: &FormExpr, pos: Pos) -> PResult<()> {
    if let (Some(x), Some(y)) = (grade_at(a, pos)?, grade_at(b, pos)?) {
        if x != y {
            return Err(Parser::err_at(pos, ParseErrorKind::GradeMismatch(x, y)));
        }
    }
    Ok(())
}

/// Parses and normalises an expression.
pub fn parse_expr(src: &str) -> Result<FormExpr, ParseError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(e)
}

/// Parses an expression that must reduce to a pure scalar.
pub fn parse_scalar(src: &str) -> Result<Coefficient, ParseError> {
    let e = parse_expr(src)?;
    if e.is_zero() {
        return Ok(Coefficient::zero());
    }
    scalar_of(&e).ok_or(ParseError {
        line: 1,
        col: 1,
        kind: ParseErrorKind::Invalid(format!("'{src}' is not a scalar")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(i: u32, j: u32) -> Coefficient {
        Coefficient::pair(i, j).unwrap()
    }

    #[test]
    fn two_term_grade_two() {
        let e = parse_expr("d(w[1,2]) + q*w[1,2]*w[2,1]").unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.grade().unwrap(), Some(2));
    }

    #[test]
    fn exchange_through_parser() {
        let e = parse_expr("dx[2]*dx[1]").unwrap();
        assert_eq!(e, FormExpr::term(pair(1, 2), vec![Gen::dx(1), Gen::dx(2)]));
        assert_eq!(e.to_string(), "q[1,2]*dx[1]*dx[2]");
    }

    #[test]
    fn reversed_pair_symbol() {
        assert_eq!(parse_scalar("q[2,1]").unwrap(), pair(1, 2).inverse().unwrap());
        assert_eq!(parse_scalar("q[2,1]").unwrap().to_string(), "q[1,2]^-1");
    }

    #[test]
    fn precedence() {
        assert_eq!(parse_scalar("-q^2").unwrap(), -Coefficient::q_pow(2, RingMode::Free));
        assert_eq!(parse_scalar("-1/2*q").unwrap().to_string(), "-1/2*q");
        let e = parse_expr("d(w[1,1])*w[1,1]").unwrap();
        assert_eq!(e.to_string(), "d(w[1,1])*w[1,1]");
        assert_eq!(parse_expr("d^2(g)").unwrap().to_string(), "d^2(g)");
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_expr("w[1,2] + d(w[1,2])").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::GradeMismatch(1, 2));
        assert_eq!((err.line, err.col), (1, 8));
        let err = parse_expr("w[1,2] *\n  zz[1]").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownSymbol("zz".into()));
        assert_eq!((err.line, err.col), (2, 3));
        assert!(matches!(parse_expr("w[1,2").unwrap_err().kind, ParseErrorKind::Unexpected { .. }));
        assert!(matches!(parse_expr("w # 2").unwrap_err().kind, ParseErrorKind::UnexpectedChar('#')));
        assert!(parse_expr("q[1,1]").is_err());
        assert!(parse_expr("w[1,2]/w[1,2]").is_err());
    }

    #[test]
    fn inverse_pair_cancels() {
        assert_eq!(parse_expr("g*ginv*w[1,1]").unwrap(), FormExpr::gen(Gen::omega(1, 1)));
        assert_eq!(parse_expr("d(ginv)").unwrap().to_string(), "-ginv*d(g)*ginv");
    }
}
