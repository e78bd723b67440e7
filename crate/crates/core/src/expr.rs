//! Surface-syntax expressions: a recursive-descent parser (precedence
//! climbing: `^` over `*` over `+`/`-`) and evaluation into whichever algebra
//! the ambient preset selects.
//!
//! Grammar:
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' ('-'? nat))?
//! atom   := scalar | generator | word | '(' expr ')' | '[' expr ',' expr ']' | '-' atom
//! scalar := int ('/' nat)?
//! ```
//! Generators: `g`, `h`, `E[word]`, `E(k)`, `w(n)`, `u(n)`, `a(n)`; bare
//! multi-letter `g/h` strings denote words of the free monoid.

use num::bigint::BigInt;
use num::Num;

use crate::fdb::{CPoly, FPoly};
use crate::free::{bracket, ls_element, nc_multiply, NcPoly};
use crate::quotient::{
    normal_form_word, omega_tilde_expansion, project_from_free, q_multiply, AlgebraSpec, Gen,
    Preset, QElement, Strategy,
};
use crate::scalar::Field;
use crate::word::{is_lyndon, Word};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Ratio(BigInt, BigInt),
    Atom(Atom),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Neg(Box<Expr>),
    Bracket(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    G,
    H,
    /// A plain word in the free monoid, e.g. `gghh`.
    WordAtom(Word),
    /// `E[word]`: the Lyndon-Shirshov element of a Lyndon word.
    EWord(Word),
    /// `E(k)`, shorthand for `E[omega_k]`.
    EIdx(u32),
    /// `w(n)`: the word `g h^n` (free), its image (quotients), or the omega
    /// generator (BF).
    W(u32),
    /// `u(n)`: commutative Faa di Bruno variable.
    U(u32),
    /// `a(n)`: noncommutative Faa di Bruno letter.
    A(u32),
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(src: &str) -> Result<Lexer> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, col);
        let bump = |ch: char, line: &mut usize, col: &mut usize| {
            if ch == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                chars.next();
                bump(c, &mut line, &mut col);
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                        bump(d, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                let v = BigInt::from_str_radix(&s, 10).expect("digits");
                toks.push((Tok::Int(v), l0, c0));
            }
            'a'..='z' | 'A'..='Z' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphabetic() {
                        s.push(d);
                        chars.next();
                        bump(d, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(s), l0, c0));
            }
            _ => {
                let t = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBrack,
                    ']' => Tok::RBrack,
                    ',' => Tok::Comma,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '/' => Tok::Slash,
                    other => {
                        return Err(Error::Syntax {
                            line: l0,
                            col: c0,
                            msg: format!("unexpected character '{other}'"),
                        })
                    }
                };
                chars.next();
                bump(c, &mut line, &mut col);
                toks.push((t, l0, c0));
            }
        }
    }
    Ok(Lexer { toks, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or((1, 1), |(_, l, c)| (*l, *c))
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::Syntax { line, col, msg: msg.into() }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.next() {
            Some(got) if got == t => Ok(()),
            _ => {
                self.pos -= 1;
                Err(self.err(format!("expected {t:?}")))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Parser

/// The algebra an expression evaluates in.
#[derive(Debug, Clone)]
pub enum EvalContext {
    /// The free algebra `k<g,h>`.
    Free(Field),
    /// A word-engine quotient preset.
    Quotient(AlgebraSpec),
    /// Commutative Faa di Bruno (`u_1` invertible in the Hopf variant).
    CFdB(AlgebraSpec),
    /// Noncommutative Faa di Bruno.
    NcFdB(AlgebraSpec),
}

impl EvalContext {
    pub fn of_spec(spec: &AlgebraSpec) -> EvalContext {
        match spec.preset {
            Preset::BFdB | Preset::HFdB => EvalContext::CFdB(spec.clone()),
            Preset::BFdBnc => EvalContext::NcFdB(spec.clone()),
            _ => EvalContext::Quotient(spec.clone()),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            EvalContext::Free(f) => *f,
            EvalContext::Quotient(s) | EvalContext::CFdB(s) | EvalContext::NcFdB(s) => s.field,
        }
    }
}

/// Parse a source string; atom legality is checked against the context so
/// diagnostics carry positions.
pub fn parse(src: &str, ctx: &EvalContext) -> Result<Expr> {
    let mut lx = lex(src)?;
    let e = parse_expr(&mut lx, ctx)?;
    if lx.peek().is_some() {
        return Err(lx.err("trailing input"));
    }
    Ok(e)
}

fn parse_expr(lx: &mut Lexer, ctx: &EvalContext) -> Result<Expr> {
    let mut acc = parse_term(lx, ctx)?;
    loop {
        match lx.peek() {
            Some(Tok::Plus) => {
                lx.next();
                acc = Expr::Add(Box::new(acc), Box::new(parse_term(lx, ctx)?));
            }
            Some(Tok::Minus) => {
                lx.next();
                acc = Expr::Sub(Box::new(acc), Box::new(parse_term(lx, ctx)?));
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_term(lx: &mut Lexer, ctx: &EvalContext) -> Result<Expr> {
    let mut acc = parse_factor(lx, ctx)?;
    while lx.peek() == Some(&Tok::Star) {
        lx.next();
        acc = Expr::Mul(Box::new(acc), Box::new(parse_factor(lx, ctx)?));
    }
    Ok(acc)
}

fn parse_factor(lx: &mut Lexer, ctx: &EvalContext) -> Result<Expr> {
    let atom = parse_atom(lx, ctx)?;
    if lx.peek() == Some(&Tok::Caret) {
        lx.next();
        let neg = if lx.peek() == Some(&Tok::Minus) {
            lx.next();
            true
        } else {
            false
        };
        match lx.next() {
            Some(Tok::Int(v)) => {
                let e: i64 = v.try_into().map_err(|_| lx.err("exponent too large"))?;
                return Ok(Expr::Pow(Box::new(atom), if neg { -e } else { e }));
            }
            _ => {
                lx.pos -= 1;
                return Err(lx.err("expected integer exponent after '^'"));
            }
        }
    }
    Ok(atom)
}

fn parse_atom(lx: &mut Lexer, ctx: &EvalContext) -> Result<Expr> {
    match lx.next() {
        Some(Tok::Minus) => Ok(Expr::Neg(Box::new(parse_atom(lx, ctx)?))),
        Some(Tok::Int(v)) => {
            if lx.peek() == Some(&Tok::Slash) {
                lx.next();
                match lx.next() {
                    Some(Tok::Int(d)) => Ok(Expr::Ratio(v, d)),
                    _ => {
                        lx.pos -= 1;
                        Err(lx.err("expected denominator"))
                    }
                }
            } else {
                Ok(Expr::Int(v))
            }
        }
        Some(Tok::LParen) => {
            let e = parse_expr(lx, ctx)?;
            lx.expect(Tok::RParen)?;
            Ok(e)
        }
        Some(Tok::LBrack) => {
            let a = parse_expr(lx, ctx)?;
            lx.expect(Tok::Comma)?;
            let b = parse_expr(lx, ctx)?;
            lx.expect(Tok::RBrack)?;
            Ok(Expr::Bracket(Box::new(a), Box::new(b)))
        }
        Some(Tok::Ident(name)) => parse_ident(lx, ctx, name),
        _ => {
            lx.pos -= 1;
            Err(lx.err("expected an atom"))
        }
    }
}

/// `name(3)` or the compact `name3` form the printers use.
fn indexed(lx: &mut Lexer) -> Result<u32> {
    if let Some(Tok::Int(v)) = lx.peek() {
        let n = v.clone().try_into().map_err(|_| lx.err("index too large"))?;
        lx.next();
        return Ok(n);
    }
    lx.expect(Tok::LParen)?;
    let n = match lx.next() {
        Some(Tok::Int(v)) => v.try_into().map_err(|_| lx.err("index too large"))?,
        _ => {
            lx.pos -= 1;
            return Err(lx.err("expected index"));
        }
    };
    lx.expect(Tok::RParen)?;
    Ok(n)
}

fn parse_ident(lx: &mut Lexer, ctx: &EvalContext, name: String) -> Result<Expr> {
    let atom = match name.as_str() {
        "g" => Atom::G,
        "h" => Atom::H,
        "E" => match lx.peek() {
            Some(Tok::LBrack) => {
                lx.next();
                let word = match lx.next() {
                    Some(Tok::Ident(w)) => Word::parse(&w).map_err(|_| lx.err("bad word"))?,
                    _ => {
                        lx.pos -= 1;
                        return Err(lx.err("expected a g/h word inside E[...]"));
                    }
                };
                lx.expect(Tok::RBrack)?;
                if !is_lyndon(&word)? {
                    return Err(Error::NotLyndon(word.to_string()));
                }
                Atom::EWord(word)
            }
            Some(Tok::LParen) => Atom::EIdx(indexed(lx)?),
            _ => return Err(lx.err("E needs [word] or (index)")),
        },
        "w" => Atom::W(indexed(lx)?),
        "u" => Atom::U(indexed(lx)?),
        "a" => Atom::A(indexed(lx)?),
        other if other.chars().all(|c| c == 'g' || c == 'h') => {
            Atom::WordAtom(Word::parse(other).unwrap())
        }
        other => return Err(lx.err(format!("unknown identifier '{other}'"))),
    };
    check_legal(&atom, ctx)?;
    Ok(Expr::Atom(atom))
}

fn check_legal(atom: &Atom, ctx: &EvalContext) -> Result<()> {
    let ok = match (atom, ctx) {
        (Atom::G | Atom::H | Atom::WordAtom(_) | Atom::EWord(_) | Atom::EIdx(_) | Atom::W(_),
            EvalContext::Free(_)) => true,
        (Atom::H, EvalContext::Quotient(s)) => s.has_h(),
        (Atom::G | Atom::EIdx(_) | Atom::EWord(_), EvalContext::Quotient(_)) => true,
        (Atom::WordAtom(_), EvalContext::Quotient(s)) => s.has_h(),
        (Atom::W(_), EvalContext::Quotient(s)) => s.has_omega() || s.has_h(),
        (Atom::U(_), EvalContext::CFdB(_)) => true,
        (Atom::A(_), EvalContext::NcFdB(_)) => true,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::IllegalGenerator(format!("{atom:?}")))
    }
}

// ---------------------------------------------------------------------------
// Values and evaluation

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Nc(NcPoly),
    Q(QElement),
    C(CPoly),
    F(FPoly),
}

impl Value {
    pub fn display(&self) -> String {
        match self {
            Value::Nc(p) => p.to_string(),
            Value::Q(q) => q.to_string(),
            Value::C(c) => c.to_string(),
            Value::F(f) => f.to_string(),
        }
    }
}

pub fn eval(expr: &Expr, ctx: &EvalContext) -> Result<Value> {
    let field = ctx.field();
    match expr {
        Expr::Int(v) => scalar_value(ctx, field.from_bigint(v)),
        Expr::Ratio(n, d) => scalar_value(ctx, field.from_ratio(n, d)?),
        Expr::Atom(a) => atom_value(a, ctx),
        Expr::Add(a, b) => add(eval(a, ctx)?, eval(b, ctx)?),
        Expr::Sub(a, b) => {
            let minus = mul_scalar(eval(b, ctx)?, &-field.one());
            add(eval(a, ctx)?, minus)
        }
        Expr::Neg(a) => Ok(mul_scalar(eval(a, ctx)?, &-field.one())),
        Expr::Mul(a, b) => mul(ctx, eval(a, ctx)?, eval(b, ctx)?),
        Expr::Bracket(a, b) => {
            let x = eval(a, ctx)?;
            let y = eval(b, ctx)?;
            let xy = mul(ctx, x.clone(), y.clone())?;
            let yx = mul_scalar(mul(ctx, y, x)?, &-field.one());
            add(xy, yx)
        }
        Expr::Pow(a, e) => {
            let base = eval(a, ctx)?;
            if *e >= 0 {
                let mut acc = scalar_value(ctx, field.one())?;
                for _ in 0..*e {
                    acc = mul(ctx, acc, base.clone())?;
                }
                Ok(acc)
            } else {
                negative_power(ctx, a, base, *e)
            }
        }
    }
}

fn negative_power(ctx: &EvalContext, base_expr: &Expr, base: Value, e: i64) -> Result<Value> {
    // negative exponents only on the invertible grouplikes: g (when g is
    // invertible in the preset) and u_1 in the Hopf Faa di Bruno algebra
    match (base_expr, ctx) {
        (Expr::Atom(Atom::G), EvalContext::Quotient(s))
            if s.localized() || s.g_order().is_some() =>
        {
            let w = crate::quotient::PbwMonomial::g_power(e).gen_word();
            let q = if s.localized() {
                normal_form_word(s, w, s.field.one(), Strategy::Leftmost)?
            } else {
                let n = s.g_order().unwrap() as i64;
                let m = crate::quotient::PbwMonomial::g_power(e.rem_euclid(n));
                QElement::monomial(s.field, m, s.field.one())
            };
            Ok(Value::Q(q))
        }
        (Expr::Atom(Atom::U(1)), EvalContext::CFdB(s)) if s.preset == Preset::HFdB => {
            Ok(Value::C(CPoly::var_pow(s.field, 1, e)))
        }
        _ => Err(Error::IllegalGenerator(format!("negative power of {base:?}"))),
    }
}

fn scalar_value(ctx: &EvalContext, c: crate::scalar::Scalar) -> Result<Value> {
    Ok(match ctx {
        EvalContext::Free(f) => Value::Nc(NcPoly::one(*f).scale(&c)),
        EvalContext::Quotient(s) => Value::Q(QElement::one(s.field).scale(&c)),
        EvalContext::CFdB(s) => Value::C(CPoly::one(s.field).scale(&c)),
        EvalContext::NcFdB(s) => Value::F(FPoly::one(s.field).scale(&c)),
    })
}

fn atom_value(a: &Atom, ctx: &EvalContext) -> Result<Value> {
    match ctx {
        EvalContext::Free(f) => Ok(Value::Nc(match a {
            Atom::G => NcPoly::word(*f, Word::g()),
            Atom::H => NcPoly::word(*f, Word::h()),
            Atom::WordAtom(w) => NcPoly::word(*f, w.clone()),
            Atom::EWord(w) => ls_element(*f, w)?,
            Atom::EIdx(k) => ls_element(*f, &crate::word::omega_word(*k as usize))?,
            Atom::W(n) => NcPoly::word(*f, crate::word::omega_word(*n as usize)),
            _ => unreachable!("legality checked at parse time"),
        })),
        EvalContext::Quotient(s) => Ok(Value::Q(match a {
            Atom::G => QElement::generator(s, Gen::G)?,
            Atom::H => QElement::generator(s, Gen::H)?,
            Atom::WordAtom(w) => {
                let gens: Vec<Gen> = w
                    .0
                    .iter()
                    .map(|l| if *l == crate::word::Letter::G { Gen::G } else { Gen::H })
                    .collect();
                normal_form_word(s, gens, s.field.one(), Strategy::Leftmost)?
            }
            Atom::EWord(w) => project_from_free(s, &ls_element(s.field, w)?)?,
            Atom::EIdx(k) => QElement::generator(s, Gen::E(*k))?,
            Atom::W(n) => {
                if s.has_omega() {
                    QElement::generator(s, Gen::Om(*n))?
                } else {
                    omega_tilde_expansion(s, *n)?
                }
            }
            _ => unreachable!(),
        })),
        EvalContext::CFdB(s) => Ok(Value::C(match a {
            Atom::U(n) => CPoly::var(s.field, *n),
            _ => unreachable!(),
        })),
        EvalContext::NcFdB(s) => Ok(Value::F(match a {
            Atom::A(n) => FPoly::letter(s.field, *n),
            _ => unreachable!(),
        })),
    }
}

fn add(a: Value, b: Value) -> Result<Value> {
    Ok(match (a, b) {
        (Value::Nc(x), Value::Nc(y)) => Value::Nc(x.add(&y)?),
        (Value::Q(x), Value::Q(y)) => Value::Q(x.add(&y)?),
        (Value::C(x), Value::C(y)) => Value::C(x.add(&y)),
        (Value::F(x), Value::F(y)) => Value::F(x.add(&y)),
        _ => return Err(Error::SpecMismatch),
    })
}

fn mul(ctx: &EvalContext, a: Value, b: Value) -> Result<Value> {
    Ok(match (a, b) {
        (Value::Nc(x), Value::Nc(y)) => Value::Nc(nc_multiply(&x, &y)?),
        (Value::Q(x), Value::Q(y)) => {
            let EvalContext::Quotient(s) = ctx else { return Err(Error::SpecMismatch) };
            Value::Q(q_multiply(s, &x, &y)?)
        }
        (Value::C(x), Value::C(y)) => Value::C(x.mul(&y)),
        (Value::F(x), Value::F(y)) => Value::F(x.mul(&y)),
        _ => return Err(Error::SpecMismatch),
    })
}

fn mul_scalar(v: Value, c: &crate::scalar::Scalar) -> Value {
    match v {
        Value::Nc(x) => Value::Nc(x.scale(c)),
        Value::Q(x) => Value::Q(x.scale(c)),
        Value::C(x) => Value::C(x.scale(c)),
        Value::F(x) => Value::F(x.scale(c)),
    }
}

/// Convenience: parse then evaluate.
pub fn eval_str(src: &str, ctx: &EvalContext) -> Result<Value> {
    eval(&parse(src, ctx)?, ctx)
}

/// The free-algebra bracket helper used by tests and the CLI.
pub fn nc_bracket(a: &NcPoly, b: &NcPoly) -> Result<NcPoly> {
    bracket(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free() -> EvalContext {
        EvalContext::Free(Field::Rational)
    }

    #[test]
    fn parse_and_eval_free() {
        let e = eval_str("E[gh]", &free()).unwrap();
        let want = ls_element(Field::Rational, &Word::parse("gh").unwrap()).unwrap();
        assert_eq!(e, Value::Nc(want.clone()));
        // [g,[g,h]] is the E_{ggh} expansion
        let e = eval_str("[g,[g,h]]", &free()).unwrap();
        let eggh = ls_element(Field::Rational, &Word::parse("ggh").unwrap()).unwrap();
        assert_eq!(e, Value::Nc(eggh));
        // shorthand E(1) = E[gh]
        assert_eq!(eval_str("E(1)", &free()).unwrap(), Value::Nc(want));
        // a non-Lyndon argument is rejected
        assert!(matches!(parse("E[hg]", &free()), Err(Error::NotLyndon(_))));
    }

    #[test]
    fn parse_diagnostics_carry_positions() {
        match parse("g + + h", &free()) {
            Err(Error::Syntax { line: 1, col, .. }) => assert_eq!(col, 5),
            other => panic!("{other:?}"),
        }
        match parse("g + q", &free()) {
            Err(Error::Syntax { col, .. }) => assert_eq!(col, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn arithmetic_and_precedence() {
        // ^ binds tighter than *, which binds tighter than +
        let v = eval_str("2*g^2 + 1/2*h", &free()).unwrap();
        let Value::Nc(p) = v else { panic!() };
        assert_eq!(p.terms.len(), 2);
        let gg = Word::parse("gg").unwrap();
        assert_eq!(p.terms[&gg], Field::Rational.from_i64(2));
        // unary minus
        let v = eval_str("-g + g", &free()).unwrap();
        assert_eq!(v, Value::Nc(NcPoly::zero(Field::Rational)));
        // whitespace insensitivity
        assert_eq!(
            eval_str("g*h+h*g", &free()).unwrap(),
            eval_str(" g * h + h * g ", &free()).unwrap()
        );
    }

    #[test]
    fn quotient_context() {
        let s = AlgebraSpec::tbar(0).unwrap();
        let ctx = EvalContext::Quotient(s.clone());
        // gh rewrites
        let v = eval_str("g*h", &ctx).unwrap();
        let Value::Q(q) = v else { panic!() };
        assert_eq!(q.terms.len(), 2);
        // word atoms go through the rewriting engine too
        assert_eq!(eval_str("gh", &ctx).unwrap(), eval_str("g*h", &ctx).unwrap());
        // E of a g-heavy Lyndon word projects to zero
        let v = eval_str("E[ggh]", &ctx).unwrap();
        assert_eq!(v, Value::Q(QElement::zero(Field::Rational)));
        // g^-1 needs an invertible g
        assert!(eval_str("g^-1", &ctx).is_err());
        let pm = EvalContext::Quotient(AlgebraSpec::tbar_pm(0).unwrap());
        assert!(eval_str("g^-1", &pm).is_ok());
        let n3 = EvalContext::Quotient(AlgebraSpec::tbar_n(3, 3).unwrap());
        let v = eval_str("g^-1", &n3).unwrap();
        let Value::Q(q) = v else { panic!() };
        assert_eq!(q.terms.keys().next().unwrap().e_g, 2);
    }

    #[test]
    fn fdb_contexts() {
        let c = EvalContext::CFdB(AlgebraSpec::fdb(Preset::HFdB, 0).unwrap());
        assert!(eval_str("u(3)*u(1)^-2", &c).is_ok());
        let b = EvalContext::CFdB(AlgebraSpec::fdb(Preset::BFdB, 0).unwrap());
        assert!(eval_str("u(1)^-1", &b).is_err());
        let f = EvalContext::NcFdB(AlgebraSpec::fdb(Preset::BFdBnc, 0).unwrap());
        assert!(eval_str("a(0)*a(2) - a(2)*a(0)", &f).is_ok());
        assert!(matches!(eval_str("g", &f), Err(Error::IllegalGenerator(_))));
    }

    #[test]
    fn print_parse_roundtrip_corpus() {
        // a corpus of expressions: print(eval(parse(s))) re-parses and
        // re-evaluates to the same value
        let free_ctx = free();
        let tbar_ctx = EvalContext::Quotient(AlgebraSpec::tbar(0).unwrap());
        let pm_ctx = EvalContext::Quotient(AlgebraSpec::tbar_pm(0).unwrap());
        let bf_ctx = EvalContext::Quotient(AlgebraSpec::bf(0).unwrap());
        let cf_ctx = EvalContext::CFdB(AlgebraSpec::fdb(Preset::HFdB, 0).unwrap());
        let nf_ctx = EvalContext::NcFdB(AlgebraSpec::fdb(Preset::BFdBnc, 0).unwrap());
        let corpus: Vec<(&EvalContext, Vec<&str>)> = vec![
            (
                &free_ctx,
                vec![
                    "g", "h", "gh - hg", "E[gh]", "E[gghh]", "E(3)", "w(4)",
                    "[E[gggh], E[h]]", "2*g^2 + 1/2*h", "(g+h)^3", "g*h*g - 3*hgh",
                    "[g,[g,h]] + E[ggh]", "-g", "1 - g", "5/6", "ghhgh + 2*hg", "hh*g - g*hh",
                ],
            ),
            (
                &tbar_ctx,
                vec![
                    "g*h", "E(2)*E(1)", "h^2*E(1)*g^3", "w(3)", "E(1)*h - h*E(1)", "gh + hg",
                    "E(1)^2 - E(2)*g", "[E(1), h]", "h*h*h", "w(2)*w(1)", "(g + E(1))^2",
                    "3*h - 2/3*E(2)",
                ],
            ),
            (
                &pm_ctx,
                vec!["g^-2", "h*g^-1", "E(1)*g^-3", "[g^-1, h]", "g^-1*g", "h^2*g^-2 + E(2)"],
            ),
            (&bf_ctx, vec!["w(1)*w(1)", "w(2)*E(1)", "g*w(3)", "w(1)*E(2)*g", "E(1)*w(1)"]),
            (
                &cf_ctx,
                vec!["u(3)", "u(1)^-1*u(2)^2", "u(2) - 1/2*u(1)", "u(4)*u(2)", "(u(2)+u(3))^2"],
            ),
            (
                &nf_ctx,
                vec!["a(0)", "a(1)*a(2)", "a(2) - 2*a(0)^2", "[a(1), a(2)]", "a(3)*a(0)*a(1)"],
            ),
        ];
        let mut count = 0;
        for (ctx, exprs) in corpus {
            for src in exprs {
                let v1 = eval_str(src, ctx).unwrap_or_else(|e| panic!("{src}: {e}"));
                let printed = v1.display();
                let v2 = eval_str(&printed, ctx)
                    .unwrap_or_else(|e| panic!("reparse of '{printed}' from '{src}': {e}"));
                assert_eq!(v1, v2, "{src} -> {printed}");
                count += 1;
            }
        }
        assert!(count >= 50, "corpus has {count} expressions");
    }
}
