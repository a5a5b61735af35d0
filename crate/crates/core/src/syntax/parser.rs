
use super::lexer::{lex, Spanned, Tok};
use super::ParseError;
use crate::comb::Agent;
use crate::name::{Atom, Name};
use crate::pi::PiTerm;
use crate::rho::{RName, RhoTerm};
use crate::rhocomb::{QName, RcTerm};
use crate::yoshida::YoshidaTerm;

struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Cursor {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Cursor { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError::new(s.line, s.col, msg)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.error(format!("expected {wanted}, found {}", self.peek()))
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&t.to_string()))
        }
    }

    fn eat(&mut self, t: Tok) -> bool {
        if *self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<Atom, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Atom::new(s))
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    /// `p ('|' p)*`
    fn par_list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
        let mut items = vec![item(self)?];
        while self.eat(Tok::Bar) {
            items.push(item(self)?);
        }
        Ok(items)
    }

    /// `'(' name (',' name)* ')'` after an atom keyword.
    fn args<N>(&mut self, mut name: impl FnMut(&mut Self) -> Result<N, ParseError>) -> Result<Vec<N>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut out = vec![name(self)?];
        while self.eat(Tok::Comma) {
            out.push(name(self)?);
        }
        self.expect(Tok::RParen)?;
        Ok(out)
    }
}

fn fold_right<T>(items: Vec<T>, par: impl Fn(T, T) -> T) -> T {
    let mut iter = items.into_iter().rev();
    let last = iter.next().expect("nonempty");
    iter.fold(last, |acc, t| par(t, acc))
}

// ---------------------------------------------------------------------------
// π

pub fn parse_pi(text: &str) -> Result<PiTerm, ParseError> {
    let mut c = Cursor::new(text)?;
    let t = pi_par(&mut c)?;
    c.finish()?;
    Ok(t)
}

fn pi_par(c: &mut Cursor) -> Result<PiTerm, ParseError> {
    Ok(fold_right(c.par_list(pi_prefix)?, PiTerm::par))
}

fn pi_prefix(c: &mut Cursor) -> Result<PiTerm, ParseError> {
    match c.peek().clone() {
        Tok::Zero => {
            c.bump();
            Ok(PiTerm::Zero)
        }
        Tok::For => {
            c.bump();
            c.expect(Tok::LParen)?;
            let y = c.ident()?;
            c.expect(Tok::Arrow)?;
            let x = c.ident()?;
            c.expect(Tok::RParen)?;
            Ok(PiTerm::input(y, x, pi_prefix(c)?))
        }
        Tok::Star => {
            c.bump();
            Ok(PiTerm::repl(pi_prefix(c)?))
        }
        Tok::LParen if *c.peek_at(1) == Tok::New => {
            c.bump();
            c.bump();
            let x = c.ident()?;
            c.expect(Tok::RParen)?;
            Ok(PiTerm::new_name(x, pi_prefix(c)?))
        }
        Tok::LParen => {
            c.bump();
            let t = pi_par(c)?;
            c.expect(Tok::RParen)?;
            Ok(t)
        }
        Tok::Ident(_) => {
            let x = c.ident()?;
            c.expect(Tok::Bang)?;
            c.expect(Tok::LParen)?;
            let v = c.ident()?;
            c.expect(Tok::RParen)?;
            Ok(PiTerm::output(x, v))
        }
        _ => Err(c.unexpected("a process")),
    }
}

// ---------------------------------------------------------------------------
// Yoshida

pub fn parse_yoshida(text: &str) -> Result<YoshidaTerm, ParseError> {
    let mut c = Cursor::new(text)?;
    let t = y_par(&mut c)?;
    c.finish()?;
    Ok(t)
}

fn y_par(c: &mut Cursor) -> Result<YoshidaTerm, ParseError> {
    Ok(fold_right(c.par_list(y_prefix)?, YoshidaTerm::par))
}

fn y_prefix(c: &mut Cursor) -> Result<YoshidaTerm, ParseError> {
    match c.peek().clone() {
        Tok::Zero => {
            c.bump();
            Ok(YoshidaTerm::Zero)
        }
        Tok::Star => {
            c.bump();
            Ok(YoshidaTerm::repl(y_prefix(c)?))
        }
        Tok::LParen if *c.peek_at(1) == Tok::New => {
            c.bump();
            c.bump();
            let x = c.ident()?;
            c.expect(Tok::RParen)?;
            Ok(YoshidaTerm::new_name(x, y_prefix(c)?))
        }
        Tok::LParen => {
            c.bump();
            let t = y_par(c)?;
            c.expect(Tok::RParen)?;
            Ok(t)
        }
        Tok::Ident(kw) => {
            let (line, col) = (c.toks[c.pos].line, c.toks[c.pos].col);
            c.bump();
            let args = c.args(|c| c.ident())?;
            if kw == "m" {
                if args.len() != 2 {
                    return Err(ParseError::new(line, col, format!("m expects 2 names, got {}", args.len())));
                }
                let mut it = args.into_iter();
                let (a, b) = (it.next().expect("arity"), it.next().expect("arity"));
                return Ok(YoshidaTerm::m(a, b));
            }
            let kind = Agent::from_keyword(&kw)
                .ok_or_else(|| ParseError::new(line, col, format!("unknown combinator `{kw}`")))?;
            YoshidaTerm::agent(kind, args).map_err(|m| ParseError::new(line, col, m))
        }
        _ => Err(c.unexpected("a combinator process")),
    }
}

// ---------------------------------------------------------------------------
// ρ

pub fn parse_rho(text: &str) -> Result<RhoTerm, ParseError> {
    let mut c = Cursor::new(text)?;
    let t = rho_par(&mut c)?;
    c.finish()?;
    Ok(t)
}

pub fn parse_rho_name(text: &str) -> Result<RName, ParseError> {
    let mut c = Cursor::new(text)?;
    let n = rho_name(&mut c)?;
    c.finish()?;
    Ok(n)
}

fn rho_par(c: &mut Cursor) -> Result<RhoTerm, ParseError> {
    Ok(fold_right(c.par_list(rho_prefix)?, RhoTerm::par))
}

fn rho_name(c: &mut Cursor) -> Result<RName, ParseError> {
    match c.peek() {
        Tok::At => {
            c.bump();
            Ok(Name::quote(rho_quoted(c)?))
        }
        Tok::Ident(_) => Ok(Name::Atom(c.ident()?)),
        _ => Err(c.unexpected("a name")),
    }
}

/// Process after `@`: `0` or a parenthesized process.
fn rho_quoted(c: &mut Cursor) -> Result<RhoTerm, ParseError> {
    match c.peek() {
        Tok::Zero => {
            c.bump();
            Ok(RhoTerm::Zero)
        }
        Tok::LParen => {
            c.bump();
            let t = rho_par(c)?;
            c.expect(Tok::RParen)?;
            Ok(t)
        }
        _ => Err(c.unexpected("`0` or `(` after `@`")),
    }
}

fn rho_drop(c: &mut Cursor) -> Result<RName, ParseError> {
    if *c.peek() == Tok::LParen {
        c.bump();
        let n = rho_name(c)?;
        c.expect(Tok::RParen)?;
        Ok(n)
    } else {
        rho_name(c)
    }
}

fn rho_prefix(c: &mut Cursor) -> Result<RhoTerm, ParseError> {
    match c.peek().clone() {
        Tok::Zero => {
            c.bump();
            Ok(RhoTerm::Zero)
        }
        Tok::For => {
            c.bump();
            c.expect(Tok::LParen)?;
            let y = rho_name(c)?;
            c.expect(Tok::Arrow)?;
            let x = rho_name(c)?;
            c.expect(Tok::RParen)?;
            Ok(RhoTerm::input(y, x, rho_prefix(c)?))
        }
        Tok::Star => {
            c.bump();
            Ok(RhoTerm::Drop(rho_drop(c)?))
        }
        Tok::LParen => {
            c.bump();
            let t = rho_par(c)?;
            c.expect(Tok::RParen)?;
            Ok(t)
        }
        Tok::Ident(_) | Tok::At => {
            let x = rho_name(c)?;
            c.expect(Tok::Bang)?;
            c.expect(Tok::LParen)?;
            let payload = rho_payload(c)?;
            c.expect(Tok::RParen)?;
            Ok(RhoTerm::lift(x, payload))
        }
        _ => Err(c.unexpected("a process")),
    }
}

/// A payload that is a bare name `y` stands for `*y`.
fn rho_payload(c: &mut Cursor) -> Result<RhoTerm, ParseError> {
    if matches!(c.peek(), Tok::Ident(_) | Tok::At) {
        let save = c.pos;
        if let Ok(n) = rho_name(c) {
            if *c.peek() == Tok::RParen {
                return Ok(RhoTerm::Drop(n));
            }
        }
        c.pos = save;
    }
    rho_par(c)
}

// ---------------------------------------------------------------------------
// RHO combinators

pub fn parse_rhocomb(text: &str) -> Result<RcTerm, ParseError> {
    let mut c = Cursor::new(text)?;
    let t = rc_par(&mut c)?;
    c.finish()?;
    Ok(t)
}

pub fn parse_rhocomb_name(text: &str) -> Result<QName, ParseError> {
    let mut c = Cursor::new(text)?;
    let n = rc_name(&mut c)?;
    c.finish()?;
    Ok(n)
}

fn rc_par(c: &mut Cursor) -> Result<RcTerm, ParseError> {
    Ok(fold_right(c.par_list(rc_prefix)?, RcTerm::par))
}

fn rc_name(c: &mut Cursor) -> Result<QName, ParseError> {
    match c.peek() {
        Tok::At => {
            c.bump();
            match c.peek() {
                Tok::Zero => {
                    c.bump();
                    Ok(Name::quote(RcTerm::Zero))
                }
                Tok::LParen => {
                    c.bump();
                    let t = rc_par(c)?;
                    c.expect(Tok::RParen)?;
                    Ok(Name::quote(t))
                }
                _ => Err(c.unexpected("`0` or `(` after `@`")),
            }
        }
        Tok::Ident(_) => Ok(Name::Atom(c.ident()?)),
        _ => Err(c.unexpected("a name")),
    }
}

fn rc_prefix(c: &mut Cursor) -> Result<RcTerm, ParseError> {
    match c.peek().clone() {
        Tok::Zero => {
            c.bump();
            Ok(RcTerm::Zero)
        }
        Tok::Star => {
            c.bump();
            let n = if *c.peek() == Tok::LParen {
                c.bump();
                let n = rc_name(c)?;
                c.expect(Tok::RParen)?;
                n
            } else {
                rc_name(c)?
            };
            Ok(RcTerm::Drop(n))
        }
        Tok::LParen => {
            c.bump();
            let t = rc_par(c)?;
            c.expect(Tok::RParen)?;
            Ok(t)
        }
        Tok::Ident(kw) => {
            let (line, col) = (c.toks[c.pos].line, c.toks[c.pos].col);
            c.bump();
            if kw == "m" {
                c.expect(Tok::LParen)?;
                let a = rc_name(c)?;
                c.expect(Tok::Comma)?;
                let p = rc_par(c)?;
                c.expect(Tok::RParen)?;
                return Ok(RcTerm::m(a, p));
            }
            let kind = Agent::from_keyword(&kw)
                .ok_or_else(|| ParseError::new(line, col, format!("unknown combinator `{kw}`")))?;
            let args = c.args(rc_name)?;
            RcTerm::agent(kind, args).map_err(|m| ParseError::new(line, col, m))
        }
        _ => Err(c.unexpected("a combinator process")),
    }
}
