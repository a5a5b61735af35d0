//! π-calculus into Yoshida's combinators: outputs become messages, inputs
//! are compiled away by the prefix eliminator `for*(x <- a)`.

use std::collections::{BTreeMap, BTreeSet};

use super::{EncodeError, FreshEntry};
use crate::comb::{Agent, Polarity};
use crate::name::Atom;
use crate::pi::PiTerm;
use crate::yoshida::{YTerm, YoshidaTerm};

/// Result of the π to Yoshida translation with the names it invented.
#[derive(Clone, Debug)]
pub struct PiToYoshida {
    pub term: YoshidaTerm,
    pub fresh: Vec<FreshEntry>,
}

pub fn pi_to_yoshida(t: &PiTerm) -> Result<PiToYoshida, EncodeError> {
    let mut cx = Cx { avoid: t.atoms(), next: 1, fresh: Vec::new() };
    let term = cx.tr(t)?;
    Ok(PiToYoshida { term, fresh: cx.fresh })
}

struct Cx {
    avoid: BTreeSet<Atom>,
    next: usize,
    fresh: Vec<FreshEntry>,
}

impl Cx {
    fn tr(&mut self, t: &PiTerm) -> Result<YoshidaTerm, EncodeError> {
        Ok(match t {
            PiTerm::Zero => YTerm::Zero,
            PiTerm::Output { channel, payload } => YTerm::m(channel.clone(), payload.clone()),
            PiTerm::Input { binder, channel, body } => {
                let b = self.tr(body)?;
                self.elim(binder, channel, &b)?
            }
            PiTerm::New { binder, body } => YTerm::new_name(binder.clone(), self.tr(body)?),
            PiTerm::Par(a, b) => YTerm::par(self.tr(a)?, self.tr(b)?),
            PiTerm::Repl(p) => YTerm::repl(self.tr(p)?),
        })
    }

    fn fresh(&mut self, rule: &str, near: &YoshidaTerm) -> Atom {
        loop {
            let c = Atom::new(format!("c{}", self.next));
            self.next += 1;
            if self.avoid.insert(c.clone()) {
                self.fresh.push(FreshEntry {
                    rule: rule.to_string(),
                    name: c.to_string(),
                    fresh_for: near.free_names().iter().map(|a| a.to_string()).collect(),
                });
                return c;
            }
        }
    }

    /// `for*(x <- a) B`
    fn elim(&mut self, x: &Atom, a: &Atom, body: &YoshidaTerm) -> Result<YoshidaTerm, EncodeError> {
        let before = measure(x, body);
        let mut sub = |cx: &mut Cx, x: &Atom, a: &Atom, b: &YoshidaTerm| {
            assert!(measure(x, b) < before, "prefix elimination measure must decrease");
            cx.elim(x, a, b)
        };
        match body {
            YTerm::Par(p, q) => {
                let c1 = self.fresh("I", body);
                let c2 = self.fresh("I", body);
                let l = sub(self, x, &c1, p)?;
                let r = sub(self, x, &c2, q)?;
                Ok(YTerm::new_names([c1.clone(), c2.clone()], YTerm::par_all([YTerm::d(a.clone(), c1, c2), l, r])))
            }
            YTerm::New(c0, p) => {
                let c = self.fresh("II", body);
                let renamed = p.substitute(&BTreeMap::from([(c0.clone(), c.clone())]));
                let inner = sub(self, x, a, &renamed)?;
                Ok(YTerm::new_name(c, inner))
            }
            YTerm::Zero => Ok(YTerm::k(a.clone())),
            YTerm::Repl(p) => {
                let c = self.fresh("IV", body);
                let looped = YTerm::par((**p).clone(), YTerm::m(c.clone(), x.clone()));
                let inner = sub(self, x, &c, &looped)?;
                Ok(YTerm::new_name(c.clone(), YTerm::par(YTerm::fw(a.clone(), c), YTerm::repl(inner))))
            }
            YTerm::M(..) | YTerm::Agent(..) => self.atom(x, a, body, &mut sub),
        }
    }

    fn atom(
        &mut self,
        x: &Atom,
        a: &Atom,
        body: &YoshidaTerm,
        sub: &mut dyn FnMut(&mut Cx, &Atom, &Atom, &YoshidaTerm) -> Result<YoshidaTerm, EncodeError>,
    ) -> Result<YoshidaTerm, EncodeError> {
        let (kind, args) = split_atom(body);
        let pols = polarities(kind);
        let first = args.iter().position(|n| n == x);
        match (kind, args.as_slice()) {
            (None, [v, y]) if y == x && v != x => return Ok(YTerm::fw(a.clone(), v.clone())),
            (Some(Agent::Fw), [y, v]) if y == x && v != x => return Ok(YTerm::bl(a.clone(), v.clone())),
            (Some(Agent::Fw), [v, y]) if y == x && v != x => return Ok(YTerm::br(a.clone(), v.clone())),
            _ => {}
        }
        let Some(i) = first else {
            let c = self.fresh(if pols[0] == Polarity::Plus { "V" } else { "VI" }, body);
            let v = args[0].clone();
            let moved = rebuild_atom(kind, replace_at(&args, 0, &c));
            let s = if pols[0] == Polarity::Plus { YTerm::s(a.clone(), c.clone(), v) } else { YTerm::s(a.clone(), v, c.clone()) };
            return Ok(YTerm::new_name(c, YTerm::par(s, moved)));
        };
        if i == 0 && pols[0] == Polarity::Minus {
            let c = self.fresh("XI", body);
            let inner = YTerm::par(YTerm::fw(x.clone(), c.clone()), rebuild_atom(kind, replace_at(&args, 0, &c)));
            return Ok(YTerm::new_name(c, sub(self, x, a, &inner)?));
        }
        if pols[i] == Polarity::Plus {
            let c = self.fresh("X", body);
            let inner = YTerm::par(YTerm::fw(c.clone(), x.clone()), rebuild_atom(kind, replace_at(&args, i, &c)));
            return Ok(YTerm::new_name(c, sub(self, x, a, &inner)?));
        }
        match (kind, args.as_slice()) {
            (Some(Agent::Br), [v, _]) => {
                let (c1, c2, c3) = (self.fresh("XII", body), self.fresh("XII", body), self.fresh("XII", body));
                let inner = YTerm::par_all([
                    YTerm::d(v.clone(), c1.clone(), c2.clone()),
                    YTerm::s(c1.clone(), x.clone(), c3.clone()),
                    YTerm::br(c2.clone(), c3.clone()),
                ]);
                Ok(YTerm::new_names([c1, c2, c3], sub(self, x, a, &inner)?))
            }
            (Some(Agent::S), [v, _, w]) => {
                let (c1, c2) = (self.fresh("XIII", body), self.fresh("XIII", body));
                let inner = YTerm::par_all([
                    YTerm::s(v.clone(), c1.clone(), c2.clone()),
                    YTerm::m(c1.clone(), x.clone()),
                    YTerm::bl(c2.clone(), w.clone()),
                ]);
                Ok(YTerm::new_names([c1, c2], sub(self, x, a, &inner)?))
            }
            _ => Err(EncodeError::Uncovered { binder: x.to_string(), subterm: body.to_string() }),
        }
    }
}

fn split_atom(t: &YoshidaTerm) -> (Option<Agent>, Vec<Atom>) {
    match t {
        YTerm::M(a, b) => (None, vec![a.clone(), b.clone()]),
        YTerm::Agent(k, args) => (Some(*k), args.clone()),
        _ => unreachable!("atom expected"),
    }
}

fn polarities(kind: Option<Agent>) -> &'static [Polarity] {
    match kind {
        None => &crate::comb::MESSAGE_POLARITIES,
        Some(k) => k.polarities(),
    }
}

fn rebuild_atom(kind: Option<Agent>, args: Vec<Atom>) -> YoshidaTerm {
    match kind {
        None => YTerm::m(args[0].clone(), args[1].clone()),
        Some(k) => YTerm::Agent(k, args),
    }
}

fn replace_at(args: &[Atom], i: usize, c: &Atom) -> Vec<Atom> {
    let mut out = args.to_vec();
    out[i] = c.clone();
    out
}

/// Termination measure of `for*(x <- a) B`: base atoms weigh 1, atoms that
/// still need rewriting weigh by their occurrences of `x`.
fn measure(x: &Atom, t: &YoshidaTerm) -> u64 {
    match t {
        YTerm::Zero => 1,
        YTerm::Par(a, b) => measure(x, a) + measure(x, b) + 1,
        YTerm::New(_, p) => measure(x, p) + 1,
        YTerm::Repl(p) => measure(x, p) + 3,
        YTerm::M(..) | YTerm::Agent(..) => {
            let (kind, args) = split_atom(t);
            let occ = args.iter().filter(|n| *n == x).count() as u32;
            let base = match (kind, args.as_slice()) {
                (None, [v, y]) => y == x && v != x,
                (Some(Agent::Fw), [u, v]) => (u == x) != (v == x),
                _ => false,
            };
            if occ == 0 || base {
                1
            } else {
                let extra = if kind == Some(Agent::Br) && args[0] != *x { 20 } else { 0 };
                10 * 4u64.pow(occ) + extra
            }
        }
    }
}
