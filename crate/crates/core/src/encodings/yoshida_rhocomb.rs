//! Yoshida's combinators into RHO combinators. Restriction and replication
//! are replaced by name allocation: every subterm is handed an allocator
//! pair `(n, p)`, where `p` carries fresh names and `n` is the next one.

use super::{Allocator, EncodeError, RcFresh};
use crate::canon::CanonicalForm;
use crate::comb::{Agent, Polarity};
use crate::reduction::{reduce_deterministic, Budgets, Process, Trace};
use crate::name::{Name, NameSort};
use crate::rhocomb::{name_l, name_path, name_r, QName, RcTerm};
use crate::syntax::render_elided;
use crate::yoshida::YTerm;

/// Output of the second stage with its where-clause names.
#[derive(Clone, Debug)]
pub struct YoshidaToRhoComb {
    pub term: RcTerm,
    pub fresh: Vec<RcFresh>,
}

pub fn yoshida_to_rhocomb(t: &YTerm<QName>, alloc: &Allocator) -> Result<YoshidaToRhoComb, EncodeError> {
    let fns = t.free_names();
    let (n, p) = (alloc.n.canonical(), alloc.p.canonical());
    if n == p {
        return Err(EncodeError::Allocator("allocator names coincide".into()));
    }
    for a in [&n, &p] {
        if fns.contains(a) {
            return Err(EncodeError::Allocator(format!("allocator name {} is free in the source", render_elided(a, 40))));
        }
    }
    let mut cx = Cx { fresh: Vec::new() };
    let term = cx.tr2(t, &alloc.n, &alloc.p)?;
    Ok(YoshidaToRhoComb { term, fresh: cx.fresh })
}

/// `⟦p(x).body⟧₄(n, q)` on a body already in combinator form.
pub fn prefix_eliminate(
    p: &QName,
    x: &QName,
    body: &RcTerm,
    n: &QName,
    q: &QName,
) -> Result<YoshidaToRhoComb, EncodeError> {
    let mut cx = Cx { fresh: Vec::new() };
    let term = cx.elim4(p, x, body, n, q)?;
    Ok(YoshidaToRhoComb { term, fresh: cx.fresh })
}

/// `D(x,v,w) := d(x,v,w) | fw(v,x) | *(w)`
pub fn duplicator(x: &QName, v: &QName, w: &QName) -> RcTerm {
    RcTerm::par_all([RcTerm::d(x.clone(), v.clone(), w.clone()), RcTerm::fw(v.clone(), x.clone()), RcTerm::Drop(w.clone())])
}

/// The replication package `m(x, P) | D(x,v,w)`, with `x`, `v`, `w` derived
/// from `@P` by the `ll`, `lr` and `rr` paths unless given.
pub fn make_repl_package(body: &RcTerm, names: Option<(QName, QName, QName)>) -> RcTerm {
    let (x, v, w) = names.unwrap_or_else(|| package_names(body));
    RcTerm::par(RcTerm::m(x.clone(), RcTerm::par(duplicator(&x, &v, &w), body.clone())), duplicator(&x, &v, &w))
}

/// One deterministic unfolding cycle of the package around `body`.
#[derive(Clone, Debug)]
pub struct Unfolding {
    pub trace: Trace<RcTerm>,
    /// `package | body`, canonical.
    pub expected: CanonicalForm<RcTerm>,
}

impl Unfolding {
    pub fn matches(&self) -> bool {
        self.trace.len() == 3 && self.trace.final_state.digest == self.expected.digest
    }
}

/// Runs `m(x, D(x,v,w) | P) | D(x,v,w)` for three deterministic steps.
pub fn unfold_package(body: &RcTerm, names: Option<(QName, QName, QName)>) -> Unfolding {
    let pkg = make_repl_package(body, names);
    let trace = reduce_deterministic(&pkg, Budgets { max_steps: 3, ..Budgets::default() });
    let expected = RcTerm::par(pkg, body.clone()).canonicalize_term();
    Unfolding { trace, expected }
}

fn package_names(body: &RcTerm) -> (QName, QName, QName) {
    let q = Name::quote(body.clone());
    (name_path(&q, "ll"), name_path(&q, "lr"), name_path(&q, "rr"))
}

fn q(t: RcTerm) -> QName {
    Name::quote(t)
}

fn send(a: &QName, b: &QName) -> RcTerm {
    RcTerm::m(a.clone(), RcTerm::Drop(b.clone()))
}

struct Cx {
    fresh: Vec<RcFresh>,
}

impl Cx {
    fn note(&mut self, rule: &'static str, name: &QName, subterm: &RcTerm) {
        self.fresh.push(RcFresh { rule, name: name.clone(), subterm: subterm.clone() });
    }

    fn tr2(&mut self, t: &YTerm<QName>, n: &QName, p: &QName) -> Result<RcTerm, EncodeError> {
        Ok(match t {
            YTerm::Zero => RcTerm::Zero,
            YTerm::M(a, b) => send(a, b),
            YTerm::Agent(k, args) => RcTerm::Agent(*k, args.clone()),
            YTerm::Par(a, b) => {
                let l = self.tr2(a, &name_l(n), &name_l(p))?;
                let r = self.tr2(b, &name_r(n), &name_r(p))?;
                RcTerm::par(l, r)
            }
            YTerm::New(x, body) => {
                let inner = self.tr2(body, &name_l(n), &name_l(p))?;
                RcTerm::par(self.elim4(p, x, &inner, n, p)?, send(p, n))
            }
            YTerm::Repl(body) => {
                let (x, v, w) = package_names(&self.tr2(body, n, p)?);
                let (nr, pr) = (name_r(n), name_r(p));
                let unit = self.tr3(body, &nr, &pr, (&x, &v, &w))?;
                RcTerm::par_all([
                    RcTerm::m(x.clone(), unit),
                    duplicator(&x, &v, &w),
                    send(&nr, &name_l(n)),
                    send(&pr, &name_l(p)),
                ])
            }
        })
    }

    /// One replica: receives its allocator pair on `n` and `p`, runs the
    /// body, re-arms the duplicator and hands on the next pair.
    fn tr3(
        &mut self,
        t: &YTerm<QName>,
        n: &QName,
        p: &QName,
        (x, v, w): (&QName, &QName, &QName),
    ) -> Result<RcTerm, EncodeError> {
        let here = self.tr2(t, n, p)?;
        let n1 = q(RcTerm::par(RcTerm::bl(n.clone(), p.clone()), RcTerm::m(n.clone(), here.clone())));
        let p1 = q(RcTerm::par(RcTerm::br(n.clone(), p.clone()), RcTerm::m(n.clone(), here)));
        let body = RcTerm::par_all([
            self.tr2(t, &n1, &p1)?,
            duplicator(x, v, w),
            send(n, &name_l(&n1)),
            send(p, &name_l(&p1)),
        ]);
        let inner = self.elim4(p, &p1, &body, n, p)?;
        self.elim4(n, &n1, &inner, n, p)
    }

    /// `⟦p(x).B⟧₄(n, q)`: input prefix elimination over RHO combinators.
    fn elim4(&mut self, p: &QName, x: &QName, body: &RcTerm, n: &QName, qq: &QName) -> Result<RcTerm, EncodeError> {
        let before = measure(x, body);
        let sub = |cx: &mut Cx, p: &QName, b: &RcTerm, n: &QName, qq: &QName| {
            assert!(measure(x, b) < before, "prefix elimination measure must decrease");
            cx.elim4(p, x, b, n, qq)
        };
        let alloc_msg = || send(qq, n);
        match body {
            RcTerm::Zero => Ok(RcTerm::k(p.clone())),
            RcTerm::Par(..) => {
                let comps = body.components();
                let (l, r) = comps.split_at(comps.len() / 2);
                let (l, r) = (RcTerm::par_all(l.iter().cloned()), RcTerm::par_all(r.iter().cloned()));
                let both = body.clone();
                let v = q(RcTerm::m(qq.clone(), RcTerm::par(RcTerm::bl(qq.clone(), n.clone()), both.clone())));
                let w = q(RcTerm::m(qq.clone(), RcTerm::par(RcTerm::br(qq.clone(), n.clone()), both)));
                let tie = RcTerm::m(qq.clone(), send(&v, &w));
                let n1 = q(RcTerm::par(RcTerm::bl(v.clone(), w.clone()), tie.clone()));
                let n2 = q(RcTerm::par(RcTerm::br(v.clone(), w.clone()), tie.clone()));
                let q1 = q(RcTerm::par(RcTerm::bl(n1.clone(), n2.clone()), tie.clone()));
                let q2 = q(RcTerm::par(RcTerm::br(n1.clone(), n2.clone()), tie));
                for name in [&v, &w, &n1, &n2, &q1, &q2] {
                    self.note("I", name, body);
                }
                let a = sub(self, &v, &l, &n1, &q1)?;
                let b = sub(self, &w, &r, &n2, &q2)?;
                Ok(RcTerm::par_all([RcTerm::d(p.clone(), v, w), a, b]))
            }
            RcTerm::Drop(v) => {
                if v == x {
                    return Err(uncovered(x, body));
                }
                // `*(a)` is congruent to the process `a` quotes, so the guard
                // target quotes an inert killer.
                let a0 = q(RcTerm::par(alloc_msg(), body.clone()));
                let a = q(RcTerm::k(a0));
                self.note("VI", &a, body);
                Ok(RcTerm::par(RcTerm::s(p.clone(), v.clone(), a.clone()), RcTerm::Drop(a)))
            }
            RcTerm::M(a, payload) => {
                let carries_x = matches!(&**payload, RcTerm::Drop(y) if y == x);
                if !carries_x && live(payload, x) {
                    return Err(uncovered(x, body));
                }
                if a != x && carries_x {
                    return Ok(RcTerm::fw(p.clone(), a.clone()));
                }
                let fresh = q(RcTerm::par(alloc_msg(), body.clone()));
                if a == x {
                    let n1 = q(RcTerm::m(fresh.clone(), alloc_msg()));
                    self.note("X", &fresh, body);
                    self.note("X", &n1, body);
                    let inner = RcTerm::par(RcTerm::fw(fresh.clone(), x.clone()), RcTerm::M(fresh, payload.clone()));
                    return sub(self, p, &inner, &n1, qq);
                }
                self.note("V", &fresh, body);
                Ok(RcTerm::par(RcTerm::s(p.clone(), fresh.clone(), a.clone()), RcTerm::M(fresh, payload.clone())))
            }
            RcTerm::Agent(kind, args) => {
                let pols = kind.polarities();
                match (kind, args.as_slice()) {
                    (Agent::Fw, [y, v]) if y == x && v != x => return Ok(RcTerm::bl(p.clone(), v.clone())),
                    (Agent::Fw, [v, y]) if y == x && v != x => return Ok(RcTerm::br(p.clone(), v.clone())),
                    _ => {}
                }
                let fresh = q(RcTerm::par(alloc_msg(), body.clone()));
                let moved = |i: usize| {
                    let mut out = args.clone();
                    out[i] = fresh.clone();
                    RcTerm::Agent(*kind, out)
                };
                let Some(i) = args.iter().position(|a| a == x) else {
                    self.note("VI", &fresh, body);
                    return Ok(RcTerm::par(RcTerm::s(p.clone(), args[0].clone(), fresh.clone()), moved(0)));
                };
                if i == 0 || pols[i] == Polarity::Plus {
                    let n1 = q(RcTerm::m(fresh.clone(), alloc_msg()));
                    let (rule, link) = if i == 0 {
                        ("XI", RcTerm::fw(x.clone(), fresh.clone()))
                    } else {
                        ("X", RcTerm::fw(fresh.clone(), x.clone()))
                    };
                    self.note(rule, &fresh, body);
                    self.note(rule, &n1, body);
                    return sub(self, p, &RcTerm::par(link, moved(i)), &n1, qq);
                }
                match (kind, args.as_slice()) {
                    (Agent::Br, [v, _]) => {
                        let tail = RcTerm::m(qq.clone(), body.clone());
                        let w1 = q(RcTerm::par(RcTerm::bl(qq.clone(), n.clone()), tail.clone()));
                        let w2 = q(RcTerm::par(RcTerm::br(qq.clone(), n.clone()), tail));
                        let w3 = q(RcTerm::par(RcTerm::bl(p.clone(), v.clone()), send(&w1, &w2)));
                        let n1 = q(RcTerm::s(w1.clone(), w2.clone(), w3.clone()));
                        for name in [&w1, &w2, &w3, &n1] {
                            self.note("XII", name, body);
                        }
                        let inner = RcTerm::par_all([
                            RcTerm::d(v.clone(), w1.clone(), w2.clone()),
                            RcTerm::s(w1, x.clone(), w3.clone()),
                            RcTerm::br(w2, w3),
                        ]);
                        sub(self, p, &inner, &n1, qq)
                    }
                    (Agent::S, [v, _, w]) => {
                        let w1 = q(RcTerm::par(RcTerm::bl(qq.clone(), n.clone()), body.clone()));
                        let w2 = q(RcTerm::par(RcTerm::br(qq.clone(), n.clone()), body.clone()));
                        let n1 = q(send(&w1, &w2));
                        for name in [&w1, &w2, &n1] {
                            self.note("XIII", name, body);
                        }
                        let inner = RcTerm::par_all([
                            RcTerm::s(v.clone(), w1.clone(), w2.clone()),
                            send(&w1, x),
                            RcTerm::bl(w2, w.clone()),
                        ]);
                        sub(self, p, &inner, &n1, qq)
                    }
                    _ => Err(uncovered(x, body)),
                }
            }
        }
    }
}

fn uncovered(x: &QName, body: &RcTerm) -> EncodeError {
    EncodeError::Uncovered { binder: short(&render_elided(x, 40)), subterm: short(&render_elided(body, 40)) }
}

fn short(s: &str) -> String {
    if s.chars().count() <= 160 {
        s.to_string()
    } else {
        format!("{}...", s.chars().take(160).collect::<String>())
    }
}

/// `x` at a name position or as a drop, outside quotes.
fn live(t: &RcTerm, x: &QName) -> bool {
    let mut stack = vec![t];
    while let Some(t) = stack.pop() {
        let hit = match t {
            RcTerm::Zero => false,
            RcTerm::M(a, p) => {
                stack.push(p);
                a == x
            }
            RcTerm::Agent(_, args) => args.contains(x),
            RcTerm::Drop(a) => a == x,
            RcTerm::Par(a, b) => {
                stack.push(a);
                stack.push(b);
                false
            }
        };
        if hit {
            return true;
        }
    }
    false
}

fn measure(x: &QName, t: &RcTerm) -> u64 {
    let mut total = 0;
    let mut stack = vec![t];
    while let Some(t) = stack.pop() {
        total += match t {
            RcTerm::Par(a, b) => {
                stack.push(a);
                stack.push(b);
                1
            }
            other => atom_measure(x, other),
        };
    }
    total
}

fn atom_measure(x: &QName, t: &RcTerm) -> u64 {
    match t {
        RcTerm::Zero | RcTerm::Drop(_) | RcTerm::Par(..) => 1,
        RcTerm::M(a, payload) => {
            let carries = matches!(&**payload, RcTerm::Drop(y) if y == x);
            match (a == x, carries) {
                (false, _) => 1,
                (true, false) => 40,
                (true, true) => 160,
            }
        }
        RcTerm::Agent(kind, args) => {
            let occ = args.iter().filter(|a| *a == x).count() as u32;
            let base = *kind == Agent::Fw && (args[0] == *x) != (args[1] == *x);
            if occ == 0 || base {
                1
            } else {
                let extra = if *kind == Agent::Br && args[0] != *x { 20 } else { 0 };
                10 * 4u64.pow(occ) + extra
            }
        }
    }
}
