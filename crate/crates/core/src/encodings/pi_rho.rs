//! π-calculus straight into the ρ-calculus, allocating restricted names
//! from a pair of quoted allocator channels.

use std::collections::{BTreeMap, BTreeSet};

use super::pi_avoid;
use crate::name::{fresh_atom, Atom, Name, NameSort};
use crate::pi::PiTerm;
use crate::rho::{name_l, name_r, RName, RhoTerm};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RhoAllocator {
    pub n: RName,
    pub p: RName,
}

impl RhoAllocator {
    /// `n = @(m!(0) | ...)`, `p = @(for(@0 <- m)0 | ...)` over the free
    /// names, with `@0` standing in when there are none.
    pub fn default_for<'a>(free: impl IntoIterator<Item = &'a Atom>) -> Self {
        let mut chans: Vec<RName> = free.into_iter().map(|a| Name::Atom(a.clone())).collect();
        if chans.is_empty() {
            chans.push(Name::quote(RhoTerm::Zero));
        }
        let n = RhoTerm::par_all(chans.iter().map(|m| RhoTerm::lift(m.clone(), RhoTerm::Zero)));
        let p = RhoTerm::par_all(chans.iter().map(|m| RhoTerm::input(Name::quote(RhoTerm::Zero), m.clone(), RhoTerm::Zero)));
        RhoAllocator { n: Name::quote(n), p: Name::quote(p) }
    }
}

pub fn pi_to_rho(t: &PiTerm) -> RhoTerm {
    pi_to_rho_with(t, &RhoAllocator::default_for(&t.free_names()))
}

pub fn pi_to_rho_with(t: &PiTerm, alloc: &RhoAllocator) -> RhoTerm {
    let mut avoid = pi_avoid(t);
    alloc.n.collect_atoms(&mut avoid);
    alloc.p.collect_atoms(&mut avoid);
    let mut clash = t.free_names();
    alloc.n.collect_atoms(&mut clash);
    alloc.p.collect_atoms(&mut clash);
    let t = freshen(t, &clash, &mut avoid);
    Cx { avoid }.tr(&t, &alloc.n, &alloc.p)
}

/// Renames binders that would capture a free or allocator atom.
fn freshen(t: &PiTerm, clash: &BTreeSet<Atom>, avoid: &mut BTreeSet<Atom>) -> PiTerm {
    let rename = |x: &Atom, body: &PiTerm, avoid: &mut BTreeSet<Atom>| {
        if clash.contains(x) {
            let y = fresh_atom(x.as_str(), avoid);
            avoid.insert(y.clone());
            (y.clone(), body.substitute(&BTreeMap::from([(x.clone(), y)])))
        } else {
            (x.clone(), body.clone())
        }
    };
    match t {
        PiTerm::Zero | PiTerm::Output { .. } => t.clone(),
        PiTerm::Input { binder, channel, body } => {
            let (b, body) = rename(binder, body, avoid);
            PiTerm::input(b, channel.clone(), freshen(&body, clash, avoid))
        }
        PiTerm::New { binder, body } => {
            let (b, body) = rename(binder, body, avoid);
            PiTerm::new_name(b, freshen(&body, clash, avoid))
        }
        PiTerm::Par(a, b) => PiTerm::par(freshen(a, clash, avoid), freshen(b, clash, avoid)),
        PiTerm::Repl(p) => PiTerm::repl(freshen(p, clash, avoid)),
    }
}

/// `D(x) := for(y <- x)(x!(*y) | *y)`
pub fn rho_duplicator(x: &RName, y: Atom) -> RhoTerm {
    let y: RName = Name::Atom(y);
    RhoTerm::input(y.clone(), x.clone(), RhoTerm::par(RhoTerm::send_name(x.clone(), y.clone()), RhoTerm::Drop(y)))
}

struct Cx {
    avoid: BTreeSet<Atom>,
}

fn at(a: &Atom) -> RName {
    Name::Atom(a.clone())
}

impl Cx {
    fn tr(&mut self, t: &PiTerm, n: &RName, p: &RName) -> RhoTerm {
        match t {
            PiTerm::Zero => RhoTerm::Zero,
            PiTerm::Output { channel, payload } => RhoTerm::send_name(at(channel), at(payload)),
            PiTerm::Input { binder, channel, body } => RhoTerm::input(at(binder), at(channel), self.tr(body, n, p)),
            PiTerm::Par(a, b) => {
                let l = self.tr(a, &name_l(n), &name_l(p));
                RhoTerm::par(l, self.tr(b, &name_r(n), &name_r(p)))
            }
            PiTerm::New { binder, body } => {
                let inner = self.tr(body, &name_l(n), &name_l(p));
                RhoTerm::par(RhoTerm::input(at(binder), p.clone(), inner), RhoTerm::send_name(p.clone(), n.clone()))
            }
            PiTerm::Repl(body) => {
                let x = name_l(&Name::quote(self.tr(body, n, p)));
                let (nr, pr) = (name_r(n), name_r(p));
                let unit = self.tr3(body, &nr, &pr, &x);
                let y = self.fresh("y");
                RhoTerm::par_all([
                    RhoTerm::lift(x.clone(), unit),
                    rho_duplicator(&x, y),
                    RhoTerm::send_name(nr, name_l(n)),
                    RhoTerm::send_name(pr, name_l(p)),
                ])
            }
        }
    }

    fn fresh(&mut self, base: &str) -> Atom {
        let a = fresh_atom(base, &self.avoid);
        self.avoid.insert(a.clone());
        a
    }

    /// `for(n <- n'')for(p <- p'')(⟦P⟧(n,p) | D(x) | n''!(n^l) | p''!(p^l))`
    fn tr3(&mut self, t: &PiTerm, n2: &RName, p2: &RName, x: &RName) -> RhoTerm {
        let (nb, pb) = (at(&self.fresh("n")), at(&self.fresh("p")));
        let y = self.fresh("y");
        let body = RhoTerm::par_all([
            self.tr(t, &nb, &pb),
            rho_duplicator(x, y),
            RhoTerm::send_name(n2.clone(), name_l(&nb)),
            RhoTerm::send_name(p2.clone(), name_l(&pb)),
        ]);
        RhoTerm::input(nb, n2.clone(), RhoTerm::input(pb, p2.clone(), body))
    }
}
