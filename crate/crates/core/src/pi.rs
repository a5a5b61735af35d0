//! The asynchronous π-calculus.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::canon::{Calculus, CanonicalForm};
use crate::name::{binder_prefix, Atom};
use crate::scope::{self, enter_binder, CanonCx, ScopedTerm, Shape};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum PiTerm {
    Zero,
    /// `for(binder <- channel) body`
    Input { binder: Atom, channel: Atom, body: Arc<PiTerm> },
    /// `channel!(payload)`
    Output { channel: Atom, payload: Atom },
    New { binder: Atom, body: Arc<PiTerm> },
    Par(Arc<PiTerm>, Arc<PiTerm>),
    Repl(Arc<PiTerm>),
}

impl PiTerm {
    pub fn input(binder: impl Into<Atom>, channel: impl Into<Atom>, body: PiTerm) -> Self {
        PiTerm::Input { binder: binder.into(), channel: channel.into(), body: Arc::new(body) }
    }

    pub fn output(channel: impl Into<Atom>, payload: impl Into<Atom>) -> Self {
        PiTerm::Output { channel: channel.into(), payload: payload.into() }
    }

    pub fn new_name(binder: impl Into<Atom>, body: PiTerm) -> Self {
        PiTerm::New { binder: binder.into(), body: Arc::new(body) }
    }

    pub fn par(a: PiTerm, b: PiTerm) -> Self {
        PiTerm::Par(Arc::new(a), Arc::new(b))
    }

    pub fn repl(body: PiTerm) -> Self {
        PiTerm::Repl(Arc::new(body))
    }

    pub fn free_names(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.free_names_into(&mut out);
        out
    }

    /// Every atom occurring in the term, bound or free.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.atoms_into(&mut out);
        out
    }

    fn atoms_into(&self, out: &mut BTreeSet<Atom>) {
        match self {
            PiTerm::Zero => {}
            PiTerm::Input { binder, channel, body } => {
                out.insert(binder.clone());
                out.insert(channel.clone());
                body.atoms_into(out);
            }
            PiTerm::Output { channel, payload } => {
                out.insert(channel.clone());
                out.insert(payload.clone());
            }
            PiTerm::New { binder, body } => {
                out.insert(binder.clone());
                body.atoms_into(out);
            }
            PiTerm::Par(a, b) => {
                a.atoms_into(out);
                b.atoms_into(out);
            }
            PiTerm::Repl(p) => p.atoms_into(out),
        }
    }

    /// Capture-avoiding substitution of names for free names.
    pub fn substitute(&self, subst: &BTreeMap<Atom, Atom>) -> PiTerm {
        self.rename(subst)
    }

    /// Equality up to consistent renaming of bound names.
    pub fn alpha_equiv(&self, other: &PiTerm) -> bool {
        self.alpha_normal() == other.alpha_normal()
    }

    /// Renames every binder to its position-indexed name without touching
    /// the shape of the term.
    pub fn alpha_normal(&self) -> PiTerm {
        let cx = CanonCx::new(binder_prefix(&self.free_names()));
        self.alpha_at(&cx, 0)
    }

    fn alpha_at(&self, cx: &CanonCx, depth: usize) -> PiTerm {
        match self {
            PiTerm::Zero | PiTerm::Output { .. } => self.clone(),
            PiTerm::Input { binder, channel, body } => {
                let c = cx.binder(depth);
                let body = body.rename(&single(binder, &c));
                PiTerm::input(c, channel.clone(), body.alpha_at(cx, depth + 1))
            }
            PiTerm::New { binder, body } => {
                let c = cx.binder(depth);
                let body = body.rename(&single(binder, &c));
                PiTerm::new_name(c, body.alpha_at(cx, depth + 1))
            }
            PiTerm::Par(a, b) => PiTerm::par(a.alpha_at(cx, depth), b.alpha_at(cx, depth)),
            PiTerm::Repl(p) => PiTerm::repl(p.alpha_at(cx, depth)),
        }
    }

    pub fn canonical(&self) -> PiTerm {
        let cx = CanonCx::new(binder_prefix(&self.free_names()));
        scope::canonicalize(self, &cx, 0)
    }

    pub fn canonicalize(&self) -> CanonicalForm<PiTerm> {
        CanonicalForm::from_canonical(Calculus::Pi, self.canonical())
    }

    pub fn struct_congruent(&self, other: &PiTerm) -> bool {
        self.canonical() == other.canonical()
    }

    /// Number of `*` constructors.
    pub fn replication_count(&self) -> usize {
        match self {
            PiTerm::Zero | PiTerm::Output { .. } => 0,
            PiTerm::Input { body, .. } | PiTerm::New { body, .. } => body.replication_count(),
            PiTerm::Par(a, b) => a.replication_count() + b.replication_count(),
            PiTerm::Repl(p) => 1 + p.replication_count(),
        }
    }

    /// Nesting depth of prefixes, restrictions and replications.
    pub fn depth(&self) -> usize {
        match self {
            PiTerm::Zero | PiTerm::Output { .. } => 0,
            PiTerm::Input { body, .. } | PiTerm::New { body, .. } | PiTerm::Repl(body) => 1 + body.depth(),
            PiTerm::Par(a, b) => a.depth().max(b.depth()),
        }
    }
}

pub(crate) fn single(from: &Atom, to: &Atom) -> BTreeMap<Atom, Atom> {
    let mut m = BTreeMap::new();
    m.insert(from.clone(), to.clone());
    m
}

impl ScopedTerm for PiTerm {
    type N = Atom;

    fn zero() -> Self {
        PiTerm::Zero
    }

    fn par(a: Self, b: Self) -> Self {
        PiTerm::par(a, b)
    }

    fn new_binder(n: Atom, body: Self) -> Self {
        PiTerm::new_name(n, body)
    }

    fn shape(&self) -> Shape<'_, Self> {
        match self {
            PiTerm::Zero => Shape::Zero,
            PiTerm::Par(a, b) => Shape::Par(a, b),
            PiTerm::New { binder, body } => Shape::New(binder, body),
            _ => Shape::Simple,
        }
    }

    fn rename(&self, map: &BTreeMap<Atom, Atom>) -> Self {
        if map.is_empty() {
            return self.clone();
        }
        let get = |a: &Atom| map.get(a).cloned().unwrap_or_else(|| a.clone());
        match self {
            PiTerm::Zero => PiTerm::Zero,
            PiTerm::Output { channel, payload } => PiTerm::output(get(channel), get(payload)),
            PiTerm::Input { binder, channel, body } => {
                let (b, inner) = enter_binder(binder, &body.free_names(), || body.atoms(), map);
                PiTerm::input(b, get(channel), body.rename(&inner))
            }
            PiTerm::New { binder, body } => {
                let (b, inner) = enter_binder(binder, &body.free_names(), || body.atoms(), map);
                PiTerm::new_name(b, body.rename(&inner))
            }
            PiTerm::Par(a, b) => PiTerm::par(a.rename(map), b.rename(map)),
            PiTerm::Repl(p) => PiTerm::repl(p.rename(map)),
        }
    }

    fn free_names_into(&self, out: &mut BTreeSet<Atom>) {
        match self {
            PiTerm::Zero => {}
            PiTerm::Input { binder, channel, body } => {
                let mut inner = BTreeSet::new();
                body.free_names_into(&mut inner);
                inner.remove(binder);
                out.extend(inner);
                out.insert(channel.clone());
            }
            PiTerm::Output { channel, payload } => {
                out.insert(channel.clone());
                out.insert(payload.clone());
            }
            PiTerm::New { binder, body } => {
                let mut inner = BTreeSet::new();
                body.free_names_into(&mut inner);
                inner.remove(binder);
                out.extend(inner);
            }
            PiTerm::Par(a, b) => {
                a.free_names_into(out);
                b.free_names_into(out);
            }
            PiTerm::Repl(p) => p.free_names_into(out),
        }
    }

    fn canon_simple(&self, cx: &CanonCx, depth: usize) -> Self {
        match self {
            PiTerm::Input { binder, channel, body } => {
                let c = cx.binder(depth);
                let body = body.rename(&single(binder, &c));
                PiTerm::input(c, channel.clone(), scope::canonicalize(&body, cx, depth + 1))
            }
            PiTerm::Repl(p) => PiTerm::repl(scope::canonicalize(p.as_ref(), cx, depth)),
            other => other.clone(),
        }
    }
}
