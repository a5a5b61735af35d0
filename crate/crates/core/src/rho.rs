//! The ρ-calculus: names are quoted processes, input binds a name, output
//! lifts a process.
//!
//! Atoms are admitted as names too (binders and free variables), so that
//! terms like `for(y <- x) *y` can be written without spelling out quotes.

use std::collections::BTreeSet;

use crate::canon::{Calculus, CanonicalForm};
use crate::name::{binder_prefix, fresh_atom, Atom, Name, NameSort};
use crate::shared::{Fingerprint, Meta, MetaBuilder, Shared};

pub type RName = Name<RhoTerm>;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RhoTerm {
    Zero,
    /// `for(binder <- channel) body`
    Input { binder: RName, channel: RName, body: Shared<RhoTerm> },
    /// `channel!(payload)`
    Lift { channel: RName, payload: Shared<RhoTerm> },
    /// `*x`
    Drop(RName),
    Par(Shared<RhoTerm>, Shared<RhoTerm>),
}

impl RhoTerm {
    pub fn input(binder: RName, channel: RName, body: RhoTerm) -> Self {
        RhoTerm::Input { binder, channel, body: Shared::new(body) }
    }

    pub fn lift(channel: RName, payload: RhoTerm) -> Self {
        RhoTerm::Lift { channel, payload: Shared::new(payload) }
    }

    /// `x!(y)` for a name `y`, short for `x!(*y)`.
    pub fn send_name(channel: RName, name: RName) -> Self {
        RhoTerm::lift(channel, RhoTerm::Drop(name))
    }

    pub fn drop_name(x: RName) -> Self {
        RhoTerm::Drop(x)
    }

    pub fn par(a: RhoTerm, b: RhoTerm) -> Self {
        RhoTerm::Par(Shared::new(a), Shared::new(b))
    }

    pub fn par_all(items: impl IntoIterator<Item = RhoTerm>) -> Self {
        let items: Vec<RhoTerm> = items.into_iter().collect();
        let mut iter = items.into_iter().rev();
        match iter.next() {
            None => RhoTerm::Zero,
            Some(last) => iter.fold(last, |acc, t| RhoTerm::par(t, acc)),
        }
    }

    pub fn components(&self) -> Vec<RhoTerm> {
        let mut out = Vec::new();
        self.components_into(&mut out);
        out
    }

    fn components_into(&self, out: &mut Vec<RhoTerm>) {
        match self {
            RhoTerm::Zero => {}
            RhoTerm::Par(a, b) => {
                a.components_into(out);
                b.components_into(out);
            }
            other => out.push(other.clone()),
        }
    }

    /// Free names per the recursive table; names are taken whole and
    /// identified up to name equivalence.
    pub fn free_names(&self) -> BTreeSet<RName> {
        let mut out = BTreeSet::new();
        self.free_into(&mut out);
        out
    }

    fn free_into(&self, out: &mut BTreeSet<RName>) {
        match self {
            RhoTerm::Zero => {}
            RhoTerm::Input { binder, channel, body } => {
                let mut inner = BTreeSet::new();
                body.free_into(&mut inner);
                inner.remove(&binder.canonical());
                out.extend(inner);
                out.insert(channel.canonical());
            }
            RhoTerm::Lift { channel, payload } => {
                out.insert(channel.canonical());
                payload.free_into(out);
            }
            RhoTerm::Drop(x) => {
                out.insert(x.canonical());
            }
            RhoTerm::Par(a, b) => {
                a.free_into(out);
                b.free_into(out);
            }
        }
    }

    /// Every atom in the term, inside quotes and binders included.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.atoms_into(&mut out);
        out
    }

    fn atoms_into(&self, out: &mut BTreeSet<Atom>) {
        match self {
            RhoTerm::Zero => {}
            RhoTerm::Input { binder, channel, body } => {
                name_atoms(binder, out);
                name_atoms(channel, out);
                body.atoms_into(out);
            }
            RhoTerm::Lift { channel, payload } => {
                name_atoms(channel, out);
                payload.atoms_into(out);
            }
            RhoTerm::Drop(x) => name_atoms(x, out),
            RhoTerm::Par(a, b) => {
                a.atoms_into(out);
                b.atoms_into(out);
            }
        }
    }

    /// Atoms occurring free, looking through quotes.
    pub(crate) fn free_atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.free_atoms_into(&mut out);
        out
    }

    fn free_atoms_into(&self, out: &mut BTreeSet<Atom>) {
        match self {
            RhoTerm::Zero => {}
            RhoTerm::Input { binder, channel, body } => {
                name_free_atoms(channel, out);
                let mut inner = BTreeSet::new();
                body.free_atoms_into(&mut inner);
                if let Name::Atom(b) = binder {
                    inner.remove(b);
                } else {
                    name_free_atoms(binder, out);
                }
                out.extend(inner);
            }
            RhoTerm::Lift { channel, payload } => {
                name_free_atoms(channel, out);
                payload.free_atoms_into(out);
            }
            RhoTerm::Drop(x) => name_free_atoms(x, out),
            RhoTerm::Par(a, b) => {
                a.free_atoms_into(out);
                b.free_atoms_into(out);
            }
        }
    }

    /// Capture-avoiding substitution `self{value/target}`. Occurrences are
    /// matched up to name equivalence, including inside quotes.
    pub fn substitute(&self, target: &RName, value: &RName) -> RhoTerm {
        let key = target.canonical();
        let mut value_atoms = BTreeSet::new();
        name_atoms(value, &mut value_atoms);
        let value_names = deep_names(value);
        self.subst(&key, value, &value_atoms, &value_names)
    }

    fn subst(&self, key: &RName, value: &RName, value_atoms: &BTreeSet<Atom>, value_names: &BTreeSet<RName>) -> RhoTerm {
        match self {
            RhoTerm::Zero => RhoTerm::Zero,
            RhoTerm::Input { binder, channel, body } => {
                let channel = subst_name(channel, key, value, value_atoms, value_names);
                let bkey = binder.canonical();
                if bkey == *key {
                    return RhoTerm::Input { binder: binder.clone(), channel, body: body.clone() };
                }
                let captures = match &bkey {
                    Name::Atom(a) => value_atoms.contains(a),
                    Name::Quote(_) => value_names.contains(&bkey),
                };
                let (binder, body) = if captures {
                    let mut avoid = body.atoms();
                    avoid.extend(value_atoms.iter().cloned());
                    let mut key_atoms = BTreeSet::new();
                    name_atoms(key, &mut key_atoms);
                    avoid.extend(key_atoms);
                    let base = binder.as_atom().map(|a| a.as_str().to_string()).unwrap_or_else(|| "y".into());
                    let fresh: RName = Name::Atom(fresh_atom(&base, &avoid));
                    let renamed = body.substitute(binder, &fresh);
                    (fresh, Shared::new(renamed))
                } else {
                    (binder.clone(), body.clone())
                };
                RhoTerm::Input { binder, channel, body: Shared::new(body.subst(key, value, value_atoms, value_names)) }
            }
            RhoTerm::Lift { channel, payload } => RhoTerm::Lift {
                channel: subst_name(channel, key, value, value_atoms, value_names),
                payload: Shared::new(payload.subst(key, value, value_atoms, value_names)),
            },
            RhoTerm::Drop(x) => RhoTerm::Drop(subst_name(x, key, value, value_atoms, value_names)),
            RhoTerm::Par(a, b) => RhoTerm::par(
                a.subst(key, value, value_atoms, value_names),
                b.subst(key, value, value_atoms, value_names),
            ),
        }
    }

    pub fn alpha_equiv(&self, other: &RhoTerm) -> bool {
        self.alpha_normal() == other.alpha_normal()
    }

    /// Binders renamed by position; nothing else changes.
    pub fn alpha_normal(&self) -> RhoTerm {
        let prefix = binder_prefix(&self.free_atoms());
        self.alpha_at(&prefix, 0)
    }

    fn alpha_at(&self, prefix: &str, depth: usize) -> RhoTerm {
        match self {
            RhoTerm::Input { binder, channel, body } => {
                let b: RName = Name::Atom(Atom::new(format!("{prefix}{depth}")));
                let body = body.substitute(binder, &b);
                RhoTerm::input(b, channel.clone(), body.alpha_at(prefix, depth + 1))
            }
            RhoTerm::Lift { channel, payload } => RhoTerm::lift(channel.clone(), payload.alpha_at(prefix, depth)),
            RhoTerm::Par(a, b) => RhoTerm::par(a.alpha_at(prefix, depth), b.alpha_at(prefix, depth)),
            other => other.clone(),
        }
    }

    pub fn canonical(&self) -> RhoTerm {
        let prefix = binder_prefix(&self.free_atoms());
        canon(self, &prefix, 0)
    }

    pub fn canonicalize(&self) -> CanonicalForm<RhoTerm> {
        CanonicalForm::from_canonical(Calculus::Rho, self.canonical())
    }

    pub fn struct_congruent(&self, other: &RhoTerm) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn size(&self) -> usize {
        match self {
            RhoTerm::Zero | RhoTerm::Drop(_) => 1,
            RhoTerm::Input { body, .. } => 1 + body.size(),
            RhoTerm::Lift { payload, .. } => 1 + payload.size(),
            RhoTerm::Par(a, b) => a.size() + b.size(),
        }
    }
}

fn name_atoms(n: &RName, out: &mut BTreeSet<Atom>) {
    match n {
        Name::Atom(a) => {
            out.insert(a.clone());
        }
        Name::Quote(p) => p.atoms_into(out),
    }
}

fn name_free_atoms(n: &RName, out: &mut BTreeSet<Atom>) {
    match n {
        Name::Atom(a) => {
            out.insert(a.clone());
        }
        Name::Quote(p) => p.free_atoms_into(out),
    }
}

/// Canonical forms of `n` and of every name nested inside it.
fn deep_names(n: &RName) -> BTreeSet<RName> {
    fn walk(t: &RhoTerm, out: &mut BTreeSet<RName>) {
        match t {
            RhoTerm::Zero => {}
            RhoTerm::Input { binder, channel, body } => {
                visit(binder, out);
                visit(channel, out);
                walk(body, out);
            }
            RhoTerm::Lift { channel, payload } => {
                visit(channel, out);
                walk(payload, out);
            }
            RhoTerm::Drop(x) => visit(x, out),
            RhoTerm::Par(a, b) => {
                walk(a, out);
                walk(b, out);
            }
        }
    }
    fn visit(n: &RName, out: &mut BTreeSet<RName>) {
        if out.insert(n.canonical()) {
            if let Name::Quote(p) = n {
                walk(p, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    visit(n, &mut out);
    out
}

fn subst_name(n: &RName, key: &RName, value: &RName, va: &BTreeSet<Atom>, vn: &BTreeSet<RName>) -> RName {
    if n.canonical() == *key {
        return value.clone();
    }
    match n {
        Name::Atom(_) => n.clone(),
        Name::Quote(p) => Name::Quote(Shared::new(p.subst(key, value, va, vn))),
    }
}

fn canon(t: &RhoTerm, prefix: &str, depth: usize) -> RhoTerm {
    let mut items = Vec::new();
    canon_items(t, prefix, depth, &mut items);
    items.sort();
    RhoTerm::par_all(items)
}

fn canon_items(t: &RhoTerm, prefix: &str, depth: usize, out: &mut Vec<RhoTerm>) {
    match t {
        RhoTerm::Zero => {}
        RhoTerm::Par(a, b) => {
            canon_items(a, prefix, depth, out);
            canon_items(b, prefix, depth, out);
        }
        RhoTerm::Input { binder, channel, body } => {
            let b: RName = Name::Atom(Atom::new(format!("{prefix}{depth}")));
            let renamed = body.substitute(binder, &b);
            out.push(RhoTerm::input(b, canon_name_at(channel, prefix, depth), canon(&renamed, prefix, depth + 1)));
        }
        RhoTerm::Lift { channel, payload } => {
            out.push(RhoTerm::lift(canon_name_at(channel, prefix, depth), canon(payload, prefix, depth)))
        }
        // *(@P) ≡ P
        RhoTerm::Drop(x) => match canon_name_at(x, prefix, depth) {
            Name::Quote(p) => p.components_into(out),
            atom => out.push(RhoTerm::Drop(atom)),
        },
    }
}

fn canon_name_at(n: &RName, prefix: &str, depth: usize) -> RName {
    match n {
        Name::Atom(_) => n.clone(),
        Name::Quote(p) => {
            let c = canon(p, prefix, depth);
            // @(*x) ≡ x; the drop of a quote has already been collapsed, so
            // a lone drop here is of an atom.
            match c {
                RhoTerm::Drop(x) => x,
                other => Name::Quote(Shared::new(other)),
            }
        }
    }
}

impl NameSort for RName {
    fn from_atom(a: Atom) -> Self {
        Name::Atom(a)
    }

    fn as_atom_ref(&self) -> Option<&Atom> {
        self.as_atom()
    }

    /// Representative of the name-equivalence class. Binders inside the
    /// quote are renamed with a prefix avoiding the quote's free atoms.
    fn canonical(&self) -> Self {
        match self {
            Name::Atom(_) => self.clone(),
            Name::Quote(p) => canon_name_at(self, &binder_prefix(&p.free_atoms()), 0),
        }
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        name_atoms(self, out)
    }
}

/// Name equivalence: least congruence with Quote-drop and Struct-equiv.
pub fn name_equiv(x: &RName, y: &RName) -> bool {
    x.canonical() == y.canonical()
}

impl Fingerprint for RhoTerm {
    fn meta(&self) -> Meta {
        match self {
            RhoTerm::Zero => MetaBuilder::new("0").finish(),
            RhoTerm::Input { binder, channel, body } => MetaBuilder::new("for")
                .child(binder.meta(), false)
                .child(channel.meta(), false)
                .child(body.meta(), false)
                .finish(),
            RhoTerm::Lift { channel, payload } => {
                MetaBuilder::new("lift").child(channel.meta(), false).child(payload.meta(), false).finish()
            }
            RhoTerm::Drop(x) => MetaBuilder::new("drop").child(x.meta(), false).finish(),
            RhoTerm::Par(a, b) => MetaBuilder::new("par").child(a.meta(), false).child(b.meta(), false).finish(),
        }
    }
}

/// `x^l := @(x!(x))`, i.e. `@(x!(*x))`.
pub fn name_l(x: &RName) -> RName {
    Name::quote(RhoTerm::send_name(x.clone(), x.clone()))
}

/// `x^r := @(for(x <- x)0)`.
pub fn name_r(x: &RName) -> RName {
    Name::quote(RhoTerm::input(x.clone(), x.clone(), RhoTerm::Zero))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> RName {
        Name::atom(s)
    }

    fn zero() -> RName {
        Name::quote(RhoTerm::Zero)
    }

    #[test]
    fn free_names_follow_table() {
        let t = RhoTerm::input(a("y"), a("x"), RhoTerm::par(RhoTerm::Drop(a("y")), RhoTerm::Drop(a("z"))));
        let expected: BTreeSet<RName> = [a("x"), a("z")].into_iter().collect();
        assert_eq!(t.free_names(), expected);
        assert!(RhoTerm::Zero.free_names().is_empty());
    }

    #[test]
    fn drop_of_quote_collapses() {
        assert_eq!(RhoTerm::Drop(zero()).canonical(), RhoTerm::Zero);
        let q = RhoTerm::lift(a("u"), RhoTerm::Zero);
        assert_eq!(RhoTerm::Drop(Name::quote(q.clone())).canonical(), q);
    }

    #[test]
    fn quote_drop_on_names() {
        let x = zero();
        let qd = Name::quote(RhoTerm::Drop(x.clone()));
        assert!(name_equiv(&qd, &x));
        let ad = Name::quote(RhoTerm::Drop(a("v")));
        assert!(name_equiv(&ad, &a("v")));
    }

    #[test]
    fn comm_substitutes_quote() {
        // for(y <- @0) *y, receiving 0, leaves *(@0) ≡ 0
        let body = RhoTerm::Drop(a("y"));
        let out = body.substitute(&a("y"), &zero());
        assert_eq!(out, RhoTerm::Drop(zero()));
        assert!(out.struct_congruent(&RhoTerm::Zero));
    }

    #[test]
    fn substitution_reaches_inside_quotes() {
        let t = RhoTerm::send_name(name_l(&a("n")), a("n"));
        let out = t.substitute(&a("n"), &zero());
        assert_eq!(out, RhoTerm::send_name(name_l(&zero()), zero()));
    }

    #[test]
    fn substitution_avoids_capture() {
        // for(b <- u) x!(b) {b/x}
        let t = RhoTerm::input(a("b"), a("u"), RhoTerm::send_name(a("x"), a("b")));
        let out = t.substitute(&a("x"), &a("b"));
        assert_eq!(out, RhoTerm::input(a("b'"), a("u"), RhoTerm::send_name(a("b"), a("b'"))));
    }

    #[test]
    fn alpha_equivalent_inputs() {
        let l = RhoTerm::input(a("y"), a("x"), RhoTerm::Drop(a("y")));
        let r = RhoTerm::input(zero(), a("x"), RhoTerm::Drop(zero()));
        assert!(l.alpha_equiv(&r));
        assert!(l.struct_congruent(&r));
    }

    #[test]
    fn canonical_is_idempotent() {
        let t = RhoTerm::par(
            RhoTerm::input(a("y"), zero(), RhoTerm::send_name(a("_0"), a("y"))),
            RhoTerm::Drop(Name::quote(RhoTerm::lift(a("u"), RhoTerm::Zero))),
        );
        let c = t.canonical();
        assert_eq!(c.canonical(), c);
    }

    #[test]
    fn name_constructors_distinct() {
        let x = zero();
        assert!(!name_equiv(&name_l(&x), &name_r(&x)));
        assert!(!name_equiv(&name_l(&x), &x));
        assert!(!name_equiv(&name_r(&x), &x));
    }
}
