//! Reflective higher-order (RHO) combinators: Yoshida's atoms without `new`
//! or replication, with process payloads, quotation and drop.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use crate::canon::{Calculus, CanonicalForm};
use crate::comb::Agent;
use crate::name::{Atom, Name, NameSort};
use crate::shared::{Fingerprint, Meta, MetaBuilder, Shared};

/// Names of the RHO combinator calculus: `@P` (atoms are admitted as
/// free names for convenience in examples).
pub type QName = Name<RcTerm>;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RcTerm {
    Zero,
    /// `m(a, P)`
    M(QName, Shared<RcTerm>),
    Agent(Agent, Vec<QName>),
    /// `*(a)`
    Drop(QName),
    Par(Shared<RcTerm>, Shared<RcTerm>),
}

impl RcTerm {
    pub fn m(a: QName, payload: RcTerm) -> Self {
        RcTerm::M(a, Shared::new(payload))
    }

    /// Builds an agent atom, checking its arity.
    pub fn agent(kind: Agent, args: Vec<QName>) -> Result<Self, String> {
        if args.len() != kind.arity() {
            return Err(format!("{} expects {} names, got {}", kind, kind.arity(), args.len()));
        }
        Ok(RcTerm::Agent(kind, args))
    }

    pub fn d(a: QName, b: QName, c: QName) -> Self {
        RcTerm::Agent(Agent::D, vec![a, b, c])
    }

    pub fn k(a: QName) -> Self {
        RcTerm::Agent(Agent::K, vec![a])
    }

    pub fn fw(a: QName, b: QName) -> Self {
        RcTerm::Agent(Agent::Fw, vec![a, b])
    }

    pub fn br(a: QName, b: QName) -> Self {
        RcTerm::Agent(Agent::Br, vec![a, b])
    }

    pub fn bl(a: QName, b: QName) -> Self {
        RcTerm::Agent(Agent::Bl, vec![a, b])
    }

    pub fn s(a: QName, b: QName, c: QName) -> Self {
        RcTerm::Agent(Agent::S, vec![a, b, c])
    }

    pub fn drop_name(a: QName) -> Self {
        RcTerm::Drop(a)
    }

    pub fn par(a: RcTerm, b: RcTerm) -> Self {
        RcTerm::Par(Shared::new(a), Shared::new(b))
    }

    /// Right-nested parallel composition; `0` when empty.
    pub fn par_all(items: impl IntoIterator<Item = RcTerm>) -> Self {
        let items: Vec<RcTerm> = items.into_iter().collect();
        let mut iter = items.into_iter().rev();
        match iter.next() {
            None => RcTerm::Zero,
            Some(last) => iter.fold(last, |acc, t| RcTerm::par(t, acc)),
        }
    }

    /// Top-level parallel components (Par flattened, `0` dropped).
    pub fn components(&self) -> Vec<RcTerm> {
        let mut out = Vec::new();
        self.components_into(&mut out);
        out
    }

    fn components_into(&self, out: &mut Vec<RcTerm>) {
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                RcTerm::Zero => {}
                RcTerm::Par(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                other => out.push(other.clone()),
            }
        }
    }

    /// Free names: channel positions of atoms and drops, recursively through
    /// message payloads. Quoted processes are not entered.
    pub fn free_names(&self) -> BTreeSet<QName> {
        let mut out = BTreeSet::new();
        self.names_into(&mut out);
        out.into_iter().map(|n| n.canonical()).collect()
    }

    fn names_into(&self, out: &mut BTreeSet<QName>) {
        match self {
            RcTerm::Zero => {}
            RcTerm::M(a, p) => {
                out.insert(a.clone());
                p.names_into(out);
            }
            RcTerm::Agent(_, args) => out.extend(args.iter().cloned()),
            RcTerm::Drop(a) => {
                out.insert(a.clone());
            }
            RcTerm::Par(a, b) => {
                a.names_into(out);
                b.names_into(out);
            }
        }
    }

    /// Every name occurring in the term at any depth, quotes included
    /// (both the quote itself and the names inside it).
    pub fn all_names(&self) -> BTreeSet<QName> {
        let mut out = BTreeSet::new();
        self.all_names_into(&mut out);
        out
    }

    fn all_names_into(&self, out: &mut BTreeSet<QName>) {
        let visit = |n: &QName, out: &mut BTreeSet<QName>| {
            if out.insert(n.clone()) {
                if let Name::Quote(p) = n {
                    p.all_names_into(out);
                }
            }
        };
        match self {
            RcTerm::Zero => {}
            RcTerm::M(a, p) => {
                visit(a, out);
                p.all_names_into(out);
            }
            RcTerm::Agent(_, args) => args.iter().for_each(|a| visit(a, out)),
            RcTerm::Drop(a) => visit(a, out),
            RcTerm::Par(a, b) => {
                a.all_names_into(out);
                b.all_names_into(out);
            }
        }
    }

    pub fn canonical(&self) -> RcTerm {
        canon(self)
    }

    pub fn canonicalize(&self) -> CanonicalForm<RcTerm> {
        CanonicalForm::from_canonical(Calculus::RhoComb, self.canonical())
    }

    pub fn struct_congruent(&self, other: &RcTerm) -> bool {
        self.canonical() == other.canonical()
    }

    /// Alpha-equivalence is not part of this calculus: plain syntactic equality.
    pub fn alpha_equiv(&self, other: &RcTerm) -> bool {
        self == other
    }

    pub fn size(&self) -> usize {
        match self {
            RcTerm::Zero | RcTerm::Agent(..) | RcTerm::Drop(_) => 1,
            RcTerm::M(_, p) => 1 + p.size(),
            RcTerm::Par(a, b) => a.size() + b.size(),
        }
    }

    /// Quote and payload nesting depth.
    pub fn depth(&self) -> usize {
        self.meta().depth as usize
    }
}

impl Fingerprint for RcTerm {
    fn meta(&self) -> Meta {
        match self {
            RcTerm::Zero => MetaBuilder::new("0").finish(),
            RcTerm::M(a, p) => MetaBuilder::new("m").child(a.meta(), false).child(p.meta(), true).finish(),
            RcTerm::Agent(kind, args) => {
                let mut b = MetaBuilder::new(kind.keyword());
                for n in args {
                    b.child(n.meta(), false);
                }
                b.finish()
            }
            RcTerm::Drop(a) => MetaBuilder::new("drop").child(a.meta(), false).finish(),
            RcTerm::Par(a, b) => MetaBuilder::new("par").child(a.meta(), false).child(b.meta(), false).finish(),
        }
    }
}

thread_local! {
    /// Canonical quote for each quote fingerprint seen so far.
    static CANON: RefCell<HashMap<u128, QName>> = RefCell::new(HashMap::new());
}

const CANON_CACHE_LIMIT: usize = 1 << 21;

fn canon(t: &RcTerm) -> RcTerm {
    let mut items = Vec::new();
    canon_items(t, &mut items);
    items.sort();
    RcTerm::par_all(items)
}

fn canon_items(t: &RcTerm, out: &mut Vec<RcTerm>) {
    match t {
        RcTerm::Zero => {}
        RcTerm::Par(a, b) => {
            canon_items(a, out);
            canon_items(b, out);
        }
        // *(@(P)) ≡ P
        RcTerm::Drop(n) => match canon_name(n) {
            Name::Quote(p) => p.components_into(out),
            atom => out.push(RcTerm::Drop(atom)),
        },
        RcTerm::M(a, p) => out.push(RcTerm::M(canon_name(a), canon_shared(p))),
        RcTerm::Agent(kind, args) => out.push(RcTerm::Agent(*kind, args.iter().map(canon_name).collect())),
    }
}

fn canon_shared(p: &Shared<RcTerm>) -> Shared<RcTerm> {
    match canon_name(&Name::Quote(p.clone())) {
        Name::Quote(c) => c,
        Name::Atom(_) => unreachable!("quotes canonicalize to quotes"),
    }
}

fn canon_name(n: &QName) -> QName {
    let Name::Quote(p) = n else { return n.clone() };
    let key = p.fingerprint();
    if let Some(hit) = CANON.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let c = Name::Quote(Shared::new(canon(p)));
    CANON.with(|cache| {
        let mut cache = cache.borrow_mut();
        if cache.len() >= CANON_CACHE_LIMIT {
            cache.clear();
        }
        if let Name::Quote(q) = &c {
            cache.insert(q.fingerprint(), c.clone());
        }
        cache.insert(key, c.clone());
    });
    c
}

impl NameSort for QName {
    fn from_atom(a: Atom) -> Self {
        Name::Atom(a)
    }

    fn as_atom_ref(&self) -> Option<&Atom> {
        self.as_atom()
    }

    fn canonical(&self) -> Self {
        canon_name(self)
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Name::Atom(a) => {
                out.insert(a.clone());
            }
            Name::Quote(p) => {
                for n in p.all_names() {
                    if let Name::Atom(a) = n {
                        out.insert(a);
                    }
                }
            }
        }
    }
}

/// Name equivalence: structural congruence of the quoted processes.
pub fn name_equiv(x: &QName, y: &QName) -> bool {
    x.canonical() == y.canonical()
}

/// `x^l := @(bl(x, @(m(x, *x))))`; the second argument of `bl` is a name,
/// so the message is quoted.
pub fn name_l(x: &QName) -> QName {
    Name::quote(RcTerm::bl(x.clone(), self_message(x)))
}

/// `x^r := @(br(x, @(m(x, *x))))`
pub fn name_r(x: &QName) -> QName {
    Name::quote(RcTerm::br(x.clone(), self_message(x)))
}

fn self_message(x: &QName) -> QName {
    Name::quote(RcTerm::m(x.clone(), RcTerm::Drop(x.clone())))
}

/// Applies a path of `l`/`r` constructors left to right: `x^{lr} = (x^l)^r`.
pub fn name_path(x: &QName, path: &str) -> QName {
    path.chars().fold(x.clone(), |acc, c| match c {
        'l' => name_l(&acc),
        'r' => name_r(&acc),
        other => panic!("name constructor path uses only l and r, got {other}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> QName {
        Name::atom(s)
    }

    #[test]
    fn drop_of_quote_is_the_process() {
        let fw = RcTerm::fw(a("a"), a("b"));
        let t = RcTerm::Drop(Name::quote(fw.clone()));
        assert_eq!(t.canonical(), fw);
    }

    #[test]
    fn monoid_laws() {
        let t = RcTerm::par(RcTerm::Zero, RcTerm::par(RcTerm::k(a("a")), RcTerm::Zero));
        assert_eq!(t.canonical(), RcTerm::k(a("a")));
        let l = RcTerm::par(RcTerm::k(a("a")), RcTerm::k(a("b")));
        let r = RcTerm::par(RcTerm::k(a("b")), RcTerm::k(a("a")));
        assert!(l.struct_congruent(&r));
    }

    #[test]
    fn names_compare_by_referent_congruence() {
        let x = Name::quote(RcTerm::par(RcTerm::Zero, RcTerm::k(a("a"))));
        let y = Name::quote(RcTerm::par(RcTerm::k(a("a")), RcTerm::Zero));
        assert!(name_equiv(&x, &y));
        let z = Name::quote(RcTerm::k(a("b")));
        assert!(!name_equiv(&x, &z));
    }

    #[test]
    fn quote_drop_follows_from_process_law() {
        let x = Name::quote(RcTerm::k(a("a")));
        let dropped = Name::quote(RcTerm::Drop(x.clone()));
        assert!(name_equiv(&dropped, &x));
    }

    #[test]
    fn alpha_equiv_is_syntactic() {
        let zero = Name::quote(RcTerm::Zero);
        let zz = Name::quote(RcTerm::par(RcTerm::Zero, RcTerm::Zero));
        let l = RcTerm::bl(zero.clone(), zero.clone());
        let r = RcTerm::bl(zero, zz);
        assert!(!l.alpha_equiv(&r));
        assert!(l.struct_congruent(&r));
    }

    #[test]
    fn name_constructors_are_distinct() {
        let x = Name::quote(RcTerm::Zero);
        let (l, r) = (name_l(&x), name_r(&x));
        assert!(!name_equiv(&l, &r));
        assert!(!name_equiv(&l, &x));
        assert!(!name_equiv(&r, &x));
        assert_eq!(name_path(&x, "lr"), name_r(&name_l(&x)));
    }

    #[test]
    fn arity_is_checked() {
        assert!(RcTerm::agent(Agent::D, vec![a("a"), a("b")]).is_err());
        assert!(RcTerm::agent(Agent::K, vec![a("a")]).is_ok());
    }
}
