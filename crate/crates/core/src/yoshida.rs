//! Yoshida's concurrent combinators, parametric in the name type.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::canon::{Calculus, CanonicalForm};
use crate::comb::{Agent, Polarity, MESSAGE_POLARITIES};
use crate::name::{binder_prefix, Atom, NameSort};
use crate::scope::{self, enter_binder, CanonCx, ScopedTerm, Shape};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum YTerm<N> {
    Zero,
    /// `m(a, b)`: message carrying name `b` to `a`.
    M(N, N),
    Agent(Agent, Vec<N>),
    New(N, Arc<YTerm<N>>),
    Par(Arc<YTerm<N>>, Arc<YTerm<N>>),
    Repl(Arc<YTerm<N>>),
}

/// Yoshida terms over opaque atoms (the default instantiation).
pub type YoshidaTerm = YTerm<Atom>;

impl<N: NameSort> YTerm<N> {
    pub fn m(a: N, b: N) -> Self {
        YTerm::M(a, b)
    }

    pub fn agent(kind: Agent, args: Vec<N>) -> Result<Self, String> {
        if args.len() != kind.arity() {
            return Err(format!("{} expects {} names, got {}", kind, kind.arity(), args.len()));
        }
        Ok(YTerm::Agent(kind, args))
    }

    pub fn d(a: N, b: N, c: N) -> Self {
        YTerm::Agent(Agent::D, vec![a, b, c])
    }

    pub fn k(a: N) -> Self {
        YTerm::Agent(Agent::K, vec![a])
    }

    pub fn fw(a: N, b: N) -> Self {
        YTerm::Agent(Agent::Fw, vec![a, b])
    }

    pub fn br(a: N, b: N) -> Self {
        YTerm::Agent(Agent::Br, vec![a, b])
    }

    pub fn bl(a: N, b: N) -> Self {
        YTerm::Agent(Agent::Bl, vec![a, b])
    }

    pub fn s(a: N, b: N, c: N) -> Self {
        YTerm::Agent(Agent::S, vec![a, b, c])
    }

    pub fn new_name(n: N, body: YTerm<N>) -> Self {
        YTerm::New(n, Arc::new(body))
    }

    /// `(new n_1)...(new n_k) body`
    pub fn new_names(names: impl IntoIterator<Item = N>, body: YTerm<N>) -> Self {
        let names: Vec<N> = names.into_iter().collect();
        names.into_iter().rev().fold(body, |acc, n| YTerm::new_name(n, acc))
    }

    pub fn par(a: YTerm<N>, b: YTerm<N>) -> Self {
        YTerm::Par(Arc::new(a), Arc::new(b))
    }

    pub fn par_all(items: impl IntoIterator<Item = YTerm<N>>) -> Self {
        scope::fold_par(items.into_iter().collect())
    }

    pub fn repl(body: YTerm<N>) -> Self {
        YTerm::Repl(Arc::new(body))
    }

    /// Name positions of an atom with their fixed polarities.
    pub fn atom_positions(&self) -> Option<Vec<(&N, Polarity)>> {
        match self {
            YTerm::M(a, b) => Some(vec![(a, MESSAGE_POLARITIES[0]), (b, MESSAGE_POLARITIES[1])]),
            YTerm::Agent(kind, args) => Some(args.iter().zip(kind.polarities().iter().copied()).collect()),
            _ => None,
        }
    }

    pub fn free_names(&self) -> BTreeSet<N> {
        let mut out = BTreeSet::new();
        self.free_names_into(&mut out);
        out
    }

    /// Every atom mentioned anywhere (binders and quotes included).
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.visit_names(&mut |n| n.collect_atoms(&mut out));
        out
    }

    /// Calls `f` on every name occurrence, binders included.
    pub fn visit_names(&self, f: &mut dyn FnMut(&N)) {
        match self {
            YTerm::Zero => {}
            YTerm::M(a, b) => {
                f(a);
                f(b);
            }
            YTerm::Agent(_, args) => args.iter().for_each(|n| f(n)),
            YTerm::New(n, body) => {
                f(n);
                body.visit_names(f);
            }
            YTerm::Par(a, b) => {
                a.visit_names(f);
                b.visit_names(f);
            }
            YTerm::Repl(p) => p.visit_names(f),
        }
    }

    pub fn substitute(&self, subst: &BTreeMap<N, N>) -> Self {
        let keyed: BTreeMap<N, N> = subst.iter().map(|(k, v)| (k.canonical(), v.clone())).collect();
        self.rename(&keyed)
    }

    pub fn alpha_equiv(&self, other: &Self) -> bool {
        self.alpha_normal() == other.alpha_normal()
    }

    pub fn alpha_normal(&self) -> Self {
        let fns = self.free_names();
        let atoms: BTreeSet<Atom> = fns.iter().flat_map(|n| {
            let mut s = BTreeSet::new();
            n.collect_atoms(&mut s);
            s
        }).collect();
        let cx = CanonCx::new(binder_prefix(&atoms));
        self.alpha_at(&cx, 0)
    }

    fn alpha_at(&self, cx: &CanonCx, depth: usize) -> Self {
        match self {
            YTerm::New(n, body) => {
                let c = N::from_atom(cx.binder(depth));
                let mut map = BTreeMap::new();
                map.insert(n.canonical(), c.clone());
                YTerm::new_name(c, body.rename(&map).alpha_at(cx, depth + 1))
            }
            YTerm::Par(a, b) => YTerm::par(a.alpha_at(cx, depth), b.alpha_at(cx, depth)),
            YTerm::Repl(p) => YTerm::repl(p.alpha_at(cx, depth)),
            other => other.clone(),
        }
    }

    pub fn canonical(&self) -> Self {
        let mut atoms = BTreeSet::new();
        for n in self.free_names() {
            n.collect_atoms(&mut atoms);
        }
        let cx = CanonCx::new(binder_prefix(&atoms));
        scope::canonicalize(self, &cx, 0)
    }

    pub fn canonicalize(&self) -> CanonicalForm<Self>
    where
        Self: std::fmt::Display,
    {
        CanonicalForm::from_canonical(Calculus::Yoshida, self.canonical())
    }

    pub fn struct_congruent(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }

    /// Pushes every restriction down to the parallel components that
    /// mention its name, dropping unused ones. Structurally congruent.
    pub fn narrow_scopes(&self) -> Self {
        match self {
            YTerm::Zero | YTerm::M(..) | YTerm::Agent(..) => self.clone(),
            YTerm::Par(a, b) => YTerm::par(a.narrow_scopes(), b.narrow_scopes()),
            YTerm::Repl(p) => YTerm::repl(p.narrow_scopes()),
            YTerm::New(x, body) => {
                let mut comps = Vec::new();
                body.narrow_scopes().par_components(&mut comps);
                let key = x.canonical();
                let (inside, outside): (Vec<_>, Vec<_>) = comps.into_iter().partition(|c| c.free_names().contains(&key));
                let rest = YTerm::par_all(outside);
                if inside.is_empty() {
                    rest
                } else {
                    let scoped = YTerm::new_name(x.clone(), YTerm::par_all(inside));
                    if matches!(rest, YTerm::Zero) {
                        scoped
                    } else {
                        YTerm::par(rest, scoped)
                    }
                }
            }
        }
    }

    fn par_components(&self, out: &mut Vec<Self>) {
        match self {
            YTerm::Zero => {}
            YTerm::Par(a, b) => {
                a.par_components(out);
                b.par_components(out);
            }
            other => out.push(other.clone()),
        }
    }

    pub fn replication_count(&self) -> usize {
        match self {
            YTerm::New(_, p) => p.replication_count(),
            YTerm::Par(a, b) => a.replication_count() + b.replication_count(),
            YTerm::Repl(p) => 1 + p.replication_count(),
            _ => 0,
        }
    }

    pub fn new_count(&self) -> usize {
        match self {
            YTerm::New(_, p) => 1 + p.new_count(),
            YTerm::Par(a, b) => a.new_count() + b.new_count(),
            YTerm::Repl(p) => p.new_count(),
            _ => 0,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            YTerm::New(_, p) | YTerm::Repl(p) => 1 + p.size(),
            YTerm::Par(a, b) => a.size() + b.size(),
            _ => 1,
        }
    }
}

impl<N: NameSort> ScopedTerm for YTerm<N> {
    type N = N;

    fn zero() -> Self {
        YTerm::Zero
    }

    fn par(a: Self, b: Self) -> Self {
        YTerm::par(a, b)
    }

    fn new_binder(n: N, body: Self) -> Self {
        YTerm::new_name(n, body)
    }

    fn shape(&self) -> Shape<'_, Self> {
        match self {
            YTerm::Zero => Shape::Zero,
            YTerm::Par(a, b) => Shape::Par(a, b),
            YTerm::New(n, body) => Shape::New(n, body),
            _ => Shape::Simple,
        }
    }

    fn rename(&self, map: &BTreeMap<N, N>) -> Self {
        if map.is_empty() {
            return self.clone();
        }
        let get = |n: &N| map.get(&n.canonical()).cloned().unwrap_or_else(|| n.clone());
        match self {
            YTerm::Zero => YTerm::Zero,
            YTerm::M(a, b) => YTerm::M(get(a), get(b)),
            YTerm::Agent(kind, args) => YTerm::Agent(*kind, args.iter().map(get).collect()),
            YTerm::New(n, body) => {
                let (b, inner) = enter_binder(n, &body.free_names(), || body.atoms(), map);
                YTerm::new_name(b, body.rename(&inner))
            }
            YTerm::Par(a, b) => YTerm::par(a.rename(map), b.rename(map)),
            YTerm::Repl(p) => YTerm::repl(p.rename(map)),
        }
    }

    fn free_names_into(&self, out: &mut BTreeSet<N>) {
        match self {
            YTerm::Zero => {}
            YTerm::M(a, b) => {
                out.insert(a.canonical());
                out.insert(b.canonical());
            }
            YTerm::Agent(_, args) => out.extend(args.iter().map(|n| n.canonical())),
            YTerm::New(n, body) => {
                let mut inner = BTreeSet::new();
                body.free_names_into(&mut inner);
                inner.remove(&n.canonical());
                out.extend(inner);
            }
            YTerm::Par(a, b) => {
                a.free_names_into(out);
                b.free_names_into(out);
            }
            YTerm::Repl(p) => p.free_names_into(out),
        }
    }

    fn canon_simple(&self, cx: &CanonCx, depth: usize) -> Self {
        match self {
            YTerm::M(a, b) => YTerm::M(a.canonical(), b.canonical()),
            YTerm::Agent(kind, args) => YTerm::Agent(*kind, args.iter().map(|n| n.canonical()).collect()),
            YTerm::Repl(p) => YTerm::repl(scope::canonicalize(p.as_ref(), cx, depth)),
            other => other.clone(),
        }
    }
}
