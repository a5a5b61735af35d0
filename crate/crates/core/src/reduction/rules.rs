//! Rewrite rules of each calculus over flat views.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::{Process, Redex, Rule, StepError};
use crate::canon::Calculus;
use crate::comb::Agent;
use crate::name::{Atom, Name, NameSort};
use crate::pi::PiTerm;
use crate::rho::RhoTerm;
use crate::rhocomb::RcTerm;
use crate::scope;
use crate::yoshida::YTerm;

/// Restricted names and parallel components of a canonical term.
#[derive(Clone, Debug)]
pub struct FlatView<T: Process> {
    pub binders: Vec<T::Binder>,
    pub comps: Vec<T>,
}

impl<T: Process> FlatView<T> {
    /// The term with the components at `indices` replaced by `products`.
    pub fn replace(&self, indices: &[usize], products: Vec<T>) -> T {
        let mut comps: Vec<T> =
            self.comps.iter().enumerate().filter(|(i, _)| !indices.contains(i)).map(|(_, c)| c.clone()).collect();
        comps.extend(products);
        T::rebuild(&self.binders, comps)
    }

    pub fn term(&self) -> T {
        T::rebuild(&self.binders, self.comps.clone())
    }
}

fn stale(r: &Redex) -> StepError {
    StepError::Stale(format!("{} at {:?} does not match the term", r.rule, r.indices))
}

fn pair<'a, T: Process>(flat: &'a FlatView<T>, r: &Redex) -> Result<(&'a T, &'a T), StepError> {
    match r.indices.as_slice() {
        [i, j] if i != j && *i < flat.comps.len() && *j < flat.comps.len() => Ok((&flat.comps[*i], &flat.comps[*j])),
        _ => Err(stale(r)),
    }
}

fn single<'a, T: Process>(flat: &'a FlatView<T>, r: &Redex) -> Result<&'a T, StepError> {
    match r.indices.as_slice() {
        [i] if *i < flat.comps.len() => Ok(&flat.comps[*i]),
        _ => Err(stale(r)),
    }
}

pub(crate) fn agent_rule(kind: Agent) -> Rule {
    match kind {
        Agent::D => Rule::D,
        Agent::K => Rule::K,
        Agent::Fw => Rule::Fw,
        Agent::Br => Rule::Br,
        Agent::Bl => Rule::Bl,
        Agent::S => Rule::S,
    }
}

// ---------------------------------------------------------------------------
// π

impl Process for PiTerm {
    const CALCULUS: Calculus = Calculus::Pi;
    type Binder = Atom;

    fn canonical_term(&self) -> Self {
        self.canonical()
    }

    fn rebuild(binders: &[Atom], comps: Vec<Self>) -> Self {
        scope::wrap(binders, comps)
    }

    fn flatten(&self) -> FlatView<Self> {
        let (binders, comps) = scope::extrude(self, "r");
        FlatView { binders, comps }
    }

    fn redexes(flat: &FlatView<Self>) -> Vec<Redex> {
        let mut out = Vec::new();
        for (i, c) in flat.comps.iter().enumerate() {
            match c {
                PiTerm::Input { channel, .. } => {
                    for (j, d) in flat.comps.iter().enumerate() {
                        if let PiTerm::Output { channel: ch, .. } = d {
                            if ch == channel {
                                out.push(Redex { rule: Rule::Comm, indices: vec![i, j], subject: format!("{c} | {d}") });
                            }
                        }
                    }
                }
                PiTerm::Repl(_) => out.push(Redex { rule: Rule::Unfold, indices: vec![i], subject: c.to_string() }),
                _ => {}
            }
        }
        out
    }

    fn fire(flat: &FlatView<Self>, r: &Redex) -> Result<Vec<Self>, StepError> {
        match r.rule {
            Rule::Comm => match pair(flat, r)? {
                (PiTerm::Input { binder, channel, body }, PiTerm::Output { channel: ch, payload }) if ch == channel => {
                    let mut s = BTreeMap::new();
                    s.insert(binder.clone(), payload.clone());
                    Ok(vec![body.substitute(&s)])
                }
                _ => Err(stale(r)),
            },
            Rule::Unfold => match single(flat, r)? {
                PiTerm::Repl(p) => Ok(vec![p.as_ref().clone(), PiTerm::Repl(p.clone())]),
                _ => Err(stale(r)),
            },
            _ => Err(stale(r)),
        }
    }
}

// ---------------------------------------------------------------------------
// Yoshida

/// Products of `agent | m(a, x)` for Yoshida's rules.
fn yoshida_products<N: NameSort>(kind: Agent, args: &[N], x: &N) -> Vec<YTerm<N>> {
    match kind {
        Agent::D => vec![YTerm::m(args[1].clone(), x.clone()), YTerm::m(args[2].clone(), x.clone())],
        Agent::K => vec![],
        Agent::Fw => vec![YTerm::m(args[1].clone(), x.clone())],
        Agent::Br => vec![YTerm::fw(args[1].clone(), x.clone())],
        Agent::Bl => vec![YTerm::fw(x.clone(), args[1].clone())],
        Agent::S => vec![YTerm::fw(args[1].clone(), args[2].clone())],
    }
}

impl<N: NameSort + 'static> Process for YTerm<N> {
    const CALCULUS: Calculus = Calculus::Yoshida;
    type Binder = N;

    fn canonical_term(&self) -> Self {
        self.canonical()
    }

    fn rebuild(binders: &[N], comps: Vec<Self>) -> Self {
        scope::wrap(binders, comps)
    }

    fn flatten(&self) -> FlatView<Self> {
        let (binders, comps) = scope::extrude(self, "r");
        FlatView { binders, comps }
    }

    fn redexes(flat: &FlatView<Self>) -> Vec<Redex> {
        let mut out = Vec::new();
        for (i, c) in flat.comps.iter().enumerate() {
            match c {
                YTerm::Agent(kind, args) => {
                    for (j, d) in flat.comps.iter().enumerate() {
                        if let YTerm::M(a, _) = d {
                            if *a == args[0] {
                                out.push(Redex {
                                    rule: agent_rule(*kind),
                                    indices: vec![i, j],
                                    subject: format!("{c} | {d}"),
                                });
                            }
                        }
                    }
                }
                YTerm::Repl(_) => out.push(Redex { rule: Rule::Unfold, indices: vec![i], subject: c.to_string() }),
                _ => {}
            }
        }
        out
    }

    fn fire(flat: &FlatView<Self>, r: &Redex) -> Result<Vec<Self>, StepError> {
        if r.rule == Rule::Unfold {
            return match single(flat, r)? {
                YTerm::Repl(p) => Ok(vec![p.as_ref().clone(), YTerm::Repl(p.clone())]),
                _ => Err(stale(r)),
            };
        }
        match pair(flat, r)? {
            (YTerm::Agent(kind, args), YTerm::M(a, x)) if agent_rule(*kind) == r.rule && args[0] == *a => {
                Ok(yoshida_products(*kind, args, x))
            }
            _ => Err(stale(r)),
        }
    }
}

// ---------------------------------------------------------------------------
// ρ

impl Process for RhoTerm {
    const CALCULUS: Calculus = Calculus::Rho;
    type Binder = ();

    fn canonical_term(&self) -> Self {
        self.canonical()
    }

    fn rebuild(_: &[()], comps: Vec<Self>) -> Self {
        RhoTerm::par_all(comps)
    }

    fn flatten(&self) -> FlatView<Self> {
        FlatView { binders: Vec::new(), comps: self.components() }
    }

    fn redexes(flat: &FlatView<Self>) -> Vec<Redex> {
        let mut out = Vec::new();
        for (i, c) in flat.comps.iter().enumerate() {
            if let RhoTerm::Input { channel, .. } = c {
                for (j, d) in flat.comps.iter().enumerate() {
                    if let RhoTerm::Lift { channel: ch, .. } = d {
                        if ch == channel {
                            out.push(Redex { rule: Rule::Comm, indices: vec![i, j], subject: format!("{c} | {d}") });
                        }
                    }
                }
            }
        }
        out
    }

    fn fire(flat: &FlatView<Self>, r: &Redex) -> Result<Vec<Self>, StepError> {
        match (r.rule, pair(flat, r)?) {
            (Rule::Comm, (RhoTerm::Input { binder, channel, body }, RhoTerm::Lift { channel: ch, payload }))
                if ch == channel =>
            {
                let value = Name::Quote(payload.clone()).canonical();
                Ok(vec![body.substitute(binder, &value)])
            }
            _ => Err(stale(r)),
        }
    }
}

// ---------------------------------------------------------------------------
// RHO combinators

/// Products of `agent | m(a, P)` for the RHO combinator rules.
pub(crate) fn rhocomb_products(kind: Agent, args: &[crate::rhocomb::QName], p: &RcTerm) -> Vec<RcTerm> {
    let quoted = || Name::quote(p.clone());
    match kind {
        Agent::D => vec![RcTerm::m(args[1].clone(), p.clone()), RcTerm::m(args[2].clone(), p.clone())],
        Agent::K => vec![],
        Agent::Fw => vec![RcTerm::m(args[1].clone(), p.clone())],
        Agent::Br => vec![RcTerm::fw(args[1].clone(), quoted())],
        Agent::Bl => vec![RcTerm::fw(quoted(), args[1].clone())],
        Agent::S => vec![RcTerm::fw(args[1].clone(), args[2].clone())],
    }
}

impl Process for RcTerm {
    const CALCULUS: Calculus = Calculus::RhoComb;
    type Binder = ();

    fn canonical_term(&self) -> Self {
        self.canonical()
    }

    fn rebuild(_: &[()], comps: Vec<Self>) -> Self {
        RcTerm::par_all(comps)
    }

    /// The untouched components are canonical already.
    fn splice(flat: &FlatView<Self>, indices: &[usize], products: Vec<Self>) -> Self {
        let mut items: Vec<RcTerm> =
            flat.comps.iter().enumerate().filter(|(k, _)| !indices.contains(k)).map(|(_, c)| c.clone()).collect();
        for p in products {
            items.extend(p.canonical().components());
        }
        items.sort();
        RcTerm::par_all(items)
    }

    fn flatten(&self) -> FlatView<Self> {
        FlatView { binders: Vec::new(), comps: self.components() }
    }

    fn redexes(flat: &FlatView<Self>) -> Vec<Redex> {
        let mut out = Vec::new();
        let mut inbox: HashMap<&crate::rhocomb::QName, Vec<usize>> = HashMap::new();
        for (j, d) in flat.comps.iter().enumerate() {
            if let RcTerm::M(a, _) = d {
                inbox.entry(a).or_default().push(j);
            }
        }
        for (i, c) in flat.comps.iter().enumerate() {
            let (rule, subject) = match c {
                RcTerm::Agent(kind, args) => (agent_rule(*kind), &args[0]),
                RcTerm::Drop(a) => (Rule::Drop, a),
                _ => continue,
            };
            for &j in inbox.get(subject).into_iter().flatten() {
                let d = &flat.comps[j];
                out.push(Redex { rule, indices: vec![i, j], subject: format!("{} | {}", show(c), show(d)) });
            }
        }
        // `*(@Q)` has been replaced by the components of Q; the drop rule
        // fires on them directly.
        let present: HashSet<&RcTerm> = flat.comps.iter().collect();
        for (j, d) in flat.comps.iter().enumerate() {
            if let RcTerm::M(Name::Quote(q), _) = d {
                let want = q.components();
                if !want.iter().all(|w| present.contains(w)) {
                    continue;
                }
                if let Some(mut indices) = match_components(&flat.comps, &want, j) {
                    let shown: Vec<String> = indices.iter().map(|&k| show(&flat.comps[k])).collect();
                    let subject = if shown.is_empty() { show(d) } else { format!("{} | {}", shown.join(" | "), show(d)) };
                    indices.push(j);
                    out.push(Redex { rule: Rule::Drop, indices, subject });
                }
            }
        }
        out
    }

    fn fire(flat: &FlatView<Self>, r: &Redex) -> Result<Vec<Self>, StepError> {
        if r.rule == Rule::Drop {
            let Some((&j, rest)) = r.indices.split_last() else { return Err(stale(r)) };
            if j >= flat.comps.len() || rest.iter().any(|&k| k >= flat.comps.len() || k == j) {
                return Err(stale(r));
            }
            let RcTerm::M(a, p) = &flat.comps[j] else { return Err(stale(r)) };
            let literal = matches!(rest, [i] if flat.comps[*i] == RcTerm::Drop(a.clone()));
            let reflected = match a {
                Name::Quote(q) => {
                    let mut got: Vec<&RcTerm> = rest.iter().map(|&k| &flat.comps[k]).collect();
                    let want = q.components();
                    let mut want: Vec<&RcTerm> = want.iter().collect();
                    got.sort();
                    want.sort();
                    got == want
                }
                Name::Atom(_) => false,
            };
            return if literal || reflected { Ok(vec![p.as_ref().clone()]) } else { Err(stale(r)) };
        }
        match pair(flat, r)? {
            (RcTerm::Agent(kind, args), RcTerm::M(a, p)) if agent_rule(*kind) == r.rule && args[0] == *a => {
                Ok(rhocomb_products(*kind, args, p))
            }
            _ => Err(stale(r)),
        }
    }
}

/// Quotes heavier than this are abbreviated in redex subjects.
const SUBJECT_WEIGHT: u64 = 40;

fn show(t: &RcTerm) -> String {
    crate::syntax::render_elided(t, SUBJECT_WEIGHT)
}

/// Least indices (other than `skip`) whose components form the multiset `want`.
fn match_components(comps: &[RcTerm], want: &[RcTerm], skip: usize) -> Option<Vec<usize>> {
    let mut used = vec![false; comps.len()];
    used[skip] = true;
    let mut out = Vec::with_capacity(want.len());
    for w in want {
        let k = (0..comps.len()).find(|&k| !used[k] && comps[k] == *w)?;
        used[k] = true;
        out.push(k);
    }
    out.sort_unstable();
    Some(out)
}
