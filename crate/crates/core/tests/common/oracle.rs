//! Reference implementations the library is checked against. They share no
//! code with the library beyond the term types.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rhocomb::{Agent, Atom, Name, Polarity, QName, RcTerm, YTerm, YoshidaTerm};

/// Restricted names and leaf components of a replication-free Yoshida
/// term, every binder renamed apart and unused binders dropped.
#[derive(Clone, Debug)]
pub struct Flat {
    pub binders: Vec<Atom>,
    pub comps: Vec<YoshidaTerm>,
}

pub fn flatten(t: &YoshidaTerm) -> Flat {
    fn go(t: &YoshidaTerm, env: &mut BTreeMap<Atom, Atom>, fl: &mut Flat, next: &mut usize) {
        let ren = |a: &Atom, env: &BTreeMap<Atom, Atom>| env.get(a).cloned().unwrap_or_else(|| a.clone());
        match t {
            YTerm::Zero => {}
            YTerm::M(a, b) => fl.comps.push(YTerm::M(ren(a, env), ren(b, env))),
            YTerm::Agent(k, args) => fl.comps.push(YTerm::Agent(*k, args.iter().map(|a| ren(a, env)).collect())),
            YTerm::Par(a, b) => {
                go(a, env, fl, next);
                go(b, env, fl, next);
            }
            YTerm::New(x, body) => {
                let fresh = Atom::new(format!("#{next}"));
                *next += 1;
                fl.binders.push(fresh.clone());
                let saved = env.insert(x.clone(), fresh);
                go(body, env, fl, next);
                match saved {
                    Some(s) => env.insert(x.clone(), s),
                    None => env.remove(x),
                };
            }
            YTerm::Repl(_) => panic!("oracle handles replication-free terms only"),
        }
    }
    let mut fl = Flat { binders: Vec::new(), comps: Vec::new() };
    go(t, &mut BTreeMap::new(), &mut fl, &mut 0);
    let used: BTreeSet<Atom> = fl.comps.iter().flat_map(leaf_names).collect();
    fl.binders.retain(|b| used.contains(b));
    fl
}

fn leaf_names(t: &YoshidaTerm) -> Vec<Atom> {
    match t {
        YTerm::M(a, b) => vec![a.clone(), b.clone()],
        YTerm::Agent(_, args) => args.clone(),
        _ => Vec::new(),
    }
}

fn rename_leaf(t: &YoshidaTerm, map: &BTreeMap<Atom, Atom>) -> YoshidaTerm {
    let r = |a: &Atom| map.get(a).cloned().unwrap_or_else(|| a.clone());
    match t {
        YTerm::M(a, b) => YTerm::M(r(a), r(b)),
        YTerm::Agent(k, args) => YTerm::Agent(*k, args.iter().map(r).collect()),
        other => other.clone(),
    }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Congruence by brute force: some bijection of restricted names makes
/// the component multisets equal.
pub fn congruent(p: &YoshidaTerm, q: &YoshidaTerm) -> bool {
    let (fp, fq) = (flatten(p), flatten(q));
    if fp.binders.len() != fq.binders.len() || fp.comps.len() != fq.comps.len() {
        return false;
    }
    let mut target = fq.comps.clone();
    target.sort();
    permutations(fp.binders.len()).into_iter().any(|perm| {
        let map: BTreeMap<Atom, Atom> =
            perm.iter().enumerate().map(|(i, &j)| (fp.binders[i].clone(), fq.binders[j].clone())).collect();
        let mut mine: Vec<YoshidaTerm> = fp.comps.iter().map(|c| rename_leaf(c, &map)).collect();
        mine.sort();
        mine == target
    })
}

/// Rebuilds a flat view as `(new b..)(c_1 | ... | c_k)`.
pub fn rebuild(binders: &[Atom], comps: &[YoshidaTerm]) -> YoshidaTerm {
    let body = comps.iter().cloned().fold(YTerm::Zero, |acc, c| match acc {
        YTerm::Zero => c,
        acc => YTerm::par(acc, c),
    });
    binders.iter().rev().fold(body, |acc, b| YTerm::new_name(b.clone(), acc))
}

/// Polarity signature of the combinators.
pub fn signature(head: Option<Agent>) -> Vec<Polarity> {
    use Polarity::*;
    match head {
        None => vec![Plus, Either],
        Some(Agent::D) => vec![Minus, Plus, Plus],
        Some(Agent::K) => vec![Minus],
        Some(Agent::Fw) => vec![Minus, Plus],
        Some(Agent::Bl) => vec![Minus, Plus],
        Some(Agent::Br) => vec![Minus, Minus],
        Some(Agent::S) => vec![Minus, Minus, Plus],
    }
}

/// `(name, polarity)` for every name position of a Yoshida term.
pub fn occurrences(t: &YoshidaTerm, out: &mut Vec<(Atom, Polarity)>) {
    match t {
        YTerm::Zero => {}
        YTerm::M(a, b) => out.extend([a.clone(), b.clone()].into_iter().zip(signature(None))),
        YTerm::Agent(k, args) => out.extend(args.iter().cloned().zip(signature(Some(*k)))),
        YTerm::New(_, p) | YTerm::Repl(p) => occurrences(p, out),
        YTerm::Par(a, b) => {
            occurrences(a, out);
            occurrences(b, out);
        }
    }
}

/// Every occurrence in `after` of a name already present in `before` sits
/// at a polarity one of its earlier occurrences allows.
pub fn polarities_kept(before: &[YoshidaTerm], after: &[YoshidaTerm]) -> bool {
    let mut seen: BTreeMap<Atom, BTreeSet<Polarity>> = BTreeMap::new();
    let mut occ = Vec::new();
    before.iter().for_each(|t| occurrences(t, &mut occ));
    for (a, p) in occ {
        seen.entry(a).or_default().insert(p);
    }
    let mut occ = Vec::new();
    after.iter().for_each(|t| occurrences(t, &mut occ));
    occ.iter().all(|(a, p)| {
        seen.get(a).map_or(true, |ps| ps.iter().any(|q| *q == Polarity::Either || q == p))
    })
}

/// Every name occurring anywhere in a RHO-combinator term, quoted
/// subterms included, each distinct shared node visited once.
pub fn rc_names(t: &RcTerm) -> Vec<QName> {
    fn name(n: &QName, out: &mut Vec<QName>, seen: &mut HashSet<u128>) {
        out.push(n.clone());
        if let Name::Quote(p) = n {
            if seen.insert(p.fingerprint()) {
                term(p, out, seen);
            }
        }
    }
    fn term(t: &RcTerm, out: &mut Vec<QName>, seen: &mut HashSet<u128>) {
        match t {
            RcTerm::Zero => {}
            RcTerm::M(a, p) => {
                name(a, out, seen);
                term(p, out, seen);
            }
            RcTerm::Agent(_, args) => args.iter().for_each(|a| name(a, out, seen)),
            RcTerm::Drop(a) => name(a, out, seen),
            RcTerm::Par(a, b) => {
                term(a, out, seen);
                term(b, out, seen);
            }
        }
    }
    let mut out = Vec::new();
    term(t, &mut out, &mut HashSet::new());
    out
}

/// `x^l = @(bl(x, @(m(x, *x))))`, built by hand.
pub fn name_l(x: &QName) -> QName {
    let msg = Name::quote(RcTerm::m(x.clone(), RcTerm::Drop(x.clone())));
    Name::quote(RcTerm::Agent(Agent::Bl, vec![x.clone(), msg]))
}

/// `x^r = @(br(x, @(m(x, *x))))`, built by hand.
pub fn name_r(x: &QName) -> QName {
    let msg = Name::quote(RcTerm::m(x.clone(), RcTerm::Drop(x.clone())));
    Name::quote(RcTerm::Agent(Agent::Br, vec![x.clone(), msg]))
}

/// Walks a RHO-combinator term and its quotes and counts nodes, so the
/// caller can assert the term was built from the combinator grammar alone.
pub fn rc_node_count(t: &RcTerm) -> usize {
    fn go(t: &RcTerm, seen: &mut HashSet<u128>) -> usize {
        let names = |ns: &[QName], seen: &mut HashSet<u128>| -> usize {
            ns.iter()
                .map(|n| match n {
                    Name::Quote(p) if seen.insert(p.fingerprint()) => 1 + go(p, seen),
                    _ => 1,
                })
                .sum()
        };
        match t {
            RcTerm::Zero => 1,
            RcTerm::M(a, p) => 1 + names(std::slice::from_ref(a), seen) + go(p, seen),
            RcTerm::Agent(_, args) => 1 + names(args, seen),
            RcTerm::Drop(a) => 1 + names(std::slice::from_ref(a), seen),
            RcTerm::Par(a, b) => 1 + go(a, seen) + go(b, seen),
        }
    }
    go(t, &mut HashSet::new())
}
