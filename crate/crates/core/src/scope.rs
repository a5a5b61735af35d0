//! Canonical forms for calculi with `new`: scope extrusion, minimal-scope
//! blocks and position-indexed binder names.
//!
//! A term is first extruded into a flat list of binders and simple
//! components (anything that is not `0`, `|` or `new`). Binders are then
//! grouped with the components that use them; each connected group becomes
//! one block `(new b_d)...(new b_{d+k-1})(C_1 | ... | C_m)` whose binders
//! are named by depth. The order of binders inside a block is chosen to
//! minimise the sorted component list; binders that cannot be told apart by
//! their occurrence signatures are resolved by trying their permutations.

use std::cell::Cell;
use std::collections::{BTreeMap, BTreeSet};

use crate::name::{fresh_atom, Atom, NameSort};

/// Upper bound on binder orderings tried per block.
const MAX_BLOCK_CANDIDATES: usize = 720;

pub(crate) enum Shape<'a, T: ScopedTerm> {
    Zero,
    Par(&'a T, &'a T),
    New(&'a T::N, &'a T),
    Simple,
}

pub(crate) trait ScopedTerm: Clone + Ord + Sized {
    type N: NameSort;

    fn zero() -> Self;
    fn par(a: Self, b: Self) -> Self;
    fn new_binder(n: Self::N, body: Self) -> Self;
    fn shape(&self) -> Shape<'_, Self>;
    /// Capture-avoiding renaming of free names (keys are canonical names).
    fn rename(&self, map: &BTreeMap<Self::N, Self::N>) -> Self;
    /// Canonical free names.
    fn free_names_into(&self, out: &mut BTreeSet<Self::N>);
    /// Canonicalizes the interior of a simple component.
    fn canon_simple(&self, cx: &CanonCx, depth: usize) -> Self;
}

pub(crate) struct CanonCx {
    prefix: String,
    temps: Cell<usize>,
}

impl CanonCx {
    pub(crate) fn new(prefix: String) -> Self {
        CanonCx { prefix, temps: Cell::new(0) }
    }

    pub(crate) fn binder(&self, depth: usize) -> Atom {
        Atom::new(format!("{}{}", self.prefix, depth))
    }

    fn temp(&self) -> Atom {
        let n = self.temps.get();
        self.temps.set(n + 1);
        Atom::new(format!("%c{n}"))
    }
}

/// Prepares a substitution for the scope of `binder`: drops the binder's
/// own entry and entries not free in the body, then renames the binder if
/// it would capture a substituted name.
pub(crate) fn enter_binder<N: NameSort>(
    binder: &N,
    body_free: &BTreeSet<N>,
    body_atoms: impl FnOnce() -> BTreeSet<Atom>,
    map: &BTreeMap<N, N>,
) -> (N, BTreeMap<N, N>) {
    let key = binder.canonical();
    let mut inner: BTreeMap<N, N> = map
        .iter()
        .filter(|(k, _)| **k != key && body_free.contains(*k))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    if inner.values().any(|v| v.canonical() == key) {
        let mut avoid = body_atoms();
        for (k, v) in &inner {
            k.collect_atoms(&mut avoid);
            v.collect_atoms(&mut avoid);
        }
        let base = binder.as_atom_ref().map(|a| a.as_str().to_string()).unwrap_or_else(|| "b".into());
        let fresh = N::from_atom(fresh_atom(&base, &avoid));
        inner.insert(key, fresh.clone());
        (fresh, inner)
    } else {
        (binder.clone(), inner)
    }
}

pub(crate) fn fold_par<T: ScopedTerm>(items: Vec<T>) -> T {
    let mut iter = items.into_iter().rev();
    match iter.next() {
        None => T::zero(),
        Some(last) => iter.fold(last, |acc, item| T::par(item, acc)),
    }
}

/// Flattens `t` into binders and simple components, renaming every
/// `new`-bound name to a fresh internal atom `%<tag><k>`.
pub(crate) fn extrude<T: ScopedTerm>(t: &T, tag: &str) -> (Vec<T::N>, Vec<T>) {
    let counter = Cell::new(0usize);
    let mut binders = Vec::new();
    let mut comps = Vec::new();
    extrude_into(t, &mut binders, &mut comps, &mut || {
        let n = counter.get();
        counter.set(n + 1);
        Atom::new(format!("%{tag}{n}"))
    });
    (binders, comps)
}

fn extrude_into<T: ScopedTerm>(
    t: &T,
    binders: &mut Vec<T::N>,
    comps: &mut Vec<T>,
    fresh: &mut dyn FnMut() -> Atom,
) {
    match t.shape() {
        Shape::Zero => {}
        Shape::Par(a, b) => {
            extrude_into(a, binders, comps, fresh);
            extrude_into(b, binders, comps, fresh);
        }
        Shape::New(n, body) => {
            let tmp = T::N::from_atom(fresh());
            let mut map = BTreeMap::new();
            map.insert(n.canonical(), tmp.clone());
            let body = body.rename(&map);
            binders.push(tmp);
            extrude_into(&body, binders, comps, fresh);
        }
        Shape::Simple => comps.push(t.clone()),
    }
}

/// Wraps components in the given binders: `(new b_1)...(new b_k)(C_1|...|C_m)`.
pub(crate) fn wrap<T: ScopedTerm>(binders: &[T::N], comps: Vec<T>) -> T {
    let body = fold_par(comps);
    binders.iter().rev().fold(body, |acc, b| T::new_binder(b.clone(), acc))
}

/// Canonical form of `t` whose enclosing binders occupy depths `0..depth`.
pub(crate) fn canonicalize<T: ScopedTerm>(t: &T, cx: &CanonCx, depth: usize) -> T {
    let mut binders = Vec::new();
    let mut comps = Vec::new();
    extrude_into(t, &mut binders, &mut comps, &mut || cx.temp());

    // Union-find over binders, keyed by position.
    let index: BTreeMap<T::N, usize> = binders.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
    let mut parent: Vec<usize> = (0..binders.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut uses: Vec<Vec<usize>> = Vec::with_capacity(comps.len());
    for c in &comps {
        let mut fns = BTreeSet::new();
        c.free_names_into(&mut fns);
        let used: Vec<usize> = fns.iter().filter_map(|n| index.get(n).copied()).collect();
        for w in used.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a] = b;
            }
        }
        uses.push(used);
    }

    let mut items = Vec::new();
    let mut groups: BTreeMap<usize, (Vec<usize>, Vec<T>)> = BTreeMap::new();
    for (c, used) in comps.into_iter().zip(uses) {
        match used.first() {
            None => items.push(c.canon_simple(cx, depth)),
            Some(&b) => {
                let root = find(&mut parent, b);
                groups.entry(root).or_default().1.push(c);
            }
        }
    }
    // Binders used by no component fall away here: `(new x)P ≡ P` when x ∉ FN(P).
    for b in 0..binders.len() {
        let root = find(&mut parent, b);
        if let Some(g) = groups.get_mut(&root) {
            g.0.push(b);
        }
    }
    for (_, (bs, cs)) in groups {
        let names: Vec<T::N> = bs.iter().map(|&i| binders[i].clone()).collect();
        items.push(canon_block(&names, &cs, cx, depth));
    }
    items.sort();
    fold_par(items)
}

fn canon_block<T: ScopedTerm>(binders: &[T::N], comps: &[T], cx: &CanonCx, depth: usize) -> T {
    let k = binders.len();
    let inner = depth + k;
    let mark = T::N::from_atom(Atom::new("%#"));
    let hole = T::N::from_atom(Atom::new("%?"));

    // Occurrence signature of each binder with all other block binders erased.
    let mut sigs: Vec<(Vec<T>, usize)> = (0..k)
        .map(|i| {
            let map: BTreeMap<T::N, T::N> = binders
                .iter()
                .enumerate()
                .map(|(j, b)| (b.clone(), if i == j { mark.clone() } else { hole.clone() }))
                .collect();
            let mut sig: Vec<T> = comps
                .iter()
                .filter(|c| {
                    let mut fns = BTreeSet::new();
                    c.free_names_into(&mut fns);
                    fns.contains(&binders[i])
                })
                .map(|c| c.rename(&map).canon_simple(cx, inner))
                .collect();
            sig.sort();
            (sig, i)
        })
        .collect();
    sigs.sort();

    let mut tie_groups: Vec<Vec<usize>> = Vec::new();
    for (idx, (sig, b)) in sigs.iter().enumerate() {
        if idx > 0 && sigs[idx - 1].0 == *sig {
            tie_groups.last_mut().expect("group").push(*b);
        } else {
            tie_groups.push(vec![*b]);
        }
    }
    let candidates = orderings(&tie_groups);

    let names: Vec<T::N> = (0..k).map(|i| T::N::from_atom(cx.binder(depth + i))).collect();
    let mut best: Option<Vec<T>> = None;
    for order in candidates {
        let map: BTreeMap<T::N, T::N> =
            order.iter().enumerate().map(|(pos, &b)| (binders[b].clone(), names[pos].clone())).collect();
        let mut cs: Vec<T> = comps.iter().map(|c| c.rename(&map).canon_simple(cx, inner)).collect();
        cs.sort();
        if best.as_ref().map_or(true, |b| cs < *b) {
            best = Some(cs);
        }
    }
    wrap(&names, best.unwrap_or_default())
}

/// Binder orderings consistent with the signature order; ties are expanded
/// into permutations while the total stays under the candidate cap.
fn orderings(groups: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let total = groups
        .iter()
        .try_fold(1usize, |acc, g| acc.checked_mul(factorial(g.len())))
        .unwrap_or(usize::MAX);
    if total > MAX_BLOCK_CANDIDATES {
        return vec![groups.iter().flatten().copied().collect()];
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for g in groups {
        let perms = permutations(g);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                perms.iter().map(move |p| {
                    let mut v = prefix.clone();
                    v.extend_from_slice(p);
                    v
                })
            })
            .collect();
    }
    out
}

fn factorial(n: usize) -> usize {
    (1..=n).try_fold(1usize, |acc, x| acc.checked_mul(x)).unwrap_or(usize::MAX)
}

pub(crate) fn permutations<X: Clone>(items: &[X]) -> Vec<Vec<X>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_count() {
        assert_eq!(permutations(&[1, 2, 3]).len(), 6);
        assert_eq!(permutations::<u8>(&[]).len(), 1);
    }

    #[test]
    fn orderings_expand_ties_only() {
        let o = orderings(&[vec![0], vec![1, 2]]);
        assert_eq!(o, vec![vec![0, 1, 2], vec![0, 2, 1]]);
    }

    #[test]
    fn orderings_fall_back_when_too_many() {
        let big: Vec<usize> = (0..8).collect();
        assert_eq!(orderings(&[big.clone()]), vec![big]);
    }
}
