//! Barbs, weak barbs and bounded barbed bisimulation over reduction graphs.

mod bisim;

use std::collections::BTreeSet;

use crate::name::{Atom, NameSort};
use crate::pi::PiTerm;
use crate::reduction::{explore, Budgets, Process};
use crate::rho::{RName, RhoTerm};
use crate::rhocomb::{QName, RcTerm};
use crate::yoshida::YTerm;

pub use bisim::{bounded_bisim, BarbDiff, BisimOptions, BisimVerdict, Outcome, Side, WitnessStep};

/// Calculi with an output observation.
pub trait Observable: Process {
    type Name: NameSort;

    /// Channels of top-level outputs of a canonical term, outside every
    /// top-level restriction. Canonical names.
    fn output_channels(&self) -> Vec<Self::Name>;

    fn canonical_name(n: &Self::Name) -> Self::Name;
}

impl Observable for PiTerm {
    type Name = Atom;

    fn output_channels(&self) -> Vec<Atom> {
        let flat = self.flatten();
        flat.comps
            .iter()
            .filter_map(|c| match c {
                PiTerm::Output { channel, .. } if !flat.binders.contains(channel) => Some(channel.clone()),
                _ => None,
            })
            .collect()
    }

    fn canonical_name(n: &Atom) -> Atom {
        n.clone()
    }
}

impl<N: NameSort + 'static> Observable for YTerm<N>
where
    YTerm<N>: Process<Binder = N>,
{
    type Name = N;

    fn output_channels(&self) -> Vec<N> {
        let flat = self.flatten();
        flat.comps
            .iter()
            .filter_map(|c| match c {
                YTerm::M(a, _) if !flat.binders.contains(a) => Some(a.canonical()),
                _ => None,
            })
            .collect()
    }

    fn canonical_name(n: &N) -> N {
        n.canonical()
    }
}

impl Observable for RhoTerm {
    type Name = RName;

    fn output_channels(&self) -> Vec<RName> {
        self.components()
            .into_iter()
            .filter_map(|c| match c {
                RhoTerm::Lift { channel, .. } => Some(channel.canonical()),
                _ => None,
            })
            .collect()
    }

    fn canonical_name(n: &RName) -> RName {
        n.canonical()
    }
}

impl Observable for RcTerm {
    type Name = QName;

    fn output_channels(&self) -> Vec<QName> {
        self.components()
            .into_iter()
            .filter_map(|c| match c {
                RcTerm::M(a, _) => Some(a.canonical()),
                _ => None,
            })
            .collect()
    }

    fn canonical_name(n: &QName) -> QName {
        n.canonical()
    }
}

/// `{x | t ↓N x}`: top-level output channels name-equivalent to a member of `names`.
pub fn barbs<T: Observable>(t: &T, names: &BTreeSet<T::Name>) -> BTreeSet<T::Name> {
    let names: BTreeSet<T::Name> = names.iter().map(T::canonical_name).collect();
    barbs_canonical(&t.canonical_term(), &names)
}

pub(crate) fn barbs_canonical<T: Observable>(t: &T, names: &BTreeSet<T::Name>) -> BTreeSet<T::Name> {
    t.output_channels().into_iter().filter(|x| names.contains(x)).collect()
}

/// Barbs of every state reachable within `depth` steps.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeakBarbs<N> {
    pub names: BTreeSet<N>,
    /// Exploration was cut by a budget; more barbs may exist beyond it.
    pub truncated: bool,
}

pub fn weak_barbs<T: Observable>(t: &T, names: &BTreeSet<T::Name>, depth: usize) -> WeakBarbs<T::Name> {
    weak_barbs_with(t, names, Budgets::steps(depth))
}

pub fn weak_barbs_with<T: Observable>(t: &T, names: &BTreeSet<T::Name>, budgets: Budgets) -> WeakBarbs<T::Name> {
    let names: BTreeSet<T::Name> = names.iter().map(T::canonical_name).collect();
    let g = explore(t, budgets);
    let mut out = BTreeSet::new();
    for s in &g.states {
        out.extend(barbs_canonical(&s.form.term, &names));
    }
    WeakBarbs { names: out, truncated: g.truncated }
}
