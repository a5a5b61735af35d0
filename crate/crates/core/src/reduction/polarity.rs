//! Polarity annotations of combinator terms.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{contract_flat, Contraction, Process};
use crate::comb::{Polarity, MESSAGE_POLARITIES};
use crate::name::NameSort;
use crate::rhocomb::RcTerm;
use crate::yoshida::YTerm;

/// Terms whose atoms carry the fixed polarity signature.
pub trait Polarized: Process {
    /// `(printed name, polarity)` for each name position of the component.
    fn occurrences(&self, out: &mut Vec<(String, Polarity)>);
}

impl<N: NameSort + 'static> Polarized for YTerm<N> {
    fn occurrences(&self, out: &mut Vec<(String, Polarity)>) {
        match self {
            YTerm::Zero => {}
            YTerm::M(a, b) => {
                out.push((a.to_string(), MESSAGE_POLARITIES[0]));
                out.push((b.to_string(), MESSAGE_POLARITIES[1]));
            }
            YTerm::Agent(kind, args) => {
                out.extend(args.iter().zip(kind.polarities()).map(|(n, p)| (n.to_string(), *p)));
            }
            YTerm::New(_, p) | YTerm::Repl(p) => p.occurrences(out),
            YTerm::Par(a, b) => {
                a.occurrences(out);
                b.occurrences(out);
            }
        }
    }
}

/// Payload processes are opaque; `*(a)` consumes on `a` and counts as `a-`.
impl Polarized for RcTerm {
    fn occurrences(&self, out: &mut Vec<(String, Polarity)>) {
        match self {
            RcTerm::Zero => {}
            RcTerm::M(a, _) => out.push((a.to_string(), MESSAGE_POLARITIES[0])),
            RcTerm::Agent(kind, args) => {
                out.extend(args.iter().zip(kind.polarities()).map(|(n, p)| (n.to_string(), *p)));
            }
            RcTerm::Drop(a) => out.push((a.to_string(), Polarity::Minus)),
            RcTerm::Par(a, b) => {
                a.occurrences(out);
                b.occurrences(out);
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PolarityReport {
    /// Polarities at which each name occurs, sorted.
    pub occurrences: BTreeMap<String, Vec<Polarity>>,
    /// Every enabled redex preserves per-occurrence polarities.
    pub consistent: bool,
}

pub fn check_polarities<T: Polarized>(t: &T) -> PolarityReport {
    let flat = t.canonical_term().flatten();
    let mut occ = Vec::new();
    for c in &flat.comps {
        c.occurrences(&mut occ);
    }
    let mut occurrences: BTreeMap<String, Vec<Polarity>> = BTreeMap::new();
    for (n, p) in occ {
        occurrences.entry(n).or_default().push(p);
    }
    for v in occurrences.values_mut() {
        v.sort();
    }
    let consistent = T::redexes(&flat)
        .iter()
        .all(|r| contract_flat(&flat, r).map(|c| polarity_preserved(&c)).unwrap_or(false));
    PolarityReport { occurrences, consistent }
}

/// Every name of the products that already occurred among the participants
/// occurs at a polarity one of its earlier occurrences admits.
pub fn polarity_preserved<T: Polarized>(c: &Contraction<T>) -> bool {
    let mut before: BTreeMap<String, BTreeSet<Polarity>> = BTreeMap::new();
    let mut occ = Vec::new();
    for p in &c.participants {
        p.occurrences(&mut occ);
    }
    for (n, p) in occ {
        before.entry(n).or_default().insert(p);
    }
    let mut after = Vec::new();
    for p in &c.products {
        p.occurrences(&mut after);
    }
    after.iter().all(|(n, p)| before.get(n).map_or(true, |ps| ps.iter().any(|q| q.admits(*p))))
}
