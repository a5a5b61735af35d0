//! Redex discovery, single steps and bounded multi-step reduction.
//!
//! Every calculus is reduced on the flat view of its canonical form: a list
//! of restricted names (π and Yoshida only) and a list of parallel
//! components. Redex indices point into that component list.

mod graph;
mod polarity;
mod rules;

use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::{Calculus, CanonicalForm, Digestible};

pub use graph::{explore, reduce_deterministic, Budgets, Edge, GraphJson, ReductionGraph, Trace, TraceJson, TraceStep};
pub use polarity::{check_polarities, polarity_preserved, Polarized, PolarityReport};
pub use rules::FlatView;

/// The named rewrite rules of the four calculi.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    /// `d(a,b,c) | m(a,x) → m(b,x) | m(c,x)`
    D,
    /// `k(a) | m(a,x) → 0`
    K,
    /// `fw(a,b) | m(a,x) → m(b,x)`
    Fw,
    /// `br(a,b) | m(a,x) → fw(b,x)`
    Br,
    /// `bl(a,b) | m(a,x) → fw(x,b)`
    Bl,
    /// `s(a,b,c) | m(a,x) → fw(b,c)`
    S,
    /// `*(a) | m(a,P) → P`
    Drop,
    /// `*P → P | *P`
    Unfold,
    /// `for(y <- x)P | x!(v) → P{v/y}`
    Comm,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::D => "d",
            Rule::K => "k",
            Rule::Fw => "fw",
            Rule::Br => "br",
            Rule::Bl => "bl",
            Rule::S => "s",
            Rule::Drop => "drop",
            Rule::Unfold => "unfold",
            Rule::Comm => "comm",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// One enabled rewrite: the rule, the component indices taking part
/// (receiver first, then the message) and the printed matched subject.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Redex {
    pub rule: Rule,
    pub indices: Vec<usize>,
    pub subject: String,
}

impl Redex {
    /// Scheduling key of the deterministic strategy.
    pub fn key(&self) -> (&[usize], Rule) {
        (&self.indices, self.rule)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum StepError {
    #[error("stale redex: {0}")]
    Stale(String),
}

/// A term calculus with a reduction relation.
pub trait Process: Clone + Ord + Hash + Digestible + fmt::Debug + Send + Sync + Sized {
    const CALCULUS: Calculus;
    /// Restricted-name type of the flat view (`()` for calculi without `new`).
    type Binder: Clone + fmt::Debug;

    fn canonical_term(&self) -> Self;

    /// `(new b_1)...(new b_k)(c_1 | ... | c_m)`
    fn rebuild(binders: &[Self::Binder], comps: Vec<Self>) -> Self;

    /// Flat view of a canonical term.
    fn flatten(&self) -> FlatView<Self>;

    /// Every enabled redex of the flat view.
    fn redexes(flat: &FlatView<Self>) -> Vec<Redex>;

    /// Products of firing `r`, after checking it still matches.
    fn fire(flat: &FlatView<Self>, r: &Redex) -> Result<Vec<Self>, StepError>;

    /// Canonical form of the flat view with `indices` replaced by `products`.
    fn splice(flat: &FlatView<Self>, indices: &[usize], products: Vec<Self>) -> Self {
        flat.replace(indices, products).canonical_term()
    }

    fn canonicalize_term(&self) -> CanonicalForm<Self> {
        CanonicalForm::from_canonical(Self::CALCULUS, self.canonical_term())
    }
}

/// Participants, products and result of one rule application.
#[derive(Clone, Debug)]
pub struct Contraction<T> {
    pub participants: Vec<T>,
    pub products: Vec<T>,
    pub result: T,
}

pub fn find_redexes<T: Process>(t: &T) -> Vec<Redex> {
    let flat = t.canonical_term().flatten();
    let mut rs = T::redexes(&flat);
    rs.sort_by(|a, b| a.key().cmp(&b.key()));
    rs
}

pub fn contract<T: Process>(t: &T, r: &Redex) -> Result<Contraction<T>, StepError> {
    let flat = t.canonical_term().flatten();
    contract_flat(&flat, r)
}

pub(crate) fn contract_flat<T: Process>(flat: &FlatView<T>, r: &Redex) -> Result<Contraction<T>, StepError> {
    let products = T::fire(flat, r)?;
    let participants: Vec<T> = r.indices.iter().map(|&i| flat.comps[i].clone()).collect();
    let result = T::splice(flat, &r.indices, products.clone());
    Ok(Contraction { participants, products, result })
}

/// One step: the canonical contractum in parallel with untouched components.
pub fn step<T: Process>(t: &T, r: &Redex) -> Result<T, StepError> {
    Ok(contract(t, r)?.result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_pi, parse_rho, parse_rhocomb, parse_yoshida};
    use crate::yoshida::YoshidaTerm;

    fn y(s: &str) -> YoshidaTerm {
        parse_yoshida(s).expect("parse")
    }

    fn rc(s: &str) -> crate::rhocomb::RcTerm {
        parse_rhocomb(s).expect("parse")
    }

    #[test]
    fn killer_consumes_message() {
        let t = y("k(a) | m(a,x)");
        let rs = find_redexes(&t);
        assert_eq!(rs.len(), 1);
        assert_eq!(step(&t, &rs[0]).unwrap(), YoshidaTerm::Zero);
    }

    #[test]
    fn channel_mismatch_has_no_redex() {
        assert!(find_redexes(&y("k(a) | m(b,x)")).is_empty());
    }

    #[test]
    fn stale_redex_is_rejected() {
        let t = y("k(a) | m(a,x)");
        let r = find_redexes(&t).remove(0);
        assert!(matches!(step(&y("k(a)"), &r), Err(StepError::Stale(_))));
    }

    #[test]
    fn forwarder_trace() {
        let tr = reduce_deterministic(&y("fw(a,b) | m(a,x)"), Budgets::default());
        assert_eq!(tr.len(), 1);
        assert_eq!(tr.final_state.term, y("m(b,x)"));
        assert!(!tr.truncated);
    }

    #[test]
    fn zero_has_empty_trace() {
        let tr = reduce_deterministic(&YoshidaTerm::Zero, Budgets::default());
        assert!(tr.is_empty());
        let g = explore(&YoshidaTerm::Zero, Budgets::default());
        assert_eq!(g.len(), 1);
        assert!(g.edges.is_empty());
    }

    #[test]
    fn rhocomb_drop_rule() {
        let t = rc("*(@0) | m(@0, k(a))");
        let rs = find_redexes(&t);
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].rule, Rule::Drop);
        assert_eq!(step(&t, &rs[0]).unwrap(), rc("k(a)"));
        let atom = rc("*(a) | m(a, k(b))");
        let r = find_redexes(&atom).remove(0);
        assert_eq!(step(&atom, &r).unwrap(), rc("k(b)"));
    }

    #[test]
    fn rhocomb_drop_fires_on_reflected_components() {
        // *(@(fw(u,v))) | m(@(fw(u,v)), P) ≡ fw(u,v) | m(@(fw(u,v)), P)
        let t = rc("*(@(fw(u,v))) | m(@(fw(u,v)), k(c))");
        let rs = find_redexes(&t);
        assert_eq!(rs.len(), 1);
        assert_eq!(step(&t, &rs[0]).unwrap(), rc("k(c)"));
        assert!(find_redexes(&rc("m(@(fw(u,v)), k(c))")).is_empty());
    }

    #[test]
    fn rhocomb_binder_quotes_payload() {
        let t = rc("bl(a,b) | m(a, k(c))");
        let r = find_redexes(&t).remove(0);
        assert_eq!(step(&t, &r).unwrap(), rc("fw(@(k(c)),b)"));
    }

    #[test]
    fn pi_comm_under_restriction() {
        let t = parse_pi("(new x)(for(y <- x)y!(y) | x!(x))").unwrap();
        let rs = find_redexes(&t);
        assert_eq!(rs.len(), 1);
        let out = step(&t, &rs[0]).unwrap();
        assert!(out.struct_congruent(&parse_pi("(new x)x!(x)").unwrap()));
    }

    #[test]
    fn rho_comm_then_quote_drop() {
        let t = parse_rho("for(y <- @0)*y | @0!(u!(0))").unwrap();
        let rs = find_redexes(&t);
        assert_eq!(rs.len(), 1);
        let out = step(&t, &rs[0]).unwrap();
        assert!(out.struct_congruent(&parse_rho("u!(0)").unwrap()));
    }

    #[test]
    fn replication_unfold_respects_budget() {
        let t = y("*m(a,b)");
        let g = explore(&t, Budgets { max_steps: 8, max_unfolds: 2, max_states: 100 });
        assert_eq!(g.len(), 3);
        assert!(g.truncated);
    }

    #[test]
    fn polarity_report_of_duplicator() {
        let rep = check_polarities(&y("d(a,b,c) | m(a,v)"));
        assert_eq!(rep.occurrences["a"], vec![Polarity::Plus, Polarity::Minus]);
        assert_eq!(rep.occurrences["b"], vec![Polarity::Plus]);
        assert_eq!(rep.occurrences["v"], vec![Polarity::Either]);
        assert!(rep.consistent);
        assert!(check_polarities(&YoshidaTerm::Zero).occurrences.is_empty());
    }

    use crate::comb::Polarity;
}
