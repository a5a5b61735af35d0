//! Translations between the calculi: π into Yoshida's combinators, those
//! into RHO combinators, and π directly into the ρ-calculus.

mod pi_rho;
mod pi_yoshida;
mod yoshida_rhocomb;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::name::{Atom, Name, NameSort};
use crate::pi::PiTerm;
use crate::rhocomb::{QName, RcTerm};
use crate::yoshida::{YTerm, YoshidaTerm};

pub use pi_rho::{pi_to_rho, pi_to_rho_with, rho_duplicator, RhoAllocator};
pub use pi_yoshida::{pi_to_yoshida, PiToYoshida};
pub use yoshida_rhocomb::{duplicator, make_repl_package, prefix_eliminate, unfold_package, yoshida_to_rhocomb, Unfolding, YoshidaToRhoComb};

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum EncodeError {
    #[error("no elimination rule covers binder {binder} in {subterm}")]
    Uncovered { binder: String, subterm: String },
    #[error("bad allocator: {0}")]
    Allocator(String),
}

/// A generated name and the free names of the subterm it must avoid.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FreshEntry {
    pub rule: String,
    pub name: String,
    pub fresh_for: Vec<String>,
}

/// A where-clause name of the RHO-combinator prefix eliminator.
#[derive(Clone, Debug)]
pub struct RcFresh {
    pub rule: &'static str,
    pub name: QName,
    pub subterm: RcTerm,
}

impl RcFresh {
    pub fn is_fresh(&self) -> bool {
        !self.subterm.free_names().contains(&self.name.canonical())
    }

    pub fn to_json(&self) -> FreshJson {
        FreshJson {
            rule: self.rule.to_string(),
            name: crate::canon::Digest::of_fingerprint(crate::canon::Calculus::RhoComb, self.name.canonical().meta().fingerprint)
                .to_string(),
            fresh: self.is_fresh(),
        }
    }
}

/// Ledger line with the name abbreviated to a digest.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FreshJson {
    pub rule: String,
    pub name: String,
    pub fresh: bool,
}

/// Allocator pair `(n, p)` of the RHO-combinator translation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Allocator {
    pub n: QName,
    pub p: QName,
}

impl Allocator {
    /// `n = @(m(@0,0) | m(ι a,0) | ...)`, `p = @(k(@0) | k(ι a) | ...)` over
    /// the given free atoms.
    pub fn default_for<'a>(free: impl IntoIterator<Item = &'a Atom>) -> Self {
        let zero: QName = Name::quote(RcTerm::Zero);
        let free: Vec<QName> = free.into_iter().map(iota).collect();
        let n = RcTerm::par_all(
            std::iter::once(RcTerm::m(zero.clone(), RcTerm::Zero))
                .chain(free.iter().map(|a| RcTerm::m(a.clone(), RcTerm::Zero))),
        );
        let p = RcTerm::par_all(std::iter::once(RcTerm::k(zero)).chain(free.iter().map(|a| RcTerm::k(a.clone()))));
        Allocator { n: Name::quote(n), p: Name::quote(p) }
    }
}

/// Injection of a π/Yoshida atom into RHO-combinator names: `a ↦ @(k(a))`.
pub fn iota(a: &Atom) -> QName {
    Name::quote(RcTerm::k(Name::Atom(a.clone())))
}

/// Yoshida term over atoms to one over RHO-combinator names: free atoms
/// are injected, restricted ones stay atoms.
pub fn instantiate(t: &YoshidaTerm) -> YTerm<QName> {
    inst(t, &mut Vec::new())
}

fn inst(t: &YoshidaTerm, bound: &mut Vec<Atom>) -> YTerm<QName> {
    let name = |a: &Atom, bound: &Vec<Atom>| if bound.contains(a) { Name::Atom(a.clone()) } else { iota(a) };
    match t {
        YTerm::Zero => YTerm::Zero,
        YTerm::M(a, b) => YTerm::M(name(a, bound), name(b, bound)),
        YTerm::Agent(k, args) => YTerm::Agent(*k, args.iter().map(|a| name(a, bound)).collect()),
        YTerm::New(x, body) => {
            bound.push(x.clone());
            let b = inst(body, bound);
            bound.pop();
            YTerm::new_name(Name::Atom(x.clone()), b)
        }
        YTerm::Par(a, b) => YTerm::par(inst(a, bound), inst(b, bound)),
        YTerm::Repl(p) => YTerm::repl(inst(p, bound)),
    }
}

/// Both stages of the π to RHO-combinator translation.
#[derive(Clone, Debug)]
pub struct PiToRhoComb {
    pub yoshida: YoshidaTerm,
    pub term: RcTerm,
    pub fresh_yoshida: Vec<FreshEntry>,
    pub fresh: Vec<RcFresh>,
}

pub fn pi_to_rhocomb(t: &PiTerm) -> Result<PiToRhoComb, EncodeError> {
    pi_to_rhocomb_with(t, &Allocator::default_for(&t.free_names()))
}

pub fn pi_to_rhocomb_with(t: &PiTerm, alloc: &Allocator) -> Result<PiToRhoComb, EncodeError> {
    let y = pi_to_yoshida(t)?;
    let out = yoshida_to_rhocomb(&instantiate(&y.term.narrow_scopes()), alloc)?;
    Ok(PiToRhoComb { yoshida: y.term, term: out.term, fresh_yoshida: y.fresh, fresh: out.fresh })
}

/// Free atoms a π term is translated against.
pub(crate) fn pi_avoid(t: &PiTerm) -> BTreeSet<Atom> {
    t.atoms()
}
