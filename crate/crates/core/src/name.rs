//! Names shared by all four calculi.
//!
//! An [`Atom`] is an opaque identifier. A [`Name`] is either an atom or a
//! quoted process of the owning calculus; the reflective calculi build all
//! of their "fresh" names out of quotes.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use crate::shared::{Fingerprint, Meta, MetaBuilder, Shared};

/// Opaque identifier name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(id: impl AsRef<str>) -> Self {
        Atom(Arc::from(id.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Atom {
    fn from(s: &str) -> Self {
        Atom::new(s)
    }
}

/// A name of a reflective calculus: an atom or a quoted process `@P`.
///
/// Derived equality is syntactic. Name equivalence is equality of the
/// canonical forms (see [`NameSort::canonical`]).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Name<P> {
    Atom(Atom),
    Quote(Shared<P>),
}

impl<P: Fingerprint> Name<P> {
    pub fn quote(p: P) -> Self {
        Name::Quote(Shared::new(p))
    }

    pub fn meta(&self) -> Meta {
        match self {
            Name::Atom(a) => MetaBuilder::new("atom").text(a.as_str()).finish(),
            Name::Quote(p) => MetaBuilder::new("quote").child(p.meta(), true).finish(),
        }
    }
}

impl<P> Name<P> {
    pub fn atom(id: impl AsRef<str>) -> Self {
        Name::Atom(Atom::new(id))
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Name::Atom(a) => Some(a),
            Name::Quote(_) => None,
        }
    }

    pub fn as_quote(&self) -> Option<&P> {
        match self {
            Name::Atom(_) => None,
            Name::Quote(p) => Some(p),
        }
    }
}

/// Operations every name type used as a parameter of a calculus supports.
pub trait NameSort: Clone + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync {
    fn from_atom(a: Atom) -> Self;
    fn as_atom_ref(&self) -> Option<&Atom>;
    /// Representative of the name's equivalence class.
    fn canonical(&self) -> Self;
    /// Every atom mentioned by the name, including inside quotes.
    fn collect_atoms(&self, out: &mut BTreeSet<Atom>);
}

impl NameSort for Atom {
    fn from_atom(a: Atom) -> Self {
        a
    }

    fn as_atom_ref(&self) -> Option<&Atom> {
        Some(self)
    }

    fn canonical(&self) -> Self {
        self.clone()
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        out.insert(self.clone());
    }
}

/// Returns `base`, or `base` primed until it avoids every atom in `avoid`.
pub fn fresh_atom(base: &str, avoid: &BTreeSet<Atom>) -> Atom {
    let mut id = if base.is_empty() || base.starts_with('%') {
        "b".to_string()
    } else {
        base.to_string()
    };
    while avoid.contains(&Atom::new(&id)) {
        id.push('\'');
    }
    Atom::new(id)
}

/// Prefix for position-indexed canonical binder names.
///
/// Canonical binders are spelled `<prefix><index>`; the prefix is a run of
/// underscores long enough that no free atom of the term has that shape.
pub(crate) fn binder_prefix<'a>(free_atoms: impl IntoIterator<Item = &'a Atom>) -> String {
    let atoms: Vec<&Atom> = free_atoms.into_iter().collect();
    let mut prefix = "_".to_string();
    loop {
        let clash = atoms.iter().any(|a| {
            a.as_str()
                .strip_prefix(prefix.as_str())
                .map(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
                .unwrap_or(false)
        });
        if !clash {
            return prefix;
        }
        prefix.push('_');
    }
}

/// Whether `s` is a valid identifier of the concrete syntax.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'') && s != "for" && s != "new"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_atom_primes_until_unused() {
        let avoid: BTreeSet<Atom> = ["b", "b'"].iter().map(|s| Atom::new(s)).collect();
        assert_eq!(fresh_atom("b", &avoid).as_str(), "b''");
        assert_eq!(fresh_atom("c", &avoid).as_str(), "c");
    }

    #[test]
    fn binder_prefix_avoids_free_atoms() {
        let a = [Atom::new("_0"), Atom::new("x")];
        assert_eq!(binder_prefix(a.iter()), "__");
        let b = [Atom::new("_x"), Atom::new("__1")];
        assert_eq!(binder_prefix(b.iter()), "_");
    }

    #[test]
    fn quote_never_equals_atom() {
        let a: Name<crate::rho::RhoTerm> = Name::atom("a");
        let q = Name::quote(crate::rho::RhoTerm::Zero);
        assert_ne!(a, q);
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("x'"));
        assert!(is_identifier("_0"));
        assert!(!is_identifier("for"));
        assert!(!is_identifier("0a"));
        assert!(!is_identifier("%c0"));
    }
}
