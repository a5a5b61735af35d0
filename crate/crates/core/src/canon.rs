//! Calculus tags, digests and canonical forms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest as _, Sha256};

/// The four calculi handled by the workbench.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Calculus {
    Pi,
    Yoshida,
    Rho,
    RhoComb,
}

impl Calculus {
    pub const ALL: [Calculus; 4] = [Calculus::Pi, Calculus::Yoshida, Calculus::Rho, Calculus::RhoComb];

    pub fn tag(self) -> &'static str {
        match self {
            Calculus::Pi => "pi",
            Calculus::Yoshida => "yoshida",
            Calculus::Rho => "rho",
            Calculus::RhoComb => "rhocomb",
        }
    }
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Calculus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pi" => Ok(Calculus::Pi),
            "yoshida" => Ok(Calculus::Yoshida),
            "rho" => Ok(Calculus::Rho),
            "rhocomb" => Ok(Calculus::RhoComb),
            other => Err(format!("unknown calculus `{other}` (expected pi, yoshida, rho or rhocomb)")),
        }
    }
}

/// Stable hash of a canonical term: SHA-256 over the calculus tag and the
/// pretty-printed canonical term, truncated to 128 bits.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Digest(String);

impl Digest {
    pub fn of_text(calculus: Calculus, text: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(calculus.tag().as_bytes());
        hasher.update(b"\n");
        hasher.update(text.as_bytes());
        let bytes = hasher.finalize();
        let mut hex = String::with_capacity(32);
        for b in &bytes[..16] {
            hex.push_str(&format!("{b:02x}"));
        }
        Digest(hex)
    }

    /// Digest of a term known by its structural fingerprint.
    pub fn of_fingerprint(calculus: Calculus, fingerprint: u128) -> Self {
        Digest::of_text(calculus, &format!("#{fingerprint:032x}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A term in canonical form together with its digest.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CanonicalForm<T> {
    pub calculus: Calculus,
    pub term: T,
    pub digest: Digest,
}

/// How a canonical term is hashed and shown in reports.
pub trait Digestible: fmt::Display {
    fn digest(&self, calculus: Calculus) -> Digest {
        Digest::of_text(calculus, &self.to_string())
    }

    /// Text for reports; may abbreviate very large subterms.
    fn render(&self) -> String {
        self.to_string()
    }
}

impl<T: Digestible> CanonicalForm<T> {
    /// Wraps a term that is already canonical.
    pub(crate) fn from_canonical(calculus: Calculus, term: T) -> Self {
        let digest = term.digest(calculus);
        CanonicalForm { calculus, term, digest }
    }
}

/// Serializable view of a canonical state: pretty text plus digest.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StateJson {
    pub term: String,
    pub digest: Digest,
}

impl<T: Digestible> From<&CanonicalForm<T>> for StateJson {
    fn from(c: &CanonicalForm<T>) -> Self {
        StateJson { term: c.term.render(), digest: c.digest.clone() }
    }
}

impl Digestible for crate::pi::PiTerm {}

impl<N: crate::name::NameSort> Digestible for crate::yoshida::YTerm<N> where crate::yoshida::YTerm<N>: fmt::Display {}

impl Digestible for crate::rho::RhoTerm {}

/// RHO-combinator terms are hashed structurally; their printed text can be
/// exponentially longer than the shared term.
impl Digestible for crate::rhocomb::RcTerm {
    fn digest(&self, calculus: Calculus) -> Digest {
        Digest::of_fingerprint(calculus, crate::shared::Fingerprint::meta(self).fingerprint)
    }

    fn render(&self) -> String {
        crate::syntax::render_elided(self, RENDER_WEIGHT)
    }
}

/// Quotes heavier than this many nodes are abbreviated in reports.
pub const RENDER_WEIGHT: u64 = 400;
