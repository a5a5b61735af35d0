//! Shared subterms with a cached structural fingerprint.
//!
//! Quoted names nest the processes they quote, so translated terms are
//! DAGs whose tree unfolding is exponential. Equality, hashing and digests
//! go through the fingerprint and never walk a shared subterm twice.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Deref;
use std::sync::Arc;

/// Cached facts about a subterm.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Meta {
    pub fingerprint: u128,
    /// Tree size of the unfolding, saturating.
    pub weight: u64,
    /// Quote nesting depth.
    pub depth: u32,
}

/// Terms that summarise themselves from their immediate children.
pub trait Fingerprint {
    fn meta(&self) -> Meta;
}

pub struct Shared<T>(Arc<(T, Meta)>);

impl<T: Fingerprint> Shared<T> {
    pub fn new(value: T) -> Self {
        let meta = value.meta();
        Shared(Arc::new((value, meta)))
    }
}

impl<T> Shared<T> {
    pub fn meta(&self) -> Meta {
        self.0 .1
    }

    pub fn fingerprint(&self) -> u128 {
        self.0 .1.fingerprint
    }
}

impl<T> Clone for Shared<T> {
    fn clone(&self) -> Self {
        Shared(Arc::clone(&self.0))
    }
}

impl<T> Deref for Shared<T> {
    type Target = T;
    fn deref(&self) -> &T {
        &self.0 .0
    }
}

impl<T> AsRef<T> for Shared<T> {
    fn as_ref(&self) -> &T {
        &self.0 .0
    }
}

/// Equal 128-bit fingerprints are taken as equal terms.
impl<T> PartialEq for Shared<T> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.fingerprint() == other.fingerprint()
    }
}

impl<T> Eq for Shared<T> {}

impl<T> Hash for Shared<T> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u128(self.fingerprint());
    }
}

/// Subterms up to this weight are ordered structurally.
const STRUCTURAL_ORDER_WEIGHT: u64 = 64;

impl<T: PartialOrd> PartialOrd for Shared<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.by_meta(other) {
            Some(o) => Some(o),
            None => (**self).partial_cmp(&**other),
        }
    }
}

/// Light subterms compare structurally and precede heavy ones; heavy
/// subterms compare by weight, then fingerprint.
impl<T: Ord> Ord for Shared<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.by_meta(other).unwrap_or_else(|| (**self).cmp(&**other))
    }
}

impl<T> Shared<T> {
    /// The order when it does not need the structure.
    fn by_meta(&self, other: &Self) -> Option<Ordering> {
        if self == other {
            return Some(Ordering::Equal);
        }
        let (a, b) = (self.meta(), other.meta());
        match (a.weight <= STRUCTURAL_ORDER_WEIGHT, b.weight <= STRUCTURAL_ORDER_WEIGHT) {
            (true, true) => None,
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => Some((a.weight, a.fingerprint).cmp(&(b.weight, b.fingerprint))),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Shared<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        (**self).fmt(f)
    }
}

/// Incremental builder for [`Meta`]: a two-lane multiply-xorshift mix,
/// fixed so fingerprints are stable across builds and platforms.
pub struct MetaBuilder {
    h1: u64,
    h2: u64,
    weight: u64,
    depth: u32,
}

const K1: u64 = 0x9e37_79b9_7f4a_7c15;
const K2: u64 = 0xc2b2_ae3d_27d4_eb4f;

fn fmix(mut h: u64) -> u64 {
    h ^= h >> 33;
    h = h.wrapping_mul(0xff51_afd7_ed55_8ccd);
    h ^= h >> 33;
    h = h.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
    h ^ (h >> 33)
}

impl MetaBuilder {
    pub fn new(tag: &str) -> Self {
        let mut b = MetaBuilder { h1: 0x243f_6a88_85a3_08d3, h2: 0x1319_8a2e_0370_7344, weight: 1, depth: 0 };
        b.text(tag);
        b
    }

    fn word(&mut self, w: u64) {
        self.h1 = (self.h1 ^ w).wrapping_mul(K1).rotate_left(31).wrapping_add(self.h2);
        self.h2 = (self.h2 ^ w.rotate_left(17)).wrapping_mul(K2).rotate_left(29).wrapping_add(self.h1);
    }

    pub fn text(&mut self, s: &str) -> &mut Self {
        self.word(s.len() as u64 | 1 << 63);
        for chunk in s.as_bytes().chunks(8) {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            self.word(u64::from_le_bytes(buf));
        }
        self
    }

    /// Folds in a child; `quoted` children add a level of quote depth.
    pub fn child(&mut self, m: Meta, quoted: bool) -> &mut Self {
        self.word(m.fingerprint as u64);
        self.word((m.fingerprint >> 64) as u64);
        self.weight = self.weight.saturating_add(m.weight);
        self.depth = self.depth.max(m.depth + u32::from(quoted));
        self
    }

    pub fn finish(&mut self) -> Meta {
        let a = fmix(self.h1 ^ fmix(self.h2));
        let b = fmix(self.h2.wrapping_add(K1) ^ a);
        Meta { fingerprint: (u128::from(a) << 64) | u128::from(b), weight: self.weight, depth: self.depth }
    }
}

impl<T: fmt::Display> fmt::Display for Shared<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        (**self).fmt(f)
    }
}
