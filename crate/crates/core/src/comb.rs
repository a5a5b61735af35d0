//! Combinator atom kinds shared by Yoshida's calculus and RHO combinators.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Role of a name position in an atom: output (`+`), input (`-`) or
/// the message payload, which may be used either way (`±`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "±")]
    Either,
}

impl Polarity {
    /// Whether an occurrence annotated `self` may later be used at `other`.
    pub fn admits(self, other: Polarity) -> bool {
        self == Polarity::Either || self == other
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Plus => "+",
            Polarity::Minus => "-",
            Polarity::Either => "±",
        })
    }
}

/// Name-only agents; the message atom `m` is handled separately because its
/// payload differs between the calculi.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Agent {
    D,
    K,
    Fw,
    Br,
    Bl,
    S,
}

impl Agent {
    pub const ALL: [Agent; 6] = [Agent::D, Agent::K, Agent::Fw, Agent::Br, Agent::Bl, Agent::S];

    pub fn arity(self) -> usize {
        self.polarities().len()
    }

    /// `d(a-,b+,c+); k(a-); fw(a-,b+); bl(a-,b+); br(a-,b-); s(a-,b-,c+)`
    pub fn polarities(self) -> &'static [Polarity] {
        use Polarity::*;
        match self {
            Agent::D => &[Minus, Plus, Plus],
            Agent::K => &[Minus],
            Agent::Fw => &[Minus, Plus],
            Agent::Bl => &[Minus, Plus],
            Agent::Br => &[Minus, Minus],
            Agent::S => &[Minus, Minus, Plus],
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Agent::D => "d",
            Agent::K => "k",
            Agent::Fw => "fw",
            Agent::Br => "br",
            Agent::Bl => "bl",
            Agent::S => "s",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Agent> {
        Agent::ALL.into_iter().find(|a| a.keyword() == s)
    }
}

/// Polarities of the message atom `m(a+, v±)`.
pub const MESSAGE_POLARITIES: [Polarity; 2] = [Polarity::Plus, Polarity::Either];

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}
