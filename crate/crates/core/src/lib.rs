//! Workbench for the asynchronous π-calculus, Yoshida's concurrent
//! combinators, the ρ-calculus and reflective higher-order (RHO)
//! combinators: terms, reduction, translations and bounded barbed
//! bisimulation.

pub mod canon;
pub mod cli;
pub mod comb;
pub mod encodings;
pub mod equivalence;
pub mod name;
pub mod pi;
pub mod reduction;
pub mod rho;
pub mod rhocomb;
mod scope;
pub mod shared;
pub mod syntax;
pub mod yoshida;

pub use canon::{Calculus, CanonicalForm, Digest};
pub use comb::{Agent, Polarity};
pub use name::{Atom, Name};
pub use pi::PiTerm;
pub use rho::{RName, RhoTerm};
pub use rhocomb::{QName, RcTerm};
pub use yoshida::{YTerm, YoshidaTerm};
