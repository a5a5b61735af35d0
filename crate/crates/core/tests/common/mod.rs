//! Generators and fixtures shared by the integration tests.
#![allow(dead_code)]

pub mod oracle;

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use rhocomb::{Agent, Atom, Name, PiTerm, QName, RName, RcTerm, RhoTerm, YTerm, YoshidaTerm};

pub const FREE: [&str; 4] = ["a", "b", "c", "u"];
pub const BOUND: [&str; 3] = ["x", "y", "z"];

pub fn free_atom() -> impl Strategy<Value = Atom> {
    prop::sample::select(FREE.to_vec()).prop_map(Atom::new)
}

pub fn any_atom() -> impl Strategy<Value = Atom> {
    prop::sample::select([FREE.as_slice(), BOUND.as_slice()].concat()).prop_map(Atom::new)
}

fn agent_kind() -> impl Strategy<Value = Agent> {
    prop::sample::select(vec![Agent::D, Agent::K, Agent::Fw, Agent::Br, Agent::Bl, Agent::S])
}

fn yoshida_atom() -> BoxedStrategy<YoshidaTerm> {
    prop_oneof![
        1 => Just(YTerm::Zero),
        3 => (any_atom(), any_atom()).prop_map(|(a, b)| YTerm::m(a, b)),
        4 => (agent_kind(), prop::collection::vec(any_atom(), 3))
            .prop_map(|(k, mut args)| { args.truncate(k.arity()); YTerm::Agent(k, args) }),
    ]
    .boxed()
}

/// Yoshida terms of depth at most `depth`.
pub fn yoshida(depth: u32) -> BoxedStrategy<YoshidaTerm> {
    yoshida_atom()
        .prop_recursive(depth, 24, 2, |inner| {
            prop_oneof![
                3 => (inner.clone(), inner.clone()).prop_map(|(a, b)| YTerm::par(a, b)),
                2 => (prop::sample::select(BOUND.to_vec()), inner.clone())
                    .prop_map(|(x, p)| YTerm::new_name(Atom::new(x), p)),
                1 => inner.prop_map(YTerm::repl),
            ]
        })
        .boxed()
}

/// Yoshida terms without replication, for exhaustive reduction.
pub fn yoshida_finite(depth: u32) -> BoxedStrategy<YoshidaTerm> {
    yoshida_atom()
        .prop_recursive(depth, 24, 2, |inner| {
            prop_oneof![
                3 => (inner.clone(), inner.clone()).prop_map(|(a, b)| YTerm::par(a, b)),
                1 => (prop::sample::select(BOUND.to_vec()), inner)
                    .prop_map(|(x, p)| YTerm::new_name(Atom::new(x), p)),
            ]
        })
        .boxed()
}

/// RHO-combinator names: free atoms or quotes of smaller terms.
pub fn rc_name(depth: u32) -> BoxedStrategy<QName> {
    if depth == 0 {
        prop_oneof![free_atom().prop_map(Name::Atom), Just(Name::quote(RcTerm::Zero))].boxed()
    } else {
        prop_oneof![
            2 => free_atom().prop_map(Name::Atom),
            1 => rhocomb(depth - 1).prop_map(Name::quote),
        ]
        .boxed()
    }
}

/// RHO-combinator terms of depth at most `depth`, quotes included.
pub fn rhocomb(depth: u32) -> BoxedStrategy<RcTerm> {
    let name = rc_name(depth.saturating_sub(2).min(1));
    let leaf = prop_oneof![
        1 => Just(RcTerm::Zero),
        3 => (agent_kind(), prop::collection::vec(name.clone(), 3))
            .prop_map(|(k, mut args)| { args.truncate(k.arity()); RcTerm::Agent(k, args) }),
        2 => name.clone().prop_map(RcTerm::Drop),
        2 => name.clone().prop_map(|a| RcTerm::m(a, RcTerm::Zero)),
    ];
    leaf.prop_recursive(depth, 24, 2, move |inner| {
        prop_oneof![
            3 => (inner.clone(), inner.clone()).prop_map(|(a, b)| RcTerm::par(a, b)),
            2 => (name.clone(), inner.clone()).prop_map(|(a, p)| RcTerm::m(a, p)),
            1 => inner.prop_map(|p| RcTerm::Drop(Name::quote(p))),
        ]
    })
    .boxed()
}

pub fn rho_name(depth: u32) -> BoxedStrategy<RName> {
    if depth == 0 {
        any_atom().prop_map(Name::Atom).boxed()
    } else {
        prop_oneof![3 => any_atom().prop_map(Name::Atom), 1 => rho(depth - 1).prop_map(Name::quote)].boxed()
    }
}

/// ρ terms of depth at most `depth`.
pub fn rho(depth: u32) -> BoxedStrategy<RhoTerm> {
    let name = rho_name(depth.saturating_sub(2).min(1));
    let leaf = prop_oneof![
        1 => Just(RhoTerm::Zero),
        2 => name.clone().prop_map(RhoTerm::Drop),
        2 => (name.clone(), name.clone()).prop_map(|(a, b)| RhoTerm::send_name(a, b)),
    ];
    leaf.prop_recursive(depth, 24, 2, move |inner| {
        prop_oneof![
            3 => (inner.clone(), inner.clone()).prop_map(|(a, b)| RhoTerm::par(a, b)),
            2 => (prop::sample::select(BOUND.to_vec()), name.clone(), inner.clone())
                .prop_map(|(y, x, p)| RhoTerm::input(Name::atom(y), x, p)),
            1 => (name.clone(), inner).prop_map(|(x, p)| RhoTerm::lift(x, p)),
        ]
    })
    .boxed()
}

/// π terms of depth at most `depth`.
pub fn pi(depth: u32) -> BoxedStrategy<PiTerm> {
    let leaf = prop_oneof![
        1 => Just(PiTerm::Zero),
        3 => (any_atom(), any_atom()).prop_map(|(a, b)| PiTerm::output(a, b)),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            3 => (inner.clone(), inner.clone()).prop_map(|(a, b)| PiTerm::par(a, b)),
            2 => (prop::sample::select(BOUND.to_vec()), any_atom(), inner.clone())
                .prop_map(|(y, x, p)| PiTerm::input(y, x, p)),
            2 => (prop::sample::select(BOUND.to_vec()), inner.clone()).prop_map(|(x, p)| PiTerm::new_name(x, p)),
            1 => inner.prop_map(PiTerm::repl),
        ]
    })
    .boxed()
}

/// `n` values of `s` from a fixed seed.
pub fn sample<T: std::fmt::Debug>(s: impl Strategy<Value = T>, n: usize, seed: u8) -> Vec<T> {
    let rng = TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]);
    let mut runner = TestRunner::new_with_rng(Config::default(), rng);
    (0..n).map(|_| s.new_tree(&mut runner).expect("value").current()).collect()
}

/// π programs for faithfulness checks: depth at most 3, at most one
/// replication, free names allowed, no replication under a binder its body uses.
pub const FAITHFUL: &[&str] = &[
    "0",
    "a!(b)",
    "a!(b) | a!(c)",
    "for(x <- a) 0",
    "for(x <- a) 0 | a!(b)",
    "for(x <- a) x!(c)",
    "for(x <- a) x!(c) | a!(b)",
    "for(x <- a) b!(x) | a!(c)",
    "for(x <- a)(b!(x) | c!(x)) | a!(u)",
    "(new x) x!(a)",
    "(new x)(x!(a) | for(y <- x) b!(y))",
    "(new x) a!(x)",
    "(new x)(a!(x) | for(y <- x) b!(y))",
    "for(x <- a) for(y <- x) b!(y) | a!(c) | c!(u)",
    "for(x <- a) for(y <- b) x!(y) | a!(c) | b!(u)",
    "*a!(b)",
    "*for(x <- a) b!(x) | a!(c)",
    "*for(x <- a) x!(b)",
    "*a!(b) | for(x <- a) c!(x)",
    "(new x)(for(y <- x) a!(y) | x!(b))",
    "for(x <- a) 0 | for(y <- a) b!(y) | a!(c)",
    "a!(b) | for(x <- b) c!(x)",
    "(new v)(new v) u!(v)",
    "(new v) u!(v)",
    "for(x <- a) b!(a) | a!(c)",
    "for(x <- a)(new y)(y!(x) | for(z <- y) b!(z)) | a!(c)",
    "*(new x) a!(x)",
    "for(x <- a) c!(b) | a!(u) | a!(b)",
    "(new x)(x!(a) | for(y <- x) for(z <- y) b!(z)) | a!(c)",
    "for(x <- a) b!(x) | for(y <- b) c!(y) | a!(u)",
];

/// Pairs told apart by barbs on their free names.
pub const INEQUIVALENT: &[(&str, &str)] = &[
    ("a!(b)", "0"),
    ("a!(b)", "b!(a)"),
    ("for(x <- a) b!(x) | a!(c)", "for(x <- a) 0 | a!(c)"),
    ("(new x) a!(x)", "0"),
    ("for(x <- a) x!(b) | a!(c)", "for(x <- a) x!(b) | a!(u)"),
];
