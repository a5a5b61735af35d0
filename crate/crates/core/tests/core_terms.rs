mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use rhocomb::syntax::{parse_pi, parse_rho, parse_rho_name, parse_rhocomb, parse_rhocomb_name, parse_yoshida};
use rhocomb::{rho, rhocomb as rc, Atom, Name, PiTerm, QName};

fn atoms(xs: &[&str]) -> BTreeSet<Atom> {
    xs.iter().map(Atom::new).collect()
}

/// Free occurrences by brute force: scan every output and input channel and
/// drop the ones under a binder of the same name.
fn scan_free(t: &PiTerm, bound: &mut Vec<Atom>, out: &mut BTreeSet<Atom>) {
    let mut see = |a: &Atom, bound: &Vec<Atom>| {
        if !bound.contains(a) {
            out.insert(a.clone());
        }
    };
    match t {
        PiTerm::Zero => {}
        PiTerm::Output { channel: x, payload: y } => {
            see(x, bound);
            see(y, bound);
        }
        PiTerm::Input { binder: y, channel: x, body: p } => {
            see(x, bound);
            bound.push(y.clone());
            scan_free(p, bound, out);
            bound.pop();
        }
        PiTerm::New { binder: x, body: p } => {
            bound.push(x.clone());
            scan_free(p, bound, out);
            bound.pop();
        }
        PiTerm::Par(a, b) => {
            scan_free(a, bound, out);
            scan_free(b, bound, out);
        }
        PiTerm::Repl(p) => scan_free(p, bound, out),
    }
}

#[test]
fn free_names_examples() {
    assert_eq!(parse_yoshida("(new b) m(a,b)").unwrap().free_names(), atoms(&["a"]));
    assert!(parse_pi("0").unwrap().free_names().is_empty());
    assert!(parse_yoshida("0").unwrap().free_names().is_empty());
    assert!(parse_rho("0").unwrap().free_names().is_empty());
    assert!(parse_rhocomb("0").unwrap().free_names().is_empty());
    assert_eq!(parse_pi("for(x <- a) a!(x)").unwrap().free_names(), atoms(&["a"]));
}

proptest! {
    #[test]
    fn pi_free_names_match_scanner(t in common::pi(5)) {
        let mut want = BTreeSet::new();
        scan_free(&t, &mut Vec::new(), &mut want);
        prop_assert_eq!(t.free_names(), want);
    }

    #[test]
    fn canonicalization_is_idempotent(t in common::yoshida(5)) {
        let c = t.canonical();
        prop_assert_eq!(c.canonical(), c.clone());
        prop_assert_eq!(c.canonicalize().digest, t.canonicalize().digest);
    }

    #[test]
    fn rhocomb_canonicalization_is_idempotent(t in common::rhocomb(5)) {
        let c = t.canonical();
        prop_assert_eq!(c.canonical(), c);
    }

    #[test]
    fn congruence_is_symmetric_and_reflexive(p in common::pi(4), q in common::pi(4)) {
        prop_assert!(p.struct_congruent(&p));
        prop_assert_eq!(p.struct_congruent(&q), q.struct_congruent(&p));
    }
}

#[test]
fn yoshida_substitution() {
    let sub: BTreeMap<Atom, Atom> = [(Atom::new("x"), Atom::new("b"))].into();
    let t = parse_yoshida("m(a,x)").unwrap().substitute(&sub);
    assert_eq!(t, parse_yoshida("m(a,b)").unwrap());

    let input = parse_yoshida("(new b) m(x,b)").unwrap();
    let out = input.substitute(&sub);
    let mut want = input.free_names();
    want.remove(&Atom::new("x"));
    want.insert(Atom::new("b"));
    assert_eq!(out.free_names(), want);
    assert!(out.alpha_equiv(&parse_yoshida("(new c) m(b,c)").unwrap()), "{out}");
}

#[test]
fn rho_comm_instance_substitutes_a_quote() {
    let t = parse_rho("*y").unwrap();
    let out = t.substitute(&Name::atom("y"), &parse_rho_name("@0").unwrap());
    assert!(out.struct_congruent(&parse_rho("0").unwrap()), "{out}");
}

#[test]
fn alpha_equivalence_examples() {
    let y = |s: &str| parse_yoshida(s).unwrap();
    assert!(y("(new a) m(x,a)").alpha_equiv(&y("(new b) m(x,b)")));
    assert!(!y("(new a) m(a,a)").alpha_equiv(&y("(new b) m(b,x)")));
    let r = |s: &str| parse_rhocomb(s).unwrap();
    assert!(!r("bl(@0, @0)").alpha_equiv(&r("bl(@0, @(0|0))")));
    assert!(r("bl(@0, @0)").struct_congruent(&r("bl(@0, @(0|0))")));
}

#[test]
fn name_equivalence_examples() {
    assert!(rho::name_equiv(&parse_rho_name("@(*(@0))").unwrap(), &parse_rho_name("@0").unwrap()));
    let q = |s: &str| parse_rhocomb_name(s).unwrap();
    assert!(rc::name_equiv(&q("@(0|k(a))"), &q("@(k(a)|0)")));
    assert!(!rc::name_equiv(&q("a"), &q("b")));
    assert_ne!(Name::<rhocomb::RcTerm>::atom("a"), Name::quote(rhocomb::RcTerm::Zero));
}

#[test]
fn canonical_form_examples() {
    assert_eq!(parse_rhocomb("0 | (k(a) | 0)").unwrap().canonical(), parse_rhocomb("k(a)").unwrap());
    assert_eq!(parse_rhocomb("*(@(fw(a,b)))").unwrap().canonical(), parse_rhocomb("fw(a,b)").unwrap());
    let p = |s: &str| parse_pi(s).unwrap();
    assert_eq!(p("(new x)(new x) x!(a)").canonicalize().digest, p("(new x) x!(a)").canonicalize().digest);
    assert_eq!(parse_rhocomb("0|k(a)").unwrap().canonical().to_string(), "k(a)");
}

#[test]
fn congruence_examples() {
    let p = |s: &str| parse_pi(s).unwrap();
    assert!(p("a!(b) | c!(u)").struct_congruent(&p("c!(u) | a!(b)")));
    assert!(p("a!(b) | (new x) x!(c)").struct_congruent(&p("(new x)(a!(b) | x!(c))")));
    assert!(!p("*a!(b)").struct_congruent(&p("a!(b) | *a!(b)")));
}

#[test]
fn name_constructors_are_pairwise_distinct() {
    for x in ["a", "@0", "@(k(a) | m(b, 0))"] {
        let x: QName = parse_rhocomb_name(x).unwrap();
        let (l, r) = (rc::name_l(&x), rc::name_r(&x));
        assert!(!rc::name_equiv(&l, &r) && !rc::name_equiv(&l, &x) && !rc::name_equiv(&r, &x));
    }
    for x in ["a", "@0"] {
        let x = parse_rho_name(x).unwrap();
        let (l, r) = (rho::name_l(&x), rho::name_r(&x));
        assert!(!rho::name_equiv(&l, &r) && !rho::name_equiv(&l, &x) && !rho::name_equiv(&r, &x));
    }
}
