mod common;

use proptest::prelude::*;

use rhocomb::syntax::{parse_pi, parse_rho, parse_rhocomb, parse_yoshida};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pi_round_trips(t in common::pi(6)) {
        let back = parse_pi(&t.to_string()).unwrap();
        prop_assert!(back.struct_congruent(&t), "{} reparsed as {}", t, back);
    }

    #[test]
    fn yoshida_round_trips(t in common::yoshida(6)) {
        let back = parse_yoshida(&t.to_string()).unwrap();
        prop_assert!(back.struct_congruent(&t), "{} reparsed as {}", t, back);
    }

    #[test]
    fn rho_round_trips(t in common::rho(6)) {
        let back = parse_rho(&t.to_string()).unwrap();
        prop_assert!(back.struct_congruent(&t), "{} reparsed as {}", t, back);
    }

    #[test]
    fn rhocomb_round_trips(t in common::rhocomb(6)) {
        let back = parse_rhocomb(&t.to_string()).unwrap();
        prop_assert!(back.struct_congruent(&t), "{} reparsed as {}", t, back);
    }

    #[test]
    fn canonical_text_is_a_fixpoint(t in common::pi(5)) {
        let once = t.canonical().to_string();
        prop_assert_eq!(parse_pi(&once).unwrap().canonical().to_string(), once);
    }
}

#[test]
fn surface_forms_parse() {
    for s in ["0", "a!(b)", "for(x <- a) x!(b)", "(new x)(x!(a) | for(y <- x) 0)", "*a!(b)"] {
        parse_pi(s).unwrap();
    }
    for s in ["d(a,b,c) | m(a,x)", "(new c)(fw(a,c) | *k(c))", "bl(a, b) | br(a, b) | s(a, b, c)"] {
        parse_yoshida(s).unwrap();
    }
    for s in ["for(y <- x) *y", "@0!(u!(0))", "for(v <- @(p!(p)))(u!(v))"] {
        parse_rho(s).unwrap();
    }
    for s in ["k(a) | m(a, k(b))", "*(@0) | m(@0, 0)", "fw(@(m(a, 0)), b)"] {
        parse_rhocomb(s).unwrap();
    }
}

#[test]
fn errors_carry_positions() {
    let e = parse_yoshida("fw(a)").unwrap_err();
    assert!(e.to_string().contains("fw"), "{e}");
    assert!(parse_pi("for(x <- ) 0").is_err());
    assert!(parse_rhocomb("m(a, ").is_err());
    assert!(parse_rho("x!(").is_err());
}

#[test]
fn whitespace_is_ignored() {
    let a = parse_pi("a!(b)   |\n  c!(d)").unwrap();
    let b = parse_pi("a!(b)|c!(d)").unwrap();
    assert_eq!(a, b);
}

#[test]
fn parse_shapes() {
    use rhocomb::{Name, RcTerm, RhoTerm, YTerm};
    let t = parse_yoshida("k(a) | m(a,b)").unwrap();
    assert_eq!(t, YTerm::par(YTerm::k(rhocomb::Atom::new("a")), YTerm::m("a".into(), "b".into())));
    let t = parse_rho("for(y <- x) *y | x!(0)").unwrap();
    let want = RhoTerm::par(
        RhoTerm::input(Name::atom("y"), Name::atom("x"), RhoTerm::Drop(Name::atom("y"))),
        RhoTerm::lift(Name::atom("x"), RhoTerm::Zero),
    );
    assert_eq!(t, want);
    let t = parse_rhocomb("*(@(k(a)))").unwrap();
    assert_eq!(t, RcTerm::Drop(Name::quote(RcTerm::k(Name::atom("a")))));
}

#[test]
fn syntax_errors_report_line_and_column() {
    let e = parse_pi("a!(b) |\n  for(x <- ) 0").unwrap_err();
    assert_eq!((e.line, e.col), (2, 12), "{e}");
    assert!(parse_yoshida("d(a,b)").is_err());
    assert!(parse_rhocomb("k(a, b)").is_err());
}

#[test]
fn printing_examples() {
    assert_eq!(parse_pi("0").unwrap().to_string(), "0");
    assert_eq!(parse_rhocomb("0 | k(a)").unwrap().canonical().to_string(), "k(a)");
    assert_eq!(parse_rhocomb("fw(@(0|k(a)), b)").unwrap().canonical().to_string(), "fw(@(k(a)),b)");
}
