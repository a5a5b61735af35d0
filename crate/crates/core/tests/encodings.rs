mod common;

use proptest::prelude::*;

use rhocomb::encodings::{
    duplicator, iota, make_repl_package, pi_to_rho, pi_to_rhocomb, pi_to_yoshida, prefix_eliminate,
    rho_duplicator, yoshida_to_rhocomb, Allocator, EncodeError,
};
use rhocomb::reduction::{find_redexes, reduce_deterministic, step, Budgets};
use rhocomb::rhocomb::{name_equiv, name_l, name_path, name_r};
use rhocomb::syntax::{parse_pi, parse_rho, parse_rhocomb, parse_rhocomb_name, parse_yoshida};
use rhocomb::{Atom, Name, QName, RcTerm, RhoTerm, YTerm};

fn qn(s: &str) -> QName {
    parse_rhocomb_name(s).unwrap()
}

fn alloc() -> Allocator {
    Allocator { n: qn("@(m(@0, 0))"), p: qn("@(k(@0))") }
}

#[test]
fn pi_to_yoshida_examples() {
    let t = |s: &str| pi_to_yoshida(&parse_pi(s).unwrap()).unwrap().term;
    assert_eq!(t("for(x <- a) 0"), parse_yoshida("k(a)").unwrap());
    assert_eq!(t("for(x <- a) v!(x)"), parse_yoshida("fw(a,v)").unwrap());
    assert_eq!(t("a!(b)"), parse_yoshida("m(a,b)").unwrap());
    let par = t("for(x <- a)(b!(x) | c!(x))");
    assert!(par.struct_congruent(&parse_yoshida("(new y)(new z)(d(a,y,z) | fw(y,b) | fw(z,c))").unwrap()), "{par}");
}

#[test]
fn yoshida_fresh_names_avoid_the_source() {
    for s in common::FAITHFUL {
        let src = parse_pi(s).unwrap();
        let out = pi_to_yoshida(&src).unwrap();
        let atoms = src.atoms();
        for e in &out.fresh {
            assert!(!atoms.contains(&Atom::new(&e.name)), "{s}: {} reused", e.name);
        }
    }
}

#[test]
fn pass_through_cases() {
    let a = alloc();
    let out = yoshida_to_rhocomb(&YTerm::k(Name::atom("a")), &a).unwrap().term;
    assert_eq!(out, parse_rhocomb("k(a)").unwrap());
    let out = yoshida_to_rhocomb(&YTerm::m(Name::atom("a"), Name::atom("b")), &a).unwrap().term;
    assert_eq!(out, parse_rhocomb("m(a, *(b))").unwrap());
}

#[test]
fn restriction_beside_agent_is_eliminated() {
    let t = YTerm::par(
        YTerm::new_name(Name::atom("x"), YTerm::m(Name::atom("x"), Name::quote(RcTerm::Zero))),
        YTerm::k(Name::atom("b")),
    );
    let out = yoshida_to_rhocomb(&t, &alloc()).unwrap();
    assert!(common::oracle::rc_node_count(&out.term) > 0);
    // The left part waits on p^l for its fresh name; the allocator message is there.
    let pl = name_l(&alloc().p);
    assert!(out.term.components().iter().any(|c| matches!(c, RcTerm::M(ch, _) if name_equiv(ch, &pl))));
    assert!(!find_redexes(&out.term).is_empty());
    assert!(out.term.components().contains(&RcTerm::k(Name::atom("b"))));
}

#[test]
fn allocator_collision_is_rejected() {
    let a = Allocator { n: Name::atom("a"), p: qn("@0") };
    let err = yoshida_to_rhocomb(&YTerm::k(Name::atom("a")), &a).unwrap_err();
    assert!(matches!(err, EncodeError::Allocator(_)));
    let same = Allocator { n: qn("@0"), p: qn("@(0|0)") };
    assert!(yoshida_to_rhocomb(&YTerm::Zero, &same).is_err());
}

#[test]
fn prefix_elimination_base_cases() {
    let (p, x, n, q) = (qn("p"), qn("x"), qn("n"), qn("q"));
    let el = |body: &str| prefix_eliminate(&p, &x, &parse_rhocomb(body).unwrap(), &n, &q).unwrap().term;
    assert_eq!(el("m(v, *(x))"), parse_rhocomb("fw(p, v)").unwrap());
    assert_eq!(el("fw(v, x)"), parse_rhocomb("br(p, v)").unwrap());
    assert_eq!(el("fw(x, v)"), parse_rhocomb("bl(p, v)").unwrap());
    let kill = el("0");
    assert_eq!(kill, parse_rhocomb("k(p)").unwrap());
    let gone = reduce_deterministic(&RcTerm::par(kill, parse_rhocomb("m(p, k(u) | m(c, 0))").unwrap()), Budgets::default());
    assert_eq!(gone.final_state.term, RcTerm::Zero);
}

#[test]
fn package_names_are_distinct() {
    for body in ["0", "m(u, 0)", "k(a) | fw(a, b)"] {
        let q = Name::quote(parse_rhocomb(body).unwrap());
        let (x, v, w) = (name_path(&q, "ll"), name_path(&q, "lr"), name_path(&q, "rr"));
        assert!(!name_equiv(&x, &v) && !name_equiv(&v, &w) && !name_equiv(&x, &w));
    }
}

#[test]
fn package_unfolds_twice() {
    let body = parse_rhocomb("m(u, 0)").unwrap();
    let pkg = make_repl_package(&body, None);
    let trace = reduce_deterministic(&pkg, Budgets::steps(6));
    assert_eq!(trace.len(), 6);
    let copies = trace.final_state.term.components().iter().filter(|c| **c == body).count();
    assert_eq!(copies, 2);
}

#[test]
fn replicas_get_distinct_allocators() {
    // Each replica needs a few dozen deterministic steps to reach its output.
    let image = pi_to_rhocomb(&parse_pi("*(new x) a!(x)").unwrap()).unwrap().term;
    let trace = reduce_deterministic(&image, Budgets { max_steps: 200, max_unfolds: 2, max_states: 20000 });
    let a = iota(&Atom::new("a"));
    let sent: Vec<RcTerm> = trace
        .final_state
        .term
        .components()
        .into_iter()
        .filter_map(|c| match c {
            RcTerm::M(ch, payload) if name_equiv(&ch, &a) => Some((*payload).clone()),
            _ => None,
        })
        .collect();
    assert_eq!(sent.len(), 2);
    assert!(!sent[0].struct_congruent(&sent[1]), "both replicas sent {}", sent[0]);
}

#[test]
fn where_clause_names_are_fresh() {
    let mut checked = 0;
    for s in common::FAITHFUL {
        let out = pi_to_rhocomb(&parse_pi(s).unwrap()).unwrap();
        for f in &out.fresh {
            let free = f.subterm.free_names();
            assert!(free.iter().all(|m| !name_equiv(m, &f.name)), "{s}: {} not fresh", f.rule);
            checked += 1;
        }
    }
    assert!(checked > 50, "{checked}");
}

#[test]
fn allocator_split_sides_are_disjoint() {
    let t = parse_pi("(new x) a!(x) | (new y) b!(y)").unwrap();
    let out = pi_to_rhocomb(&t).unwrap();
    let names: Vec<&QName> = out.fresh.iter().map(|f| &f.name).collect();
    for (i, a) in names.iter().enumerate() {
        for b in &names[i + 1..] {
            assert!(!name_equiv(a, b));
        }
    }
    let n = Allocator::default_for(&t.free_names()).n;
    assert!(!name_equiv(&name_l(&n), &name_r(&n)));
}

#[test]
fn pi_to_rho_examples() {
    let alloc = rhocomb::encodings::RhoAllocator { n: Name::atom("n"), p: Name::atom("p") };
    let t = rhocomb::encodings::pi_to_rho_with(&parse_pi("(new v) u!(v)").unwrap(), &alloc);
    assert!(t.struct_congruent(&parse_rho("for(v <- p)(u!(v)) | p!(n)").unwrap()), "{t}");
    assert_eq!(pi_to_rho(&parse_pi("0").unwrap()), RhoTerm::Zero);
}

#[test]
fn rho_duplicator_releases_one_copy() {
    let x: rhocomb::RName = Name::atom("x");
    let d = rho_duplicator(&x, Atom::new("y"));
    let p = parse_rho("u!(0)").unwrap();
    let t = RhoTerm::par(RhoTerm::lift(x.clone(), RhoTerm::par(d.clone(), p.clone())), d.clone());
    let trace = reduce_deterministic(&t, Budgets::steps(1));
    assert_eq!(trace.len(), 1);
    let want = RhoTerm::par_all([RhoTerm::lift(x, RhoTerm::par(d.clone(), p.clone())), d, p]);
    assert!(trace.final_state.term.struct_congruent(&want), "{}", trace.final_state.term);
}

#[test]
fn pi_to_rhocomb_examples() {
    let (a, b) = (iota(&Atom::new("a")), iota(&Atom::new("b")));
    let t = pi_to_rhocomb(&parse_pi("a!(b)").unwrap()).unwrap().term;
    assert_eq!(t, RcTerm::m(a.clone(), RcTerm::Drop(b)));
    let t = pi_to_rhocomb(&parse_pi("for(x <- a) 0").unwrap()).unwrap().term;
    assert_eq!(t, RcTerm::k(a.clone()));
    let t = RcTerm::par(t, RcTerm::m(a, RcTerm::k(Name::atom("u"))));
    assert_eq!(step(&t, &find_redexes(&t)[0]).unwrap(), RcTerm::Zero);
    assert_eq!(pi_to_rhocomb(&parse_pi("0").unwrap()).unwrap().term, RcTerm::Zero);
}

#[test]
fn duplicator_shape() {
    let (x, v, w) = (qn("x"), qn("v"), qn("w"));
    assert_eq!(duplicator(&x, &v, &w), parse_rhocomb("d(x,v,w) | fw(v,x) | *(w)").unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn yoshida_stage_is_total_on_small_terms(t in common::pi(3)) {
        prop_assume!(t.replication_count() == 0);
        prop_assert!(pi_to_yoshida(&t).is_ok());
    }
}
