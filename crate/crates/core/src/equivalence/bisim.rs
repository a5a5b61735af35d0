//! Bounded weak barbed bisimulation between two explored reduction graphs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{barbs_canonical, Observable};
use crate::reduction::{ReductionGraph, Rule};

#[derive(Clone, Copy, Default, Debug)]
pub struct BisimOptions {
    /// Exploration depth the graphs were built with; reported only.
    pub depth: usize,
    /// Match steps one-for-one and barbs without reduction.
    pub strict: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Related,
    Distinguished,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WitnessStep {
    pub side: Side,
    pub from: usize,
    pub to: usize,
    pub rule: Rule,
}

/// Barbs of the failing pair, as names of the right-hand calculus.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct BarbDiff {
    pub left_only: Vec<String>,
    pub right_only: Vec<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BisimVerdict {
    pub outcome: Outcome,
    pub depth: usize,
    /// Some state on either side was not fully explored, so a related
    /// verdict holds only up to the budget.
    pub bounded: bool,
    /// Steps from the roots to the failing pair.
    pub witness: Vec<WitnessStep>,
    /// Left and right state of the failing pair.
    pub failing_pair: Option<(usize, usize)>,
    pub barb_diff: Option<BarbDiff>,
    pub states: (usize, usize),
}

impl BisimVerdict {
    pub fn related(&self) -> bool {
        self.outcome == Outcome::Related
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut b = Bits::new(n);
        for i in 0..n {
            b.set(i);
        }
        b
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn or(&mut self, o: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a |= b;
        }
    }

    fn meets(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).any(|(a, b)| a & b != 0)
    }

    fn subset(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &x)| (0..64).filter(move |i| x >> i & 1 == 1).map(move |i| w * 64 + i))
    }
}

/// What one side can do, precomputed.
struct Side1 {
    succ: Vec<Vec<usize>>,
    barbs: Vec<Bits>,
    /// States a move or barb may be matched from: reach in weak mode,
    /// successors in strict mode.
    answers: Vec<Bits>,
    /// Barbs visible when answering.
    answer_barbs: Vec<Bits>,
    /// Every state an answer can come from was fully explored.
    definite: Vec<bool>,
}

fn prepare<T: Observable>(g: &ReductionGraph<T>, barbs: Vec<Bits>, strict: bool) -> Side1 {
    let n = g.len();
    let succ: Vec<Vec<usize>> = (0..n).map(|s| g.successors(s).to_vec()).collect();
    let mut answers = Vec::with_capacity(n);
    let mut answer_barbs = Vec::with_capacity(n);
    let mut definite = Vec::with_capacity(n);
    for s in 0..n {
        let mut a = Bits::new(n);
        if strict {
            for &t in &succ[s] {
                a.set(t);
            }
            answer_barbs.push(barbs[s].clone());
            definite.push(g.states[s].complete);
        } else {
            let reach = g.reachable(s);
            let mut wb = barbs[s].clone();
            for &t in &reach {
                a.set(t);
                wb.or(&barbs[t]);
            }
            answer_barbs.push(wb);
            definite.push(reach.iter().all(|&t| g.states[t].complete));
        }
        answers.push(a);
    }
    Side1 { succ, barbs, answers, answer_barbs, definite }
}

#[derive(Clone, Copy, Debug)]
enum Reason {
    Barb,
    Step(Side, usize),
}

/// Greatest relation between the states of `g1` and `g2` closed under
/// matching of moves and barbs on `names`; left names are carried to the
/// right through `rename`. A pair is dropped only when the answering side
/// was explored completely, so `Distinguished` is never caused by a budget.
pub fn bounded_bisim<A: Observable, B: Observable>(
    g1: &ReductionGraph<A>,
    g2: &ReductionGraph<B>,
    names: &BTreeSet<A::Name>,
    rename: impl Fn(&A::Name) -> B::Name,
    opts: BisimOptions,
) -> BisimVerdict {
    let left_names: BTreeSet<A::Name> = names.iter().map(A::canonical_name).collect();
    let mut carried: BTreeMap<A::Name, B::Name> = BTreeMap::new();
    for a in &left_names {
        carried.insert(a.clone(), B::canonical_name(&rename(a)));
    }
    let observed: Vec<B::Name> = carried.values().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let slot = |b: &B::Name| observed.binary_search(b).ok();
    let k = observed.len();

    let barbs1: Vec<Bits> = (0..g1.len())
        .map(|s| {
            let mut b = Bits::new(k);
            for x in barbs_canonical(g1.term(s), &left_names) {
                if let Some(i) = slot(&carried[&x]) {
                    b.set(i);
                }
            }
            b
        })
        .collect();
    let barbs2: Vec<Bits> = (0..g2.len())
        .map(|t| {
            let mut b = Bits::new(k);
            for x in g2.term(t).output_channels() {
                if let Some(i) = slot(&x) {
                    b.set(i);
                }
            }
            b
        })
        .collect();
    let l = prepare(g1, barbs1, opts.strict);
    let r = prepare(g2, barbs2, opts.strict);
    let (n1, n2) = (g1.len(), g2.len());

    let mut rows: Vec<Bits> = (0..n1).map(|_| Bits::full(n2)).collect();
    let mut cols: Vec<Bits> = (0..n2).map(|_| Bits::full(n1)).collect();
    let mut reasons: BTreeMap<(usize, usize), Reason> = BTreeMap::new();
    loop {
        let mut changed = false;
        for s in 0..n1 {
            for t in 0..n2 {
                if !rows[s].get(t) {
                    continue;
                }
                let reason = refute(&l, &r, &rows, &cols, s, t);
                if let Some(reason) = reason {
                    rows[s].clear(t);
                    cols[t].clear(s);
                    reasons.insert((s, t), reason);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let bounded = g1.truncated || g2.truncated;
    let mut verdict = BisimVerdict {
        outcome: Outcome::Related,
        depth: opts.depth,
        bounded,
        witness: Vec::new(),
        failing_pair: None,
        barb_diff: None,
        states: (n1, n2),
    };
    if rows[0].get(0) {
        return verdict;
    }
    verdict.outcome = Outcome::Distinguished;
    let (mut s, mut t) = (0, 0);
    loop {
        match reasons[&(s, t)] {
            Reason::Barb => {
                let show = |bits: &Bits| -> Vec<String> { bits.ones().map(|i| observed[i].to_string()).collect() };
                let mut left_only = Bits::new(k);
                let mut right_only = Bits::new(k);
                for i in l.barbs[s].ones() {
                    if !r.answer_barbs[t].get(i) {
                        left_only.set(i);
                    }
                }
                for i in r.barbs[t].ones() {
                    if !l.answer_barbs[s].get(i) {
                        right_only.set(i);
                    }
                }
                verdict.barb_diff = Some(BarbDiff { left_only: show(&left_only), right_only: show(&right_only) });
                break;
            }
            Reason::Step(side, to) => {
                let (mover, answerer, edge_g1) = match side {
                    Side::Left => (s, t, true),
                    Side::Right => (t, s, false),
                };
                let rule1 = if edge_g1 { rule_of(g1, mover, to) } else { rule_of(g2, mover, to) };
                verdict.witness.push(WitnessStep { side, from: mover, to, rule: rule1 });
                let answers = if edge_g1 { &r.answers[answerer] } else { &l.answers[answerer] };
                let pick = if !opts.strict { Some(answerer) } else { answers.ones().next() };
                let Some(a2) = pick else { break };
                if opts.strict {
                    let other = match side {
                        Side::Left => Side::Right,
                        Side::Right => Side::Left,
                    };
                    let rule2 = if edge_g1 { rule_of(g2, answerer, a2) } else { rule_of(g1, answerer, a2) };
                    verdict.witness.push(WitnessStep { side: other, from: answerer, to: a2, rule: rule2 });
                }
                (s, t) = if edge_g1 { (to, a2) } else { (a2, to) };
            }
        }
    }
    verdict.failing_pair = Some((s, t));
    verdict
}

fn refute(l: &Side1, r: &Side1, rows: &[Bits], cols: &[Bits], s: usize, t: usize) -> Option<Reason> {
    if r.definite[t] && !l.barbs[s].subset(&r.answer_barbs[t]) {
        return Some(Reason::Barb);
    }
    if l.definite[s] && !r.barbs[t].subset(&l.answer_barbs[s]) {
        return Some(Reason::Barb);
    }
    if r.definite[t] {
        for &s2 in &l.succ[s] {
            if !rows[s2].meets(&r.answers[t]) {
                return Some(Reason::Step(Side::Left, s2));
            }
        }
    }
    if l.definite[s] {
        for &t2 in &r.succ[t] {
            if !cols[t2].meets(&l.answers[s]) {
                return Some(Reason::Step(Side::Right, t2));
            }
        }
    }
    None
}

fn rule_of<T: Observable>(g: &ReductionGraph<T>, from: usize, to: usize) -> Rule {
    g.edges.iter().find(|e| e.from == from && e.to == to).map(|e| e.rule).expect("edge of the graph")
}
