//! Deterministic traces and breadth-first reduction graphs.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{contract_flat, Process, Redex, Rule};
use crate::canon::{Calculus, CanonicalForm, StateJson};

/// Exploration limits. `max_unfolds` caps replication unfoldings along a
/// path; `max_states` guards against blow-up of the reachable set.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Budgets {
    pub max_steps: usize,
    pub max_unfolds: usize,
    pub max_states: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { max_steps: 8, max_unfolds: 2, max_states: 20_000 }
    }
}

impl Budgets {
    pub fn steps(max_steps: usize) -> Self {
        Budgets { max_steps, ..Budgets::default() }
    }
}

#[derive(Clone, Debug)]
pub struct TraceStep<T> {
    pub from: CanonicalForm<T>,
    pub redex: Redex,
}

#[derive(Clone, Debug)]
pub struct Trace<T> {
    pub steps: Vec<TraceStep<T>>,
    pub final_state: CanonicalForm<T>,
    /// Stopped by a budget while redexes remained.
    pub truncated: bool,
}

impl<T> Trace<T> {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Every state of the trace, initial to final.
    pub fn states(&self) -> Vec<&CanonicalForm<T>> {
        self.steps.iter().map(|s| &s.from).chain(std::iter::once(&self.final_state)).collect()
    }
}

/// Repeatedly fires the least enabled redex.
pub fn reduce_deterministic<T: Process>(t: &T, budgets: Budgets) -> Trace<T> {
    let mut current = t.canonicalize_term();
    let mut steps = Vec::new();
    let mut unfolds = 0usize;
    let mut truncated = false;
    loop {
        let flat = current.term.flatten();
        let mut rs = T::redexes(&flat);
        rs.sort_by(|a, b| a.key().cmp(&b.key()));
        let total = rs.len();
        rs.retain(|r| r.rule != Rule::Unfold || unfolds < budgets.max_unfolds);
        if rs.len() < total && rs.is_empty() {
            truncated = true;
        }
        let Some(r) = rs.into_iter().next() else { break };
        if steps.len() >= budgets.max_steps {
            truncated = true;
            break;
        }
        let c = contract_flat(&flat, &r).expect("redex found on this view");
        if r.rule == Rule::Unfold {
            unfolds += 1;
        }
        let next = CanonicalForm::from_canonical(T::CALCULUS, c.result);
        steps.push(TraceStep { from: std::mem::replace(&mut current, next), redex: r });
    }
    Trace { steps, final_state: current, truncated }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub rule: Rule,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct GraphState<T> {
    pub form: CanonicalForm<T>,
    /// Breadth-first level.
    pub depth: usize,
    /// Least number of unfoldings on a discovery path.
    pub unfolds: usize,
    /// All successors were explored.
    pub complete: bool,
}

#[derive(Clone, Debug)]
pub struct ReductionGraph<T> {
    pub states: Vec<GraphState<T>>,
    pub edges: Vec<Edge>,
    pub truncated: bool,
    succ: Vec<Vec<usize>>,
}

impl<T: Process> ReductionGraph<T> {
    pub fn root(&self) -> usize {
        0
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn successors(&self, s: usize) -> &[usize] {
        &self.succ[s]
    }

    pub fn term(&self, s: usize) -> &T {
        &self.states[s].form.term
    }

    /// States reachable from `s` in zero or more steps.
    pub fn reachable(&self, s: usize) -> Vec<usize> {
        let mut seen = vec![false; self.states.len()];
        let mut stack = vec![s];
        let mut out = Vec::new();
        seen[s] = true;
        while let Some(u) = stack.pop() {
            out.push(u);
            for &v in &self.succ[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Shortest edge path from the root to `target`.
    pub fn path_to(&self, target: usize) -> Vec<Edge> {
        let mut prev: Vec<Option<usize>> = vec![None; self.states.len()];
        let mut seen = vec![false; self.states.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            if u == target {
                break;
            }
            for (k, e) in self.edges.iter().enumerate() {
                if e.from == u && !seen[e.to] {
                    seen[e.to] = true;
                    prev[e.to] = Some(k);
                    queue.push_back(e.to);
                }
            }
        }
        let mut path = Vec::new();
        let mut cur = target;
        while let Some(k) = prev[cur] {
            path.push(self.edges[k].clone());
            cur = self.edges[k].from;
        }
        path.reverse();
        path
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            calculus: T::CALCULUS,
            states: self
                .states
                .iter()
                .enumerate()
                .map(|(id, s)| GraphStateJson {
                    id,
                    term: s.form.term.render(),
                    digest: s.form.digest.to_string(),
                    depth: s.depth,
                    complete: s.complete,
                })
                .collect(),
            edges: self.edges.clone(),
            truncated: self.truncated,
        }
    }
}

/// Breadth-first exploration of every redex up to `max_steps` levels.
pub fn explore<T: Process>(t: &T, budgets: Budgets) -> ReductionGraph<T> {
    let root = t.canonicalize_term();
    let mut index: HashMap<T, usize> = HashMap::new();
    index.insert(root.term.clone(), 0);
    let mut states = vec![GraphState { form: root, depth: 0, unfolds: 0, complete: true }];
    let mut edges = Vec::new();
    let mut truncated = false;
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let flat = states[s].form.term.flatten();
        let mut rs = T::redexes(&flat);
        rs.sort_by(|a, b| a.key().cmp(&b.key()));
        if rs.is_empty() {
            continue;
        }
        if states[s].depth >= budgets.max_steps {
            states[s].complete = false;
            truncated = true;
            continue;
        }
        for r in rs {
            let unfolds = states[s].unfolds + usize::from(r.rule == Rule::Unfold);
            if unfolds > budgets.max_unfolds {
                states[s].complete = false;
                truncated = true;
                continue;
            }
            let c = contract_flat(&flat, &r).expect("redex found on this view");
            let to = match index.get(&c.result) {
                Some(&to) => {
                    states[to].unfolds = states[to].unfolds.min(unfolds);
                    to
                }
                None => {
                    if states.len() >= budgets.max_states {
                        states[s].complete = false;
                        truncated = true;
                        continue;
                    }
                    let id = states.len();
                    index.insert(c.result.clone(), id);
                    let depth = states[s].depth + 1;
                    states.push(GraphState {
                        form: CanonicalForm::from_canonical(T::CALCULUS, c.result),
                        depth,
                        unfolds,
                        complete: true,
                    });
                    queue.push_back(id);
                    id
                }
            };
            edges.push(Edge { from: s, to, rule: r.rule, indices: r.indices });
        }
    }
    let mut succ = vec![Vec::new(); states.len()];
    for e in &edges {
        if !succ[e.from].contains(&e.to) {
            succ[e.from].push(e.to);
        }
    }
    ReductionGraph { states, edges, truncated, succ }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GraphStateJson {
    pub id: usize,
    pub term: String,
    pub digest: String,
    pub depth: usize,
    pub complete: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub calculus: Calculus,
    pub states: Vec<GraphStateJson>,
    pub edges: Vec<Edge>,
    pub truncated: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StepJson {
    pub from: StateJson,
    pub rule: Rule,
    pub indices: Vec<usize>,
    pub subject: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TraceJson {
    pub calculus: Calculus,
    pub steps: Vec<StepJson>,
    #[serde(rename = "final")]
    pub final_state: StateJson,
    pub step_count: usize,
    pub truncated: bool,
}

impl<T: Process> Trace<T> {
    pub fn to_json(&self) -> TraceJson {
        TraceJson {
            calculus: T::CALCULUS,
            steps: self
                .steps
                .iter()
                .map(|s| StepJson {
                    from: StateJson::from(&s.from),
                    rule: s.redex.rule,
                    indices: s.redex.indices.clone(),
                    subject: s.redex.subject.clone(),
                })
                .collect(),
            final_state: StateJson::from(&self.final_state),
            step_count: self.steps.len(),
            truncated: self.truncated,
        }
    }
}
