//! Ground-truth outcomes of heterogeneous sums by retrograde analysis of the
//! full product state space.
//!
//! States are stored relative to the player about to move, who always plays
//! the Left role. After every move all tree components are conjugated so the
//! next mover again sees itself as Left. Graph components are impartial and
//! need no flipping. A move of a tree to `inf` wins on the spot; a move to
//! `~inf` hands the opponent the win and is never generated.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::entailing::{Forest, TreeId};
use crate::error::SolveError;
use crate::loopy::{smith_values, LoopyGraph, LoopyValue};
use crate::notation::print_tree;
use crate::value::{GameValue, Outcome};

pub const DEFAULT_STATE_LIMIT: usize = 1_000_000;

/// Product spaces up to this size are indexed densely.
const DENSE_LIMIT: u128 = 1 << 22;

/// One summand of an oracle query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Component {
    Loopy { graph: Arc<LoopyGraph>, node: usize },
    Tree(TreeId),
}

impl Component {
    pub fn graph(graph: LoopyGraph) -> Component {
        let node = graph.start();
        Component::Loopy {
            graph: Arc::new(graph),
            node,
        }
    }
}

/// Graph realizing `∞(A)`: a hub `u` moving to a nim heap of each size in
/// `A` and to a drawn node `w` that can only move back to `u` or stay put.
pub fn inf_gadget(set: &std::collections::BTreeSet<u32>) -> LoopyGraph {
    let top = set.iter().max().map_or(0, |&m| m as usize + 1);
    // Nodes: heaps h0..h{top-1}, then u, then w.
    let u = top;
    let w = top + 1;
    let mut options: Vec<Vec<usize>> = (0..top).map(|i| (0..i).collect()).collect();
    let mut hub: Vec<usize> = set.iter().map(|&a| a as usize).collect();
    hub.push(w);
    options.push(hub);
    options.push(vec![u, w]);
    let mut names: Vec<String> = (0..top).map(|i| format!("h{i}")).collect();
    names.push("u".into());
    names.push("w".into());
    LoopyGraph::new(names, options, u)
}

/// Turns a canonical value into a concrete component: nim heaps for
/// nimbers, literal trees for the moon and special moons (witness set
/// `{*n}`), and a checked loopy gadget for `∞(A)`.
pub fn realize(value: &GameValue, forest: &mut Forest) -> Result<Component, SolveError> {
    Ok(match value {
        GameValue::Nimber(k) => Component::graph(LoopyGraph::nim_heap(*k)),
        GameValue::Moon => Component::Tree(forest.moon()),
        GameValue::SpecialMoon(n) => Component::Tree(forest.special_moon(*n)),
        GameValue::Inf(set) => {
            let g = inf_gadget(set);
            let got = &smith_values(&g)?[g.start()];
            if *got != LoopyValue::Inf(set.clone()) {
                return Err(SolveError::GadgetMismatch {
                    value: value.to_string(),
                    got: got.to_string(),
                });
            }
            Component::graph(g)
        }
    })
}

pub fn realize_all(values: &[GameValue], forest: &mut Forest) -> Result<Vec<Component>, SolveError> {
    values.iter().map(|v| realize(v, forest)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleReport {
    pub outcome: Outcome,
    /// Reachable product states explored.
    pub states: usize,
}

/// Per-component move table over local state indices.
struct Local {
    moves: Vec<Vec<u32>>,
    wins: Vec<bool>,
    /// Conjugate of each local state; `None` for impartial graphs.
    flip: Option<Vec<u32>>,
    start: u32,
}

impl Local {
    fn size(&self) -> usize {
        self.moves.len()
    }

    fn flip(&self, s: u32) -> u32 {
        self.flip.as_ref().map_or(s, |f| f[s as usize])
    }

    fn from_graph(graph: &LoopyGraph, node: usize) -> Local {
        Local {
            moves: (0..graph.len())
                .map(|v| graph.options(v).iter().map(|&o| o as u32).collect())
                .collect(),
            wins: vec![false; graph.len()],
            flip: None,
            start: node as u32,
        }
    }

    fn from_tree(forest: &mut Forest, root: TreeId) -> Local {
        let (inf, coinf) = (forest.inf(), forest.coinf());
        let mut ids = vec![root];
        let mut local: HashMap<TreeId, u32> = HashMap::from([(root, 0)]);
        let mut moves = Vec::new();
        let mut wins = Vec::new();
        let mut flip = Vec::new();
        let mut intern = |t: TreeId, ids: &mut Vec<TreeId>| -> u32 {
            *local.entry(t).or_insert_with(|| {
                ids.push(t);
                ids.len() as u32 - 1
            })
        };
        let mut i = 0;
        while i < ids.len() {
            let t = ids[i];
            let c = forest.conjugate(t);
            flip.push(intern(c, &mut ids));
            let mut win = false;
            let mut targets = Vec::new();
            for o in forest.left(t).to_vec() {
                if o == inf {
                    win = true;
                } else if o != coinf {
                    let co = forest.conjugate(o);
                    targets.push(intern(co, &mut ids));
                }
            }
            moves.push(targets);
            wins.push(win);
            i += 1;
        }
        Local {
            moves,
            wins,
            flip: Some(flip),
            start: 0,
        }
    }
}

enum Index {
    Dense(Vec<u32>),
    Sparse(HashMap<u128, u32>),
}

impl Index {
    fn get_or_insert(&mut self, code: u128, next: u32) -> (u32, bool) {
        match self {
            Index::Dense(v) => {
                let slot = &mut v[code as usize];
                if *slot == u32::MAX {
                    *slot = next;
                    (next, true)
                } else {
                    (*slot, false)
                }
            }
            Index::Sparse(m) => match m.entry(code) {
                std::collections::hash_map::Entry::Occupied(e) => (*e.get(), false),
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(next);
                    (next, true)
                }
            },
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Label {
    Unknown,
    Win,
    Loss,
}

/// Brute-force outcome computation with a cap on explored states.
#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    pub state_limit: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            state_limit: DEFAULT_STATE_LIMIT,
        }
    }
}

impl Oracle {
    pub fn new(state_limit: usize) -> Self {
        Oracle { state_limit }
    }

    /// Outcome (N, P or D) of the sum of `components`.
    pub fn solve(&self, forest: &mut Forest, components: &[Component]) -> Result<OracleReport, SolveError> {
        let mut locals = Vec::with_capacity(components.len());
        for c in components {
            locals.push(match c {
                Component::Loopy { graph, node } => Local::from_graph(graph, *node),
                Component::Tree(t) => {
                    if !forest.is_impartial_entailing(*t) {
                        return Err(SolveError::AsymmetricTree(print_tree(forest, *t)));
                    }
                    Local::from_tree(forest, *t)
                }
            });
        }
        self.solve_locals(&locals)
    }

    fn solve_locals(&self, locals: &[Local]) -> Result<OracleReport, SolveError> {
        let mut radix = Vec::with_capacity(locals.len());
        let mut product: Option<u128> = Some(1);
        for l in locals {
            radix.push(product.unwrap_or(0));
            product = product.and_then(|p| p.checked_mul(l.size() as u128));
        }
        let product = product.ok_or(SolveError::StateLimitExceeded {
            limit: self.state_limit,
        })?;
        let mut index = if product <= DENSE_LIMIT {
            Index::Dense(vec![u32::MAX; product as usize])
        } else {
            Index::Sparse(HashMap::new())
        };

        let encode = |s: &[u32]| -> u128 {
            s.iter()
                .zip(&radix)
                .map(|(&x, &r)| x as u128 * r)
                .sum()
        };
        let start: Vec<u32> = locals.iter().map(|l| l.start).collect();
        let mut states: Vec<Vec<u32>> = vec![start.clone()];
        index.get_or_insert(encode(&start), 0);

        let mut labels: Vec<Label> = Vec::new();
        let mut succ_start: Vec<u32> = Vec::new();
        let mut succ: Vec<u32> = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let s = states[i].clone();
            succ_start.push(succ.len() as u32);
            if s.iter().zip(locals).any(|(&x, l)| l.wins[x as usize]) {
                labels.push(Label::Win);
                i += 1;
                continue;
            }
            labels.push(Label::Unknown);
            let flipped: Vec<u32> = s.iter().zip(locals).map(|(&x, l)| l.flip(x)).collect();
            let base = encode(&flipped);
            for (c, l) in locals.iter().enumerate() {
                let without = base - flipped[c] as u128 * radix[c];
                for &t in &l.moves[s[c] as usize] {
                    let code = without + t as u128 * radix[c];
                    let (id, fresh) = index.get_or_insert(code, states.len() as u32);
                    if fresh {
                        if states.len() >= self.state_limit {
                            return Err(SolveError::StateLimitExceeded {
                                limit: self.state_limit,
                            });
                        }
                        let mut next = flipped.clone();
                        next[c] = t;
                        states.push(next);
                    }
                    succ.push(id);
                }
            }
            i += 1;
        }
        succ_start.push(succ.len() as u32);
        let n = states.len();
        drop(states);

        // Reverse edges.
        let mut pred_start = vec![0u32; n + 1];
        for &t in &succ {
            pred_start[t as usize + 1] += 1;
        }
        for v in 0..n {
            pred_start[v + 1] += pred_start[v];
        }
        let mut fill = pred_start.clone();
        let mut pred = vec![0u32; succ.len()];
        for v in 0..n {
            for &t in &succ[succ_start[v] as usize..succ_start[v + 1] as usize] {
                pred[fill[t as usize] as usize] = v as u32;
                fill[t as usize] += 1;
            }
        }

        let mut remaining: Vec<u32> = (0..n).map(|v| succ_start[v + 1] - succ_start[v]).collect();
        let mut queue: VecDeque<u32> = VecDeque::new();
        for v in 0..n {
            if labels[v] == Label::Win {
                queue.push_back(v as u32);
            } else if remaining[v] == 0 {
                labels[v] = Label::Loss;
                queue.push_back(v as u32);
            }
        }
        while let Some(v) = queue.pop_front() {
            let lost = labels[v as usize] == Label::Loss;
            for &p in &pred[pred_start[v as usize] as usize..pred_start[v as usize + 1] as usize] {
                let p = p as usize;
                if labels[p] != Label::Unknown {
                    continue;
                }
                if lost {
                    labels[p] = Label::Win;
                    queue.push_back(p as u32);
                } else {
                    remaining[p] -= 1;
                    if remaining[p] == 0 {
                        labels[p] = Label::Loss;
                        queue.push_back(p as u32);
                    }
                }
            }
        }
        let outcome = match labels[0] {
            Label::Win => Outcome::N,
            Label::Loss => Outcome::P,
            Label::Unknown => Outcome::D,
        };
        Ok(OracleReport { outcome, states: n })
    }
}

/// Oracle outcome with the default state limit.
pub fn oracle_outcome(forest: &mut Forest, components: &[Component]) -> Result<Outcome, SolveError> {
    Ok(Oracle::default().solve(forest, components)?.outcome)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    /// Outcomes agree on every context.
    pub equivalent: bool,
    /// First context (by index) on which the outcomes differ.
    pub witness: Option<usize>,
    /// `(a + X, b + X)` outcomes per context.
    pub outcomes: Vec<(Outcome, Outcome)>,
    /// `a + b` and `b + b` are both P, which alone implies equivalence.
    pub sufficient: bool,
}

/// Compares `a + X` with `b + X` for every context `X`.
pub fn check_equivalence(
    oracle: &Oracle,
    forest: &mut Forest,
    a: &[Component],
    b: &[Component],
    contexts: &[Vec<Component>],
) -> Result<EquivalenceReport, SolveError> {
    let join = |x: &[Component], y: &[Component]| -> Vec<Component> {
        x.iter().chain(y).cloned().collect()
    };
    let mut outcomes = Vec::with_capacity(contexts.len());
    let mut witness = None;
    for (i, ctx) in contexts.iter().enumerate() {
        let oa = oracle.solve(forest, &join(a, ctx))?.outcome;
        let ob = oracle.solve(forest, &join(b, ctx))?.outcome;
        if oa != ob && witness.is_none() {
            witness = Some(i);
        }
        outcomes.push((oa, ob));
    }
    let sufficient = oracle.solve(forest, &join(a, b))?.outcome == Outcome::P
        && oracle.solve(forest, &join(b, b))?.outcome == Outcome::P;
    Ok(EquivalenceReport {
        equivalent: witness.is_none(),
        witness,
        outcomes,
        sufficient,
    })
}

/// Twelve small contexts mixing nimbers, infinities, special moons and the
/// moon.
pub fn standard_contexts() -> Vec<Vec<GameValue>> {
    use GameValue::*;
    vec![
        vec![],
        vec![Nimber(1)],
        vec![Nimber(2)],
        vec![Nimber(3)],
        vec![GameValue::inf([])],
        vec![GameValue::inf([0])],
        vec![GameValue::inf([1, 2])],
        vec![SpecialMoon(0)],
        vec![SpecialMoon(2)],
        vec![Moon],
        vec![Nimber(1), GameValue::inf([0, 2])],
        vec![SpecialMoon(1), GameValue::inf([3])],
    ]
}
