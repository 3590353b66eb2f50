//! Finite impartial game graphs, possibly cyclic: win/loss/draw labelling and
//! generalized Grundy values.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::SolveError;
use crate::value::{GameValue, Outcome};

/// A finite directed game graph. Node `i` moves to each node in
/// `options(i)`; a node without options is terminal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopyGraph {
    names: Vec<String>,
    options: Vec<Vec<usize>>,
    start: usize,
}

impl LoopyGraph {
    /// Builds a graph from named nodes and index-based options. Option lists
    /// are sorted and deduplicated.
    ///
    /// Panics if an option index is out of range or `start` is not a node.
    pub fn new(names: Vec<String>, options: Vec<Vec<usize>>, start: usize) -> LoopyGraph {
        assert_eq!(names.len(), options.len());
        assert!(start < names.len(), "start node out of range");
        let n = names.len();
        let options = options
            .into_iter()
            .map(|mut opts| {
                assert!(opts.iter().all(|&o| o < n), "option out of range");
                opts.sort_unstable();
                opts.dedup();
                opts
            })
            .collect();
        LoopyGraph {
            names,
            options,
            start,
        }
    }

    /// A graph whose nodes are named by their index.
    pub fn from_adjacency(options: Vec<Vec<usize>>, start: usize) -> LoopyGraph {
        let names = (0..options.len()).map(|i| format!("n{i}")).collect();
        LoopyGraph::new(names, options, start)
    }

    /// Nim heap of size `k`: node `i` moves to every `j < i`, starting at `k`.
    pub fn nim_heap(k: u32) -> LoopyGraph {
        let k = k as usize;
        let options = (0..=k).map(|i| (0..i).collect()).collect();
        let names = (0..=k).map(|i| format!("h{i}")).collect();
        LoopyGraph::new(names, options, k)
    }

    pub fn len(&self) -> usize {
        self.options.len()
    }

    pub fn is_empty(&self) -> bool {
        self.options.is_empty()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn with_start(mut self, start: usize) -> LoopyGraph {
        assert!(start < self.len());
        self.start = start;
        self
    }

    pub fn options(&self, node: usize) -> &[usize] {
        &self.options[node]
    }

    pub fn name(&self, node: usize) -> &str {
        &self.names[node]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_terminal(&self, node: usize) -> bool {
        self.options[node].is_empty()
    }
}

/// Generalized Grundy value of a graph node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LoopyValue {
    Finite(u32),
    /// Never settles; carries the finite values found among the options.
    Inf(BTreeSet<u32>),
}

impl LoopyValue {
    pub fn to_game_value(&self) -> GameValue {
        match self {
            LoopyValue::Finite(m) => GameValue::Nimber(*m),
            LoopyValue::Inf(set) => GameValue::Inf(set.clone()),
        }
    }

    /// Outcome implied by the value alone.
    pub fn outcome(&self) -> Outcome {
        match self {
            LoopyValue::Finite(0) => Outcome::P,
            LoopyValue::Finite(_) => Outcome::N,
            LoopyValue::Inf(set) if set.contains(&0) => Outcome::N,
            LoopyValue::Inf(_) => Outcome::D,
        }
    }
}

impl fmt::Display for LoopyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_game_value(), f)
    }
}

/// Labels every node N, P or D.
///
/// Least fixpoint by repeated passes: a node all of whose options are N is P
/// (terminals vacuously), a node with a P option is N, and whatever is still
/// unlabelled once a pass changes nothing is D.
pub fn outcomes_npd(graph: &LoopyGraph) -> Vec<Outcome> {
    let n = graph.len();
    let mut label: Vec<Option<Outcome>> = vec![None; n];
    loop {
        let mut changed = false;
        for v in 0..n {
            if label[v].is_some() {
                continue;
            }
            let opts = graph.options(v);
            if opts.iter().any(|&o| label[o] == Some(Outcome::P)) {
                label[v] = Some(Outcome::N);
                changed = true;
            } else if opts.iter().all(|&o| label[o] == Some(Outcome::N)) {
                label[v] = Some(Outcome::P);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    label.into_iter().map(|l| l.unwrap_or(Outcome::D)).collect()
}

/// Iterated value: `None` stands for ∞.
type Level = Option<u32>;

fn mex_finite(values: impl Iterator<Item = Level>) -> u32 {
    let mut seen: Vec<bool> = Vec::new();
    for v in values.flatten() {
        let v = v as usize;
        if v >= seen.len() {
            seen.resize(v + 1, false);
        }
        seen[v] = true;
    }
    seen.iter().position(|s| !s).unwrap_or(seen.len()) as u32
}

/// Generalized Grundy values of every node.
///
/// Starts from 0 on terminals and ∞ elsewhere. Each pass sets a node to the
/// mex `m` of its options' current values (∞ never blocks the mex) provided
/// every option currently above `m`, ∞ included, has an option of its own
/// valued exactly `m`; otherwise the node becomes ∞. Passes repeat until the
/// map is unchanged, then ∞ nodes record the finite values of their options.
pub fn smith_values(graph: &LoopyGraph) -> Result<Vec<LoopyValue>, SolveError> {
    let n = graph.len();
    let max_passes = n * (n + 2) + 1;
    let mut current: Vec<Level> = (0..n)
        .map(|v| graph.is_terminal(v).then_some(0))
        .collect();
    let mut passes = 0;
    loop {
        let next: Vec<Level> = (0..n)
            .map(|v| {
                let opts = graph.options(v);
                let m = mex_finite(opts.iter().map(|&o| current[o]));
                let answered = opts.iter().all(|&o| match current[o] {
                    Some(x) if x <= m => true,
                    _ => graph.options(o).iter().any(|&oo| current[oo] == Some(m)),
                });
                answered.then_some(m)
            })
            .collect();
        passes += 1;
        if next == current {
            break;
        }
        if passes >= max_passes {
            return Err(SolveError::NonConvergence { passes });
        }
        current = next;
    }
    Ok((0..n)
        .map(|v| match current[v] {
            Some(m) => LoopyValue::Finite(m),
            None => LoopyValue::Inf(
                graph
                    .options(v)
                    .iter()
                    .filter_map(|&o| current[o])
                    .collect(),
            ),
        })
        .collect())
}

/// Canonical value of one node.
pub fn value_of(graph: &LoopyGraph, node: usize) -> Result<GameValue, SolveError> {
    Ok(smith_values(graph)?[node].to_game_value())
}

/// Named graphs available to sum expressions.
#[derive(Debug, Clone, Default)]
pub struct GraphLibrary {
    graphs: HashMap<String, LoopyGraph>,
}

impl GraphLibrary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, graph: LoopyGraph) {
        self.graphs.insert(name.into(), graph);
    }

    pub fn get(&self, name: &str) -> Result<&LoopyGraph, SolveError> {
        self.graphs
            .get(name)
            .ok_or_else(|| SolveError::UnresolvedGraph(name.to_string()))
    }

    /// Looks up `name@node`, returning the graph and the node index.
    pub fn resolve(&self, name: &str, node: &str) -> Result<(&LoopyGraph, usize), SolveError> {
        let graph = self.get(name)?;
        let idx = graph.node(node).ok_or_else(|| SolveError::UnknownNode {
            graph: name.to_string(),
            node: node.to_string(),
        })?;
        Ok((graph, idx))
    }
}
