//! Exit criteria. Runs every criterion, prints one line each, and fails the
//! target if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use impsum::entailing::{EntailingSolver, Forest, ImsClass, TreeId};
use impsum::loopy::{outcomes_npd, smith_values, LoopyGraph, LoopyValue};
use impsum::oracle::{check_equivalence, realize, realize_all, standard_contexts, Component, Oracle};
use impsum::rulesets::{
    evaluate_board, example_board, keep_nim_board_graph, keep_nim_value, turn_keep_nim_value,
    DiagonalMode, TurnKeepNim,
};
use impsum::value::{GameValue, Outcome, SumValue};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Verdict = Result<String, String>;
type Law = (&'static str, Vec<(Vec<GameValue>, GameValue)>);

fn nim(k: u32) -> GameValue {
    GameValue::Nimber(k)
}

fn sp(n: u32) -> GameValue {
    GameValue::SpecialMoon(n)
}

fn inf(set: &[u32]) -> GameValue {
    GameValue::inf(set.iter().copied())
}

fn subsets(universe: u32) -> Vec<BTreeSet<u32>> {
    (0u32..1 << universe)
        .map(|bits| (0..universe).filter(|i| bits >> i & 1 == 1).collect())
        .collect()
}

/// Expected square-piece values, row x, column y.
fn expected_turn_keep_nim_table() -> Vec<Vec<GameValue>> {
    let s = sp(3);
    vec![
        vec![nim(0), nim(1), nim(2), nim(3), s.clone(), s.clone(), s.clone(), s.clone()],
        vec![nim(1), nim(0), nim(3), s.clone(), s.clone(), s.clone(), s.clone(), s.clone()],
        vec![nim(2), nim(3), s.clone(), s.clone(), s.clone(), s.clone(), s.clone(), s.clone()],
        vec![nim(3), s.clone(), s.clone(), s.clone(), s.clone(), s.clone(), s.clone(), s.clone()],
        vec![s.clone(), s.clone(), s.clone(), s.clone(), nim(0), nim(1), nim(2), nim(3)],
        vec![s.clone(), s.clone(), s.clone(), s.clone(), nim(1), nim(0), nim(3), nim(2)],
        vec![s.clone(), s.clone(), s.clone(), s.clone(), nim(2), nim(3), nim(0), nim(1)],
        vec![s.clone(), s.clone(), s.clone(), s.clone(), nim(3), nim(2), nim(1), nim(0)],
    ]
}

fn turn_keep_nim_table() -> Verdict {
    let start = Instant::now();
    let printed = expected_turn_keep_nim_table();
    let mut forest = Forest::new();
    let mut builder = TurnKeepNim::new();
    let mut solver = EntailingSolver::new();
    let mut matches = 0;
    let mut errors = Vec::new();
    for x in 0..8u32 {
        for y in 0..8u32 {
            let t = builder.tree(&mut forest, x, y);
            let got = solver.classify(&mut forest, t).to_game_value();
            let want = &printed[x as usize][y as usize];
            if turn_keep_nim_value(x, y) != *want {
                errors.push(format!("closed form ({x},{y})"));
            }
            if got.as_ref() == Some(want) {
                matches += 1;
            } else {
                errors.push(format!("({x},{y}): got {got:?}, want {want}"));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(10) {
        errors.push(format!("took {elapsed:?}"));
    }
    if errors.is_empty() {
        Ok(format!("{matches}/64 cells in {elapsed:.2?}"))
    } else {
        Err(errors.join("; "))
    }
}

fn worked_example() -> Verdict {
    let eval = evaluate_board(&example_board(), DiagonalMode::Augment).map_err(|e| e.to_string())?;
    let want = vec![nim(3), nim(1), nim(0), inf(&[0, 1, 2]), sp(3), nim(1)];
    if eval.values != want {
        return Err(format!("pieces {:?}", eval.values));
    }
    if eval.total != inf(&[0, 1, 2]) || eval.outcome != Outcome::N {
        return Err(format!("total {} outcome {}", eval.total, eval.outcome));
    }
    Ok(format!("total {}, outcome {}", eval.total, eval.outcome))
}

fn algebra_vs_oracle() -> Verdict {
    let start = Instant::now();
    let mut pool: Vec<GameValue> = (0..4).map(nim).collect();
    pool.push(GameValue::Moon);
    pool.extend((0..4).map(sp));
    pool.extend(subsets(3).into_iter().map(GameValue::Inf));

    let oracle = Oracle::new(1_000_000);
    let mut forest = Forest::new();
    let realized: Vec<Component> = realize_all(&pool, &mut forest).map_err(|e| e.to_string())?;
    let mut checked = 0;
    let mut mismatches = Vec::new();
    let n = pool.len();
    let mut multisets: Vec<Vec<usize>> = vec![vec![]];
    for i in 0..n {
        multisets.push(vec![i]);
        for j in i..n {
            multisets.push(vec![i, j]);
            for k in j..n {
                multisets.push(vec![i, j, k]);
            }
        }
    }
    for ms in &multisets {
        let values: Vec<GameValue> = ms.iter().map(|&i| pool[i].clone()).collect();
        let comps: Vec<Component> = ms.iter().map(|&i| realized[i].clone()).collect();
        let algebra = SumValue::from_values(&values).outcome();
        let brute = oracle
            .solve(&mut forest, &comps)
            .map_err(|e| e.to_string())?
            .outcome;
        checked += 1;
        if algebra != brute {
            mismatches.push(format!("{values:?}: algebra {algebra}, oracle {brute}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(300) {
        mismatches.push(format!("took {elapsed:?}"));
    }
    if mismatches.is_empty() {
        Ok(format!("{checked} multisets, 0 mismatches, {elapsed:.2?}"))
    } else {
        Err(format!("{} mismatches: {}", mismatches.len(), mismatches[..mismatches.len().min(5)].join("; ")))
    }
}

/// One instance list per distinct entry of the sum table.
fn sum_laws() -> Vec<Law> {
    let m = GameValue::Moon;
    vec![
        ("moon + moon = moon", vec![(vec![m.clone(), m.clone()], m.clone())]),
        (
            "moon + *k = moon",
            vec![(vec![m.clone(), nim(2)], m.clone()), (vec![m.clone(), nim(0)], m.clone())],
        ),
        (
            "moon + sp(n) = moon",
            vec![(vec![m.clone(), sp(1)], m.clone()), (vec![m.clone(), sp(3)], m.clone())],
        ),
        (
            "moon + inf(B) = moon",
            vec![(vec![m.clone(), inf(&[])], m.clone()), (vec![m.clone(), inf(&[0, 2])], m.clone())],
        ),
        (
            "*k1 + *k2 = *(k1^k2)",
            vec![(vec![nim(1), nim(2)], nim(3)), (vec![nim(3), nim(3)], nim(0))],
        ),
        (
            "*k + sp(n) = sp(n^k)",
            vec![(vec![nim(2), sp(3)], sp(1)), (vec![nim(1), sp(1)], sp(0))],
        ),
        (
            "*k + inf(B) = inf(k^B)",
            vec![
                (vec![nim(1), inf(&[0, 2])], inf(&[1, 3])),
                (vec![nim(3), inf(&[1])], inf(&[2])),
            ],
        ),
        (
            "sp(n1) + sp(n2) = sp(n1^n2)",
            vec![(vec![sp(1), sp(2)], sp(3)), (vec![sp(2), sp(2)], sp(0))],
        ),
        (
            "sp(n) + inf(B) = inf(n^B)",
            vec![
                (vec![sp(3), inf(&[0, 1])], inf(&[2, 3])),
                (vec![sp(1), inf(&[])], inf(&[])),
            ],
        ),
        (
            "inf(A) + inf(B) = inf({})",
            vec![
                (vec![inf(&[0]), inf(&[1, 2])], inf(&[])),
                (vec![inf(&[0]), inf(&[0])], inf(&[])),
            ],
        ),
    ]
}

fn sum_table_laws() -> Verdict {
    let oracle = Oracle::default();
    let mut forest = Forest::new();
    let contexts: Vec<Vec<Component>> = standard_contexts()
        .iter()
        .map(|c| realize_all(c, &mut forest))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    if contexts.len() != 12 {
        return Err(format!("{} contexts", contexts.len()));
    }
    let mut failures = Vec::new();
    let laws = sum_laws();
    for (name, instances) in &laws {
        for (lhs, rhs) in instances {
            if impsum::value::sum_values(lhs) != *rhs {
                failures.push(format!("{name}: algebra disagrees"));
            }
            let a = realize_all(lhs, &mut forest).map_err(|e| e.to_string())?;
            let b = realize_all(std::slice::from_ref(rhs), &mut forest).map_err(|e| e.to_string())?;
            let report = check_equivalence(&oracle, &mut forest, &a, &b, &contexts)
                .map_err(|e| e.to_string())?;
            if !report.equivalent {
                failures.push(format!("{name}: {lhs:?} vs {rhs} split by context {:?}", report.witness));
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{} laws over 12 contexts", laws.len()))
    } else {
        Err(failures.join("; "))
    }
}

fn infinity_case() -> Verdict {
    let oracle = Oracle::default();
    let mut forest = Forest::new();
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut moon_lists: Vec<Vec<u32>> = vec![vec![]];
    for a in 0..4 {
        moon_lists.push(vec![a]);
        for b in a..4 {
            moon_lists.push(vec![a, b]);
        }
    }
    for k in 0..4u32 {
        for moons in &moon_lists {
            for b in subsets(4) {
                let mut values = vec![nim(k)];
                values.extend(moons.iter().map(|&n| sp(n)));
                values.push(GameValue::Inf(b.clone()));
                let comps = realize_all(&values, &mut forest).map_err(|e| e.to_string())?;
                let got = oracle.solve(&mut forest, &comps).map_err(|e| e.to_string())?.outcome;
                let x = moons.iter().fold(k, |a, &n| a ^ n);
                let want = if b.contains(&x) { Outcome::N } else { Outcome::D };
                checked += 1;
                if got != want {
                    failures.push(format!("{values:?}: {got}"));
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{checked} sums"))
    } else {
        Err(failures[..failures.len().min(5)].join("; "))
    }
}

/// The two moon-like positions that behave differently next to `∞(B)`.
fn counterexamples(forest: &mut Forest) -> (TreeId, TreeId) {
    let s2 = forest.nimber(2);
    let s3 = forest.nimber(3);
    let both = forest.left_check([s2, s3]);
    let both_c = forest.conjugate(both);
    let g = forest.node([s2, s3, both], [s2, s3, both_c]);
    let c2 = forest.left_check([s2]);
    let c3 = forest.left_check([s3]);
    let c2c = forest.conjugate(c2);
    let c3c = forest.conjugate(c3);
    let h = forest.node([s2, s3, c2, c3], [s2, s3, c2c, c3c]);
    (g, h)
}

fn counterexample_fidelity() -> Verdict {
    let oracle = Oracle::default();
    let mut forest = Forest::new();
    let (g, h) = counterexamples(&mut forest);
    let mut failures = Vec::new();
    let mut solver = EntailingSolver::new();
    for (name, t) in [("G", g), ("H", h)] {
        let class = solver.classify(&mut forest, t);
        if class != ImsClass::OutsideFragment {
            failures.push(format!("{name} classified {class}"));
        }
    }
    let sets = subsets(5);
    for b in &sets {
        let gadget = realize(&GameValue::Inf(b.clone()), &mut forest).map_err(|e| e.to_string())?;
        let og = oracle
            .solve(&mut forest, &[Component::Tree(g), gadget.clone()])
            .map_err(|e| e.to_string())?
            .outcome;
        let oh = oracle
            .solve(&mut forest, &[Component::Tree(h), gadget])
            .map_err(|e| e.to_string())?
            .outcome;
        let want_g = (b.contains(&2) && b.contains(&3)) == (og == Outcome::N);
        let want_h = (b.contains(&2) || b.contains(&3)) == (oh == Outcome::N);
        if !want_g {
            failures.push(format!("G + inf{b:?} = {og}"));
        }
        if !want_h {
            failures.push(format!("H + inf{b:?} = {oh}"));
        }
    }
    if failures.is_empty() {
        Ok(format!("{} sets B, both outside the fragment", sets.len()))
    } else {
        Err(failures.join("; "))
    }
}

/// Checks one graph; returns the number of oracle runs.
fn check_graph(graph: &LoopyGraph, oracle: &Oracle, forest: &mut Forest, failures: &mut Vec<String>) -> usize {
    let values = match smith_values(graph) {
        Ok(v) => v,
        Err(e) => {
            failures.push(format!("{graph:?}: {e}"));
            return 0;
        }
    };
    let outcomes = outcomes_npd(graph);
    let mut runs = 0;
    for v in 0..graph.len() {
        let ok = match (&values[v], outcomes[v]) {
            (LoopyValue::Finite(0), o) => o == Outcome::P,
            (LoopyValue::Finite(_), o) => o == Outcome::N,
            (LoopyValue::Inf(a), o) if a.contains(&0) => o == Outcome::N,
            (LoopyValue::Inf(_), o) => o == Outcome::D,
        };
        if !ok {
            failures.push(format!("{graph:?} node {v}: {} but {}", values[v], outcomes[v]));
        }
        if let LoopyValue::Finite(m) = values[v] {
            let comps = [
                Component::graph(graph.clone().with_start(v)),
                Component::graph(LoopyGraph::nim_heap(m)),
            ];
            runs += 1;
            match oracle.solve(forest, &comps) {
                Ok(r) if r.outcome == Outcome::P => {}
                Ok(r) => failures.push(format!("{graph:?} node {v} + *{m}: {}", r.outcome)),
                Err(e) => failures.push(e.to_string()),
            }
        }
    }
    runs
}

fn graph_from_rows(rows: &[u32], n: usize) -> LoopyGraph {
    let options = rows
        .iter()
        .map(|&r| (0..n).filter(|j| r >> j & 1 == 1).collect())
        .collect();
    LoopyGraph::from_adjacency(options, 0)
}

fn loopy_soundness() -> Verdict {
    let oracle = Oracle::default();
    let mut forest = Forest::new();
    let mut failures = Vec::new();
    let mut graphs = 0usize;
    let mut runs = 0usize;
    // Every graph on up to four nodes; on five nodes one representative per
    // ordering of out-degrees (non-increasing), which still meets every
    // isomorphism class.
    for n in 1..=5usize {
        let row_count = 1u32 << n;
        let mut rows = vec![0u32; n];
        loop {
            let sorted = n < 5
                || rows
                    .windows(2)
                    .all(|w| w[0].count_ones() >= w[1].count_ones());
            if sorted {
                let g = graph_from_rows(&rows, n);
                runs += check_graph(&g, &oracle, &mut forest, &mut failures);
                graphs += 1;
                if failures.len() > 10 {
                    return Err(failures.join("; "));
                }
            }
            let mut i = 0;
            while i < n {
                rows[i] += 1;
                if rows[i] < row_count {
                    break;
                }
                rows[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..500 {
        let n = rng.gen_range(1..=10usize);
        let density = rng.gen_range(0.05..0.5);
        let options = (0..n)
            .map(|_| (0..n).filter(|_| rng.gen_bool(density)).collect())
            .collect();
        let g = LoopyGraph::from_adjacency(options, 0);
        runs += check_graph(&g, &oracle, &mut forest, &mut failures);
        graphs += 1;
    }
    if failures.is_empty() {
        Ok(format!("{graphs} graphs, {runs} oracle sums, 0 violations"))
    } else {
        Err(failures[..failures.len().min(5)].join("; "))
    }
}

fn keep_nim_cross_check() -> Verdict {
    let mut failures = Vec::new();
    let augment = smith_values(&keep_nim_board_graph(8, 8, DiagonalMode::Augment)).map_err(|e| e.to_string())?;
    let replace = smith_values(&keep_nim_board_graph(8, 8, DiagonalMode::Replace)).map_err(|e| e.to_string())?;
    let mut differing = Vec::new();
    for x in 0..8u32 {
        for y in 0..8u32 {
            let i = (x * 8 + y) as usize;
            let formula = keep_nim_value(x, y);
            if augment[i].to_game_value() != formula {
                failures.push(format!("augment ({x},{y}): {} vs {formula}", augment[i]));
            }
            if replace[i].to_game_value() != formula {
                differing.push(((x, y), replace[i].to_game_value()));
            }
        }
    }
    let diagonal: Vec<((u32, u32), GameValue)> =
        [(0, 3), (1, 2), (2, 1), (3, 0)].iter().map(|&c| (c, inf(&[]))).collect();
    if differing != diagonal {
        failures.push(format!(
            "replace mode differs on {:?}",
            differing.iter().map(|(c, v)| format!("{c:?}={v}")).collect::<Vec<_>>()
        ));
    }
    if failures.is_empty() {
        Ok("augment 64/64; replace differs exactly on the diagonal, all inf{}".into())
    } else {
        Err(failures.join("; "))
    }
}

fn moon_universality() -> Verdict {
    let mut forest = Forest::new();
    let mut corpus = Vec::new();
    corpus.push(forest.moon());
    for n in 0..=4u32 {
        let star = forest.nimber(n);
        corpus.push(forest.special_moon_with(star, &[star]));
        let others: Vec<TreeId> = (0..=4).filter(|&k| k != n).map(|k| forest.nimber(k)).collect();
        let mut witnesses = vec![star];
        witnesses.extend(others.iter().take(2));
        corpus.push(forest.special_moon_with(star, &witnesses));
    }
    let inner = forest.special_moon(1);
    let star2 = forest.nimber(2);
    corpus.push(forest.special_moon_with(star2, &[star2, inner]));
    let mut builder = TurnKeepNim::new();
    for (x, y) in [(0, 4), (1, 3), (2, 2), (3, 5), (7, 0)] {
        corpus.push(builder.tree(&mut forest, x, y));
    }
    let (g, h) = counterexamples(&mut forest);
    corpus.push(g);
    corpus.push(h);

    let mut solver = EntailingSolver::new();
    let mut failures = Vec::new();
    let mut checked = 0;
    for &t in &corpus {
        let class = solver.classify(&mut forest, t);
        if !matches!(class, ImsClass::Moon | ImsClass::SpecialMoon(_)) {
            continue;
        }
        let bound = solver.bound_for(&forest, t);
        for k in 0..=bound {
            let o = solver.outcome_with_nimber(&forest, t, k);
            if o != Outcome::N {
                failures.push(format!("{class} + *{k} = {o}"));
            }
        }
        checked += 1;
    }
    if checked < corpus.len() - 2 {
        failures.push(format!("only {checked} of {} corpus trees were moons", corpus.len()));
    }
    if failures.is_empty() {
        Ok(format!("{checked} moon-class trees"))
    } else {
        Err(failures.join("; "))
    }
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("turn-keep-nim table", turn_keep_nim_table),
        ("worked example", worked_example),
        ("algebra vs oracle", algebra_vs_oracle),
        ("sum table laws", sum_table_laws),
        ("single infinity case", infinity_case),
        ("counterexample fidelity", counterexample_fidelity),
        ("loopy solver soundness", loopy_soundness),
        ("keep-nim cross-check", keep_nim_cross_check),
        ("moon universality", moon_universality),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match run() {
            Ok(detail) => println!("[PASS] {} {name}: {detail} ({:.2?})", i + 1, start.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
