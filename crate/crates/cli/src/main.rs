use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use impsum::entailing::MatchMode;
use impsum::notation::print_value;
use impsum::oracle::{realize, realize_all, standard_contexts, DEFAULT_STATE_LIMIT};
use impsum::rulesets::{
    evaluate_board, format_table, parse_board, solve_table, DiagonalMode, Ruleset,
};
use impsum::{
    check_equivalence, outcomes_npd, parse_graph, parse_sum, smith_values, Component,
    EntailingSolver, Forest, GameValue, GraphLibrary, ImsClass, Oracle, ParseError, SolveError,
    SumExpr, SumValue, Term,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "impsum", version, about = "Values and outcomes of impartial sums")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Make a graph file available to sums as `graph:NAME@NODE`.
    #[arg(long = "graph", value_name = "NAME=PATH", global = true)]
    graphs: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Value and outcome of a sum, computed algebraically.
    Eval { sum: String },
    /// Outcome of a sum, computed algebraically.
    Outcome { sum: String },
    /// Outcome of a sum by exhaustive search of the realized game.
    Oracle {
        sum: String,
        #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
        state_limit: usize,
    },
    /// Place a tree literal in the fragment.
    Classify {
        tree: String,
        /// Require the canonical special-moon shape.
        #[arg(long)]
        strict: bool,
    },
    /// Generalized Grundy value and outcome of every node of a graph file.
    Smith { file: PathBuf },
    /// Value table of a ruleset for 0..=MAX_X by 0..=MAX_Y.
    Table {
        ruleset: RulesetArg,
        max_x: u32,
        max_y: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Augment)]
        mode: ModeArg,
    },
    /// Evaluate a three-piece board file.
    Tripiece {
        board: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Augment)]
        mode: ModeArg,
    },
    /// Compare two sums under a set of contexts.
    Equiv {
        a: String,
        b: String,
        /// File with one context sum per line; defaults to a built-in set.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
        state_limit: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RulesetArg {
    Nim,
    KeepNim,
    TurnKeepNim,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Augment,
    Replace,
}

impl From<ModeArg> for DiagonalMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Augment => DiagonalMode::Augment,
            ModeArg::Replace => DiagonalMode::Replace,
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{what}: {source}")]
    Parse { what: String, source: ParseError },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Solve(_) | CliError::Io { .. } => 1,
        }
    }
}

fn parse_err(what: impl Into<String>) -> impl FnOnce(ParseError) -> CliError {
    let what = what.into();
    move |source| CliError::Parse { what, source }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_graphs(specs: &[String]) -> Result<GraphLibrary, CliError> {
    let mut lib = GraphLibrary::new();
    for spec in specs {
        let (name, path) = spec
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--graph expects NAME=PATH, got `{spec}`")))?;
        let text = read(Path::new(path))?;
        let graph = parse_graph(&text).map_err(parse_err(path))?;
        lib.insert(name, graph);
    }
    Ok(lib)
}

struct Session {
    forest: Forest,
    graphs: GraphLibrary,
    solver: EntailingSolver,
}

impl Session {
    fn parse(&mut self, text: &str) -> Result<SumExpr, CliError> {
        parse_sum(text, &mut self.forest).map_err(parse_err(format!("sum `{text}`")))
    }

    fn value(&mut self, term: &Term) -> Result<GameValue, CliError> {
        Ok(match term {
            Term::Value(v) => v.clone(),
            Term::Graph { name, node } => {
                let (g, v) = self.graphs.resolve(name, node)?;
                smith_values(g)?[v].to_game_value()
            }
            Term::Tree(t) => self
                .solver
                .classify(&mut self.forest, *t)
                .to_game_value()
                .ok_or_else(|| {
                    SolveError::OutsideFragment(impsum::notation::print_tree(&self.forest, *t))
                })?,
        })
    }

    fn values(&mut self, sum: &SumExpr) -> Result<Vec<GameValue>, CliError> {
        sum.terms.iter().map(|t| self.value(t)).collect()
    }

    fn components(&mut self, sum: &SumExpr) -> Result<Vec<Component>, CliError> {
        sum.terms
            .iter()
            .map(|t| {
                Ok(match t {
                    Term::Value(v) => realize(v, &mut self.forest)?,
                    Term::Graph { name, node } => {
                        let (g, v) = self.graphs.resolve(name, node)?;
                        Component::graph(g.clone().with_start(v))
                    }
                    Term::Tree(t) => Component::Tree(*t),
                })
            })
            .collect()
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    let mut s = Session {
        forest: Forest::new(),
        graphs: load_graphs(&cli.graphs)?,
        solver: EntailingSolver::new(),
    };
    let json = cli.json;
    let out = match cli.command {
        Command::Eval { sum } => {
            let expr = s.parse(&sum)?;
            let values = s.values(&expr)?;
            let total = impsum::sum_values(&values);
            let outcome = SumValue::from_values(&values).outcome();
            if json {
                json!({
                    "terms": values.iter().map(print_value).collect::<Vec<_>>(),
                    "value": total.to_string(),
                    "outcome": outcome.to_string(),
                })
                .to_string()
            } else {
                format!("value: {total}\noutcome: {outcome}")
            }
        }
        Command::Outcome { sum } => {
            let expr = s.parse(&sum)?;
            let values = s.values(&expr)?;
            let outcome = SumValue::from_values(&values).outcome();
            if json {
                json!({ "outcome": outcome.to_string() }).to_string()
            } else {
                outcome.to_string()
            }
        }
        Command::Oracle { sum, state_limit } => {
            let expr = s.parse(&sum)?;
            let comps = s.components(&expr)?;
            let report = Oracle::new(state_limit).solve(&mut s.forest, &comps)?;
            if json {
                json!({ "outcome": report.outcome.to_string(), "states": report.states }).to_string()
            } else {
                format!("outcome: {}\nstates: {}", report.outcome, report.states)
            }
        }
        Command::Classify { tree, strict } => {
            let t = impsum::parse_tree(&tree, &mut s.forest).map_err(parse_err(format!("tree `{tree}`")))?;
            let mode = if strict { MatchMode::Strict } else { MatchMode::ValueLevel };
            let mut solver = EntailingSolver::new().with_mode(mode);
            let class = solver.classify(&mut s.forest, t);
            if class == ImsClass::OutsideFragment {
                return Err(SolveError::OutsideFragment(tree).into());
            }
            if json {
                json!({ "class": class.to_string() }).to_string()
            } else {
                class.to_string()
            }
        }
        Command::Smith { file } => {
            let text = read(&file)?;
            let g = parse_graph(&text).map_err(parse_err(file.display().to_string()))?;
            let values = smith_values(&g)?;
            let outcomes = outcomes_npd(&g);
            if json {
                let nodes: Vec<_> = (0..g.len())
                    .map(|v| {
                        json!({
                            "node": g.name(v),
                            "value": values[v].to_string(),
                            "outcome": outcomes[v].to_string(),
                        })
                    })
                    .collect();
                json!({ "start": g.name(g.start()), "nodes": nodes }).to_string()
            } else {
                let width = g.names().iter().map(String::len).max().unwrap_or(0);
                (0..g.len())
                    .map(|v| format!("{:<width$}  {}  {}", g.name(v), values[v], outcomes[v]))
                    .collect::<Vec<_>>()
                    .join("\n")
            }
        }
        Command::Table { ruleset, max_x, max_y, mode } => {
            let ruleset = match ruleset {
                RulesetArg::Nim => Ruleset::Nim,
                RulesetArg::KeepNim => Ruleset::KeepNim,
                RulesetArg::TurnKeepNim => Ruleset::TurnKeepNim,
            };
            let rows = solve_table(ruleset, max_x, max_y, mode.into())?;
            if json {
                let cells: Vec<Vec<String>> = rows
                    .iter()
                    .map(|r| r.iter().map(print_value).collect())
                    .collect();
                json!({ "ruleset": ruleset.to_string(), "rows": cells }).to_string()
            } else {
                format_table(&rows).trim_end().to_string()
            }
        }
        Command::Tripiece { board, mode } => {
            let text = read(&board)?;
            let b = parse_board(&text).map_err(parse_err(board.display().to_string()))?;
            let eval = evaluate_board(&b, mode.into())?;
            if json {
                let pieces: Vec<_> = b
                    .pieces
                    .iter()
                    .zip(&eval.values)
                    .map(|(p, v)| json!({ "piece": p.kind.to_string(), "x": p.x, "y": p.y, "value": v.to_string() }))
                    .collect();
                json!({
                    "pieces": pieces,
                    "total": eval.total.to_string(),
                    "outcome": eval.outcome.to_string(),
                    "reduction": eval.reduction_chain(),
                })
                .to_string()
            } else {
                let mut lines: Vec<String> = b
                    .pieces
                    .iter()
                    .zip(&eval.values)
                    .map(|(p, v)| format!("{} ({}, {}): {v}", p.kind, p.x, p.y))
                    .collect();
                lines.push(format!("total: {}", eval.total));
                lines.push(format!("outcome: {}", eval.outcome));
                let chain = eval.reduction_chain();
                lines.push(format!("  {}", chain[0]));
                lines.extend(chain[1..].iter().map(|c| format!("= {c}")));
                lines.join("\n")
            }
        }
        Command::Equiv { a, b, corpus, state_limit } => {
            let (labels, contexts) = match corpus {
                Some(path) => {
                    let text = read(&path)?;
                    let mut labels = Vec::new();
                    let mut contexts = Vec::new();
                    for line in text.lines() {
                        let line = line.split('#').next().unwrap_or("").trim();
                        if line.is_empty() {
                            continue;
                        }
                        let expr = s.parse(line)?;
                        contexts.push(s.components(&expr)?);
                        labels.push(line.to_string());
                    }
                    (labels, contexts)
                }
                None => {
                    let mut labels = Vec::new();
                    let mut contexts = Vec::new();
                    for ctx in standard_contexts() {
                        labels.push(if ctx.is_empty() {
                            "0".to_string()
                        } else {
                            ctx.iter().map(print_value).collect::<Vec<_>>().join(" + ")
                        });
                        contexts.push(realize_all(&ctx, &mut s.forest)?);
                    }
                    (labels, contexts)
                }
            };
            let ea = s.parse(&a)?;
            let eb = s.parse(&b)?;
            let ca = s.components(&ea)?;
            let cb = s.components(&eb)?;
            let oracle = Oracle::new(state_limit);
            let report = check_equivalence(&oracle, &mut s.forest, &ca, &cb, &contexts)?;
            let witness = report.witness.map(|i| {
                let (oa, ob) = report.outcomes[i];
                (labels[i].clone(), oa, ob)
            });
            if json {
                json!({
                    "equivalent": report.equivalent,
                    "witness": witness.as_ref().map(|(l, oa, ob)| json!({
                        "context": l, "a": oa.to_string(), "b": ob.to_string(),
                    })),
                    "sufficient": report.sufficient,
                    "contexts": contexts.len(),
                })
                .to_string()
            } else {
                let mut lines = vec![format!("equivalent: {}", report.equivalent)];
                if let Some((l, oa, ob)) = witness {
                    lines.push(format!("witness: {l} (a: {oa}, b: {ob})"));
                }
                lines.push(format!("sufficient: {}", report.sufficient));
                lines.join("\n")
            }
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

