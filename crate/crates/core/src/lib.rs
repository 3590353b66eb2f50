//! Values and outcomes of disjunctive sums mixing impartial loopy positions
//! with impartial entailing positions (positions with carry-on moves).
//!
//! The algebra in [`value`] decides sums of canonical values in closed form.
//! [`loopy`] and [`entailing`] reduce concrete positions to those values, and
//! [`oracle`] computes outcomes of concrete sums by brute force so the two
//! can be checked against each other.

pub mod entailing;
pub mod error;
pub mod loopy;
pub mod notation;
pub mod oracle;
pub mod rulesets;
pub mod value;

pub use entailing::{EntailingSolver, Forest, ImsClass, TreeId};
pub use error::{ParseError, ParseErrorKind, SolveError};
pub use loopy::{outcomes_npd, smith_values, value_of, GraphLibrary, LoopyGraph, LoopyValue};
pub use notation::{parse_graph, parse_sum, parse_tree, parse_value, SumExpr, Term};
pub use oracle::{check_equivalence, oracle_outcome, realize, Component, Oracle};
pub use value::{mex, outcome_of_sum, sum_values, GameValue, Outcome, SumValue};
