//! Impartial entailing positions: positions whose options may include the
//! immediate wins `inf` and `~inf`, used to model carry-on moves.

mod forest;
mod solver;

pub use forest::{Forest, TreeId, TreeNode};
pub use solver::{EntailingSolver, EntailingValue, ImsClass, MatchMode, Protected};
