use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn new(offset: usize, kind: ParseErrorKind) -> Self {
        ParseError { offset, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("integer does not fit in 31 bits")]
    IntegerOverflow,
    #[error("`{{|}}` is not a position here; the empty position is written `{{~inf | inf}}`")]
    EmptyNode,
    #[error("node `{0}` is referenced but never defined")]
    UndefinedNode(String),
    #[error("node `{0}` is defined twice")]
    DuplicateNode(String),
    #[error("missing `start:` line")]
    MissingStart,
    #[error("more than one `start:` line")]
    DuplicateStart,
    #[error("{0}")]
    Board(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("generalized Grundy iteration did not settle within {passes} passes")]
    NonConvergence { passes: usize },
    #[error("state space exceeds limit of {limit} states")]
    StateLimitExceeded { limit: usize },
    #[error("tree component is not an impartial entailing position: {0}")]
    AsymmetricTree(String),
    #[error("gadget for {value} evaluated to {got}")]
    GadgetMismatch { value: String, got: String },
    #[error("no graph named `{0}` is loaded")]
    UnresolvedGraph(String),
    #[error("graph `{graph}` has no node `{node}`")]
    UnknownNode { graph: String, node: String },
    #[error("position lies outside the solved fragment: {0}")]
    OutsideFragment(String),
    #[error("piece at ({x}, {y}) is outside the {height}x{width} board")]
    OutOfBounds {
        x: u32,
        y: u32,
        height: u32,
        width: u32,
    },
}
