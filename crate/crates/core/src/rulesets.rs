//! Two-heap NIM and its loopy and carry-on variants, and whole boards of
//! the three-piece game built from them.
//!
//! Cells are `(x, y)` with `x` the row and `y` the column. A piece moves up
//! (decreasing `x`) or left (decreasing `y`) by any positive distance.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::entailing::{EntailingSolver, Forest, ImsClass, TreeId};
use crate::error::{ParseError, ParseErrorKind, SolveError};
use crate::loopy::{smith_values, LoopyGraph};
use crate::value::{GameValue, Outcome, SumValue};

/// Cells on this anti-diagonal are special for triangles and squares.
pub const SPECIAL_SUM: u32 = 3;

/// How a triangle standing on the special diagonal moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiagonalMode {
    /// Only the two diagonal steps are available there.
    Replace,
    /// The diagonal steps are available in addition to the usual moves.
    #[default]
    Augment,
}

impl fmt::Display for DiagonalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagonalMode::Replace => "replace",
            DiagonalMode::Augment => "augment",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PieceKind {
    Round,
    Triangle,
    Square,
}

impl fmt::Display for PieceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PieceKind::Round => "round",
            PieceKind::Triangle => "triangle",
            PieceKind::Square => "square",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Piece {
    pub kind: PieceKind,
    pub x: u32,
    pub y: u32,
}

impl Piece {
    pub fn new(kind: PieceKind, x: u32, y: u32) -> Piece {
        Piece { kind, x, y }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Board {
    pub height: u32,
    pub width: u32,
    pub pieces: Vec<Piece>,
}

impl Board {
    pub fn new(height: u32, width: u32) -> Board {
        Board {
            height,
            width,
            pieces: Vec::new(),
        }
    }

    pub fn with_piece(mut self, kind: PieceKind, x: u32, y: u32) -> Board {
        self.pieces.push(Piece::new(kind, x, y));
        self
    }

    pub fn contains(&self, x: u32, y: u32) -> bool {
        x < self.height && y < self.width
    }

    fn check_bounds(&self) -> Result<(), SolveError> {
        match self.pieces.iter().find(|p| !self.contains(p.x, p.y)) {
            Some(p) => Err(SolveError::OutOfBounds {
                x: p.x,
                y: p.y,
                height: self.height,
                width: self.width,
            }),
            None => Ok(()),
        }
    }
}

/// Parses a board file: a `WxH` header followed by `round|triangle|square X Y`
/// lines. `#` starts a comment.
pub fn parse_board(text: &str) -> Result<Board, ParseError> {
    let mut board: Option<Board> = None;
    let mut offset = 0;
    for raw in text.split_inclusive('\n') {
        let at = offset;
        offset += raw.len();
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |msg: String| ParseError::new(at, ParseErrorKind::Board(msg));
        let Some(b) = board.as_mut() else {
            let (w, h) = content
                .split_once(['x', 'X'])
                .ok_or_else(|| err(format!("expected `WxH` header, found `{content}`")))?;
            let dim = |s: &str| {
                s.trim()
                    .parse::<u32>()
                    .ok()
                    .filter(|&d| d > 0)
                    .ok_or_else(|| err(format!("bad board dimension `{s}`")))
            };
            board = Some(Board::new(dim(h)?, dim(w)?));
            continue;
        };
        let fields: Vec<&str> = content.split_whitespace().collect();
        let [kind, x, y] = fields[..] else {
            return Err(err(format!("expected `KIND X Y`, found `{content}`")));
        };
        let kind = match kind {
            "round" => PieceKind::Round,
            "triangle" => PieceKind::Triangle,
            "square" => PieceKind::Square,
            other => return Err(err(format!("unknown piece kind `{other}`"))),
        };
        let coord = |s: &str| {
            s.parse::<u32>()
                .map_err(|_| err(format!("bad coordinate `{s}`")))
        };
        b.pieces.push(Piece::new(kind, coord(x)?, coord(y)?));
    }
    board.ok_or_else(|| ParseError::new(text.len(), ParseErrorKind::Board("missing `WxH` header".into())))
}

pub fn print_board(board: &Board) -> String {
    let mut out = format!("{}x{}\n", board.width, board.height);
    for p in &board.pieces {
        out.push_str(&format!("{} {} {}\n", p.kind, p.x, p.y));
    }
    out
}

/// Round piece: plain two-heap NIM.
pub fn round_value(x: u32, y: u32) -> GameValue {
    GameValue::Nimber(x ^ y)
}

/// Closed form for a triangle piece.
pub fn keep_nim_value(x: u32, y: u32) -> GameValue {
    if x ^ y <= 2 {
        GameValue::Nimber(x ^ y)
    } else {
        GameValue::inf([0, 1, 2])
    }
}

/// Closed form for a square piece.
pub fn turn_keep_nim_value(x: u32, y: u32) -> GameValue {
    if x + y <= SPECIAL_SUM {
        GameValue::Nimber(x ^ y)
    } else if x.min(y) <= SPECIAL_SUM {
        GameValue::SpecialMoon(SPECIAL_SUM)
    } else {
        GameValue::Nimber((x - 4) ^ (y - 4))
    }
}

fn keep_nim_moves(x: u32, y: u32, height: u32, width: u32, mode: DiagonalMode) -> Vec<(u32, u32)> {
    let mut moves = Vec::new();
    let diagonal = x + y == SPECIAL_SUM;
    if !diagonal || mode == DiagonalMode::Augment {
        moves.extend((0..x).map(|x2| (x2, y)));
        moves.extend((0..y).map(|y2| (x, y2)));
    }
    if diagonal {
        if y >= 1 && x + 1 < height {
            moves.push((x + 1, y - 1));
        }
        if x >= 1 && y + 1 < width {
            moves.push((x - 1, y + 1));
        }
    }
    moves
}

fn cell_name(x: u32, y: u32) -> String {
    format!("{x}_{y}")
}

/// Triangle-piece graph covering every cell of a `height x width` board,
/// node `x * width + y`, starting at the origin.
pub fn keep_nim_board_graph(height: u32, width: u32, mode: DiagonalMode) -> LoopyGraph {
    let mut names = Vec::new();
    let mut options = Vec::new();
    for x in 0..height {
        for y in 0..width {
            names.push(cell_name(x, y));
            options.push(
                keep_nim_moves(x, y, height, width, mode)
                    .into_iter()
                    .map(|(a, b)| (a * width + b) as usize)
                    .collect(),
            );
        }
    }
    LoopyGraph::new(names, options, 0)
}

/// Triangle-piece graph of the cells reachable from `(x, y)` on `board`.
pub fn keep_nim_graph(x: u32, y: u32, board: &Board, mode: DiagonalMode) -> LoopyGraph {
    assert!(board.contains(x, y), "cell outside the board");
    let mut index: HashMap<(u32, u32), usize> = HashMap::from([((x, y), 0)]);
    let mut cells = vec![(x, y)];
    let mut queue = VecDeque::from([(x, y)]);
    let mut edges: Vec<Vec<(u32, u32)>> = Vec::new();
    while let Some((a, b)) = queue.pop_front() {
        let moves = keep_nim_moves(a, b, board.height, board.width, mode);
        for &m in &moves {
            index.entry(m).or_insert_with(|| {
                cells.push(m);
                queue.push_back(m);
                cells.len() - 1
            });
        }
        edges.push(moves);
    }
    let names = cells.iter().map(|&(a, b)| cell_name(a, b)).collect();
    let options = edges
        .into_iter()
        .map(|ms| ms.into_iter().map(|m| index[&m]).collect())
        .collect();
    LoopyGraph::new(names, options, 0)
}

/// Builds square-piece positions as entailing trees, sharing subtrees
/// between cells.
#[derive(Debug, Default)]
pub struct TurnKeepNim {
    memo: HashMap<(u32, u32), TreeId>,
}

impl TurnKeepNim {
    pub fn new() -> Self {
        Self::default()
    }

    /// Options of `(x, y)` are the cells one move away; landing on the
    /// special diagonal additionally offers the check `{inf | cell}` (and
    /// its conjugate for Right), which lets the mover continue.
    pub fn tree(&mut self, forest: &mut Forest, x: u32, y: u32) -> TreeId {
        if let Some(&t) = self.memo.get(&(x, y)) {
            return t;
        }
        let t = if x == 0 && y == 0 {
            forest.zero()
        } else {
            let targets = (0..x).map(|a| (a, y)).chain((0..y).map(|b| (x, b)));
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (a, b) in targets.collect::<Vec<_>>() {
                let cell = self.tree(forest, a, b);
                left.push(cell);
                right.push(cell);
                if a + b == SPECIAL_SUM {
                    let check = forest.left_check([cell]);
                    right.push(forest.conjugate(check));
                    left.push(check);
                }
            }
            forest.node(left, right)
        };
        self.memo.insert((x, y), t);
        t
    }
}

pub fn turn_keep_nim_tree(forest: &mut Forest, x: u32, y: u32) -> TreeId {
    TurnKeepNim::new().tree(forest, x, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ruleset {
    Nim,
    KeepNim,
    TurnKeepNim,
}

impl fmt::Display for Ruleset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ruleset::Nim => "nim",
            Ruleset::KeepNim => "keep-nim",
            Ruleset::TurnKeepNim => "turn-keep-nim",
        })
    }
}

/// Values of every cell `(x, y)` with `x <= max_x`, `y <= max_y`, computed by
/// the solvers rather than the closed forms. Triangle cells live on a board
/// exactly covering the table.
pub fn solve_table(
    ruleset: Ruleset,
    max_x: u32,
    max_y: u32,
    mode: DiagonalMode,
) -> Result<Vec<Vec<GameValue>>, SolveError> {
    let (h, w) = (max_x + 1, max_y + 1);
    match ruleset {
        Ruleset::Nim => Ok((0..h)
            .map(|x| (0..w).map(|y| round_value(x, y)).collect())
            .collect()),
        Ruleset::KeepNim => {
            let g = keep_nim_board_graph(h, w, mode);
            let values = smith_values(&g)?;
            Ok((0..h)
                .map(|x| {
                    (0..w)
                        .map(|y| values[(x * w + y) as usize].to_game_value())
                        .collect()
                })
                .collect())
        }
        Ruleset::TurnKeepNim => {
            let mut forest = Forest::new();
            let mut builder = TurnKeepNim::new();
            let mut solver = EntailingSolver::new();
            let mut rows = Vec::new();
            for x in 0..h {
                let mut row = Vec::new();
                for y in 0..w {
                    let t = builder.tree(&mut forest, x, y);
                    let class = solver.classify(&mut forest, t);
                    row.push(class.to_game_value().ok_or_else(|| {
                        SolveError::OutsideFragment(format!("turn-keep-nim cell ({x}, {y})"))
                    })?);
                }
                rows.push(row);
            }
            Ok(rows)
        }
    }
}

/// Lays out a value table as a right-aligned grid with row and column
/// headers.
pub fn format_table(rows: &[Vec<GameValue>]) -> String {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(|v| v.to_string()).collect())
        .collect();
    let ncols = cells.first().map_or(0, Vec::len);
    let width = cells
        .iter()
        .flatten()
        .map(String::len)
        .chain((0..ncols).map(|c| c.to_string().len()))
        .max()
        .unwrap_or(1);
    let label = rows.len().saturating_sub(1).to_string().len().max(3);
    let mut out = format!("{:>label$} |", "x\\y");
    for c in 0..ncols {
        out.push_str(&format!(" {c:>width$}"));
    }
    out.push('\n');
    out.push_str(&"-".repeat(label + 2 + ncols * (width + 1)));
    out.push('\n');
    for (r, row) in cells.iter().enumerate() {
        out.push_str(&format!("{r:>label$} |"));
        for cell in row {
            out.push_str(&format!(" {cell:>width$}"));
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoardEvaluation {
    /// One value per piece, in board order.
    pub values: Vec<GameValue>,
    pub total: GameValue,
    pub outcome: Outcome,
}

impl BoardEvaluation {
    /// Successive partial sums: each line folds the first two terms.
    pub fn reduction_chain(&self) -> Vec<String> {
        let render = |terms: &[GameValue]| {
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" + ")
            }
        };
        let mut chain = vec![render(&self.values)];
        let mut terms = self.values.clone();
        while terms.len() > 1 {
            let head = terms[0].add(&terms[1]);
            terms.splice(0..2, [head]);
            chain.push(render(&terms));
        }
        chain
    }
}

/// Values each piece (closed forms; in replace mode triangles are solved on
/// the actual board), adds them, and reads off the outcome.
pub fn evaluate_board(board: &Board, mode: DiagonalMode) -> Result<BoardEvaluation, SolveError> {
    board.check_bounds()?;
    let replace_values = if mode == DiagonalMode::Replace
        && board.pieces.iter().any(|p| p.kind == PieceKind::Triangle)
    {
        Some(smith_values(&keep_nim_board_graph(
            board.height,
            board.width,
            mode,
        ))?)
    } else {
        None
    };
    let values: Vec<GameValue> = board
        .pieces
        .iter()
        .map(|p| match p.kind {
            PieceKind::Round => round_value(p.x, p.y),
            PieceKind::Triangle => match &replace_values {
                Some(vals) => vals[(p.x * board.width + p.y) as usize].to_game_value(),
                None => keep_nim_value(p.x, p.y),
            },
            PieceKind::Square => turn_keep_nim_value(p.x, p.y),
        })
        .collect();
    let total = crate::value::sum_values(&values);
    let outcome = SumValue::from_values(&values).outcome();
    Ok(BoardEvaluation {
        values,
        total,
        outcome,
    })
}

/// The position drawn in the introduction of the three-piece game.
pub fn example_board() -> Board {
    use PieceKind::*;
    Board::new(8, 8)
        .with_piece(Round, 1, 2)
        .with_piece(Round, 5, 4)
        .with_piece(Triangle, 3, 3)
        .with_piece(Triangle, 1, 6)
        .with_piece(Square, 6, 3)
        .with_piece(Square, 5, 4)
}

/// Classification of a square-piece cell through its tree.
pub fn classify_turn_keep_nim(x: u32, y: u32) -> ImsClass {
    let mut forest = Forest::new();
    let t = turn_keep_nim_tree(&mut forest, x, y);
    EntailingSolver::new().classify(&mut forest, t)
}
