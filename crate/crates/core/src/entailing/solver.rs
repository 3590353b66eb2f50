use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::forest::{Forest, TreeId, TreeNode};
use crate::value::{mex, GameValue, Outcome};

/// Classification of an impartial entailing position against the fragment
/// of nimbers, the moon and special moons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ImsClass {
    Nimber(u32),
    Moon,
    SpecialMoon(u32),
    OutsideFragment,
}

impl ImsClass {
    pub fn to_game_value(self) -> Option<GameValue> {
        match self {
            ImsClass::Nimber(k) => Some(GameValue::Nimber(k)),
            ImsClass::Moon => Some(GameValue::Moon),
            ImsClass::SpecialMoon(n) => Some(GameValue::SpecialMoon(n)),
            ImsClass::OutsideFragment => None,
        }
    }
}

impl fmt::Display for ImsClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_game_value() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("outside"),
        }
    }
}

/// Value in the plain entailing theory: a nimber or the moon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntailingValue {
    Nimber(u32),
    Moon,
}

/// Nimbers protected by a position's Left checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Protected {
    /// `inf` is itself a Left option, so every nimber is protected.
    pub all: bool,
    /// Protected heap sizes up to the bound, when `all` is false.
    pub nimbers: BTreeSet<u32>,
}

/// How literally the special-moon shape is matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchMode {
    /// Option subtrees need only classify as the right nimber, and several
    /// checks `{inf | x}` are accepted when every `x` is the same nimber.
    #[default]
    ValueLevel,
    /// Exactly one check, whose target and nimber witnesses are canonical
    /// `*n` positions.
    Strict,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Player {
    Left,
    Right,
}

impl Player {
    fn other(self) -> Player {
        match self {
            Player::Left => Player::Right,
            Player::Right => Player::Left,
        }
    }
}

/// Evaluates impartial entailing positions. Memo tables live in the solver,
/// so one instance should be reused across related queries.
#[derive(Debug, Default)]
pub struct EntailingSolver {
    bound: Option<u32>,
    mode: MatchMode,
    winners: HashMap<(TreeId, u32, bool), bool>,
    entailing: HashMap<TreeId, bool>,
    values: HashMap<TreeId, EntailingValue>,
    classes: HashMap<TreeId, ImsClass>,
}

impl EntailingSolver {
    pub fn new() -> Self {
        Self::default()
    }

    /// Uses a fixed heap bound instead of the per-position default.
    pub fn with_bound(mut self, bound: u32) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn with_mode(mut self, mode: MatchMode) -> Self {
        self.mode = mode;
        self
    }

    /// Heap bound used for `id`: distinct subpositions plus two unless fixed.
    pub fn bound_for(&self, forest: &Forest, id: TreeId) -> u32 {
        self.bound
            .unwrap_or_else(|| forest.subposition_count(id) as u32 + 2)
    }

    pub fn is_impartial_entailing(&mut self, forest: &mut Forest, id: TreeId) -> bool {
        if let Some(&b) = self.entailing.get(&id) {
            return b;
        }
        let b = forest.is_impartial_entailing(id);
        self.entailing.insert(id, b);
        b
    }

    /// Left wins `tree + *heap` with `mover` to play.
    fn left_wins(&mut self, forest: &Forest, tree: TreeId, heap: u32, mover: Player) -> bool {
        match forest.get(tree) {
            TreeNode::Inf => return true,
            TreeNode::CoInf => return false,
            TreeNode::Pos { .. } => {}
        }
        let key = (tree, heap, mover == Player::Left);
        if let Some(&w) = self.winners.get(&key) {
            return w;
        }
        let mover_wins_if = |left_wins: bool| left_wins == (mover == Player::Left);
        let options = match mover {
            Player::Left => forest.left(tree),
            Player::Right => forest.right(tree),
        };
        let mut mover_wins = false;
        for &o in options {
            if mover_wins_if(self.left_wins(forest, o, heap, mover.other())) {
                mover_wins = true;
                break;
            }
        }
        if !mover_wins {
            for h in 0..heap {
                if mover_wins_if(self.left_wins(forest, tree, h, mover.other())) {
                    mover_wins = true;
                    break;
                }
            }
        }
        let result = mover_wins == (mover == Player::Left);
        self.winners.insert(key, result);
        result
    }

    /// Outcome of `tree + *heap` by exhaustive minimax. A component at `inf`
    /// is an immediate Left win and at `~inf` an immediate Right win; a
    /// player without moves loses.
    pub fn outcome_with_nimber(&mut self, forest: &Forest, tree: TreeId, heap: u32) -> Outcome {
        let left_first = self.left_wins(forest, tree, heap, Player::Left);
        let right_first = !self.left_wins(forest, tree, heap, Player::Right);
        match (left_first, right_first) {
            (true, false) => Outcome::L,
            (false, true) => Outcome::R,
            (true, true) => Outcome::N,
            (false, false) => Outcome::P,
        }
    }

    /// Nimber values among the Left options.
    pub fn immediate_nimbers(&mut self, forest: &mut Forest, id: TreeId) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        for o in forest.left(id).to_vec() {
            if !self.is_impartial_entailing(forest, o) {
                continue;
            }
            if let EntailingValue::Nimber(k) = self.entailing_value(forest, o) {
                out.insert(k);
            }
        }
        out
    }

    /// Heaps `*n`, `n <= bound`, such that some Left check `c` makes
    /// `c + *n` a Left win.
    pub fn protected_nimbers(&mut self, forest: &Forest, id: TreeId, bound: u32) -> Protected {
        if forest.left(id).contains(&forest.inf()) {
            return Protected {
                all: true,
                nimbers: BTreeSet::new(),
            };
        }
        let checks: Vec<TreeId> = forest
            .left(id)
            .iter()
            .copied()
            .filter(|&o| forest.is_left_check(o))
            .collect();
        let nimbers = (0..=bound)
            .filter(|&n| {
                checks
                    .iter()
                    .any(|&c| self.outcome_with_nimber(forest, c, n) == Outcome::L)
            })
            .collect();
        Protected {
            all: false,
            nimbers,
        }
    }

    /// Moon when immediate and protected nimbers together cover every heap up
    /// to the bound, otherwise the nimber of their mex.
    pub fn entailing_value(&mut self, forest: &mut Forest, id: TreeId) -> EntailingValue {
        if let Some(&v) = self.values.get(&id) {
            return v;
        }
        let bound = self.bound_for(forest, id);
        let immediate = self.immediate_nimbers(forest, id);
        let protected = self.protected_nimbers(forest, id, bound);
        let value = if protected.all {
            EntailingValue::Moon
        } else {
            let union: BTreeSet<u32> = immediate.union(&protected.nimbers).copied().collect();
            let m = mex(union.iter().copied());
            if m > bound {
                EntailingValue::Moon
            } else {
                EntailingValue::Nimber(m)
            }
        };
        self.values.insert(id, value);
        value
    }

    /// Places an impartial entailing position in the fragment, or reports
    /// that it falls outside.
    pub fn classify(&mut self, forest: &mut Forest, id: TreeId) -> ImsClass {
        if let Some(&c) = self.classes.get(&id) {
            return c;
        }
        let class = if !self.is_impartial_entailing(forest, id) {
            ImsClass::OutsideFragment
        } else {
            match self.entailing_value(forest, id) {
                EntailingValue::Nimber(k) => ImsClass::Nimber(k),
                EntailingValue::Moon => {
                    if let Some(n) = self.match_special_moon(forest, id) {
                        ImsClass::SpecialMoon(n)
                    } else if id == forest.moon() {
                        ImsClass::Moon
                    } else {
                        ImsClass::OutsideFragment
                    }
                }
            }
        };
        self.classes.insert(id, class);
        class
    }

    fn match_special_moon(&mut self, forest: &mut Forest, id: TreeId) -> Option<u32> {
        let inf = forest.inf();
        let left = forest.left(id).to_vec();
        let (checks, witnesses): (Vec<TreeId>, Vec<TreeId>) =
            left.into_iter().partition(|&o| forest.is_left_check(o));
        if checks.is_empty() || witnesses.is_empty() {
            return None;
        }
        if self.mode == MatchMode::Strict && checks.len() != 1 {
            return None;
        }
        let mut target = None;
        for c in checks {
            if forest.left(c) != [inf] || forest.right(c).len() != 1 {
                return None;
            }
            let x = forest.right(c)[0];
            let n = self.nimber_class(forest, x)?;
            match target {
                None => target = Some(n),
                Some(t) if t == n => {}
                Some(_) => return None,
            }
        }
        let n = target?;
        let mut has_n = false;
        for w in witnesses {
            match self.nimber_class(forest, w) {
                Some(k) => has_n |= k == n,
                None => {
                    if !matches!(self.classify(forest, w), ImsClass::SpecialMoon(_)) {
                        return None;
                    }
                }
            }
        }
        has_n.then_some(n)
    }

    /// `Some(k)` if the position counts as the nimber `*k` under the current
    /// match mode.
    fn nimber_class(&mut self, forest: &mut Forest, id: TreeId) -> Option<u32> {
        match self.classify(forest, id) {
            ImsClass::Nimber(k) => match self.mode {
                MatchMode::ValueLevel => Some(k),
                MatchMode::Strict => (forest.nimber(k) == id).then_some(k),
            },
            _ => None,
        }
    }
}
