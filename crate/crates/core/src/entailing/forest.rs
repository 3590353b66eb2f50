use std::collections::{BTreeSet, HashMap};

/// Handle to a position interned in a [`Forest`]. Two handles from the same
/// forest are equal exactly when the positions are structurally identical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeId(u32);

impl TreeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TreeNode {
    /// Immediate win for Left.
    Inf,
    /// Immediate win for Right.
    CoInf,
    /// `{ left | right }`, each side a sorted set of distinct positions.
    Pos {
        left: Box<[TreeId]>,
        right: Box<[TreeId]>,
    },
}

/// Hash-consed store of entailing positions. Shared subpositions are stored
/// once, so positions with exponentially many paths stay small.
#[derive(Debug, Clone)]
pub struct Forest {
    nodes: Vec<TreeNode>,
    index: HashMap<TreeNode, TreeId>,
    conj: HashMap<TreeId, TreeId>,
}

impl Default for Forest {
    fn default() -> Self {
        Self::new()
    }
}

impl Forest {
    pub fn new() -> Forest {
        let mut forest = Forest {
            nodes: Vec::new(),
            index: HashMap::new(),
            conj: HashMap::new(),
        };
        let inf = forest.intern(TreeNode::Inf);
        let coinf = forest.intern(TreeNode::CoInf);
        forest.conj.insert(inf, coinf);
        forest.conj.insert(coinf, inf);
        forest
    }

    fn intern(&mut self, node: TreeNode) -> TreeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = TreeId(self.nodes.len() as u32);
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn get(&self, id: TreeId) -> &TreeNode {
        &self.nodes[id.index()]
    }

    pub fn inf(&self) -> TreeId {
        TreeId(0)
    }

    pub fn coinf(&self) -> TreeId {
        TreeId(1)
    }

    pub fn is_infinity(&self, id: TreeId) -> bool {
        id == self.inf() || id == self.coinf()
    }

    /// `{ left | right }` with both sides normalized to sets.
    pub fn node<L, R>(&mut self, left: L, right: R) -> TreeId
    where
        L: IntoIterator<Item = TreeId>,
        R: IntoIterator<Item = TreeId>,
    {
        let left: BTreeSet<TreeId> = left.into_iter().collect();
        let right: BTreeSet<TreeId> = right.into_iter().collect();
        self.intern(TreeNode::Pos {
            left: left.into_iter().collect(),
            right: right.into_iter().collect(),
        })
    }

    pub fn left(&self, id: TreeId) -> &[TreeId] {
        match self.get(id) {
            TreeNode::Pos { left, .. } => left,
            _ => &[],
        }
    }

    pub fn right(&self, id: TreeId) -> &[TreeId] {
        match self.get(id) {
            TreeNode::Pos { right, .. } => right,
            _ => &[],
        }
    }

    /// `{~inf | inf}`, the position that behaves like the empty game.
    pub fn zero(&mut self) -> TreeId {
        let (inf, coinf) = (self.inf(), self.coinf());
        self.node([coinf], [inf])
    }

    /// `{inf | ~inf}`.
    pub fn moon(&mut self) -> TreeId {
        let (inf, coinf) = (self.inf(), self.coinf());
        self.node([inf], [coinf])
    }

    /// Canonical nimber `*k` built on top of [`Forest::zero`].
    pub fn nimber(&mut self, k: u32) -> TreeId {
        let mut heaps = vec![self.zero()];
        for _ in 1..=k {
            let next = self.node(heaps.clone(), heaps.clone());
            heaps.push(next);
        }
        heaps[k as usize]
    }

    /// Left check `{inf | targets}`.
    pub fn left_check<I: IntoIterator<Item = TreeId>>(&mut self, targets: I) -> TreeId {
        let inf = self.inf();
        self.node([inf], targets)
    }

    /// Special moon `{ {inf | x}, A | A, {x | ~inf} }`; the caller supplies
    /// the distinguished option `x` and the witness set `A`.
    pub fn special_moon_with(&mut self, x: TreeId, witnesses: &[TreeId]) -> TreeId {
        let check = self.left_check([x]);
        let co_check = self.conjugate(check);
        let right: Vec<TreeId> = witnesses.iter().map(|&w| self.conjugate(w)).collect();
        self.node(
            witnesses.iter().copied().chain([check]),
            right.into_iter().chain([co_check]),
        )
    }

    /// Special moon of `n` with witness set `{*n}`.
    pub fn special_moon(&mut self, n: u32) -> TreeId {
        let star = self.nimber(n);
        self.special_moon_with(star, &[star])
    }

    /// Swaps the roles of the players throughout the position.
    pub fn conjugate(&mut self, id: TreeId) -> TreeId {
        if let Some(&c) = self.conj.get(&id) {
            return c;
        }
        let (left, right) = match self.get(id) {
            TreeNode::Pos { left, right } => (left.clone(), right.clone()),
            _ => unreachable!("infinities are seeded in the conjugate table"),
        };
        let new_left: Vec<TreeId> = right.iter().map(|&r| self.conjugate(r)).collect();
        let new_right: Vec<TreeId> = left.iter().map(|&l| self.conjugate(l)).collect();
        let c = self.node(new_left, new_right);
        self.conj.insert(id, c);
        self.conj.insert(c, id);
        c
    }

    pub fn is_left_check(&self, id: TreeId) -> bool {
        self.left(id).contains(&self.inf())
    }

    pub fn is_right_check(&self, id: TreeId) -> bool {
        self.right(id).contains(&self.coinf())
    }

    pub fn is_quiet(&self, id: TreeId) -> bool {
        !self.is_infinity(id) && !self.is_left_check(id) && !self.is_right_check(id)
    }

    /// Not an infinity, and the Right options are exactly the conjugates of
    /// the Left options.
    pub fn is_symmetric(&mut self, id: TreeId) -> bool {
        if self.is_infinity(id) {
            return false;
        }
        let left = self.left(id).to_vec();
        let mirrored: BTreeSet<TreeId> = left.into_iter().map(|l| self.conjugate(l)).collect();
        mirrored.iter().copied().eq(self.right(id).iter().copied())
    }

    /// Symmetric, and every quiet follower is symmetric as well.
    pub fn is_impartial_entailing(&mut self, id: TreeId) -> bool {
        if !self.is_symmetric(id) {
            return false;
        }
        let quiet: Vec<TreeId> = self
            .followers(id)
            .into_iter()
            .filter(|&f| self.is_quiet(f))
            .collect();
        quiet.into_iter().all(|f| self.is_symmetric(f))
    }

    /// Every position reachable from `id` by any sequence of Left or Right
    /// moves, `id` included, in first-visit order.
    pub fn followers(&self, id: TreeId) -> Vec<TreeId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut order = Vec::new();
        let mut stack = vec![id];
        seen[id.index()] = true;
        while let Some(t) = stack.pop() {
            order.push(t);
            for &c in self.left(t).iter().chain(self.right(t)) {
                if !seen[c.index()] {
                    seen[c.index()] = true;
                    stack.push(c);
                }
            }
        }
        order
    }

    /// Number of distinct positions reachable from `id`, infinities included.
    pub fn subposition_count(&self, id: TreeId) -> usize {
        self.followers(id).len()
    }
}
