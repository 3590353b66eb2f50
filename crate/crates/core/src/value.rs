//! Canonical values of the sum fragment and the closed-form outcome rule.

use std::collections::BTreeSet;
use std::fmt;

/// Minimum excluded nonnegative integer.
pub fn mex<I: IntoIterator<Item = u32>>(values: I) -> u32 {
    let seen: BTreeSet<u32> = values.into_iter().collect();
    let mut m = 0;
    while seen.contains(&m) {
        m += 1;
    }
    m
}

/// Nim-sum of two heap sizes.
#[inline]
pub fn xor(a: u32, b: u32) -> u32 {
    a ^ b
}

/// `k ⊕ A`, elementwise.
pub fn shift_set(k: u32, set: &BTreeSet<u32>) -> BTreeSet<u32> {
    set.iter().map(|&a| a ^ k).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    /// Left wins whoever starts.
    L,
    /// Right wins whoever starts.
    R,
    /// Next player wins.
    N,
    /// Previous player wins.
    P,
    /// Draw under best play.
    D,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Outcome::L => "L",
            Outcome::R => "R",
            Outcome::N => "N",
            Outcome::P => "P",
            Outcome::D => "D",
        };
        f.write_str(s)
    }
}

/// A canonical value up to equivalence in sums of loopy positions and
/// special-moon entailing positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GameValue {
    Nimber(u32),
    Moon,
    /// Special moon of `n`; the witness set of options is irrelevant to sums.
    SpecialMoon(u32),
    /// `∞(A)`: a loopy position that never settles on a finite value, with
    /// the finite values of its options.
    Inf(BTreeSet<u32>),
}

impl GameValue {
    pub const ZERO: GameValue = GameValue::Nimber(0);

    pub fn inf<I: IntoIterator<Item = u32>>(set: I) -> GameValue {
        GameValue::Inf(set.into_iter().collect())
    }

    /// Table of sums. The moon absorbs everything; two infinities collapse to
    /// `∞(∅)`; otherwise nim-sums of the distinguished integers.
    pub fn add(&self, other: &GameValue) -> GameValue {
        use GameValue::*;
        match (self, other) {
            (Moon, _) | (_, Moon) => Moon,
            (Nimber(a), Nimber(b)) => Nimber(a ^ b),
            (Nimber(k), SpecialMoon(n)) | (SpecialMoon(n), Nimber(k)) => SpecialMoon(n ^ k),
            (SpecialMoon(a), SpecialMoon(b)) => SpecialMoon(a ^ b),
            (Nimber(k), Inf(set)) | (Inf(set), Nimber(k)) => Inf(shift_set(*k, set)),
            (SpecialMoon(n), Inf(set)) | (Inf(set), SpecialMoon(n)) => Inf(shift_set(*n, set)),
            (Inf(_), Inf(_)) => Inf(BTreeSet::new()),
        }
    }

    /// Outcome of this value standing alone.
    pub fn outcome(&self) -> Outcome {
        SumValue::from_values(std::slice::from_ref(self)).outcome()
    }
}

impl std::ops::Add for &GameValue {
    type Output = GameValue;

    fn add(self, rhs: &GameValue) -> GameValue {
        GameValue::add(self, rhs)
    }
}

/// Left fold of [`GameValue::add`]; the empty sum is `0`.
pub fn sum_values<'a, I: IntoIterator<Item = &'a GameValue>>(values: I) -> GameValue {
    values
        .into_iter()
        .fold(GameValue::ZERO, |acc, v| acc.add(v))
}

/// A sum kept in its decomposed form
/// `b·☾ + *k_1 + … + *k_s + sp(n_1) + … + sp(n_t) + ∞(B_1) + … + ∞(B_u)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SumValue {
    pub moons: usize,
    pub nimbers: Vec<u32>,
    pub special_moons: Vec<u32>,
    pub infs: Vec<BTreeSet<u32>>,
}

impl SumValue {
    pub fn from_values(values: &[GameValue]) -> SumValue {
        let mut sum = SumValue::default();
        for v in values {
            sum.push(v.clone());
        }
        sum
    }

    pub fn push(&mut self, value: GameValue) {
        match value {
            GameValue::Nimber(k) => self.nimbers.push(k),
            GameValue::Moon => self.moons += 1,
            GameValue::SpecialMoon(n) => self.special_moons.push(n),
            GameValue::Inf(set) => self.infs.push(set),
        }
    }

    /// The components as a flat list of values, moons first.
    pub fn components(&self) -> Vec<GameValue> {
        let mut out = vec![GameValue::Moon; self.moons];
        out.extend(self.nimbers.iter().map(|&k| GameValue::Nimber(k)));
        out.extend(self.special_moons.iter().map(|&n| GameValue::SpecialMoon(n)));
        out.extend(self.infs.iter().cloned().map(GameValue::Inf));
        out
    }

    /// Outcome of the whole sum, decided case by case on the moon count, the
    /// number of infinities, and the number of special moons.
    pub fn outcome(&self) -> Outcome {
        if self.moons >= 1 {
            return Outcome::N;
        }
        let nim = self.nimbers.iter().fold(0, |a, &k| a ^ k);
        match self.infs.len() {
            0 if !self.special_moons.is_empty() => Outcome::N,
            0 if nim == 0 => Outcome::P,
            0 => Outcome::N,
            1 => {
                let total = self.special_moons.iter().fold(nim, |a, &n| a ^ n);
                if self.infs[0].contains(&total) {
                    Outcome::N
                } else {
                    Outcome::D
                }
            }
            _ => Outcome::D,
        }
    }
}

/// Outcome of a decomposed sum.
pub fn outcome_of_sum(sum: &SumValue) -> Outcome {
    sum.outcome()
}
