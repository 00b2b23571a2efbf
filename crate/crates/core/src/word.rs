//! Reduced words in the free group `F(S)` on generators `0..rank`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{structural, Result};

/// A generator or its formal inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub const fn gen(generator: usize) -> Self {
        Self { generator, inverse: false }
    }

    pub const fn inv(generator: usize) -> Self {
        Self { generator, inverse: true }
    }

    pub fn inverse(self) -> Self {
        Self { generator: self.generator, inverse: !self.inverse }
    }

    /// Signed, 1-based encoding: generator `i` is `i + 1`, its inverse `-(i + 1)`.
    pub fn to_signed(self) -> i64 {
        let v = self.generator as i64 + 1;
        if self.inverse {
            -v
        } else {
            v
        }
    }

    pub fn from_signed(v: i64) -> Result<Self> {
        if v == 0 {
            return Err(structural("0 is not a signed generator index"));
        }
        let generator = (v.unsigned_abs() - 1) as usize;
        Ok(Self { generator, inverse: v < 0 })
    }

    /// Position in the fixed label order `s₁ < s₁⁻¹ < s₂ < s₂⁻¹ < …`.
    pub fn rank_order(self) -> usize {
        2 * self.generator + usize::from(self.inverse)
    }

    /// All letters of `S ∪ S⁻¹` in label order.
    pub fn all(rank: usize) -> impl Iterator<Item = Letter> {
        (0..rank).flat_map(|g| [Letter::gen(g), Letter::inv(g)])
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = if self.generator < 26 {
            char::from(b'a' + self.generator as u8).to_string()
        } else {
            format!("s{}", self.generator + 1)
        };
        if self.inverse {
            write!(f, "{name}⁻¹")
        } else {
            write!(f, "{name}")
        }
    }
}

/// A freely reduced word: no letter is adjacent to its inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<i64>", try_from = "Vec<i64>")]
pub struct Word {
    letters: Vec<Letter>,
}

/// Freely reduces `raw`, rejecting generators outside `0..rank`.
pub fn word_reduce(rank: usize, raw: &[Letter]) -> Result<Word> {
    if let Some(bad) = raw.iter().find(|l| l.generator >= rank) {
        return Err(structural(format!("generator index {} outside alphabet of rank {rank}", bad.generator)));
    }
    Ok(Word { letters: reduce_letters(raw.iter().copied()) })
}

fn reduce_letters(raw: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in raw {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn letter(l: Letter) -> Self {
        Self { letters: vec![l] }
    }

    pub fn from_signed(rank: usize, signed: &[i64]) -> Result<Self> {
        let raw = signed.iter().map(|&v| Letter::from_signed(v)).collect::<Result<Vec<_>>>()?;
        word_reduce(rank, &raw)
    }

    pub fn to_signed(&self) -> Vec<i64> {
        self.letters.iter().map(|l| l.to_signed()).collect()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index used plus one.
    pub fn min_rank(&self) -> usize {
        self.letters.iter().map(|l| l.generator + 1).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        Self { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// The reduced product `self · other`.
    pub fn concat(&self, other: &Word) -> Self {
        Self { letters: reduce_letters(self.letters.iter().chain(&other.letters).copied()) }
    }

    /// `self · middle · self⁻¹`
    pub fn conjugate(&self, middle: &Word) -> Self {
        self.concat(middle).concat(&self.inverse())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "ε");
        }
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl From<Word> for Vec<i64> {
    fn from(w: Word) -> Self {
        w.to_signed()
    }
}

impl TryFrom<Vec<i64>> for Word {
    type Error = crate::Error;

    fn try_from(v: Vec<i64>) -> Result<Self> {
        let raw = v.iter().map(|&x| Letter::from_signed(x)).collect::<Result<Vec<_>>>()?;
        Ok(Word { letters: reduce_letters(raw) })
    }
}

fn check_permutations(perms: &[Vec<usize>]) -> Result<usize> {
    let n = perms.first().map_or(0, Vec::len);
    for (s, p) in perms.iter().enumerate() {
        let mut seen = vec![false; n];
        if p.len() != n || !p.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true)) {
            return Err(structural(format!("generator {s} is not a permutation of {n} points")));
        }
    }
    Ok(n)
}

/// Image of `x` under `w`, with generator `s` acting by `perms[s]`.
///
/// Letters are applied last-first, so `act_word(w1·w2, x) = act_word(w1, act_word(w2, x))`.
pub fn act_word(perms: &[Vec<usize>], w: &Word, x: usize) -> Result<usize> {
    let n = check_permutations(perms)?;
    if x >= n {
        return Err(structural(format!("point {x} outside a set of size {n}")));
    }
    if w.min_rank() > perms.len() {
        return Err(structural("word uses a generator without a permutation"));
    }
    let inverses: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            let mut q = vec![0; n];
            for (i, &v) in p.iter().enumerate() {
                q[v] = i;
            }
            q
        })
        .collect();
    Ok(w.letters.iter().rev().fold(x, |y, l| if l.inverse { inverses[l.generator][y] } else { perms[l.generator][y] }))
}
