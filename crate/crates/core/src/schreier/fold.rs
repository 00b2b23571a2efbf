//! Coset tables of word-generated subgroups by folding a bouquet of loops.

use super::{precondition, RootedLabeledGraph};
use crate::error::{structural, Result};
use crate::word::Word;

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.0[hi] = lo;
        true
    }
}

/// Builds the coset table of the subgroup of `F(S)` generated by `words`.
///
/// The bouquet of one loop per word at the base vertex is folded until every
/// vertex has at most one incoming and one outgoing edge per label. The
/// result is a coset table only when the subgroup has finite index, i.e. the
/// folded graph is complete; otherwise a precondition error is returned.
pub fn subgroup_from_words(rank: usize, words: &[Word]) -> Result<RootedLabeledGraph> {
    if let Some(w) = words.iter().find(|w| w.min_rank() > rank) {
        return Err(structural(format!("word {w} uses generators beyond rank {rank}")));
    }
    let mut vertices = 1;
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    for w in words {
        let n = w.len();
        if n == 0 {
            continue;
        }
        let mut prev = 0;
        for (i, l) in w.letters().iter().enumerate() {
            let next = if i + 1 == n {
                0
            } else {
                vertices += 1;
                vertices - 1
            };
            if l.inverse {
                edges.push((next, l.generator, prev));
            } else {
                edges.push((prev, l.generator, next));
            }
            prev = next;
        }
    }

    let mut uf = UnionFind((0..vertices).collect());
    loop {
        for e in edges.iter_mut() {
            *e = (uf.find(e.0), e.1, uf.find(e.2));
        }
        edges.sort_unstable();
        edges.dedup();
        let mut merged = false;
        // two s-edges leaving the same vertex
        for pair in edges.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if a.0 == b.0 && a.1 == b.1 {
                merged |= uf.union(a.2, b.2);
            }
        }
        // two s-edges entering the same vertex
        let mut by_target: Vec<(usize, usize, usize)> = edges.iter().map(|&(u, s, v)| (v, s, u)).collect();
        by_target.sort_unstable();
        for pair in by_target.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if a.0 == b.0 && a.1 == b.1 {
                merged |= uf.union(a.2, b.2);
            }
        }
        if !merged {
            break;
        }
    }

    let mut number = vec![usize::MAX; vertices];
    let mut count = 0;
    for v in 0..vertices {
        let r = uf.find(v);
        if number[r] == usize::MAX {
            number[r] = count;
            count += 1;
        }
    }
    let mut perms = vec![vec![usize::MAX; count]; rank];
    for &(u, s, v) in &edges {
        perms[s][number[u]] = number[v];
    }
    if perms.iter().any(|p| p.contains(&usize::MAX)) {
        return Err(precondition("generated subgroup has infinite index"));
    }
    let root = number[uf.find(0)];
    RootedLabeledGraph::connected(root, perms)
}
