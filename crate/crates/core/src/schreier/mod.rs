//! Finite-index subgroups of the free group as rooted `S`-labeled graphs.
//!
//! A coset table with one permutation per generator is the Schreier graph
//! `Sch(H\F(S), S)`: vertex `v` has an `s`-edge to `perms[s][v]`. The root is the
//! identity coset `H`. The free group acts on rooted graphs by moving the
//! root along the *inward* edge labeled `s`, so a word `w` sends the root `Hg`
//! to `Hg w⁻¹` (see [`RootedLabeledGraph::root_move`]).
//!
//! Rooted labeled graphs are rigid, so a breadth-first renumbering from the
//! root in the label order `s₁ < s₁⁻¹ < s₂ < …` is a complete isomorphism
//! invariant.

mod ball;
mod enumerate;
mod fold;

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{structural, Error, Result};
use crate::word::{Letter, Word};

pub use ball::{ball, ball_doubly_rooted};
pub use enumerate::{enumerate_index_n, DEFAULT_MAX_INDEX};
pub use fold::subgroup_from_words;

/// A rooted graph with one bijective edge relation per generator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootedLabeledGraph {
    rank: usize,
    size: usize,
    root: usize,
    perms: Vec<Vec<usize>>,
    inverse: Vec<Vec<usize>>,
}

/// A rooted labeled graph with a second distinguished vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DoublyRootedLabeledGraph {
    pub graph: RootedLabeledGraph,
    pub second: usize,
}

/// Byte encoding of a rooted (or doubly rooted, or ball) isomorphism class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }
}

const TABLE_TAG: u8 = b'T';
const SECOND_ROOT_TAG: u8 = b'D';

/// JSON table format: `{"rank": k, "size": n, "root": 0, "perms": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableFile {
    pub rank: usize,
    pub size: usize,
    pub root: usize,
    pub perms: Vec<Vec<usize>>,
}

impl RootedLabeledGraph {
    /// Validates that every `perms[s]` is a bijection of `{0..size-1}`.
    /// Connectivity is checked separately; see [`Self::is_connected`].
    pub fn new(root: usize, perms: Vec<Vec<usize>>) -> Result<Self> {
        let rank = perms.len();
        let size = perms.first().map_or(1, Vec::len);
        if size == 0 {
            return Err(structural("a labeled graph needs at least one vertex"));
        }
        if root >= size {
            return Err(structural(format!("root {root} outside {size} vertices")));
        }
        let mut inverse = Vec::with_capacity(rank);
        for (s, p) in perms.iter().enumerate() {
            if p.len() != size {
                return Err(structural(format!("label {s} has {} entries, expected {size}", p.len())));
            }
            let mut q = vec![usize::MAX; size];
            for (v, &t) in p.iter().enumerate() {
                if t >= size || q[t] != usize::MAX {
                    return Err(structural(format!("label {s} is not a bijection")));
                }
                q[t] = v;
            }
            inverse.push(q);
        }
        Ok(Self { rank, size, root, perms, inverse })
    }

    /// Validated constructor that also requires a transitive action.
    pub fn connected(root: usize, perms: Vec<Vec<usize>>) -> Result<Self> {
        let g = Self::new(root, perms)?;
        if !g.is_connected() {
            return Err(structural("coset table is not connected"));
        }
        Ok(g)
    }

    /// The one-vertex rose: the table of `F(S)` itself.
    pub fn rose(rank: usize) -> Self {
        Self::new(0, vec![vec![0]; rank]).expect("valid")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    /// Endpoint of the edge leaving `v` along `l` (an `s⁻¹` step follows an
    /// `s`-edge backwards).
    #[inline]
    pub fn step(&self, v: usize, l: Letter) -> usize {
        if l.inverse {
            self.inverse[l.generator][v]
        } else {
            self.perms[l.generator][v]
        }
    }

    /// Right coset action: the vertex `Hg·w`, reading `w` left to right.
    pub fn trace(&self, v: usize, w: &Word) -> usize {
        w.letters().iter().fold(v, |x, &l| self.step(x, l))
    }

    /// Same graph with a different root.
    pub fn with_root(&self, root: usize) -> Self {
        assert!(root < self.size, "root outside graph");
        Self { root, ..self.clone() }
    }

    /// The free-group action on rooted graphs: each letter `s` moves the root
    /// along the inward `s`-edge, last letter first, so the root `Hg` goes to
    /// `Hg w⁻¹` and `root_move(w1·w2) = root_move(w1) ∘ root_move(w2)`.
    pub fn root_move(&self, w: &Word) -> Self {
        assert!(w.min_rank() <= self.rank, "word uses unknown generators");
        let root = w.letters().iter().rev().fold(self.root, |v, &l| self.step(v, l.inverse()));
        self.with_root(root)
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_numbering(&[self.root]).1 == self.size
    }

    /// Numbers vertices in breadth-first order from `starts`, scanning letters
    /// in label order. Returns the new index of each vertex (or `usize::MAX`)
    /// and the number reached.
    fn bfs_numbering(&self, starts: &[usize]) -> (Vec<usize>, usize) {
        let mut number = vec![usize::MAX; self.size];
        let mut queue = VecDeque::new();
        let mut next = 0;
        for &s in starts {
            if number[s] == usize::MAX {
                number[s] = next;
                next += 1;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for l in Letter::all(self.rank) {
                let t = self.step(v, l);
                if number[t] == usize::MAX {
                    number[t] = next;
                    next += 1;
                    queue.push_back(t);
                }
            }
        }
        (number, next)
    }

    fn relabel(&self, number: &[usize]) -> Self {
        let mut perms = vec![vec![0; self.size]; self.rank];
        for (s, p) in self.perms.iter().enumerate() {
            for v in 0..self.size {
                perms[s][number[v]] = number[p[v]];
            }
        }
        Self::new(number[self.root], perms).expect("relabeling preserves bijections")
    }

    /// The isomorphic copy numbered breadth-first from the root (root = 0),
    /// with the renumbering map old → new.
    pub fn canonical_with_map(&self) -> Result<(Self, Vec<usize>)> {
        let (number, reached) = self.bfs_numbering(&[self.root]);
        if reached != self.size {
            return Err(structural("canonical form of a disconnected graph"));
        }
        Ok((self.relabel(&number), number))
    }

    pub fn canonical(&self) -> Result<Self> {
        Ok(self.canonical_with_map()?.0)
    }

    pub fn is_canonical(&self) -> bool {
        let (number, reached) = self.bfs_numbering(&[self.root]);
        reached == self.size && number.iter().enumerate().all(|(i, &n)| i == n)
    }

    fn encode_numbered(&self, out: &mut Vec<u8>) {
        out.push(TABLE_TAG);
        out.extend_from_slice(&(self.rank as u32).to_le_bytes());
        out.extend_from_slice(&(self.size as u32).to_le_bytes());
        for v in 0..self.size {
            for p in &self.perms {
                out.extend_from_slice(&(p[v] as u32).to_le_bytes());
            }
        }
    }

    /// Canonical encoding of the rooted isomorphism class.
    pub fn canonical_form(&self) -> Result<CanonicalForm> {
        let canon = self.canonical()?;
        let mut bytes = Vec::with_capacity(9 + 4 * self.size * self.rank);
        canon.encode_numbered(&mut bytes);
        Ok(CanonicalForm(bytes))
    }

    /// Reconstructs a rooted graph from [`Self::canonical_form`] output.
    pub fn from_canonical_form(form: &CanonicalForm) -> Result<Self> {
        let b = form.as_bytes();
        let word = |i: usize| -> Result<usize> {
            b.get(i..i + 4)
                .map(|s| u32::from_le_bytes(s.try_into().unwrap()) as usize)
                .ok_or_else(|| structural("truncated canonical form"))
        };
        if b.first() != Some(&TABLE_TAG) {
            return Err(structural("not a table encoding"));
        }
        let (rank, size) = (word(1)?, word(5)?);
        if b.len() != 9 + 4 * rank * size {
            return Err(structural("canonical form has trailing or missing bytes"));
        }
        let mut perms = vec![vec![0; size]; rank];
        for v in 0..size {
            for (s, p) in perms.iter_mut().enumerate() {
                p[v] = word(9 + 4 * (v * rank + s))?;
            }
        }
        Self::connected(0, perms)
    }

    /// Schreier generators of the root stabilizer `H`, one per non-tree edge
    /// of the breadth-first spanning tree, each freely reduced.
    pub fn stabilizer_generators(&self) -> Result<Vec<Word>> {
        let tree = self.tree_words()?;
        let mut gens = Vec::new();
        let (number, _) = self.bfs_numbering(&[self.root]);
        let mut order: Vec<usize> = (0..self.size).collect();
        order.sort_by_key(|&v| number[v]);
        for v in order {
            for s in 0..self.rank {
                let t = self.perms[s][v];
                let w = tree[v].concat(&Word::letter(Letter::gen(s))).concat(&tree[t].inverse());
                if !w.is_empty() {
                    gens.push(w);
                }
            }
        }
        Ok(gens)
    }

    /// For every vertex `v`, the tree word `t(v)` with `trace(root, t(v)) = v`.
    pub fn tree_words(&self) -> Result<Vec<Word>> {
        let mut words: Vec<Option<Word>> = vec![None; self.size];
        words[self.root] = Some(Word::empty());
        let mut queue = VecDeque::from([self.root]);
        while let Some(v) = queue.pop_front() {
            for l in Letter::all(self.rank) {
                let t = self.step(v, l);
                if words[t].is_none() {
                    let w = words[v].as_ref().unwrap().concat(&Word::letter(l));
                    words[t] = Some(w);
                    queue.push_back(t);
                }
            }
        }
        words.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| structural("graph is not connected"))
    }

    pub fn to_file(&self) -> TableFile {
        TableFile { rank: self.rank, size: self.size, root: self.root, perms: self.perms.clone() }
    }

    pub fn from_file(file: &TableFile) -> Result<Self> {
        if file.perms.len() != file.rank {
            return Err(structural(format!("rank {} but {} permutations", file.rank, file.perms.len())));
        }
        if file.perms.iter().any(|p| p.len() != file.size) {
            return Err(structural("permutation length differs from size"));
        }
        if file.rank == 0 && file.size != 1 {
            return Err(structural("a rank-0 table has exactly one vertex"));
        }
        Self::connected(file.root, file.perms.clone())
    }

    /// Graphviz rendering with edge labels `s1, s2, …` and the root highlighted.
    pub fn to_dot(&self) -> String {
        self.dot_with_marks(&[self.root], "schreier")
    }

    fn dot_with_marks(&self, roots: &[usize], name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph {name} {{");
        let _ = writeln!(out, "  node [shape=circle];");
        for v in 0..self.size {
            if let Some(i) = roots.iter().position(|&r| r == v) {
                let colour = if i == 0 { "gold" } else { "lightblue" };
                let _ = writeln!(out, "  {v} [style=filled, fillcolor={colour}, penwidth=2];");
            } else {
                let _ = writeln!(out, "  {v};");
            }
        }
        for v in 0..self.size {
            for (s, p) in self.perms.iter().enumerate() {
                let _ = writeln!(out, "  {v} -> {} [label=\"s{}\"];", p[v], s + 1);
            }
        }
        out.push_str("}\n");
        out
    }
}

/// The named view `H ↦ (Sch(H\F(S), S), H)`. A coset table already is its
/// rooted Schreier graph, so this is the identity on data.
pub fn phi(table: &RootedLabeledGraph) -> &RootedLabeledGraph {
    table
}

/// `ρ`-style root swap: the same graph rooted at the second root, with the
/// old root as second root.
pub fn swap_roots(g: &DoublyRootedLabeledGraph) -> DoublyRootedLabeledGraph {
    DoublyRootedLabeledGraph { graph: g.graph.with_root(g.second), second: g.graph.root }
}

impl DoublyRootedLabeledGraph {
    pub fn new(graph: RootedLabeledGraph, second: usize) -> Result<Self> {
        if second >= graph.size {
            return Err(structural(format!("second root {second} outside graph")));
        }
        Ok(Self { graph, second })
    }

    /// `Φ′(Hg) = (Sch(H\F(S), S), H, Hg)` with `Hg` reached by tracing `g` from the root.
    pub fn phi_prime(table: &RootedLabeledGraph, g: &Word) -> Self {
        Self { second: table.trace(table.root, g), graph: table.clone() }
    }

    pub fn canonical_form(&self) -> Result<CanonicalForm> {
        let (canon, number) = self.graph.canonical_with_map()?;
        let mut bytes = Vec::new();
        canon.encode_numbered(&mut bytes);
        bytes.push(SECOND_ROOT_TAG);
        bytes.extend_from_slice(&(number[self.second] as u32).to_le_bytes());
        Ok(CanonicalForm(bytes))
    }

    /// Canonical rooted graph together with the second root's canonical index.
    pub fn canonical(&self) -> Result<(RootedLabeledGraph, usize)> {
        let (canon, number) = self.graph.canonical_with_map()?;
        Ok((canon, number[self.second]))
    }

    pub fn to_dot(&self) -> String {
        self.graph.dot_with_marks(&[self.graph.root, self.second], "schreier")
    }
}

impl From<&RootedLabeledGraph> for TableFile {
    fn from(g: &RootedLabeledGraph) -> Self {
        g.to_file()
    }
}

/// True when `w` lies in the root stabilizer, i.e. `H·w = H`.
pub fn stabilizes_root(g: &RootedLabeledGraph, w: &Word) -> bool {
    g.trace(g.root, w) == g.root
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::word_reduce;

    const A: Letter = Letter::gen(0);
    const B: Letter = Letter::gen(1);

    fn parity_graph() -> RootedLabeledGraph {
        // a swaps the two cosets, b fixes both
        RootedLabeledGraph::connected(0, vec![vec![1, 0], vec![0, 1]]).unwrap()
    }

    #[test]
    fn rose_has_fixed_one_vertex_encoding() {
        let f = RootedLabeledGraph::rose(2).canonical_form().unwrap();
        assert_eq!(f.as_bytes(), &[b'T', 2, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(RootedLabeledGraph::from_canonical_form(&f).unwrap(), RootedLabeledGraph::rose(2));
    }

    #[test]
    fn relabeled_copy_has_same_form() {
        let g = RootedLabeledGraph::connected(0, vec![vec![1, 2, 0, 3], vec![0, 3, 2, 1]]).unwrap();
        // conjugate by the vertex relabeling σ = (0 2 3 1)
        let sigma = [2, 0, 3, 1];
        let mut perms = vec![vec![0; 4]; 2];
        for s in 0..2 {
            for v in 0..4 {
                perms[s][sigma[v]] = sigma[g.perms()[s][v]];
            }
        }
        let h = RootedLabeledGraph::connected(sigma[0], perms).unwrap();
        assert_ne!(g, h);
        assert_eq!(g.canonical_form().unwrap(), h.canonical_form().unwrap());
    }

    #[test]
    fn disconnected_graph_has_no_form() {
        let g = RootedLabeledGraph::new(0, vec![vec![0, 1], vec![0, 1]]).unwrap();
        assert!(g.canonical_form().is_err());
        assert!(RootedLabeledGraph::connected(0, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn non_bijection_is_rejected() {
        assert!(RootedLabeledGraph::new(0, vec![vec![1, 1]]).is_err());
        assert!(RootedLabeledGraph::new(3, vec![vec![1, 0]]).is_err());
    }

    #[test]
    fn parity_graph_stabilizer() {
        let g = parity_graph();
        assert_eq!(phi(&g), &g);
        let gens = g.stabilizer_generators().unwrap();
        let a2 = word_reduce(2, &[A, A]).unwrap();
        let aba = word_reduce(2, &[A, B, A.inverse()]).unwrap();
        let b = Word::letter(B);
        assert_eq!(gens.len(), 3);
        for w in [&a2, &b, &aba] {
            assert!(gens.contains(w), "missing {w}");
        }
        for w in &gens {
            assert!(stabilizes_root(&g, w));
            assert_eq!(g.root_move(w).root(), g.root());
        }
        let rose_gens = RootedLabeledGraph::rose(2).stabilizer_generators().unwrap();
        assert_eq!(rose_gens, vec![Word::letter(A), Word::letter(B)]);
    }

    #[test]
    fn root_move_follows_inward_edges() {
        let g = RootedLabeledGraph::connected(0, vec![vec![1, 2, 0], vec![0, 1, 2]]).unwrap();
        // the inward a-edge at 0 comes from 2
        assert_eq!(g.root_move(&Word::letter(A)).root(), 2);
        assert_eq!(g.root_move(&Word::empty()), g);
        let there = g.root_move(&Word::letter(A));
        assert_eq!(there.root_move(&Word::letter(A.inverse())), g);
    }

    #[test]
    fn table_file_validation() {
        let file = TableFile { rank: 2, size: 2, root: 0, perms: vec![vec![1, 0], vec![0, 1]] };
        assert_eq!(RootedLabeledGraph::from_file(&file).unwrap(), parity_graph());
        let bad = TableFile { rank: 3, ..file.clone() };
        assert!(RootedLabeledGraph::from_file(&bad).is_err());
        let json = serde_json::to_string(&parity_graph().to_file()).unwrap();
        assert_eq!(json, r#"{"rank":2,"size":2,"root":0,"perms":[[1,0],[0,1]]}"#);
    }

    #[test]
    fn dot_export_labels_edges() {
        let dot = parity_graph().to_dot();
        assert!(dot.contains("0 -> 1 [label=\"s1\"]"));
        assert!(dot.contains("1 -> 1 [label=\"s2\"]"));
        assert!(dot.contains("fillcolor=gold"));
    }
}
