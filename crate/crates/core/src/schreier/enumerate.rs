//! Low-index enumeration of subgroups of `F(S)`.

use super::RootedLabeledGraph;
use crate::error::{Error, Result};

/// Default bound on the index accepted by [`enumerate_index_n`].
pub const DEFAULT_MAX_INDEX: usize = 6;

/// Rough cap on the size of the search tree, `n · (n!)^(rank-1)`.
const MAX_ESTIMATED_COUNT: f64 = 5.0e6;

struct Partial {
    rank: usize,
    target: usize,
    used: usize,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

const UNSET: usize = usize::MAX;

impl Partial {
    /// First undefined entry in scan order: vertex ascending, then letters
    /// `s₁, s₁⁻¹, s₂, …`. Scanning in this order makes each completed table
    /// equal to its own breadth-first canonical numbering.
    fn first_gap(&self) -> Option<(usize, usize, bool)> {
        for v in 0..self.used {
            for s in 0..self.rank {
                if self.out[s][v] == UNSET {
                    return Some((v, s, false));
                }
                if self.inn[s][v] == UNSET {
                    return Some((v, s, true));
                }
            }
        }
        None
    }

    fn search(&mut self, found: &mut Vec<RootedLabeledGraph>) {
        let Some((v, s, backwards)) = self.first_gap() else {
            if self.used == self.target {
                let perms = self.out.iter().map(|p| p[..self.target].to_vec()).collect();
                found.push(RootedLabeledGraph::new(0, perms).expect("complete table"));
            }
            return;
        };
        let fresh = self.used < self.target;
        let limit = self.used + usize::from(fresh);
        for t in 0..limit {
            // forward: v --s--> t needs t free of incoming s;
            // backward: t --s--> v needs t free of outgoing s.
            let free = if backwards { self.out[s][t] == UNSET } else { self.inn[s][t] == UNSET };
            if !free {
                continue;
            }
            let opens_vertex = t == self.used;
            if opens_vertex {
                self.used += 1;
            }
            let (from, to) = if backwards { (t, v) } else { (v, t) };
            self.out[s][from] = to;
            self.inn[s][to] = from;
            self.search(found);
            self.out[s][from] = UNSET;
            self.inn[s][to] = UNSET;
            if opens_vertex {
                self.used -= 1;
            }
        }
    }
}

/// One canonical coset table per subgroup of index `n` in the free group of
/// the given rank, sorted.
pub fn enumerate_index_n(rank: usize, n: usize, max_index: usize) -> Result<Vec<RootedLabeledGraph>> {
    if n == 0 {
        return Err(Error::Precondition("index must be positive".into()));
    }
    if n > max_index {
        return Err(Error::Resource(format!("index {n} exceeds the enumeration bound {max_index}")));
    }
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    let estimate = n as f64 * factorial.powi(rank.saturating_sub(1) as i32);
    if estimate > MAX_ESTIMATED_COUNT {
        return Err(Error::Resource(format!("rank {rank}, index {n} would produce about {estimate:.0} subgroups")));
    }
    if rank == 0 {
        return Ok(if n == 1 { vec![RootedLabeledGraph::rose(0)] } else { Vec::new() });
    }
    let mut partial =
        Partial { rank, target: n, used: 1, out: vec![vec![UNSET; n]; rank], inn: vec![vec![UNSET; n]; rank] };
    let mut found = Vec::new();
    partial.search(&mut found);
    found.sort();
    Ok(found)
}
