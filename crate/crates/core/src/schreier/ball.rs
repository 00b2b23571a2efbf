//! Finite neighborhoods of roots, as canonical forms.
//!
//! The `r`-ball contains every vertex within undirected distance `r` of a
//! root and every edge that some path of length at most `r` from a root
//! traverses, i.e. edges with an endpoint closer than `r`. Half-edges at the
//! boundary whose edge is not in the ball are encoded as [`MISSING`].

use std::collections::VecDeque;

use super::{CanonicalForm, DoublyRootedLabeledGraph, RootedLabeledGraph};
use crate::word::Letter;

const BALL_TAG: u8 = b'B';
const MISSING: u32 = u32::MAX;

fn encode(graph: &RootedLabeledGraph, roots: &[usize], radius: usize) -> CanonicalForm {
    let n = graph.size();
    let mut number = vec![usize::MAX; n];
    let mut dist = vec![usize::MAX; n];
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    let mut root_ids = Vec::with_capacity(roots.len());
    for &r in roots {
        if number[r] == usize::MAX {
            number[r] = order.len();
            dist[r] = 0;
            order.push(r);
            queue.push_back(r);
        }
        root_ids.push(number[r] as u32);
    }
    while let Some(v) = queue.pop_front() {
        if dist[v] >= radius {
            continue;
        }
        for l in Letter::all(graph.rank()) {
            let t = graph.step(v, l);
            if number[t] == usize::MAX {
                number[t] = order.len();
                dist[t] = dist[v] + 1;
                order.push(t);
                queue.push_back(t);
            }
        }
    }

    let mut bytes = vec![BALL_TAG];
    bytes.extend_from_slice(&(graph.rank() as u32).to_le_bytes());
    bytes.extend_from_slice(&(order.len() as u32).to_le_bytes());
    bytes.extend_from_slice(&(root_ids.len() as u32).to_le_bytes());
    for id in root_ids {
        bytes.extend_from_slice(&id.to_le_bytes());
    }
    for &v in &order {
        for p in graph.perms() {
            let t = p[v];
            let known = number[t] != usize::MAX && dist[v].min(dist[t]) < radius;
            let code = if known { number[t] as u32 } else { MISSING };
            bytes.extend_from_slice(&code.to_le_bytes());
        }
    }
    CanonicalForm(bytes)
}

/// Canonical form of the `r`-ball around the root.
pub fn ball(graph: &RootedLabeledGraph, radius: usize) -> CanonicalForm {
    encode(graph, &[graph.root()], radius)
}

/// Canonical form of the union of the `r`-balls around both roots, roots in order.
pub fn ball_doubly_rooted(graph: &DoublyRootedLabeledGraph, radius: usize) -> CanonicalForm {
    encode(&graph.graph, &[graph.graph.root(), graph.second], radius)
}
