//! Undirected minimum 2-factor through the degree gadget.
//!
//! Vertex v gets two copies v₀, v₁. Edge e = uv gets two nodes eᵤ, eᵥ joined
//! by a free edge; eᵤ connects to both copies of u at cost w(e), eᵥ to both
//! copies of v at cost 0. In a perfect matching either eᵤeᵥ is matched (e
//! unused) or both gadget nodes take a copy (e used), so every vertex ends
//! with degree exactly two. The edge of a size-2 group gets a second gadget
//! when pair 2-cycles are allowed.

use alloc::vec;
use alloc::vec::Vec;

use super::TwoFactorRequest;
use crate::cover::{Cycle, CycleCover};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::instance::Rational;
use crate::matching::min_weight_perfect_matching;

pub fn min_weight_2factor(req: &TwoFactorRequest<'_>) -> Result<CycleCover> {
    let inst = req.inst;
    let n = inst.n();
    if req.directed {
        return Err(Error::Precondition("undirected 2-factor on a directed request".into()));
    }
    let zero = Rational::from_integer(0);
    let mut slots: Vec<(usize, usize)> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            slots.push((u, v));
            if req.allow_pair_2cycles && inst.is_pair(u, v) {
                slots.push((u, v));
            }
        }
    }
    let base = 2 * n;
    let mut g = WeightedGraph::new(base + 2 * slots.len());
    for (k, &(u, v)) in slots.iter().enumerate() {
        let eu = base + 2 * k;
        let ev = eu + 1;
        let w = inst.w(u, v);
        g.add_edge(eu, ev, zero);
        g.add_edge(2 * u, eu, w);
        g.add_edge(2 * u + 1, eu, w);
        g.add_edge(2 * v, ev, zero);
        g.add_edge(2 * v + 1, ev, zero);
    }
    let m = min_weight_perfect_matching(&g).map_err(|e| match e {
        Error::NoPerfectMatching | Error::OddVertexCount => Error::NoTwoFactor,
        other => other,
    })?;
    let mate = m.mate(g.n);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, &(u, v)) in slots.iter().enumerate() {
        if mate[base + 2 * k] < base {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    Ok(cycles_from_adjacency(&adj))
}

/// Splits a 2-regular multigraph into cycles, each starting at its smallest
/// vertex and heading to its smaller neighbor.
pub(crate) fn cycles_from_adjacency(adj: &[Vec<usize>]) -> CycleCover {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        debug_assert_eq!(adj[s].len(), 2);
        seen[s] = true;
        let mut seq = vec![s];
        let mut prev = s;
        let mut cur = *adj[s].iter().min().unwrap();
        while !seen[cur] {
            seen[cur] = true;
            seq.push(cur);
            let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
            prev = cur;
            cur = next;
        }
        cycles.push(Cycle::new(seq));
    }
    CycleCover::new(cycles, false)
}
