//! Matching primitives: minimum-weight perfect matching and maximum
//! cardinality matching (blossom), min-cost assignment (Hungarian) and
//! minimal edge covers.
//!
//! Edges are processed in lexicographic order, so ties always resolve the
//! same way for the same input.

mod assignment;
mod blossom;

pub use assignment::{min_cost_assignment, min_cost_bipartite_perfect_matching};
pub use blossom::max_weight_matching;

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::graph::{ekey, WeightedGraph};
use crate::instance::Rational;

/// An edge set in which no two edges share a vertex, stored as sorted
/// `(min, max)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    pub edges: Vec<(usize, usize)>,
}

impl Matching {
    fn from_mate(mate: &[usize]) -> Self {
        let mut edges: Vec<(usize, usize)> = mate
            .iter()
            .enumerate()
            .filter(|&(v, &m)| m != usize::MAX && v < m)
            .map(|(v, &m)| (v, m))
            .collect();
        edges.sort_unstable();
        Matching { edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `mate[v]`, or `usize::MAX` for exposed vertices.
    pub fn mate(&self, n: usize) -> Vec<usize> {
        let mut mate = vec![usize::MAX; n];
        for &(u, v) in &self.edges {
            mate[u] = v;
            mate[v] = u;
        }
        mate
    }

    /// Total weight of the matched edges in `g`.
    pub fn weight(&self, g: &WeightedGraph) -> Rational {
        let mut total = Rational::from_integer(0);
        for &(u, v, w) in &g.edges {
            if self.edges.binary_search(&ekey(u, v)).is_ok() {
                total += w;
            }
        }
        total
    }
}

/// Inclusion-minimal edge cover.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeCoverSet {
    pub edges: Vec<(usize, usize)>,
}

/// Deduplicated, loop-free, lexicographically sorted copy of `g`'s edges;
/// for parallel edges the cheapest is kept.
fn normalized(g: &WeightedGraph) -> Vec<(usize, usize, Rational)> {
    let mut edges: Vec<(usize, usize, Rational)> = g
        .edges
        .iter()
        .filter(|e| e.0 != e.1)
        .map(|&(u, v, w)| {
            let (a, b) = ekey(u, v);
            (a, b, w)
        })
        .collect();
    edges.sort();
    edges.dedup_by(|later, first| later.0 == first.0 && later.1 == first.1);
    edges
}

/// Scales rational weights to integers by the lcm of their denominators.
pub(crate) fn scale_to_integers(ws: &[Rational]) -> Result<Vec<i64>> {
    let mut l: i64 = 1;
    for w in ws {
        l = l.lcm(w.denom());
    }
    ws.iter()
        .map(|w| w.numer().checked_mul(l / w.denom()).ok_or(Error::Overflow))
        .collect()
}

pub fn min_weight_perfect_matching(g: &WeightedGraph) -> Result<Matching> {
    if g.n % 2 == 1 {
        return Err(Error::OddVertexCount);
    }
    if g.n == 0 {
        return Ok(Matching::default());
    }
    let edges = normalized(g);
    let ws: Vec<Rational> = edges.iter().map(|e| e.2).collect();
    let scaled = scale_to_integers(&ws)?;
    let max = scaled.iter().copied().max().unwrap_or(0).checked_add(1).ok_or(Error::Overflow)?;
    let mut flipped = Vec::with_capacity(edges.len());
    for (e, &w) in edges.iter().zip(&scaled) {
        let c = (max - w).checked_mul(2).ok_or(Error::Overflow)?;
        flipped.push((e.0, e.1, c));
    }
    // Bound every dual sum well inside i64.
    if max.checked_mul(4 * g.n as i64 + 4).is_none() {
        return Err(Error::Overflow);
    }
    let mate = max_weight_matching(g.n, &flipped, true);
    if mate.contains(&usize::MAX) {
        return Err(Error::NoPerfectMatching);
    }
    Ok(Matching::from_mate(&mate))
}

pub fn max_cardinality_matching(g: &WeightedGraph) -> Matching {
    let edges: Vec<(usize, usize, i64)> = normalized(g).into_iter().map(|(u, v, _)| (u, v, 2)).collect();
    Matching::from_mate(&max_weight_matching(g.n, &edges, true))
}

/// Maximum matching extended by the first incident edge of every exposed
/// vertex, then stripped of redundant edges.
pub fn minimal_edge_cover(g: &WeightedGraph) -> Result<EdgeCoverSet> {
    let edges = normalized(g);
    let mut first = vec![usize::MAX; g.n];
    for (k, &(u, v, _)) in edges.iter().enumerate() {
        if first[u] == usize::MAX {
            first[u] = k;
        }
        if first[v] == usize::MAX {
            first[v] = k;
        }
    }
    if let Some(v) = first.iter().position(|&k| k == usize::MAX) {
        return Err(Error::IsolatedVertex(v));
    }
    let m = max_cardinality_matching(g);
    let mate = m.mate(g.n);
    let mut cover = m.edges.clone();
    for v in 0..g.n {
        if mate[v] == usize::MAX {
            let (a, b, _) = edges[first[v]];
            cover.push((a, b));
        }
    }
    cover.sort_unstable();
    cover.dedup();
    let mut deg = vec![0usize; g.n];
    for &(u, v) in &cover {
        deg[u] += 1;
        deg[v] += 1;
    }
    let mut kept = Vec::with_capacity(cover.len());
    for (u, v) in cover {
        if deg[u] > 1 && deg[v] > 1 {
            deg[u] -= 1;
            deg[v] -= 1;
        } else {
            kept.push((u, v));
        }
    }
    Ok(EdgeCoverSet { edges: kept })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn r(x: i64) -> Rational {
        Rational::from_integer(x)
    }

    fn brute_min_pm(n: usize, w: &dyn Fn(usize, usize) -> Option<Rational>) -> Option<Rational> {
        fn go(
            free: &mut Vec<bool>,
            n: usize,
            w: &dyn Fn(usize, usize) -> Option<Rational>,
        ) -> Option<Rational> {
            let Some(u) = (0..n).find(|&v| free[v]) else { return Some(r(0)) };
            free[u] = false;
            let mut best: Option<Rational> = None;
            for v in u + 1..n {
                if !free[v] {
                    continue;
                }
                if let Some(c) = w(u, v) {
                    free[v] = false;
                    if let Some(rest) = go(free, n, w) {
                        if best.is_none_or(|b| c + rest < b) {
                            best = Some(c + rest);
                        }
                    }
                    free[v] = true;
                }
            }
            free[u] = true;
            best
        }
        go(&mut vec![true; n], n, w)
    }

    fn brute_max_matching(n: usize, edges: &[(usize, usize)]) -> usize {
        fn go(u: usize, n: usize, adj: &[Vec<bool>], free: &mut Vec<bool>) -> usize {
            let Some(u) = (u..n).find(|&v| free[v]) else { return 0 };
            free[u] = false;
            let mut best = go(u + 1, n, adj, free);
            for v in u + 1..n {
                if free[v] && adj[u][v] {
                    free[v] = false;
                    best = best.max(1 + go(u + 1, n, adj, free));
                    free[v] = true;
                }
            }
            free[u] = true;
            best
        }
        let mut adj = vec![vec![false; n]; n];
        for &(u, v) in edges {
            adj[u][v] = true;
            adj[v][u] = true;
        }
        go(0, n, &adj, &mut vec![true; n])
    }

    #[test]
    fn single_edge() {
        let g = WeightedGraph::with_edges(2, vec![(0, 1, r(5))]);
        let m = min_weight_perfect_matching(&g).unwrap();
        assert_eq!(m.edges, vec![(0, 1)]);
        assert_eq!(m.weight(&g), r(5));
    }

    #[test]
    fn k4_cheap_pair() {
        let mut g = WeightedGraph::new(4);
        for u in 0..4 {
            for v in u + 1..4 {
                let w = if (u, v) == (0, 1) || (u, v) == (2, 3) { 1 } else { 2 };
                g.add_edge(u, v, r(w));
            }
        }
        let m = min_weight_perfect_matching(&g).unwrap();
        assert_eq!(m.edges, vec![(0, 1), (2, 3)]);
        assert_eq!(m.weight(&g), r(2));
    }

    #[test]
    fn odd_count_rejected() {
        let g = WeightedGraph::with_edges(3, vec![(0, 1, r(1))]);
        assert_eq!(min_weight_perfect_matching(&g), Err(Error::OddVertexCount));
    }

    #[test]
    fn missing_perfect_matching() {
        let g = WeightedGraph::unweighted(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(min_weight_perfect_matching(&g), Err(Error::NoPerfectMatching));
    }

    #[test]
    fn cardinality_small_cases() {
        assert!(max_cardinality_matching(&WeightedGraph::new(3)).is_empty());
        let path = WeightedGraph::unweighted(3, &[(0, 1), (1, 2)]);
        assert_eq!(max_cardinality_matching(&path).len(), 1);
    }

    #[test]
    fn edge_cover_examples() {
        let path = WeightedGraph::unweighted(3, &[(0, 1), (1, 2)]);
        assert_eq!(minimal_edge_cover(&path).unwrap().edges, vec![(0, 1), (1, 2)]);
        let mut k4 = WeightedGraph::new(4);
        for u in 0..4 {
            for v in u + 1..4 {
                k4.add_edge(u, v, r(1));
            }
        }
        assert_eq!(minimal_edge_cover(&k4).unwrap().edges.len(), 2);
        let iso = WeightedGraph::unweighted(3, &[(0, 1)]);
        assert_eq!(minimal_edge_cover(&iso), Err(Error::IsolatedVertex(2)));
    }

    #[test]
    fn fractional_weights_scale() {
        let g = WeightedGraph::with_edges(
            4,
            vec![
                (0, 1, Rational::new(1, 2)),
                (2, 3, Rational::new(1, 3)),
                (0, 2, Rational::new(1, 7)),
                (1, 3, Rational::new(1, 7)),
            ],
        );
        let m = min_weight_perfect_matching(&g).unwrap();
        assert_eq!(m.weight(&g), Rational::new(2, 7));
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn mwpm_matches_brute_force(
            half in 1usize..=5,
            ws in proptest::collection::vec(0i64..20, 45),
            holes in proptest::collection::vec(any::<bool>(), 45),
        ) {
            let n = 2 * half;
            let mut g = WeightedGraph::new(n);
            let mut mat = vec![vec![None; n]; n];
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    // keep a perfect matching alive through the (2i, 2i+1) edges
                    if !holes[k] || (u % 2 == 0 && v == u + 1) {
                        g.add_edge(u, v, r(ws[k]));
                        mat[u][v] = Some(r(ws[k]));
                    }
                    k += 1;
                }
            }
            let m = min_weight_perfect_matching(&g).unwrap();
            let mate = m.mate(n);
            prop_assert!(mate.iter().all(|&x| x != usize::MAX));
            let want = brute_min_pm(n, &|u, v| mat[u][v]).unwrap();
            prop_assert_eq!(m.weight(&g), want);
        }

        #[test]
        fn cardinality_matches_brute_force(
            mask in proptest::collection::vec(any::<bool>(), 21),
        ) {
            let n = 7;
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if mask[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            let g = WeightedGraph::unweighted(n, &edges);
            let m = max_cardinality_matching(&g);
            prop_assert_eq!(m.len(), brute_max_matching(n, &edges));
            let mut seen = vec![false; n];
            for &(u, v) in &m.edges {
                prop_assert!(!seen[u] && !seen[v]);
                seen[u] = true;
                seen[v] = true;
                prop_assert!(edges.contains(&(u, v)));
            }
        }

        #[test]
        fn edge_cover_is_minimal_and_sized(
            mask in proptest::collection::vec(any::<bool>(), 36),
        ) {
            let n = 9;
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if mask[k] || v == u + 1 {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            let g = WeightedGraph::unweighted(n, &edges);
            let c = minimal_edge_cover(&g).unwrap();
            let nu = brute_max_matching(n, &edges);
            prop_assert_eq!(c.edges.len(), n - nu);
            let mut deg = vec![0usize; n];
            for &(u, v) in &c.edges {
                deg[u] += 1;
                deg[v] += 1;
            }
            prop_assert!(deg.iter().all(|&d| d >= 1));
            for &(u, v) in &c.edges {
                prop_assert!(deg[u] == 1 || deg[v] == 1);
            }
            let once = deg.iter().filter(|&&d| d == 1).count();
            prop_assert!(2 * once >= n);
        }
    }
}
