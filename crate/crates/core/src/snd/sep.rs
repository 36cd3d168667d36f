//! Violated-cut separation for the {0,2} cut LP.
//!
//! Capacities are scaled to a common denominator L, so a cut W is violated
//! when its crossing capacity is below 2L.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Sub};

use num_traits::Zero;

use super::SndRequirements;

pub(crate) trait Int: Clone + Ord + Add<Output = Self> + Sub<Output = Self> + Zero + From<i64> {}
impl<T: Clone + Ord + Add<Output = T> + Sub<Output = T> + Zero + From<i64>> Int for T {}

/// Up to `limit` violated cuts by full enumeration of the sets containing
/// vertex 0, most violated first.
pub(crate) fn enumerate_violated<T: Int>(
    req: &SndRequirements,
    cap: &[(usize, usize, T)],
    two_l: &T,
    limit: usize,
) -> Vec<u64> {
    let n = req.n;
    let mut found: Vec<(T, u64)> = Vec::new();
    for rest in 0..(1u64 << (n - 1)) - 1 {
        let w = rest << 1 | 1;
        if !req.splits(w) {
            continue;
        }
        let mut cross = T::zero();
        for (u, v, c) in cap {
            if (w >> u ^ w >> v) & 1 == 1 {
                cross = cross + c.clone();
            }
        }
        if cross < *two_l {
            found.push((cross, w));
        }
    }
    found.sort();
    found.into_iter().take(limit).map(|(_, w)| w).collect()
}

/// Violated cuts from minimum s–t cuts between the first vertex of every
/// group and each other member.
pub(crate) fn mincut_violated<T: Int>(req: &SndRequirements, cap: &[(usize, usize, T)], two_l: &T) -> Vec<u64> {
    let n = req.n;
    let mut c = vec![vec![T::zero(); n]; n];
    for (u, v, x) in cap {
        c[*u][*v] = c[*u][*v].clone() + x.clone();
        c[*v][*u] = c[*v][*u].clone() + x.clone();
    }
    let mut out = Vec::new();
    for g in &req.groups {
        for &t in &g[1..] {
            let (flow, side) = max_flow(&c, g[0], t, two_l);
            if flow < *two_l && !out.contains(&side) {
                out.push(side);
            }
        }
    }
    out
}

/// Edmonds–Karp, stopping once the flow reaches `enough`. Returns the flow
/// and the source side of a minimum cut (valid when flow < enough).
fn max_flow<T: Int>(cap: &[Vec<T>], s: usize, t: usize, enough: &T) -> (T, u64) {
    let n = cap.len();
    let mut res: Vec<Vec<T>> = cap.to_vec();
    let mut flow = T::zero();
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for v in 0..n {
                if prev[v] == usize::MAX && res[u][v] > T::zero() {
                    prev[v] = u;
                    q.push_back(v);
                }
            }
        }
        if prev[t] == usize::MAX || flow >= *enough {
            let side = (0..n).filter(|&v| prev[v] != usize::MAX).fold(0u64, |m, v| m | 1 << v);
            return (flow, side);
        }
        let mut b = res[prev[t]][t].clone();
        let mut v = t;
        while v != s {
            let u = prev[v];
            if res[u][v] < b {
                b = res[u][v].clone();
            }
            v = u;
        }
        let mut v = t;
        while v != s {
            let u = prev[v];
            res[u][v] = res[u][v].clone() - b.clone();
            res[v][u] = res[v][u].clone() + b.clone();
            v = u;
        }
        flow = flow + b;
    }
}
