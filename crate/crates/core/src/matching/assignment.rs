//! Hungarian method with potentials, O(n³), on exact rationals.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::Matching;
use crate::error::{Error, Result};
use crate::instance::Rational;

/// Square assignment; `costs[i][j]` is the cost of left `i` to right `j`.
/// The returned matching holds `(i, j)` pairs, sorted by `i`.
pub fn min_cost_bipartite_perfect_matching(costs: &[Vec<Rational>]) -> Result<Matching> {
    let n = costs.len();
    if costs.iter().any(|row| row.len() != n) {
        return Err(Error::SizeMismatch);
    }
    let opt: Vec<Vec<Option<Rational>>> =
        costs.iter().map(|row| row.iter().map(|&c| Some(c)).collect()).collect();
    let assign = min_cost_assignment(&opt)?;
    Ok(Matching { edges: assign.into_iter().enumerate().collect() })
}

/// Assignment with forbidden cells (`None`). Returns `col_of[row]`.
pub fn min_cost_assignment(costs: &[Vec<Option<Rational>>]) -> Result<Vec<usize>> {
    let n = costs.len();
    if costs.iter().any(|row| row.len() != n) {
        return Err(Error::SizeMismatch);
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    // Forbidden cells get a cost larger than any full assignment of real cells.
    let mut big = Rational::from_integer(1);
    for c in costs.iter().flatten().flatten() {
        big += c.abs();
    }
    big *= Rational::from_integer(n as i64 + 1);
    let cost = |i: usize, j: usize| costs[i][j].unwrap_or(big);

    // 1-indexed rows/columns; p[j] is the row assigned to column j.
    let mut u = vec![Rational::zero(); n + 1];
    let mut v = vec![Rational::zero(); n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv: Vec<Option<Rational>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta: Option<Rational> = None;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if minv[j].is_none_or(|m| cur < m) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let m = minv[j].unwrap();
                if delta.is_none_or(|d| m < d) {
                    delta = Some(m);
                    j1 = j;
                }
            }
            let delta = delta.unwrap();
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else if let Some(m) = minv[j].as_mut() {
                    *m -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut col_of = vec![0usize; n];
    for j in 1..=n {
        col_of[p[j] - 1] = j - 1;
    }
    if col_of.iter().enumerate().any(|(i, &j)| costs[i][j].is_none()) {
        return Err(Error::NoPerfectMatching);
    }
    Ok(col_of)
}
