//! Minimum 2-factor with at most one nonpure cycle and no weight-1 edge
//! from a weight-2 endpoint of that cycle into a pure cycle.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::open;
use crate::cover::{Cycle, CycleCover};
use crate::error::{Error, Result};
use crate::factor::{two_factor, TwoFactorRequest};
use crate::instance::{Instance, Rational, WeightClass};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialTwoFactor {
    pub cover: CycleCover,
    /// `pure[i]`: every edge of cycle i has weight 1.
    pub pure: Vec<bool>,
}

impl SpecialTwoFactor {
    pub fn from_cover(inst: &Instance, cover: CycleCover) -> Self {
        let pure = cover.cycles.iter().map(|c| is_pure(inst, &c.vertices)).collect();
        SpecialTwoFactor { cover, pure }
    }

    pub fn nonpure(&self) -> Option<usize> {
        self.pure.iter().position(|&p| !p)
    }

    pub fn weight(&self, inst: &Instance) -> Rational {
        self.cover.cycles.iter().map(|c| c.cost(inst)).sum()
    }

    /// e₂: number of weight-2 edges.
    pub fn e2(&self, inst: &Instance) -> usize {
        self.cover.two_edge_count(inst)
    }
}

pub(crate) fn is_pure(inst: &Instance, seq: &[usize]) -> bool {
    cycle_edges(seq).all(|(u, v)| !inst.is_two_edge(u, v))
}

pub(crate) fn cycle_edges(seq: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    let k = seq.len();
    (0..k).map(move |i| (seq[i], seq[(i + 1) % k]))
}

/// Computes a minimum (triangle-free when asked) 2-factor and fixes it.
pub fn special_2factor(inst: &Instance) -> Result<SpecialTwoFactor> {
    special_2factor_with(inst, false)
}

pub fn special_2factor_with(inst: &Instance, triangle_free: bool) -> Result<SpecialTwoFactor> {
    if inst.class() != WeightClass::OneTwo || !inst.is_symmetric() {
        return Err(Error::Precondition("the {1,2} algorithm needs a symmetric {1,2} instance".into()));
    }
    let mut req = TwoFactorRequest::new(inst);
    if triangle_free {
        req = req.triangle_free();
    }
    let f = make_special(inst, two_factor(&req)?);
    check_special(inst, &f).map_err(Error::Internal)?;
    Ok(f)
}

/// Applies the merge and exchange steps to a minimum 2-factor. Neither step
/// increases the weight and both reduce the number of cycles.
pub fn make_special(inst: &Instance, cover: CycleCover) -> SpecialTwoFactor {
    let mut seqs: Vec<Vec<usize>> = cover.cycles.into_iter().map(|c| c.vertices).collect();
    loop {
        let nonpure: Vec<usize> = (0..seqs.len()).filter(|&i| !is_pure(inst, &seqs[i])).collect();
        if nonpure.len() >= 2 {
            let (a, b) = (nonpure[0], nonpure[1]);
            let merged = merge_nonpure(inst, &seqs[a], &seqs[b]);
            seqs.remove(b);
            seqs[a] = merged;
            continue;
        }
        let Some(&ni) = nonpure.first() else { break };
        match find_exchange(inst, &seqs, ni) {
            Some((p, merged)) => {
                seqs[ni] = merged;
                seqs.remove(p);
            }
            None => break,
        }
    }
    SpecialTwoFactor::from_cover(inst, CycleCover::new(seqs.into_iter().map(Cycle::new).collect(), false))
}

fn two_edges(inst: &Instance, seq: &[usize]) -> Vec<(usize, usize)> {
    cycle_edges(seq).filter(|&(u, v)| inst.is_two_edge(u, v)).collect()
}

// Drop one 2-edge from each cycle and reconnect the two paths as cheaply as
// possible; removed weight is 4, so the total never grows.
fn merge_nonpure(inst: &Instance, a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut best: Option<(Rational, Vec<usize>)> = None;
    for (x1, y1) in two_edges(inst, a) {
        for (x2, y2) in two_edges(inst, b) {
            for (c, d) in [(x2, y2), (y2, x2)] {
                // y1 .. x1 then d .. c, closing c–y1
                let mut seq = open(a, x1, y1);
                seq.extend(open(b, c, d));
                let added = inst.w(x1, d) + inst.w(c, y1);
                if best.as_ref().is_none_or(|(w, _)| added < *w) {
                    best = Some((added, seq));
                }
            }
        }
    }
    best.expect("nonpure cycles have 2-edges").1
}

// A 2-edge xy of the nonpure cycle with y joined by a 1-edge to some z of a
// pure cycle with neighbour w: replace xy, wz by yz, xw.
fn find_exchange(inst: &Instance, seqs: &[Vec<usize>], ni: usize) -> Option<(usize, Vec<usize>)> {
    let one = Rational::from_integer(1);
    let nc = &seqs[ni];
    for (a, b) in two_edges(inst, nc) {
        for (x, y) in [(a, b), (b, a)] {
            for (p, pc) in seqs.iter().enumerate() {
                if p == ni || !is_pure(inst, pc) {
                    continue;
                }
                for (i, &z) in pc.iter().enumerate() {
                    if inst.w(y, z) != one {
                        continue;
                    }
                    let k = pc.len();
                    let w = pc[(i + 1) % k];
                    // x .. y, then z .. w, closing w–x
                    let mut seq = open(nc, y, x);
                    seq.extend(open(pc, w, z));
                    return Some((p, seq));
                }
            }
        }
    }
    None
}

/// Direct scan of properties (i) and (ii).
pub fn check_special(inst: &Instance, f: &SpecialTwoFactor) -> core::result::Result<(), String> {
    let nonpure: Vec<usize> = (0..f.pure.len()).filter(|&i| !f.pure[i]).collect();
    if nonpure.len() > 1 {
        return Err(format!("{} nonpure cycles", nonpure.len()));
    }
    for (i, c) in f.cover.cycles.iter().enumerate() {
        if f.pure[i] != is_pure(inst, &c.vertices) {
            return Err(format!("purity flag of cycle {i} is wrong"));
        }
    }
    let Some(&ni) = nonpure.first() else { return Ok(()) };
    for (x, y) in two_edges(inst, &f.cover.cycles[ni].vertices) {
        for end in [x, y] {
            for (p, c) in f.cover.cycles.iter().enumerate() {
                if f.pure[p] {
                    if let Some(&z) = c.vertices.iter().find(|&&z| !inst.is_two_edge(end, z)) {
                        return Err(format!("1-edge {end}-{z} from a 2-edge endpoint to pure cycle {p}"));
                    }
                }
            }
        }
    }
    Ok(())
}
