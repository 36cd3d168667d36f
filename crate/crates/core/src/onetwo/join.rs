//! The two joining phases. Every join opens two cycles at one edge each and
//! reconnects the resulting paths. The edge closing a phase-1 join, and both
//! new edges of a phase-2 join, are booked at weight 2 whatever their real
//! weight; the booked ("accounted") cost bounds the real one from above and
//! is what the per-phase audits check.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::attach::{AttachmentDigraph, Piece};
use super::special::{cycle_edges, SpecialTwoFactor};
use super::{open, TieBreak};
use crate::graph::ekey;
use crate::instance::{Instance, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Work {
    pub seq: Vec<usize>,
    /// Edges booked at weight 2.
    pub red: BTreeSet<(usize, usize)>,
}

impl Work {
    pub fn plain(seq: Vec<usize>) -> Self {
        Work { seq, red: BTreeSet::new() }
    }

    fn booked(&self, inst: &Instance, u: usize, v: usize) -> Rational {
        if self.red.contains(&ekey(u, v)) {
            Rational::from_integer(2)
        } else {
            inst.w(u, v)
        }
    }

    /// Has an edge booked at weight 2.
    pub fn has_two_edge(&self, inst: &Instance) -> bool {
        cycle_edges(&self.seq).any(|(u, v)| self.booked(inst, u, v) == Rational::from_integer(2))
    }

    pub fn cost(&self, inst: &Instance) -> Rational {
        cycle_edges(&self.seq).map(|(u, v)| inst.w(u, v)).sum()
    }

    fn neighbours(&self, x: usize) -> Vec<usize> {
        let k = self.seq.len();
        let i = self.seq.iter().position(|&y| y == x).expect("vertex on cycle");
        let (a, b) = (self.seq[(i + k - 1) % k], self.seq[(i + 1) % k]);
        if a == b {
            vec![a]
        } else {
            vec![a, b]
        }
    }

    fn adjacent(&self, x: usize, y: usize) -> bool {
        self.seq.contains(&x) && self.neighbours(x).contains(&y)
    }

    fn join(parts: &[&Work], removed: &[(usize, usize)], added: &[(usize, usize)], seq: Vec<usize>) -> Work {
        let mut red: BTreeSet<(usize, usize)> = parts.iter().flat_map(|w| w.red.iter().copied()).collect();
        for &(u, v) in removed {
            red.remove(&ekey(u, v));
        }
        for &(u, v) in added {
            red.insert(ekey(u, v));
        }
        Work { seq, red }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergeKind {
    /// Two leaves with adjacent attachment vertices joined in one step.
    TreePair,
    TreeSingle,
    /// Whole 3-node path; `shared` when both attachment edges meet the
    /// middle cycle at the same vertex.
    Path { shared: bool },
    /// Phase 2; the number of joined cycles holding an edge booked at 2.
    Groups { two_edge_cycles: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeEvent {
    pub kind: MergeKind,
    pub delta: Rational,
    pub accounted: Rational,
}

struct Opt<T> {
    delta: Rational,
    key: Vec<usize>,
    value: T,
}

fn pick<T>(tie: TieBreak, opts: Vec<Opt<T>>) -> Opt<T> {
    let better = |a: &Opt<T>, b: &Opt<T>| match tie {
        TieBreak::Lex => (a.delta, &a.key) < (b.delta, &b.key),
        TieBreak::Adversarial => a.delta > b.delta || (a.delta == b.delta && a.key < b.key),
    };
    let mut it = opts.into_iter();
    let mut best = it.next().expect("at least one join option");
    for o in it {
        if better(&o, &best) {
            best = o;
        }
    }
    best
}

struct Joined {
    work: Work,
    delta: Rational,
    accounted: Rational,
    leaf_vertex: usize,
}

/// Joins `leaf` into `root` through a 1-edge from attachment vertex `v` to a
/// vertex of `leaf` listed in `cands`.
fn single(inst: &Instance, root: &Work, leaf: &Work, v: usize, cands: &[usize], tie: TieBreak) -> Joined {
    let (one, two) = (Rational::from_integer(1), Rational::from_integer(2));
    let mut opts = Vec::new();
    for &u in cands {
        if inst.w(u, v) != one {
            continue;
        }
        for u2 in leaf.neighbours(u) {
            for v2 in root.neighbours(v) {
                let delta = one + inst.w(u2, v2) - inst.w(u, u2) - inst.w(v, v2);
                let accounted = one + two - leaf.booked(inst, u, u2) - root.booked(inst, v, v2);
                opts.push(Opt { delta, key: vec![u, u2, v2], value: (u, u2, v2, accounted) });
            }
        }
    }
    let o = pick(tie, opts);
    let (u, u2, v2, accounted) = o.value;
    // u .. u2, v2 .. v, closing v–u
    let mut seq = open(&leaf.seq, u2, u);
    seq.extend(open(&root.seq, v, v2));
    let work = Work::join(&[root, leaf], &[(u, u2), (v, v2)], &[(u2, v2)], seq);
    Joined { work, delta: o.delta, accounted, leaf_vertex: u }
}

/// Joins two leaves whose attachment vertices `vi`, `vj` are adjacent on
/// `root`, dropping the edge between them.
fn pair(inst: &Instance, root: &Work, li: &Work, lj: &Work, vi: usize, vj: usize, tie: TieBreak) -> Joined {
    let (one, two) = (Rational::from_integer(1), Rational::from_integer(2));
    let mut opts = Vec::new();
    for &ui in &li.seq {
        if inst.w(ui, vi) != one {
            continue;
        }
        for ui2 in li.neighbours(ui) {
            for &uj in &lj.seq {
                if inst.w(uj, vj) != one {
                    continue;
                }
                for uj2 in lj.neighbours(uj) {
                    let delta = one + inst.w(ui2, uj2) + one - inst.w(vi, vj) - inst.w(ui, ui2) - inst.w(uj, uj2);
                    let accounted = one + two + one
                        - root.booked(inst, vi, vj)
                        - li.booked(inst, ui, ui2)
                        - lj.booked(inst, uj, uj2);
                    opts.push(Opt { delta, key: vec![ui, ui2, uj, uj2], value: (ui, ui2, uj, uj2, accounted) });
                }
            }
        }
    }
    let o = pick(tie, opts);
    let (ui, ui2, uj, uj2, accounted) = o.value;
    // vj .. vi, ui .. ui2, uj2 .. uj, closing uj–vj
    let mut seq = open(&root.seq, vi, vj);
    seq.extend(open(&li.seq, ui2, ui));
    seq.extend(open(&lj.seq, uj, uj2));
    let work = Work::join(&[root, li, lj], &[(vi, vj), (ui, ui2), (uj, uj2)], &[(ui2, uj2)], seq);
    Joined { work, delta: o.delta, accounted, leaf_vertex: ui }
}

/// Phase 1: joins the cycles of every nontrivial D′ component. Returns the
/// cycles in F order (joined components sit at their root's slot).
pub fn join_component_cycles(
    inst: &Instance,
    f: &SpecialTwoFactor,
    d: &AttachmentDigraph,
    tie: TieBreak,
) -> (Vec<Work>, Vec<MergeEvent>) {
    let mut works: Vec<Option<Work>> = f.cover.cycles.iter().map(|c| Some(Work::plain(c.vertices.clone()))).collect();
    let mut events = Vec::new();
    let attach = |c: usize| d.arc[c].expect("non-root D′ node has an arc").1;
    for piece in &d.pieces {
        match piece {
            Piece::Isolated(_) => {}
            Piece::Star { root, leaves } => {
                let rseq = &f.cover.cycles[*root].vertices;
                let k = rseq.len();
                let pos = |v: usize| rseq.iter().position(|&x| x == v).unwrap();
                let start = leaves.iter().map(|&l| attach(l)).min().unwrap();
                let mut order = leaves.clone();
                order.sort_by_key(|&l| (pos(attach(l)) + k - pos(start)) % k);
                let mut cur = works[*root].take().unwrap();
                let mut i = 0;
                while i < order.len() {
                    let (a, va) = (order[i], attach(order[i]));
                    let paired = i + 1 < order.len() && {
                        let vb = attach(order[i + 1]);
                        rseq[(pos(va) + 1) % k] == vb || rseq[(pos(va) + k - 1) % k] == vb
                    };
                    if paired && cur.adjacent(va, attach(order[i + 1])) {
                        let b = order[i + 1];
                        let (la, lb) = (works[a].take().unwrap(), works[b].take().unwrap());
                        let j = pair(inst, &cur, &la, &lb, va, attach(b), tie);
                        events.push(MergeEvent { kind: MergeKind::TreePair, delta: j.delta, accounted: j.accounted });
                        cur = j.work;
                        i += 2;
                    } else {
                        let la = works[a].take().unwrap();
                        let j = single(inst, &cur, &la, va, &la.seq, tie);
                        events.push(MergeEvent { kind: MergeKind::TreeSingle, delta: j.delta, accounted: j.accounted });
                        cur = j.work;
                        i += 1;
                    }
                }
                works[*root] = Some(cur);
            }
            Piece::Path([a, b, c]) => {
                let (wa, wb, wc) = (works[*a].take().unwrap(), works[*b].take().unwrap(), works[*c].take().unwrap());
                let va = attach(*a);
                let j1 = single(inst, &wb, &wa, va, &wa.seq, tie);
                let j2 = single(inst, &wc, &j1.work, attach(*b), &f.cover.cycles[*b].vertices, tie);
                events.push(MergeEvent {
                    kind: MergeKind::Path { shared: j2.leaf_vertex == va },
                    delta: j1.delta + j2.delta,
                    accounted: j1.accounted + j2.accounted,
                });
                works[*c] = Some(j2.work);
            }
        }
    }
    (works.into_iter().flatten().collect(), events)
}

fn split_pairs(inst: &Instance, works: &[Work]) -> Vec<(usize, usize)> {
    let n = inst.n();
    let mut at = vec![0; n];
    for (i, w) in works.iter().enumerate() {
        for &v in &w.seq {
            at[v] = i;
        }
    }
    let mut pairs = BTreeSet::new();
    for g in inst.groups() {
        let cyc: BTreeSet<usize> = g.iter().map(|&v| at[v]).collect();
        let cyc: Vec<usize> = cyc.into_iter().collect();
        for x in 0..cyc.len() {
            for y in x + 1..cyc.len() {
                pairs.insert((cyc[x], cyc[y]));
            }
        }
    }
    pairs.into_iter().collect()
}

/// Phase 2: while two cycles share a group, join a pair of the highest
/// class (both hold a booked 2-edge, then one, then none).
pub fn join_disrespecting_cycles(inst: &Instance, mut works: Vec<Work>, tie: TieBreak) -> (Vec<Work>, Vec<MergeEvent>) {
    let two = Rational::from_integer(2);
    let mut events = Vec::new();
    loop {
        works.sort_by_key(|w| w.seq.iter().copied().min());
        let pairs = split_pairs(inst, &works);
        let Some(&(i, j)) = pairs
            .iter()
            .max_by_key(|&&(i, j)| (works[i].has_two_edge(inst) as u8 + works[j].has_two_edge(inst) as u8, core::cmp::Reverse((i, j))))
        else {
            break;
        };
        let (x, y) = (&works[i], &works[j]);
        let (hx, hy) = (x.has_two_edge(inst), y.has_two_edge(inst));
        let candidates = |w: &Work, has: bool| -> Vec<(usize, usize)> {
            cycle_edges(&w.seq).filter(|&(u, v)| !has || w.booked(inst, u, v) == two).collect()
        };
        let mut opts = Vec::new();
        for (a, b) in candidates(x, hx) {
            for (c0, d0) in candidates(y, hy) {
                for (c, dd) in [(c0, d0), (d0, c0)] {
                    let delta = inst.w(a, c) + inst.w(dd, b) - inst.w(a, b) - inst.w(c, dd);
                    let accounted = two + two - x.booked(inst, a, b) - y.booked(inst, c, dd);
                    opts.push(Opt { delta, key: vec![a, b, c, dd], value: (a, b, c, dd, accounted) });
                }
            }
        }
        let o = pick(tie, opts);
        let (a, b, c, dd, accounted) = o.value;
        // b .. a, c .. dd, closing dd–b
        let mut seq = open(&x.seq, a, b);
        seq.extend(open(&y.seq, dd, c));
        let merged = Work::join(&[x, y], &[(a, b), (c, dd)], &[(a, c), (dd, b)], seq);
        events.push(MergeEvent {
            kind: MergeKind::Groups { two_edge_cycles: hx as u8 + hy as u8 },
            delta: o.delta,
            accounted,
        });
        works.remove(j);
        works[i] = merged;
    }
    (works, events)
}
