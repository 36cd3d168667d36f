//! The bipartite graph B between vertices and pure cycles that split a
//! group, the attachment digraph D induced by a matching of B, and its
//! decomposition D′ into depth-1 in-trees and 3-node paths.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::special::SpecialTwoFactor;
use crate::graph::WeightedGraph;
use crate::instance::{Instance, Rational};

/// B as a graph on `n + right.len()` nodes: vertex v is node v, right node
/// j is node `n + j` standing for cycle `right[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteB {
    pub n: usize,
    pub right: Vec<usize>,
    pub graph: WeightedGraph,
}

impl BipartiteB {
    /// (cycle, vertex) pairs of B.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.graph.edges.iter().map(|&(u, v, _)| (self.right[v - self.n], u)).collect()
    }
}

pub fn respects_groups(inst: &Instance, seq: &[usize]) -> bool {
    let set: BTreeSet<usize> = seq.iter().copied().collect();
    seq.iter().all(|&v| inst.groups()[inst.group_of(v)].iter().all(|u| set.contains(u)))
}

pub fn build_b(inst: &Instance, f: &SpecialTwoFactor) -> BipartiteB {
    let n = inst.n();
    let one = Rational::from_integer(1);
    let right: Vec<usize> = (0..f.cover.len())
        .filter(|&i| f.pure[i] && !respects_groups(inst, &f.cover.cycles[i].vertices))
        .collect();
    let mut graph = WeightedGraph::new(n + right.len());
    for (j, &ci) in right.iter().enumerate() {
        let c = &f.cover.cycles[ci].vertices;
        for v in 0..n {
            if !c.contains(&v) && c.iter().any(|&u| inst.w(u, v) == one) {
                graph.add_edge(v, n + j, one);
            }
        }
    }
    BipartiteB { n, right, graph }
}

/// A component of D′.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece {
    Isolated(usize),
    /// Leaves point at the root.
    Star { root: usize, leaves: Vec<usize> },
    /// first → middle → last.
    Path([usize; 3]),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttachmentDigraph {
    /// `arc[c] = Some((c′, v))`: cycle c is matched to vertex v of cycle c′.
    pub arc: Vec<Option<(usize, usize)>>,
    pub pieces: Vec<Piece>,
}

impl AttachmentDigraph {
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.arc.iter().enumerate().filter_map(|(c, a)| a.map(|(t, _)| (c, t))).collect()
    }

    /// Arcs of D′.
    pub fn dprime_arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for p in &self.pieces {
            match p {
                Piece::Isolated(_) => {}
                Piece::Star { root, leaves } => out.extend(leaves.iter().map(|&l| (l, *root))),
                Piece::Path([a, b, c]) => out.extend([(*a, *b), (*b, *c)]),
            }
        }
        out.sort_unstable();
        out
    }
}

/// `matched` lists (cycle, vertex) pairs of a matching of B.
pub fn build_d_and_dprime(f: &SpecialTwoFactor, n: usize, matched: &[(usize, usize)]) -> AttachmentDigraph {
    let idx = f.cover.cycle_index(n);
    let k = f.cover.len();
    let mut arc = vec![None; k];
    for &(c, v) in matched {
        arc[c] = Some((idx[v], v));
    }
    let pieces = decompose(&arc);
    AttachmentDigraph { arc, pieces }
}

#[derive(Clone, PartialEq, Eq)]
enum Role {
    Free,
    Center,
    Leaf(usize),
}

fn decompose(arc: &[Option<(usize, usize)>]) -> Vec<Piece> {
    let k = arc.len();
    let out: Vec<Option<usize>> = arc.iter().map(|a| a.map(|(t, _)| t)).collect();
    // find directed cycles and drop the arc entering their smallest node
    let mut parent = out.clone();
    let mut broken_root = vec![false; k];
    let mut state = vec![0u8; k];
    for s in 0..k {
        let mut walk = Vec::new();
        let mut x = s;
        while state[x] == 0 {
            state[x] = 1;
            walk.push(x);
            match out[x] {
                Some(t) => x = t,
                None => break,
            }
        }
        if state[x] == 1 && out[x].is_some() && walk.contains(&x) {
            let pos = walk.iter().position(|&y| y == x).unwrap();
            let cyc = &walk[pos..];
            let smallest = *cyc.iter().min().unwrap();
            let entering = *cyc.iter().find(|&&y| out[y] == Some(smallest)).unwrap();
            parent[entering] = None;
            broken_root[entering] = true;
        }
        for y in walk {
            state[y] = 2;
        }
    }
    let mut children = vec![Vec::new(); k];
    for c in 0..k {
        if let Some(p) = parent[c] {
            children[p].push(c);
        }
    }
    let mut depth = vec![0usize; k];
    let mut root_of = vec![0usize; k];
    for c in 0..k {
        let (mut x, mut d) = (c, 0);
        while let Some(p) = parent[x] {
            x = p;
            d += 1;
        }
        depth[c] = d;
        root_of[c] = x;
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&c| (core::cmp::Reverse(depth[c]), c));
    let mut role = vec![Role::Free; k];
    for &x in &order {
        if role[x] != Role::Free {
            continue;
        }
        let Some(p) = parent[x] else { continue };
        role[p] = Role::Center;
        for &c in &children[p] {
            if role[c] == Role::Free {
                role[c] = Role::Leaf(p);
            }
        }
    }
    let mut pieces: Vec<Piece> = Vec::new();
    let mut path_of = vec![None; k];
    for r in 0..k {
        if parent[r].is_some() || role[r] != Role::Free {
            continue;
        }
        if broken_root[r] {
            // reattach along the dropped arc r → x
            let x = out[r].unwrap();
            match role[x].clone() {
                Role::Center => role[r] = Role::Leaf(x),
                Role::Leaf(c) => {
                    let siblings = (0..k).filter(|&y| role[y] == Role::Leaf(c)).count();
                    if siblings >= 2 {
                        role[x] = Role::Center;
                        role[r] = Role::Leaf(x);
                    } else {
                        role[x] = Role::Free;
                        role[c] = Role::Free;
                        path_of[r] = Some([r, x, c]);
                        role[r] = Role::Center;
                    }
                }
                Role::Free => unreachable!("the successor of a broken root lies in a nontrivial tree"),
            }
        } else if let Some(&p) = children[r]
            .iter()
            .find(|&&p| role[p] == Role::Center && (0..k).filter(|&y| role[y] == Role::Leaf(p)).count() == 1)
        {
            let x = (0..k).find(|&y| role[y] == Role::Leaf(p)).unwrap();
            role[x] = Role::Free;
            role[p] = Role::Free;
            path_of[r] = Some([x, p, r]);
            role[r] = Role::Center;
        }
    }
    let mut seen = vec![false; k];
    for c in 0..k {
        if seen[c] {
            continue;
        }
        if let Some(path) = path_of[c] {
            for y in path {
                seen[y] = true;
            }
            pieces.push(Piece::Path(path));
            continue;
        }
        if path_of.iter().flatten().any(|p| p.contains(&c)) {
            continue;
        }
        match role[c] {
            Role::Free => {
                seen[c] = true;
                pieces.push(Piece::Isolated(c));
            }
            Role::Center => {
                let leaves: Vec<usize> = (0..k).filter(|&y| role[y] == Role::Leaf(c)).collect();
                seen[c] = true;
                for &l in &leaves {
                    seen[l] = true;
                }
                pieces.push(Piece::Star { root: c, leaves });
            }
            Role::Leaf(_) => {}
        }
    }
    pieces.sort_by_key(|p| match p {
        Piece::Isolated(c) => *c,
        Piece::Star { root, leaves } => *leaves.iter().chain([root]).min().unwrap(),
        Piece::Path(p) => *p.iter().min().unwrap(),
    });
    pieces
}

/// Invariants of D and D′.
pub fn check_attachment(f: &SpecialTwoFactor, n: usize, d: &AttachmentDigraph) -> Result<(), String> {
    let k = f.cover.len();
    let idx = f.cover.cycle_index(n);
    for (c, a) in d.arc.iter().enumerate() {
        if let Some((t, v)) = *a {
            if idx[v] != t || t == c {
                return Err(format!("arc of cycle {c} has a bad attachment vertex {v}"));
            }
            if !f.pure[c] || f.cover.cycles[c].len() == 2 {
                return Err(format!("cycle {c} cannot have an out-arc"));
            }
        }
    }
    let arcs: BTreeSet<(usize, usize)> = d.arcs().into_iter().collect();
    let mut covered = vec![0usize; k];
    for p in &d.pieces {
        match p {
            Piece::Isolated(c) => {
                covered[*c] += 1;
                if d.arc[*c].is_some() {
                    return Err(format!("cycle {c} has an out-arc but is isolated in D′"));
                }
            }
            Piece::Star { root, leaves } => {
                if leaves.is_empty() {
                    return Err("empty in-tree".into());
                }
                covered[*root] += 1;
                for &l in leaves {
                    covered[l] += 1;
                    if !arcs.contains(&(l, *root)) {
                        return Err(format!("in-tree arc {l}->{root} is not in D"));
                    }
                }
            }
            Piece::Path([a, b, c]) => {
                for y in [a, b, c] {
                    covered[*y] += 1;
                }
                if !arcs.contains(&(*a, *b)) || !arcs.contains(&(*b, *c)) {
                    return Err(format!("path {a}->{b}->{c} is not in D"));
                }
            }
        }
    }
    if let Some(c) = covered.iter().position(|&x| x != 1) {
        return Err(format!("cycle {c} is covered {} times by D′", covered[c]));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arcs(k: usize, list: &[(usize, usize)]) -> Vec<Option<(usize, usize)>> {
        let mut a = vec![None; k];
        for &(c, t) in list {
            a[c] = Some((t, 0));
        }
        a
    }

    fn dprime_ok(k: usize, list: &[(usize, usize)]) -> Vec<Piece> {
        let a = arcs(k, list);
        let pieces = decompose(&a);
        let mut covered = vec![0; k];
        let set: BTreeSet<(usize, usize)> = list.iter().copied().collect();
        for p in &pieces {
            match p {
                Piece::Isolated(c) => {
                    covered[*c] += 1;
                    assert!(a[*c].is_none(), "{list:?} -> {pieces:?}");
                }
                Piece::Star { root, leaves } => {
                    covered[*root] += 1;
                    assert!(!leaves.is_empty());
                    for l in leaves {
                        covered[*l] += 1;
                        assert!(set.contains(&(*l, *root)));
                    }
                }
                Piece::Path([x, y, z]) => {
                    for c in [x, y, z] {
                        covered[*c] += 1;
                    }
                    assert!(set.contains(&(*x, *y)) && set.contains(&(*y, *z)));
                }
            }
        }
        assert!(covered.iter().all(|&c| c == 1), "{list:?} -> {pieces:?}");
        pieces
    }

    #[test]
    fn empty_and_single_arc() {
        assert_eq!(dprime_ok(2, &[]), vec![Piece::Isolated(0), Piece::Isolated(1)]);
        assert_eq!(dprime_ok(2, &[(1, 0)]), vec![Piece::Star { root: 0, leaves: vec![1] }]);
    }

    #[test]
    fn chain_of_three_is_a_path() {
        assert_eq!(dprime_ok(3, &[(1, 0), (2, 1)]), vec![Piece::Path([2, 1, 0])]);
    }

    #[test]
    fn directed_cycles_are_covered() {
        dprime_ok(2, &[(0, 1), (1, 0)]);
        dprime_ok(3, &[(0, 1), (1, 2), (2, 0)]);
        dprime_ok(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        dprime_ok(5, &[(0, 1), (1, 2), (2, 0), (3, 0), (4, 3)]);
    }

    #[test]
    fn every_functional_graph_up_to_five() {
        // out[c] ∈ {none} ∪ (others), all combinations
        for k in 1..=5usize {
            let total = k.pow(k as u32);
            for code in 0..total {
                let mut list = Vec::new();
                let mut x = code;
                for c in 0..k {
                    let t = x % k;
                    x /= k;
                    if t != c {
                        list.push((c, t));
                    }
                }
                dprime_ok(k, &list);
            }
        }
    }
}
