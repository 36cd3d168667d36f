//! Survivable network design with requirement 2 inside every terminal group
//! and 0 across groups, solved by iterative LP rounding.
//!
//! The cut LP is min Σ w(e)x(e) subject to x(δ(W)) ≥ f(W) − |F ∩ δ(W)| for
//! every W splitting a group, 0 ≤ x ≤ 1, where F is the set of edges fixed so
//! far. The edge of a size-2 group enters as two parallel variables. Each
//! round takes an extreme optimum, fixes every edge with x(e) ≥ ½ and drops
//! edges with x(e) = 0.

mod lp;
mod sep;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::EdgeSubgraph;
use crate::instance::Instance;
use lp::{DualSimplex, Field, LpError};

/// Above this many vertices cuts come from max-flow instead of enumeration.
pub const ENUMERATION_LIMIT: usize = 16;
/// Violated cuts added per separation round.
const CUTS_PER_ROUND: usize = 16;

/// r(i, j) = 2 inside a group, 0 across groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SndRequirements {
    pub n: usize,
    pub groups: Vec<Vec<usize>>,
    group_of: Vec<usize>,
    masks: Vec<u64>,
}

pub fn build_requirements(inst: &Instance) -> SndRequirements {
    let n = inst.n();
    let groups = inst.groups().to_vec();
    let masks = if n <= 64 {
        groups.iter().map(|g| g.iter().fold(0u64, |m, &v| m | 1 << v)).collect()
    } else {
        Vec::new()
    };
    SndRequirements { n, group_of: (0..n).map(|v| inst.group_of(v)).collect(), groups, masks }
}

impl SndRequirements {
    pub fn r(&self, i: usize, j: usize) -> u8 {
        if i != j && self.group_of[i] == self.group_of[j] {
            2
        } else {
            0
        }
    }

    /// Number of pairs with requirement 2.
    pub fn required_pairs(&self) -> usize {
        self.groups.iter().map(|g| g.len() * (g.len() - 1) / 2).sum()
    }

    /// Whether the vertex set `w` (bitmask) separates some group.
    pub fn splits(&self, w: u64) -> bool {
        self.masks.iter().any(|&g| g & w != 0 && g & !w != 0)
    }

    /// f(W): 2 when W splits a group, else 0.
    pub fn f(&self, w: u64) -> u8 {
        if self.splits(w) {
            2
        } else {
            0
        }
    }
}

/// Fractional value per edge slot. Parallel slots of a pair edge appear
/// twice with the same endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalEdgeVector {
    pub slots: Vec<(usize, usize)>,
    pub values: Vec<BigRational>,
    pub objective: BigRational,
}

/// Per-round record of the rounding loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub free_edges: usize,
    pub lp_value: BigRational,
    pub newly_fixed: usize,
    pub dropped: usize,
    pub lp_solves: usize,
    pub pivots: usize,
    pub cuts: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SndRun {
    pub graph: EdgeSubgraph,
    pub rounds: Vec<RoundRecord>,
    /// LP pivot log, filled only when requested.
    pub trace: Vec<String>,
}

fn all_slots(inst: &Instance) -> Vec<(usize, usize)> {
    let n = inst.n();
    let mut slots = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            slots.push((u, v));
            if inst.is_pair(u, v) {
                slots.push((u, v));
            }
        }
    }
    slots
}

fn precondition(inst: &Instance) -> Result<()> {
    if inst.n() > 64 {
        return Err(Error::Precondition(format!("cut LP supports n <= 64, got {}", inst.n())));
    }
    if !inst.is_symmetric() {
        return Err(Error::Precondition("cut LP needs a symmetric instance".into()));
    }
    Ok(())
}

struct Lp<'a> {
    inst: &'a Instance,
    req: &'a SndRequirements,
    slots: &'a [(usize, usize)],
    fixed: &'a EdgeSubgraph,
    /// Cut family shared across rounds.
    cuts: Vec<u64>,
    lp_solves: usize,
    pivots: usize,
    trace: Option<Vec<String>>,
}

fn crosses(w: u64, u: usize, v: usize) -> bool {
    (w >> u ^ w >> v) & 1 == 1
}

impl Lp<'_> {
    fn fixed_crossing(&self, w: u64) -> usize {
        self.fixed.iter().filter(|&((u, v), _)| crosses(w, u, v)).map(|(_, m)| m).sum()
    }

    /// Optimal extreme point over the free slots, trying 128-bit rationals
    /// first and falling back to big rationals on overflow.
    fn solve(&mut self, free: &[usize]) -> Result<(Vec<BigRational>, BigRational)> {
        match self.solve_in::<Ratio<i128>>(free) {
            Err(LpError::Overflow) => {}
            other => return other.map_err(|_| Error::LpInfeasible),
        }
        self.solve_in::<BigRational>(free).map_err(|e| match e {
            LpError::Overflow => Error::Overflow,
            LpError::Infeasible => Error::LpInfeasible,
        })
    }

    fn solve_in<F: Field>(&mut self, free: &[usize]) -> core::result::Result<(Vec<BigRational>, BigRational), LpError> {
        let costs: Vec<F> = free
            .iter()
            .map(|&k| {
                let (u, v) = self.slots[k];
                let w = self.inst.w(u, v);
                F::from_i64(*w.numer()).div(&F::from_i64(*w.denom())).ok_or(LpError::Overflow)
            })
            .collect::<core::result::Result<_, _>>()?;
        let mut lp = DualSimplex::new(&costs);
        if self.trace.is_some() {
            lp.trace = Some(Vec::new());
        }
        let mut rows = 0;
        let cuts = self.cuts.clone();
        for w in cuts {
            rows += self.add_cut(&mut lp, free, w)? as usize;
        }
        loop {
            self.lp_solves += 1;
            lp.solve()?;
            let x: Vec<BigRational> = (0..free.len()).map(|j| lp.value(j).to_big()).collect();
            let fresh = self.separate(free, &x);
            if fresh.is_empty() {
                self.pivots += lp.pivots;
                let obj = lp.objective(&costs)?.to_big();
                if let (Some(t), Some(lt)) = (self.trace.as_mut(), lp.trace.take()) {
                    t.extend(lt);
                    t.push(format!("lp: {} rows, {} pivots, value {}", rows, lp.pivots, obj));
                }
                return Ok((x, obj));
            }
            for w in fresh {
                self.cuts.push(w);
                rows += self.add_cut(&mut lp, free, w)? as usize;
            }
        }
    }

    fn add_cut<F: Field>(&self, lp: &mut DualSimplex<F>, free: &[usize], w: u64) -> core::result::Result<bool, LpError> {
        let have = self.fixed_crossing(w);
        if have >= 2 {
            return Ok(false);
        }
        let support: Vec<usize> = (0..free.len())
            .filter(|&j| {
                let (u, v) = self.slots[free[j]];
                crosses(w, u, v)
            })
            .collect();
        if support.is_empty() {
            return Err(LpError::Infeasible);
        }
        lp.add_row(&support, &F::from_i64(2 - have as i64))?;
        Ok(true)
    }

    /// Violated cuts for x, on integer capacities scaled by the common
    /// denominator of x.
    fn separate(&self, free: &[usize], x: &[BigRational]) -> Vec<u64> {
        let l = x.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let n = self.req.n;
        let mut agg = vec![vec![BigInt::zero(); n]; n];
        for (j, &k) in free.iter().enumerate() {
            let (u, v) = self.slots[k];
            agg[u][v] += x[j].numer() * (&l / x[j].denom());
        }
        for ((u, v), m) in self.fixed.iter() {
            agg[u][v] += &l * BigInt::from(m);
        }
        let mut cap: Vec<(usize, usize, BigInt)> = Vec::new();
        for (u, row) in agg.into_iter().enumerate() {
            for (v, c) in row.into_iter().enumerate() {
                if !c.is_zero() {
                    cap.push((u, v, c));
                }
            }
        }
        let two_l: BigInt = &l * 2;
        // small totals run in machine integers
        let total: BigInt = cap.iter().map(|(_, _, c)| c.clone()).sum::<BigInt>() + &two_l;
        if total.to_i64().is_some() {
            let cap64: Vec<(usize, usize, i64)> = cap.iter().map(|(u, v, c)| (*u, *v, c.to_i64().unwrap())).collect();
            let t = two_l.to_i64().unwrap();
            return self.separate_with(&cap64, &t);
        }
        self.separate_with(&cap, &two_l)
    }

    fn separate_with<T: sep::Int>(&self, cap: &[(usize, usize, T)], two_l: &T) -> Vec<u64> {
        if self.req.n <= ENUMERATION_LIMIT {
            sep::enumerate_violated(self.req, cap, two_l, CUTS_PER_ROUND)
        } else {
            sep::mincut_violated(self.req, cap, two_l)
        }
    }
}

fn singleton_cuts(n: usize) -> Vec<u64> {
    (0..n).map(|v| 1u64 << v).collect()
}

/// Optimal extreme point of the cut LP over every slot not already covered
/// by `fixed`.
pub fn solve_cut_lp(inst: &Instance, req: &SndRequirements, fixed: &EdgeSubgraph) -> Result<FractionalEdgeVector> {
    precondition(inst)?;
    let slots = all_slots(inst);
    let mut used = EdgeSubgraph::new(inst.n());
    let free: Vec<usize> = (0..slots.len())
        .filter(|&k| {
            let (u, v) = slots[k];
            if used.multiplicity(u, v) < fixed.multiplicity(u, v) {
                used.add(u, v);
                false
            } else {
                true
            }
        })
        .collect();
    let mut lp = Lp { inst, req, slots: &slots, fixed, cuts: singleton_cuts(inst.n()), lp_solves: 0, pivots: 0, trace: None };
    let (x, objective) = lp.solve(&free)?;
    Ok(FractionalEdgeVector { slots: free.iter().map(|&k| slots[k]).collect(), values: x, objective })
}

/// Iterative rounding to a feasible {0,2} network of weight at most twice
/// the LP optimum.
pub fn jain_round(inst: &Instance, req: &SndRequirements) -> Result<EdgeSubgraph> {
    Ok(jain_round_traced(inst, req, false)?.graph)
}

pub fn jain_round_traced(inst: &Instance, req: &SndRequirements, trace: bool) -> Result<SndRun> {
    precondition(inst)?;
    let n = inst.n();
    let slots = all_slots(inst);
    let mut free: Vec<usize> = (0..slots.len()).collect();
    let mut fixed = EdgeSubgraph::new(n);
    let mut cuts = singleton_cuts(n);
    let mut rounds = Vec::new();
    let mut log = Vec::new();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    while !crate::oracle::snd_feasible(inst, &fixed) {
        let mut lp = Lp {
            inst,
            req,
            slots: &slots,
            fixed: &fixed,
            cuts: core::mem::take(&mut cuts),
            lp_solves: 0,
            pivots: 0,
            trace: trace.then(Vec::new),
        };
        let (x, value) = lp.solve(&free)?;
        cuts = lp.cuts;
        let (lp_solves, pivots) = (lp.lp_solves, lp.pivots);
        if let Some(t) = lp.trace {
            log.extend(t);
        }
        let before = free.len();
        let mut keep = Vec::new();
        let mut newly = Vec::new();
        for (j, &k) in free.iter().enumerate() {
            if x[j] >= half {
                newly.push(k);
            } else if !Zero::is_zero(&x[j]) {
                keep.push(k);
            }
        }
        if newly.is_empty() {
            return Err(Error::RoundingStall);
        }
        for &k in &newly {
            fixed.add(slots[k].0, slots[k].1);
        }
        if trace {
            log.push(format!(
                "round {}: {} free, value {}, fixed {:?}",
                rounds.len() + 1,
                before,
                value,
                newly.iter().map(|&k| slots[k]).collect::<Vec<_>>()
            ));
        }
        rounds.push(RoundRecord {
            free_edges: before,
            lp_value: value,
            newly_fixed: newly.len(),
            dropped: before - newly.len() - keep.len(),
            lp_solves,
            pivots,
            cuts: cuts.len(),
        });
        free = keep;
    }
    Ok(SndRun { graph: fixed, rounds, trace: log })
}

/// Deletes bridges until every component is 2-edge-connected. Bridges
/// never carry a requirement of 2, so feasibility is kept.
pub fn prune_bridges(g: &EdgeSubgraph, _req: &SndRequirements) -> EdgeSubgraph {
    let mut out = g.clone();
    loop {
        let b = out.bridges();
        if b.is_empty() {
            return out;
        }
        for (u, v) in b {
            out.remove(u, v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{RawInstance, Rational, WeightClass};
    use crate::oracle::{brute_force_snd, snd_feasible, OracleBudget};
    use proptest::prelude::*;

    fn big(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn metric(m: &[Vec<i64>], groups: Vec<Vec<usize>>) -> Instance {
        RawInstance::from_int_matrix(m, true, WeightClass::GeneralMetric, groups).validate().unwrap()
    }

    fn unit_triangle() -> Instance {
        metric(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]], vec![vec![0, 1, 2]])
    }

    #[test]
    fn requirements() {
        let inst = metric(&[vec![0, 1, 1, 1], vec![1, 0, 1, 1], vec![1, 1, 0, 1], vec![1, 1, 1, 0]], vec![vec![0, 1], vec![2, 3]]);
        let req = build_requirements(&inst);
        assert_eq!(req.r(0, 1), 2);
        assert_eq!(req.r(0, 2), 0);
        assert_eq!(req.required_pairs(), 2);
        assert_eq!(req.f(0b0011), 0);
        assert_eq!(req.f(0b0101), 2);
    }

    #[test]
    fn triangle_lp_is_integral() {
        let inst = unit_triangle();
        let req = build_requirements(&inst);
        let x = solve_cut_lp(&inst, &req, &EdgeSubgraph::new(3)).unwrap();
        assert_eq!(x.objective, big(3));
        assert!(x.values.iter().all(|v| *v == big(1)));
        let g = jain_round(&inst, &req).unwrap();
        assert_eq!(g.weight(&inst), Rational::from_integer(3));
    }

    #[test]
    fn pair_edge_doubled() {
        let inst = metric(&[vec![0, 3], vec![3, 0]], vec![vec![0, 1]]);
        let req = build_requirements(&inst);
        let x = solve_cut_lp(&inst, &req, &EdgeSubgraph::new(2)).unwrap();
        assert_eq!(x.slots, vec![(0, 1), (0, 1)]);
        assert_eq!(x.objective, big(6));
        let g = jain_round(&inst, &req).unwrap();
        assert_eq!(g.multiplicity(0, 1), 2);
    }

    #[test]
    fn two_far_triangles() {
        let mut m = vec![vec![0i64; 6]; 6];
        for u in 0..6 {
            for v in 0..6 {
                if u != v {
                    m[u][v] = if u / 3 == v / 3 { 1 } else { 10 };
                }
            }
        }
        let inst = metric(&m, vec![vec![0, 1, 2], vec![3, 4, 5]]);
        let req = build_requirements(&inst);
        let x = solve_cut_lp(&inst, &req, &EdgeSubgraph::new(6)).unwrap();
        assert_eq!(x.objective, big(6));
        assert_eq!(brute_force_snd(&inst, &OracleBudget::default()).unwrap().0, Rational::from_integer(6));
    }

    #[test]
    fn prune_removes_connecting_edge() {
        let g = EdgeSubgraph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]);
        let inst = metric(&vec![vec![1; 6]; 6].iter().enumerate().map(|(i, r)| r.iter().enumerate().map(|(j, &x)| if i == j { 0 } else { x }).collect()).collect::<Vec<_>>(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        let req = build_requirements(&inst);
        let p = prune_bridges(&g, &req);
        assert_eq!(p.multiplicity(2, 3), 0);
        assert_eq!(p.edge_count(), 6);
        assert_eq!(prune_bridges(&p, &req), p);
    }

    fn euclid(pts: &[(i64, i64)], split: usize) -> Instance {
        let n = pts.len();
        let mut m = vec![vec![0i64; n]; n];
        for u in 0..n {
            for v in 0..n {
                let (dx, dy) = ((pts[u].0 - pts[v].0) as f64, (pts[u].1 - pts[v].1) as f64);
                // ceilings of distances stay metric
                m[u][v] = if u == v { 0 } else { (dx * dx + dy * dy).sqrt().ceil() as i64 + 1 };
            }
        }
        let groups = if split >= 2 && split + 2 <= n {
            vec![(0..split).collect(), (split..n).collect()]
        } else {
            vec![(0..n).collect()]
        };
        metric(&m, groups)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn rounding_within_twice_optimum(pts in proptest::collection::vec((0i64..20, 0i64..20), 7), split in 0usize..7) {
            let inst = euclid(&pts, split);
            let req = build_requirements(&inst);
            let run = jain_round_traced(&inst, &req, false).unwrap();
            prop_assert!(snd_feasible(&inst, &run.graph));
            let (opt, _) = brute_force_snd(&inst, &OracleBudget::default()).unwrap();
            prop_assert!(run.graph.weight(&inst) <= opt * Rational::from_integer(2));
            // the first LP value is a lower bound on the optimum
            let lp0 = &run.rounds[0].lp_value;
            prop_assert!(*lp0 <= BigRational::new(BigInt::from(*opt.numer()), BigInt::from(*opt.denom())));
            let pruned = prune_bridges(&run.graph, &req);
            prop_assert!(pruned.bridges().is_empty());
            prop_assert!(snd_feasible(&inst, &pruned));
            let mut free = run.rounds[0].free_edges;
            for r in &run.rounds[1..] {
                prop_assert!(r.free_edges < free);
                free = r.free_edges;
            }
        }
    }
}
