//! Instance model: a complete (di)graph with exact rational weights and a
//! partition of its vertices into terminal groups.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact weight and cost type used throughout the crate.
pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightClass {
    /// Symmetric weights obeying the triangle inequality.
    GeneralMetric,
    /// Symmetric weights in {1, 2}.
    OneTwo,
    /// Arc weights obeying the directed triangle inequality.
    AsymmetricMetric,
}

/// Unchecked instance data, as read from a file or built by hand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawInstance {
    pub n: usize,
    /// Row-major `n * n` matrix; the diagonal is ignored.
    pub weights: Vec<Rational>,
    pub symmetric: bool,
    pub class: WeightClass,
    pub groups: Vec<Vec<usize>>,
}

/// A validated instance. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    weights: Vec<Rational>,
    symmetric: bool,
    class: WeightClass,
    groups: Vec<Vec<usize>>,
    group_of: Vec<usize>,
}

impl RawInstance {
    /// Convenience constructor from an integer matrix.
    pub fn from_int_matrix(
        matrix: &[Vec<i64>],
        symmetric: bool,
        class: WeightClass,
        groups: Vec<Vec<usize>>,
    ) -> Self {
        let n = matrix.len();
        let mut weights = Vec::with_capacity(n * n);
        for row in matrix {
            for &w in row {
                weights.push(Rational::from_integer(w));
            }
        }
        RawInstance { n, weights, symmetric, class, groups }
    }

    pub fn validate(self) -> Result<Instance> {
        Instance::new(self)
    }
}

impl Instance {
    pub fn new(raw: RawInstance) -> Result<Self> {
        let RawInstance { n, mut weights, symmetric, class, groups } = raw;
        if weights.len() != n * n {
            return Err(Error::BadDimensions);
        }
        let mut group_of = vec![usize::MAX; n];
        for (g, members) in groups.iter().enumerate() {
            if members.len() < 2 {
                return Err(Error::UnitGroup(g));
            }
            for &v in members {
                if v >= n {
                    return Err(Error::VertexOutOfRange(v));
                }
                if group_of[v] != usize::MAX {
                    return Err(Error::PartitionOverlap(v));
                }
                group_of[v] = g;
            }
        }
        if let Some(v) = group_of.iter().position(|&g| g == usize::MAX) {
            return Err(Error::PartitionMissing(v));
        }
        for i in 0..n {
            weights[i * n + i] = Rational::zero();
        }
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                let w = weights[u * n + v];
                if w < Rational::zero() {
                    return Err(Error::NegativeWeight { u, v });
                }
                if symmetric && w != weights[v * n + u] {
                    return Err(Error::AsymmetricWeights { u, v });
                }
                if class == WeightClass::OneTwo {
                    let one = Rational::one();
                    if w != one && w != one + one {
                        return Err(Error::WeightClassViolation { u, v });
                    }
                }
            }
        }
        if class != WeightClass::OneTwo {
            for a in 0..n {
                for b in 0..n {
                    if b == a {
                        continue;
                    }
                    for c in 0..n {
                        if c == a || c == b {
                            continue;
                        }
                        if weights[a * n + c] > weights[a * n + b] + weights[b * n + c] {
                            return Err(Error::TriangleViolation { a, b, c });
                        }
                    }
                }
            }
        }
        let mut groups = groups;
        for g in &mut groups {
            g.sort_unstable();
        }
        Ok(Instance { n, weights, symmetric, class, groups, group_of })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn w(&self, u: usize, v: usize) -> Rational {
        self.weights[u * self.n + v]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn class(&self) -> WeightClass {
        self.class
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    #[inline]
    pub fn group_of(&self, v: usize) -> usize {
        self.group_of[v]
    }

    /// True when `{u, v}` is a terminal group of size two, i.e. the pair
    /// edge `uv` is duplicated and a length-2 cycle on it is legal.
    pub fn is_pair(&self, u: usize, v: usize) -> bool {
        u != v && self.group_of[u] == self.group_of[v] && self.groups[self.group_of[u]].len() == 2
    }

    pub fn has_pair_groups(&self) -> bool {
        self.groups.iter().any(|g| g.len() == 2)
    }

    /// Weight-2 edge test for {1,2} instances.
    #[inline]
    pub fn is_two_edge(&self, u: usize, v: usize) -> bool {
        self.w(u, v) > Rational::one()
    }

    /// Back to raw form, e.g. for serialization.
    pub fn to_raw(&self) -> RawInstance {
        RawInstance {
            n: self.n,
            weights: self.weights.clone(),
            symmetric: self.symmetric,
            class: self.class,
            groups: self.groups.clone(),
        }
    }

    /// The same instance with the directed pipeline's weight class; used to
    /// feed symmetric data to the asymmetric algorithm.
    pub fn as_asymmetric(&self) -> Instance {
        Instance { class: WeightClass::AsymmetricMetric, symmetric: false, ..self.clone() }
    }

    /// Weight matrix of the sub-(di)graph induced by `vertices`, re-indexed
    /// in the order given.
    pub fn restrict(&self, vertices: &[usize]) -> Vec<Rational> {
        let k = vertices.len();
        let mut w = Vec::with_capacity(k * k);
        for &u in vertices {
            for &v in vertices {
                w.push(self.w(u, v));
            }
        }
        w
    }
}
