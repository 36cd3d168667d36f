//! Bounded dual simplex for covering LPs
//!
//!   min c·x   s.t.  Σ_{j∈S_i} x_j ≥ b_i,  0 ≤ x_j ≤ 1,   c ≥ 0,
//!
//! with rows added lazily. Every row gets a surplus variable s_i ≥ 0 that is
//! basic when the row is added, so the basis stays dual feasible and the
//! dual simplex repairs primal feasibility.
//!
//! Dictionary form: for basic x_B(r),
//!   x_B(r) = β_r + Σ_{l nonbasic} T[r][l]·(x_l − v_l),
//! and the objective is z₀ + Σ d_l·(x_l − v_l), where v_l is the bound the
//! nonbasic x_l sits at. Leaving rows follow the smallest variable index,
//! entering columns the smallest ratio |d_j / T[r][j]| and then the smallest
//! index, which rules out cycling.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, Zero};

/// Exact field arithmetic that may report overflow.
pub(crate) trait Field: Clone + PartialOrd + core::fmt::Display {
    fn zero() -> Self;
    fn from_i64(x: i64) -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div(&self, o: &Self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn is_pos(&self) -> bool;
    fn abs(&self) -> Self;
    fn to_big(&self) -> BigRational;
}

impl Field for Ratio<i128> {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(x: i64) -> Self {
        Ratio::from_integer(x as i128)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        self.checked_div(o)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_pos(&self) -> bool {
        Signed::is_positive(self)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(x: i64) -> Self {
        BigRational::from_integer(BigInt::from(x))
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_pos(&self) -> bool {
        Signed::is_positive(self)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn to_big(&self) -> BigRational {
        self.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LpError {
    Overflow,
    Infeasible,
}

type LpResult<T> = core::result::Result<T, LpError>;

#[inline]
fn ck<T>(x: Option<T>) -> LpResult<T> {
    x.ok_or(LpError::Overflow)
}

pub(crate) struct DualSimplex<F: Field> {
    /// Number of structural variables (columns 0..m); surpluses follow.
    m: usize,
    /// Basic variable of each row.
    basis: Vec<usize>,
    /// Row of a basic variable, `usize::MAX` if nonbasic.
    row_of: Vec<usize>,
    /// Nonbasic structural sitting at its upper bound 1.
    at_upper: Vec<bool>,
    beta: Vec<F>,
    t: Vec<Vec<F>>,
    d: Vec<F>,
    pub pivots: usize,
    pub trace: Option<Vec<String>>,
}

impl<F: Field> DualSimplex<F> {
    pub fn new(costs: &[F]) -> Self {
        let m = costs.len();
        DualSimplex {
            m,
            basis: Vec::new(),
            row_of: vec![usize::MAX; m],
            at_upper: vec![false; m],
            beta: Vec::new(),
            t: Vec::new(),
            d: costs.to_vec(),
            pivots: 0,
            trace: None,
        }
    }

    fn ncols(&self) -> usize {
        self.d.len()
    }

    fn nonbasic_value(&self, l: usize) -> F {
        if l < self.m && self.at_upper[l] {
            F::from_i64(1)
        } else {
            F::zero()
        }
    }

    /// Current value of a structural variable.
    pub fn value(&self, j: usize) -> F {
        match self.row_of[j] {
            usize::MAX => self.nonbasic_value(j),
            r => self.beta[r].clone(),
        }
    }

    pub fn objective(&self, costs: &[F]) -> LpResult<F> {
        let mut z = F::zero();
        for (j, c) in costs.iter().enumerate() {
            z = ck(z.add(&ck(c.mul(&self.value(j)))?))?;
        }
        Ok(z)
    }

    /// Adds the row Σ_{j∈support} x_j ≥ b with a fresh basic surplus.
    pub fn add_row(&mut self, support: &[usize], b: &F) -> LpResult<()> {
        let col = self.ncols();
        for row in &mut self.t {
            row.push(F::zero());
        }
        self.d.push(F::zero());
        self.row_of.push(self.t.len());
        let mut beta = ck(F::zero().sub(b))?;
        let mut row = vec![F::zero(); col + 1];
        for &j in support {
            match self.row_of[j] {
                usize::MAX => {
                    beta = ck(beta.add(&self.nonbasic_value(j)))?;
                    row[j] = ck(row[j].add(&F::from_i64(1)))?;
                }
                r => {
                    beta = ck(beta.add(&self.beta[r]))?;
                    for (l, x) in self.t[r].iter().enumerate() {
                        if !x.is_zero() {
                            row[l] = ck(row[l].add(x))?;
                        }
                    }
                }
            }
        }
        self.t.push(row);
        self.beta.push(beta);
        self.basis.push(col);
        Ok(())
    }

    fn bounds_violation(&self, r: usize) -> Option<F> {
        let var = self.basis[r];
        let b = &self.beta[r];
        if b.is_neg() {
            return Some(F::zero());
        }
        if var < self.m && *b > F::from_i64(1) {
            return Some(F::from_i64(1));
        }
        None
    }

    /// Runs dual simplex pivots until the basis is primal feasible.
    pub fn solve(&mut self) -> LpResult<()> {
        loop {
            let mut pick: Option<(usize, F)> = None;
            for r in 0..self.basis.len() {
                if let Some(bound) = self.bounds_violation(r) {
                    if pick.as_ref().is_none_or(|(pr, _)| self.basis[r] < self.basis[*pr]) {
                        pick = Some((r, bound));
                    }
                }
            }
            let Some((r, bound)) = pick else { return Ok(()) };
            let up = bound > self.beta[r];
            let mut enter: Option<(usize, F)> = None;
            for l in 0..self.ncols() {
                if self.row_of[l] != usize::MAX {
                    continue;
                }
                let a = &self.t[r][l];
                if a.is_zero() {
                    continue;
                }
                let upper = l < self.m && self.at_upper[l];
                let eligible = if up { a.is_pos() != upper } else { a.is_neg() != upper };
                if !eligible {
                    continue;
                }
                let ratio = ck(self.d[l].div(a))?.abs();
                if enter.as_ref().is_none_or(|(_, best)| ratio < *best) {
                    enter = Some((l, ratio));
                }
            }
            let Some((j, _)) = enter else { return Err(LpError::Infeasible) };
            self.pivot(r, j, bound)?;
        }
    }

    fn pivot(&mut self, r: usize, j: usize, bound: F) -> LpResult<()> {
        self.pivots += 1;
        let k = self.basis[r];
        let a = self.t[r][j].clone();
        let vj = self.nonbasic_value(j);
        let theta = ck(ck(bound.sub(&self.beta[r]))?.div(&a))?;
        if let Some(tr) = self.trace.as_mut() {
            let mut line = String::new();
            let _ = write!(line, "pivot {}: leave x{} -> {}, enter x{}, step {}", self.pivots, k, bound, j, theta);
            tr.push(line);
        }
        // new pivot row, in terms of the leaving variable
        let mut prow: Vec<F> = Vec::with_capacity(self.ncols());
        for (l, x) in self.t[r].iter().enumerate() {
            prow.push(if l == j || x.is_zero() { F::zero() } else { ck(ck(F::zero().sub(x))?.div(&a))? });
        }
        prow[k] = ck(F::from_i64(1).div(&a))?;
        let support: Vec<usize> = (0..prow.len()).filter(|&l| !prow[l].is_zero()).collect();
        for i in 0..self.t.len() {
            if i == r {
                continue;
            }
            let tij = self.t[i][j].clone();
            if tij.is_zero() {
                continue;
            }
            self.beta[i] = ck(self.beta[i].add(&ck(tij.mul(&theta))?))?;
            self.t[i][j] = F::zero();
            for &l in &support {
                let delta = ck(tij.mul(&prow[l]))?;
                self.t[i][l] = ck(self.t[i][l].add(&delta))?;
            }
        }
        let dj = self.d[j].clone();
        if !dj.is_zero() {
            self.d[j] = F::zero();
            for &l in &support {
                let delta = ck(dj.mul(&prow[l]))?;
                self.d[l] = ck(self.d[l].add(&delta))?;
            }
        }
        self.beta[r] = ck(vj.add(&theta))?;
        self.t[r] = prow;
        self.basis[r] = j;
        self.row_of[j] = r;
        self.row_of[k] = usize::MAX;
        if k < self.m {
            self.at_upper[k] = bound.is_pos();
        }
        if j < self.m {
            self.at_upper[j] = false;
        }
        Ok(())
    }
}
