//! Revised simplex over a generic scalar, with the basis inverse kept in
//! product form.
//!
//! Floating-point solves run a dual simplex from the artificial basis when
//! all costs are nonnegative, then a primal cleanup with Devex pricing.
//! Exact solves use the primal method, switching to Bland's rule on
//! degenerate stretches, usually warm-started from a floating-point basis.
//!
//! Problems are in standard form: minimize `c·x` subject to `A x = b`,
//! `x ≥ 0`, with `b ≥ 0` and small integer entries in `A` and `c`.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Scalar: Clone + Debug + Send + Sync {
    fn zero() -> Self;
    fn from_int(v: i64) -> Self;
    fn from_ratio(r: &BigRational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn mul_int(&self, v: i64) -> Self;
    /// Zero up to the working tolerance.
    fn is_zero(&self) -> bool;
    /// Strictly positive beyond the working tolerance.
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    /// Exactly zero, used to skip work.
    fn is_exact_zero(&self) -> bool;
    fn to_f64(&self) -> f64;
    fn cmp_val(&self, o: &Self) -> Ordering;
    /// Preference score for a pivot element; larger is better.
    fn pivot_quality(&self) -> f64;
    /// Large enough to pivot on.
    fn pivotable(&self) -> bool;
    const EXACT: bool;
}

pub const TOLERANCE: f64 = 1e-9;
pub const PIVOT_TOLERANCE: f64 = 1e-7;

impl Scalar for f64 {
    const EXACT: bool = false;
    fn zero() -> Self {
        0.0
    }
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn mul_int(&self, v: i64) -> Self {
        self * v as f64
    }
    fn is_zero(&self) -> bool {
        self.abs() <= TOLERANCE
    }
    fn is_pos(&self) -> bool {
        *self > TOLERANCE
    }
    fn is_neg(&self) -> bool {
        *self < -TOLERANCE
    }
    fn is_exact_zero(&self) -> bool {
        self.abs() < 1e-14
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn cmp_val(&self, o: &Self) -> Ordering {
        self.partial_cmp(o).unwrap_or(Ordering::Equal)
    }
    fn pivot_quality(&self) -> f64 {
        self.abs()
    }
    fn pivotable(&self) -> bool {
        self.abs() > PIVOT_TOLERANCE
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(r: &BigRational) -> Self {
        r.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn mul_int(&self, v: i64) -> Self {
        match v {
            1 => self.clone(),
            -1 => -self.clone(),
            _ => self * BigInt::from(v),
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn is_exact_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn cmp_val(&self, o: &Self) -> Ordering {
        self.cmp(o)
    }
    fn pivotable(&self) -> bool {
        !Zero::is_zero(self)
    }
    fn pivot_quality(&self) -> f64 {
        if self.abs().is_one() {
            2.0
        } else {
            1.0 / (1.0 + (self.numer().bits() + self.denom().bits()) as f64)
        }
    }
}

/// Sparse standard-form problem. Columns hold `(row, coefficient)` pairs.
#[derive(Debug, Clone)]
pub struct StandardLp {
    pub rows: usize,
    pub columns: Vec<Vec<(usize, i64)>>,
    pub cost: Vec<i64>,
    pub rhs: Vec<BigRational>,
}

#[derive(Debug, Clone)]
pub struct LpSolution<T> {
    pub x: Vec<T>,
    pub y: Vec<T>,
    pub objective: T,
    pub dual_objective: T,
    /// Basic columns at the optimum, sorted; an index `n + i` stands for
    /// the artificial variable of row `i`.
    pub basis: Vec<usize>,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
struct Eta<T> {
    row: usize,
    pivot: T,
    entries: Vec<(usize, T)>,
}

const REINVERT_EVERY: usize = 96;
const DEGENERATE_SWITCH: usize = 60;

struct Simplex<'a, T: Scalar> {
    lp: &'a StandardLp,
    n: usize,
    m: usize,
    b: Vec<T>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    xb: Vec<T>,
    etas: Vec<Eta<T>>,
    iterations: usize,
    iteration_cap: usize,
    /// Devex reference weights, used for floating-point pricing.
    weights: Vec<f64>,
    /// Length of the eta file right after the last reinversion.
    fresh_etas: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Phase {
    One,
    Two,
}

impl<'a, T: Scalar> Simplex<'a, T> {
    fn new(lp: &'a StandardLp) -> Self {
        let n = lp.columns.len();
        let m = lp.rows;
        let b: Vec<T> = lp.rhs.iter().map(T::from_ratio).collect();
        let mut in_basis = vec![false; n + m];
        for flag in in_basis.iter_mut().skip(n) {
            *flag = true;
        }
        Simplex {
            lp,
            n,
            m,
            xb: b.clone(),
            b,
            basis: (n..n + m).collect(),
            in_basis,
            etas: Vec::new(),
            iterations: 0,
            iteration_cap: 200 * (n + m) + 10_000,
            weights: vec![1.0; n],
            fresh_etas: 0,
        }
    }

    fn column(&self, j: usize) -> Vec<T> {
        let mut v = vec![T::zero(); self.m];
        if j < self.n {
            for &(i, a) in &self.lp.columns[j] {
                v[i] = T::from_int(a);
            }
        } else {
            v[j - self.n] = T::from_int(1);
        }
        v
    }

    fn ftran(&self, x: &mut [T]) {
        for eta in &self.etas {
            let xr = &x[eta.row];
            if xr.is_exact_zero() {
                continue;
            }
            let xr = xr.div(&eta.pivot);
            for (i, a) in &eta.entries {
                x[*i] = x[*i].sub(&a.mul(&xr));
            }
            x[eta.row] = xr;
        }
    }

    fn btran(&self, y: &mut [T]) {
        for eta in self.etas.iter().rev() {
            let mut acc = y[eta.row].clone();
            for (i, a) in &eta.entries {
                if !y[*i].is_exact_zero() {
                    acc = acc.sub(&y[*i].mul(a));
                }
            }
            y[eta.row] = acc.div(&eta.pivot);
        }
    }

    fn push_eta(&mut self, row: usize, alpha: &[T]) {
        let entries = alpha
            .iter()
            .enumerate()
            .filter(|(i, a)| *i != row && !a.is_exact_zero())
            .map(|(i, a)| (i, a.clone()))
            .collect();
        self.etas.push(Eta { row, pivot: alpha[row].clone(), entries });
    }

    /// Rebuilds the product form for the given basic columns. Rows that no
    /// column can claim keep their artificial variable.
    fn reinvert(&mut self, wanted: &[usize]) {
        self.etas.clear();
        for flag in self.in_basis.iter_mut() {
            *flag = false;
        }
        self.basis = (self.n..self.n + self.m).collect();
        let mut reserved = vec![false; self.m];
        let mut structural: Vec<usize> = Vec::new();
        for &j in wanted {
            if j >= self.n {
                reserved[j - self.n] = true;
            } else {
                structural.push(j);
            }
        }
        structural.sort_by_key(|&j| (self.lp.columns[j].len(), j));
        for j in structural {
            let mut alpha = self.column(j);
            self.ftran(&mut alpha);
            let mut best: Option<(usize, f64)> = None;
            for (r, a) in alpha.iter().enumerate() {
                if reserved[r] || self.basis[r] < self.n || !a.pivotable() {
                    continue;
                }
                let q = a.pivot_quality();
                if best.map_or(true, |(_, bq)| q > bq) {
                    best = Some((r, q));
                }
            }
            if let Some((r, _)) = best {
                self.push_eta(r, &alpha);
                self.basis[r] = j;
            }
        }
        for &j in &self.basis {
            self.in_basis[j] = true;
        }
        self.fresh_etas = self.etas.len();
        let mut xb = self.b.clone();
        self.ftran(&mut xb);
        if !T::EXACT {
            for v in xb.iter_mut() {
                if v.is_zero() {
                    *v = T::zero();
                }
            }
        }
        self.xb = xb;
    }

    fn cost_of(&self, j: usize, phase: Phase) -> i64 {
        match phase {
            Phase::One => (j >= self.n) as i64,
            Phase::Two => {
                if j < self.n {
                    self.lp.cost[j]
                } else {
                    0
                }
            }
        }
    }

    fn duals(&self, phase: Phase) -> Vec<T> {
        let mut y: Vec<T> = self.basis.iter().map(|&j| T::from_int(self.cost_of(j, phase))).collect();
        self.btran(&mut y);
        y
    }

    fn reduced_cost(&self, j: usize, y: &[T], phase: Phase) -> T {
        let mut d = T::from_int(self.cost_of(j, phase));
        for &(i, a) in &self.lp.columns[j] {
            if !y[i].is_exact_zero() {
                d = d.sub(&y[i].mul_int(a));
            }
        }
        d
    }

    fn objective(&self, phase: Phase) -> T {
        let mut z = T::zero();
        for (r, &j) in self.basis.iter().enumerate() {
            let c = self.cost_of(j, phase);
            if c != 0 {
                z = z.add(&self.xb[r].mul_int(c));
            }
        }
        z
    }

    fn run(&mut self, phase: Phase) -> Result<()> {
        let mut degenerate_run = 0usize;
        loop {
            if self.iterations >= self.iteration_cap {
                return Err(Error::Internal(format!(
                    "simplex iteration cap {} reached",
                    self.iteration_cap
                )));
            }
            if self.etas.len() >= self.m + REINVERT_EVERY {
                let wanted = self.basis.clone();
                self.reinvert(&wanted);
            }
            let bland = T::EXACT && degenerate_run >= DEGENERATE_SWITCH;
            let y = self.duals(phase);
            let mut entering: Option<(usize, T)> = None;
            for j in 0..self.n {
                if self.in_basis[j] {
                    continue;
                }
                let d = self.reduced_cost(j, &y, phase);
                if !d.is_neg() {
                    continue;
                }
                if bland {
                    entering = Some((j, d));
                    break;
                }
                let better = match &entering {
                    None => true,
                    Some((bj, bd)) => {
                        if T::EXACT {
                            d.cmp_val(bd) == Ordering::Less
                        } else {
                            let (df, bf) = (d.to_f64(), bd.to_f64());
                            df * df / self.weights[j] > bf * bf / self.weights[*bj]
                        }
                    }
                };
                if better {
                    entering = Some((j, d));
                }
            }
            let Some((q, _)) = entering else {
                return Ok(());
            };
            let mut alpha = self.column(q);
            self.ftran(&mut alpha);

            // Ratio test; basic artificials in phase two are pinned at zero.
            let mut leave: Option<(usize, T)> = None;
            for r in 0..self.m {
                let a = &alpha[r];
                let pinned = phase == Phase::Two && self.basis[r] >= self.n;
                let ratio = if pinned && !a.is_zero() {
                    T::zero()
                } else if a.is_pos() {
                    let v = if self.xb[r].is_neg() { T::zero() } else { self.xb[r].clone() };
                    v.div(a)
                } else {
                    continue;
                };
                let take = match &leave {
                    None => true,
                    Some((br, bt)) => {
                        let ord = if T::EXACT {
                            ratio.cmp_val(bt)
                        } else {
                            let diff = ratio.sub(bt);
                            if diff.is_zero() {
                                Ordering::Equal
                            } else {
                                diff.cmp_val(&T::zero())
                            }
                        };
                        match ord {
                            Ordering::Less => true,
                            Ordering::Greater => false,
                            Ordering::Equal => {
                                if bland {
                                    self.basis[r] < self.basis[*br]
                                } else {
                                    a.pivot_quality() > alpha[*br].pivot_quality()
                                }
                            }
                        }
                    }
                };
                if take {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, theta)) = leave else {
                return Err(Error::Internal("linear program is unbounded".into()));
            };
            if !T::EXACT {
                self.update_weights(q, r, &alpha);
            }
            if theta.is_zero() {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            for i in 0..self.m {
                if i != r && !alpha[i].is_exact_zero() {
                    self.xb[i] = self.xb[i].sub(&theta.mul(&alpha[i]));
                }
            }
            self.xb[r] = theta;
            self.push_eta(r, &alpha);
            self.in_basis[self.basis[r]] = false;
            self.basis[r] = q;
            self.in_basis[q] = true;
            self.iterations += 1;
        }
    }

    fn update_weights(&mut self, q: usize, r: usize, alpha: &[T]) {
        let mut rho = vec![T::zero(); self.m];
        rho[r] = T::from_int(1);
        self.btran(&mut rho);
        let rho: Vec<f64> = rho.iter().map(|v| v.to_f64()).collect();
        let arq = alpha[r].to_f64();
        let wq = self.weights[q];
        let mut largest = 0.0f64;
        for j in 0..self.n {
            if self.in_basis[j] || j == q {
                continue;
            }
            let mut arj = 0.0;
            for &(i, a) in &self.lp.columns[j] {
                arj += rho[i] * a as f64;
            }
            if arj != 0.0 {
                let ratio = arj / arq;
                let w = ratio * ratio * wq;
                if w > self.weights[j] {
                    self.weights[j] = w;
                }
            }
            largest = largest.max(self.weights[j]);
        }
        let leaving = self.basis[r];
        if leaving < self.n {
            self.weights[leaving] = (wq / (arq * arq)).max(1.0);
        }
        if largest > 1e8 {
            self.weights.iter_mut().for_each(|w| *w = 1.0);
        }
    }

    /// Dual simplex from a dual feasible basis. Artificial variables are
    /// fixed at zero; structural variables are bounded below by zero.
    fn dual_run(&mut self) -> Result<()> {
        let mut excluded: Vec<usize> = Vec::new();
        loop {
            if self.iterations >= self.iteration_cap {
                return Err(Error::Internal(format!(
                    "simplex iteration cap {} reached",
                    self.iteration_cap
                )));
            }
            if self.etas.len() >= self.m + REINVERT_EVERY {
                let wanted = self.basis.clone();
                self.reinvert(&wanted);
            }
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.m {
                let v = &self.xb[r];
                let infeasibility = if self.basis[r] >= self.n {
                    if v.is_zero() {
                        0.0
                    } else {
                        v.to_f64().abs()
                    }
                } else if v.is_neg() {
                    -v.to_f64()
                } else {
                    0.0
                };
                if infeasibility > 0.0 && leave.map_or(true, |(_, b)| infeasibility > b) {
                    leave = Some((r, infeasibility));
                }
            }
            let Some((r, _)) = leave else {
                return Ok(());
            };
            let dir = if self.xb[r].is_pos() { 1 } else { -1 };
            let mut rho = vec![T::zero(); self.m];
            rho[r] = T::from_int(1);
            self.btran(&mut rho);
            let y = self.duals(Phase::Two);
            // Harris two-pass ratio test: find the largest admissible step
            // with relaxed reduced costs, then the largest pivot within it.
            let mut candidates: Vec<(usize, T, T)> = Vec::new();
            for j in 0..self.n {
                if self.in_basis[j] || excluded.contains(&j) {
                    continue;
                }
                let mut arj = T::zero();
                for &(i, a) in &self.lp.columns[j] {
                    if !rho[i].is_exact_zero() {
                        arj = arj.add(&rho[i].mul_int(a));
                    }
                }
                let s = arj.mul_int(dir);
                if !s.is_pos() || !s.pivotable() {
                    continue;
                }
                let mut d = self.reduced_cost(j, &y, Phase::Two);
                if d.is_neg() {
                    d = T::zero();
                }
                candidates.push((j, d, s));
            }
            let entering = if T::EXACT {
                candidates
                    .into_iter()
                    .map(|(j, d, s)| (j, d.div(&s), s))
                    .min_by(|a, b| a.1.cmp_val(&b.1).then(b.2.pivot_quality().total_cmp(&a.2.pivot_quality())).then(a.0.cmp(&b.0)))
            } else {
                let bound = candidates
                    .iter()
                    .map(|(_, d, s)| (d.to_f64() + TOLERANCE) / s.to_f64())
                    .fold(f64::INFINITY, f64::min);
                candidates
                    .into_iter()
                    .filter(|(_, d, s)| d.to_f64() / s.to_f64() <= bound)
                    .max_by(|a, b| a.2.pivot_quality().total_cmp(&b.2.pivot_quality()).then(b.0.cmp(&a.0)))
                    .map(|(j, d, s)| (j, d.div(&s), s))
            };
            let Some((q, _, _)) = entering else {
                if !excluded.is_empty() {
                    return Err(Error::Internal("dual simplex found no stable pivot".into()));
                }
                return Err(Error::Internal("linear program is infeasible".into()));
            };
            let mut alpha = self.column(q);
            self.ftran(&mut alpha);
            if !alpha[r].pivotable() {
                if self.etas.len() != self.fresh_etas {
                    let wanted = self.basis.clone();
                    self.reinvert(&wanted);
                } else {
                    excluded.push(q);
                }
                continue;
            }
            excluded.clear();
            let theta = self.xb[r].div(&alpha[r]);
            for i in 0..self.m {
                if i != r && !alpha[i].is_exact_zero() {
                    self.xb[i] = self.xb[i].sub(&theta.mul(&alpha[i]));
                }
            }
            self.xb[r] = theta;
            self.push_eta(r, &alpha);
            self.in_basis[self.basis[r]] = false;
            self.basis[r] = q;
            self.in_basis[q] = true;
            self.iterations += 1;
        }
    }

    fn phase_one(&mut self) -> Result<()> {
        if self.basis.iter().all(|&j| j < self.n) || self.objective(Phase::One).is_zero() {
            return Ok(());
        }
        self.run(Phase::One)?;
        if !self.objective(Phase::One).is_zero() {
            return Err(Error::Internal("linear program is infeasible".into()));
        }
        Ok(())
    }

    fn finish(mut self) -> LpSolution<T> {
        let wanted = self.basis.clone();
        self.reinvert(&wanted);
        let mut x = vec![T::zero(); self.n];
        let mut basis = Vec::new();
        for (r, &j) in self.basis.iter().enumerate() {
            if j < self.n {
                x[j] = if !T::EXACT && self.xb[r].is_neg() { T::zero() } else { self.xb[r].clone() };
            }
            basis.push(j);
        }
        basis.sort_unstable();
        let y = self.duals(Phase::Two);
        let mut objective = T::zero();
        for (j, v) in x.iter().enumerate() {
            if self.lp.cost[j] != 0 && !v.is_exact_zero() {
                objective = objective.add(&v.mul_int(self.lp.cost[j]));
            }
        }
        let mut dual_objective = T::zero();
        for (bi, yi) in self.b.iter().zip(&y) {
            dual_objective = dual_objective.add(&bi.mul(yi));
        }
        LpSolution { x, y, objective, dual_objective, basis, iterations: self.iterations }
    }
}

fn check_shape(lp: &StandardLp) -> Result<()> {
    if lp.rhs.len() != lp.rows || lp.cost.len() != lp.columns.len() {
        return Err(Error::Internal("malformed linear program".into()));
    }
    if lp.rhs.iter().any(|b| b.is_negative()) {
        return Err(Error::Internal("right-hand side must be nonnegative".into()));
    }
    Ok(())
}

/// Two-phase simplex from the all-artificial basis.
pub fn solve<T: Scalar>(lp: &StandardLp) -> Result<LpSolution<T>> {
    check_shape(lp)?;
    let mut s = Simplex::<T>::new(lp);
    if !T::EXACT && lp.cost.iter().all(|&c| c >= 0) {
        // Nonnegative costs make the artificial basis dual feasible.
        s.dual_run()?;
    } else {
        s.phase_one()?;
    }
    s.run(Phase::Two)?;
    Ok(s.finish())
}

/// Exact solve that starts from a suggested basis (typically the optimal
/// basis of a floating-point solve). Falls back to a cold start when the
/// suggested basis is not primal feasible.
pub fn solve_exact_from(lp: &StandardLp, hint: &[usize]) -> Result<LpSolution<BigRational>> {
    check_shape(lp)?;
    let mut s = Simplex::<BigRational>::new(lp);
    s.reinvert(hint);
    if s.xb.iter().any(|v| v.is_negative()) {
        return solve::<BigRational>(lp);
    }
    s.phase_one()?;
    s.run(Phase::Two)?;
    Ok(s.finish())
}

/// Exact optimality certificate: primal feasibility, dual feasibility and
/// equal objectives.
pub fn check_certificate(lp: &StandardLp, sol: &LpSolution<BigRational>) -> Result<()> {
    let mut ax = vec![<BigRational as Zero>::zero(); lp.rows];
    for (j, col) in lp.columns.iter().enumerate() {
        let xj = &sol.x[j];
        if xj.is_negative() {
            return Err(Error::Internal(format!("negative primal value in column {j}")));
        }
        if Zero::is_zero(xj) {
            continue;
        }
        for &(i, a) in col {
            ax[i] += xj * BigInt::from(a);
        }
    }
    if ax != lp.rhs {
        return Err(Error::Internal("primal solution violates a constraint".into()));
    }
    for (j, col) in lp.columns.iter().enumerate() {
        let mut aty = <BigRational as Zero>::zero();
        for &(i, a) in col {
            aty += &sol.y[i] * BigInt::from(a);
        }
        if aty > BigRational::from_integer(BigInt::from(lp.cost[j])) {
            return Err(Error::Internal(format!("dual solution violates column {j}")));
        }
    }
    if sol.objective != sol.dual_objective {
        return Err(Error::Internal("primal and dual objectives differ".into()));
    }
    Ok(())
}

/// Largest absolute constraint violation of a floating-point primal.
pub fn residual(lp: &StandardLp, x: &[f64]) -> f64 {
    let mut ax = vec![0.0f64; lp.rows];
    let mut worst = 0.0f64;
    for (j, col) in lp.columns.iter().enumerate() {
        worst = worst.max(-x[j]);
        for &(i, a) in col {
            ax[i] += x[j] * a as f64;
        }
    }
    for (v, b) in ax.iter().zip(&lp.rhs) {
        worst = worst.max((v - Scalar::to_f64(b)).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    // min x0 + 2 x1 + 3 x2  s.t.  x0 + x1 + x2 = 4, x1 - x2 = 1 (as x1 - x2 + x3 = 1 with slack col)
    fn small() -> StandardLp {
        StandardLp {
            rows: 2,
            columns: vec![vec![(0, 1)], vec![(0, 1), (1, 1)], vec![(0, 1), (1, -1)], vec![(1, 1)]],
            cost: vec![1, 2, 3, 0],
            rhs: vec![q(4), q(1)],
        }
    }

    #[test]
    fn exact_and_float_agree() {
        let lp = small();
        let e = solve::<BigRational>(&lp).unwrap();
        check_certificate(&lp, &e).unwrap();
        assert_eq!(e.objective, q(4));
        let f = solve::<f64>(&lp).unwrap();
        assert!((f.objective - 4.0).abs() < 1e-9);
        let w = solve_exact_from(&lp, &f.basis).unwrap();
        assert_eq!(w.objective, q(4));
        check_certificate(&lp, &w).unwrap();
    }

    #[test]
    fn infeasible_is_internal_error() {
        let lp = StandardLp {
            rows: 2,
            columns: vec![vec![(0, 1), (1, 1)]],
            cost: vec![1],
            rhs: vec![q(1), q(2)],
        };
        assert!(matches!(solve::<BigRational>(&lp), Err(Error::Internal(_))));
    }

    #[test]
    fn unbounded_is_internal_error() {
        let lp = StandardLp {
            rows: 1,
            columns: vec![vec![(0, 1)], vec![(0, 1)], vec![]],
            cost: vec![0, 0, -1],
            rhs: vec![q(1)],
        };
        assert!(matches!(solve::<BigRational>(&lp), Err(Error::Internal(_))));
    }
}
