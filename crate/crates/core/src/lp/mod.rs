//! Stable commutator length of chains via the square/triangle gluing LP.

pub mod export;
pub mod oracle;
pub mod pieces;
pub mod simplex;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fatgraph::{glue_pieces, integral_scaling, Fatgraph};
use crate::group::Chain;
pub use pieces::{enumerate_pieces, GluingLp, PieceSystem};
use simplex::{LpSolution, StandardLp};

/// Total chain length up to which `Mode::Auto` solves exactly.
pub const AUTO_EXACT_LIMIT: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Inexact,
    Auto,
}

impl Mode {
    pub fn resolve(self, total_length: usize) -> Mode {
        match self {
            Mode::Auto if total_length <= AUTO_EXACT_LIMIT => Mode::Exact,
            Mode::Auto => Mode::Inexact,
            m => m,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Inexact => "inexact",
            Mode::Auto => "auto",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "inexact" => Ok(Mode::Inexact),
            "auto" => Ok(Mode::Auto),
            _ => Err(Error::Syntax { pos: 0, msg: format!("unknown mode {s:?}") }),
        }
    }
}

/// An exact rational or a binary64 approximation.
#[derive(Debug, Clone, PartialEq)]
pub enum Number {
    Exact(BigRational),
    Float(f64),
}

impl Number {
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Number::Float(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Number::Exact(r) => Some(r),
            Number::Float(_) => None,
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(r) => write!(f, "{r}"),
            Number::Float(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    /// The chain normalized to zero; nothing was solved.
    ZeroChain,
}

#[derive(Debug, Clone)]
pub enum Solution {
    Exact(LpSolution<BigRational>),
    Inexact(LpSolution<f64>),
    Empty,
}

#[derive(Debug, Clone)]
pub struct SclResult {
    pub value: Number,
    pub mode: Mode,
    pub status: Status,
    pub solution: Solution,
    /// Largest constraint violation of the primal (zero in exact mode).
    pub residual: f64,
    pub rows: usize,
    pub columns: usize,
}

impl SclResult {
    fn zero(mode: Mode) -> Self {
        SclResult {
            value: match mode {
                Mode::Inexact => Number::Float(0.0),
                _ => Number::Exact(BigRational::zero()),
            },
            mode,
            status: Status::ZeroChain,
            solution: Solution::Empty,
            residual: 0.0,
            rows: 0,
            columns: 0,
        }
    }

    pub fn primal_objective(&self) -> Number {
        match &self.solution {
            Solution::Exact(s) => Number::Exact(s.objective.clone()),
            Solution::Inexact(s) => Number::Float(s.objective),
            Solution::Empty => self.value.clone(),
        }
    }

    pub fn dual_objective(&self) -> Number {
        match &self.solution {
            Solution::Exact(s) => Number::Exact(s.dual_objective.clone()),
            Solution::Inexact(s) => Number::Float(s.dual_objective),
            Solution::Empty => self.value.clone(),
        }
    }

    /// Exact primal and dual objectives agree.
    pub fn strong_duality_holds(&self) -> bool {
        match &self.solution {
            Solution::Exact(s) => s.objective == s.dual_objective,
            Solution::Inexact(s) => (s.objective - s.dual_objective).abs() <= 1e-6 * (1.0 + s.objective.abs()),
            Solution::Empty => true,
        }
    }

    pub fn iterations(&self) -> usize {
        match &self.solution {
            Solution::Exact(s) => s.iterations,
            Solution::Inexact(s) => s.iterations,
            Solution::Empty => 0,
        }
    }
}

fn quarter(r: BigRational) -> BigRational {
    r / BigRational::from_integer(BigInt::from(4))
}

fn solve_standard(lp: &StandardLp, mode: Mode) -> Result<(Number, Solution, f64)> {
    match mode {
        Mode::Inexact => {
            let s = simplex::solve::<f64>(lp)?;
            let residual = simplex::residual(lp, &s.x);
            if residual > simplex::TOLERANCE {
                return Err(Error::Internal(format!("floating-point residual {residual:e}")));
            }
            Ok((Number::Float(s.objective / 4.0), Solution::Inexact(s), residual))
        }
        _ => {
            let exact = match simplex::solve::<f64>(lp) {
                Ok(f) => simplex::solve_exact_from(lp, &f.basis)?,
                Err(_) => simplex::solve::<BigRational>(lp)?,
            };
            simplex::check_certificate(lp, &exact)?;
            Ok((Number::Exact(quarter(exact.objective.clone())), Solution::Exact(exact), 0.0))
        }
    }
}

/// Solves a gluing LP. `Mode::Auto` decides by the number of positions.
pub fn solve(glp: &GluingLp, mode: Mode) -> Result<SclResult> {
    let positions = glp.lp.rows - glp.coverage_start;
    let mode = mode.resolve(positions);
    if positions == 0 {
        return Ok(SclResult::zero(mode));
    }
    let (value, solution, residual) = solve_standard(&glp.lp, mode)?;
    Ok(SclResult {
        value,
        mode,
        status: Status::Optimal,
        solution,
        residual,
        rows: glp.lp.rows,
        columns: glp.lp.columns.len(),
    })
}

/// Stable commutator length of a chain.
pub fn scl(chain: &Chain, mode: Mode) -> Result<SclResult> {
    if !chain.homologically_trivial() {
        return Err(Error::NotABoundary(pieces::format_abelian(chain)));
    }
    let c = chain.normalize();
    let mode = mode.resolve(c.total_length());
    if c.is_zero() {
        return Ok(SclResult::zero(mode));
    }
    let sys = PieceSystem::new(&c)?;
    solve(&sys.gluing_lp(), mode)
}

/// Builds the fatgraph realizing an exact primal solution.
pub fn extract_fatgraph(result: &SclResult, chain: &Chain) -> Result<Fatgraph> {
    let c = chain.normalize();
    if c.is_zero() || result.status == Status::ZeroChain {
        return Ok(Fatgraph::empty(chain.rank()));
    }
    let Solution::Exact(sol) = &result.solution else {
        return Err(Error::Degenerate("fatgraph extraction needs an exact solution".into()));
    };
    let sys = PieceSystem::new(&c)?;
    fatgraph_from_point(&sys, &sol.x)
}

/// Glues any feasible point of the gluing LP of `sys` into a fatgraph.
pub fn fatgraph_from_point(sys: &PieceSystem, x: &[BigRational]) -> Result<Fatgraph> {
    let s = sys.squares().len();
    if x.len() != s + sys.triangles().len() {
        return Err(Error::Internal("primal vector does not match the piece system".into()));
    }
    let squares: Vec<([usize; 2], BigRational)> = sys
        .squares()
        .iter()
        .zip(&x[..s])
        .filter(|(_, v)| !v.is_zero())
        .map(|(p, v)| (*p, v.clone()))
        .collect();
    let triangles: Vec<([usize; 3], BigRational)> = sys
        .triangles()
        .iter()
        .zip(&x[s..])
        .filter(|(_, v)| !v.is_zero())
        .map(|(t, v)| (*t, v.clone()))
        .collect();
    let (n, sq, tr) = integral_scaling(&squares, &triangles)?;
    glue_pieces(sys, &sq, &tr, n)
}
