//! Abstract conic feasibility/optimization problems.
//!
//! A problem owns PSD matrix variables, entrywise-nonnegative variables, and
//! free scalars, tied together by sparse linear equalities and a linear
//! objective. Any interior-point backend can sit behind [`ConicBackend`];
//! the `DISJSOS_SOLVER` environment variable picks the implementation.

use crate::symmat::SymMatrix;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarRef {
    /// Entry (row, col) of a PSD matrix block; (i, j) and (j, i) name the
    /// same symmetric entry.
    Psd { block: usize, row: usize, col: usize },
    Nonneg { block: usize, idx: usize },
    Free(usize),
}

#[derive(Debug, Clone)]
pub struct EqRow {
    pub terms: Vec<(VarRef, f64)>,
    pub rhs: f64,
}

#[derive(Debug, Clone, Default)]
pub struct ConicProblem {
    pub psd_blocks: Vec<usize>,
    pub nonneg_blocks: Vec<usize>,
    pub num_free: usize,
    pub equalities: Vec<EqRow>,
    pub objective: Vec<(VarRef, f64)>,
    pub maximize: bool,
}

impl ConicProblem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_psd_block(&mut self, size: usize) -> usize {
        self.psd_blocks.push(size);
        self.psd_blocks.len() - 1
    }

    pub fn add_nonneg_block(&mut self, size: usize) -> usize {
        self.nonneg_blocks.push(size);
        self.nonneg_blocks.len() - 1
    }

    pub fn add_free_var(&mut self) -> usize {
        self.num_free += 1;
        self.num_free - 1
    }

    pub fn add_equality(&mut self, terms: Vec<(VarRef, f64)>, rhs: f64) {
        self.equalities.push(EqRow { terms, rhs });
    }

    pub fn set_objective(&mut self, terms: Vec<(VarRef, f64)>, maximize: bool) {
        self.objective = terms;
        self.maximize = maximize;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NumericalFailure,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::NumericalFailure => "numerical_failure",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConicSolution {
    pub status: SolveStatus,
    pub objective: f64,
    pub psd_values: Vec<SymMatrix<f64>>,
    pub nonneg_values: Vec<Vec<f64>>,
    pub free_values: Vec<f64>,
    /// max |equality residual|, recomputed from the returned values
    pub primal_residual: f64,
    /// solver-reported duality gap
    pub gap: f64,
}

impl ConicSolution {
    pub fn value(&self, v: VarRef) -> f64 {
        match v {
            VarRef::Psd { block, row, col } => self.psd_values[block].get(row, col),
            VarRef::Nonneg { block, idx } => self.nonneg_values[block][idx],
            VarRef::Free(i) => self.free_values[i],
        }
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("solver setup failed: {0}")]
    Setup(String),
    #[error("backend `{0}` is not available")]
    UnknownBackend(String),
}

pub trait ConicBackend: Send + Sync {
    fn solve(&self, problem: &ConicProblem) -> Result<ConicSolution, SolverError>;
    fn name(&self) -> &'static str;
}

/// Backend selected by `DISJSOS_SOLVER` (default: `clarabel`).
pub fn default_backend() -> Result<Box<dyn ConicBackend>, SolverError> {
    let name = std::env::var("DISJSOS_SOLVER").unwrap_or_else(|_| "clarabel".to_string());
    backend_by_name(&name)
}

pub fn backend_by_name(name: &str) -> Result<Box<dyn ConicBackend>, SolverError> {
    match name {
        "clarabel" => Ok(Box::new(crate::solver_clarabel::ClarabelBackend::default())),
        other => Err(SolverError::UnknownBackend(other.to_string())),
    }
}

/// Recomputes the worst equality violation of a candidate solution.
pub fn equality_residual(problem: &ConicProblem, sol: &ConicSolution) -> f64 {
    problem
        .equalities
        .iter()
        .map(|row| {
            let lhs: f64 = row.terms.iter().map(|&(v, c)| c * sol.value(v)).sum();
            (lhs - row.rhs).abs()
        })
        .fold(0.0, f64::max)
}
